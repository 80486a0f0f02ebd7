"""Reduced invariant suites of every module, runnable without pytest."""

from __future__ import annotations

import math

import numpy as np

from . import analytic as an
from . import function_field as ff
from . import hardy as hd
from . import kernels as kn
from . import nyman as ny
from .piecewise import PiecewiseLogPoly

CATALAN = 0.915965594177219015


def _analytic():
    rng = np.random.default_rng(11)
    yield "bernoulli B2, B4", an.bernoulli_numbers(2)[2:5:2] == [an.Fraction(1, 6), an.Fraction(-1, 30)]
    yield "zeta(2)", abs(an.riemann_zeta(2).value - math.pi ** 2 / 6) < 1e-12
    worst = 0.0
    for _ in range(20):
        s = complex(rng.uniform(-2, 3), rng.uniform(-1000, 1000))
        lhs = an.riemann_zeta(s).value
        rhs = an.functional_equation_factor(s) * an.riemann_zeta(1 - s).value
        worst = max(worst, abs(lhs - rhs))
    yield f"functional equation (max residual {worst:.2e})", worst < 1e-8
    ok = True
    for q in (5, 8, 12):
        tab = an.character_table(q)
        phi = sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)
        M = np.array([c.values for c in tab])
        ok &= np.allclose(M @ M.conj().T, phi * np.eye(len(tab)), atol=1e-12)
    yield "character orthogonality", bool(ok)
    chi4 = [c for c in an.character_table(4) if not c.is_principal][0]
    yield "L(chi_4, 2) = Catalan", abs(an.dirichlet_L(chi4, 2).value - CATALAN) < 1e-12
    s = 0.3 + 7j
    lhs = sum(an.hurwitz_zeta(s, a / 3).value for a in (1, 2, 3))
    yield "Hurwitz multiplication q=3", abs(lhs - 3 ** s * an.riemann_zeta(s).value) < 1e-9


def _kernels():
    m = kn.mellin_rho(0.5, 2)
    yield "rho Mellin identity at s=2", abs(m.value - kn.mellin_rho_closed(0.5, 2)) < 1e-8
    yield "A Mellin at s=2 equals pi^2/24", abs(kn.mellin_A(2).value - math.pi ** 2 / 24) < 1e-9
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        b = np.sort(rng.uniform(0.01, 5, 7))
        f = PiecewiseLogPoly.step(b, rng.normal(size=6))
        worst = max(worst, abs(kn.V_additive(f).norm2() - f.norm2()))
    yield f"V unitary on step functions ({worst:.1e})", worst < 1e-10
    yield "V(1/u) = 0", not kn.V_additive(PiecewiseLogPoly.power(-1.0)).breakpoints
    u = np.linspace(0.01, 1.5, 200)
    lhs = math.sqrt(2) * kn.rho_alpha(0.5, 2 * u)
    rhs = math.sqrt(2) * (kn.rho_alpha(0.25, u) - 0.5 * kn.rho_alpha(0.5, u))
    yield "dilation identity on rho", float(np.max(np.abs(lhs - rhs))) < 1e-14
    phi = kn.SmoothBump.zero_moment()
    yield "T(phi) decay", float(np.max(np.abs(kn.T_sum(phi, np.linspace(0.002, 0.02, 50))))) < 1e-6


def _nyman():
    a = 0.5
    g = ny.gram_assemble([a], eps=1e-4)
    r = ny.nb_distance(g)
    proj = 1 - g.b[0] ** 2 / g.G[0, 0]
    yield "single-alpha projection", abs(r.d_squared - proj) < 1e-14
    g = ny.gram_assemble(ny.reciprocal_grid(5), eps=1e-4)
    r = ny.nb_distance(g)
    yield "residual identity", abs(r.d_squared - r.d_squared_direct) < 1e-10


def _hardy():
    Z = hd.BadZeroSet((0.7 + 5j, 0.9 - 2j))
    t = np.linspace(-40, 40, 20)
    yield "|B| = 1 on the line", float(np.max(np.abs(np.abs(hd.blaschke_eval(Z, 0.5 + 1j * t)) - 1))) < 1e-12
    v, _ = hd.poisson_log_modulus(lambda t: -0.5 * np.log(2.25 + t * t), 2, T=1e4,
                                  growth=hd.GrowthModel(0, -1, 9 / 8, -2))
    yield "Poisson extension of log|1/(s+1)|", abs(v + math.log(3)) < 1e-6
    yield "no zeros in (0.55,0.95)x(1,60)", hd.zero_count_rectangle("zeta", hd.Rectangle(0.55, 0.95, 1, 60)).count == 0
    yield "empty set is causal", hd.causality_verdict(hd.BadZeroSet()).verdict == "causal"


def _function_field():
    ok = True
    for P in ff.load_curve_corpus():
        r = ff.ff_rh_check(P)
        c = ff.ff_causality(P)
        if P.label == "curve":
            ok &= r.verdict == "on_circle" and c.verdict == "causal"
        else:
            ok &= r.verdict == "violated" and c.verdict == "violated"
    yield "curve corpus verdicts", bool(ok)
    zs = np.exp(2j * np.pi * np.arange(20) / 20)
    yield "|V(1,z)| = 1 on the circle", max(abs(abs(ff.ff_multiplier_eval("V", 5, z)) - 1) for z in zs) < 1e-12
    f = ff.DiscreteSequence(-2, np.array([1.0, -0.5, 2.0, 0.25]))
    Af = ff.ff_discrete_conv(f, 4)
    z = 0.7 * np.exp(0.9j)
    yield "discrete convolution multiplier", abs(Af.ztransform(z) - ff.A_closed_form(4, z) * f.ztransform(z)) < 1e-12


SUITES = {
    "analytic_engine": _analytic,
    "nyman_kernels": _kernels,
    "nb_optimizer": _nyman,
    "hardy_scattering": _hardy,
    "function_field": _function_field,
}


def run_selftest():
    """List of {suite, check, passed, error} rows."""
    rows = []
    for suite, gen in SUITES.items():
        try:
            for name, passed in gen():
                rows.append({"suite": suite, "check": name, "passed": bool(passed), "error": None})
        except Exception as exc:  # a crash is a failed check, not a crash of the runner
            rows.append({"suite": suite, "check": "suite aborted", "passed": False,
                         "error": f"{type(exc).__name__}: {exc}"})
    return rows
