"""Nyman kernels, the A(u) function, smooth bumps and the operators V, U, I, A.

Two function classes are used.  PiecewiseLogPoly (exact) covers step
functions and their images under V, dilations and inversion.  SmoothBump
(numeric) covers the test functions phi entering T, E and VE.  The
fractional-part kernels rho_alpha, A(u) and {1/u} get dedicated Mellin
routines: exact integration over unit intervals of v = 1/u up to X = 1/eps,
then an asymptotic tail built from periodic Bernoulli functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .analytic import ComplexPoint, as_complex, bernoulli_numbers, riemann_zeta, zeta_times_s_minus_1
from .errors import DomainError
from .piecewise import PiecewiseLogPoly
from .quadrature import gauss_legendre_fixed, gk_integrate

DEFAULT_EPS = 1e-6
LOG_2PI = math.log(2 * math.pi)


# ---------------------------------------------------------------------------
# pointwise kernels

def _frac(x):
    return x - np.floor(x)


def rho_alpha(alpha, u):
    """rho_alpha(u) = {alpha/u} - alpha {1/u}; identically 0 for u > 1."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise DomainError("rho_alpha needs u > 0")
    val = _frac(alpha / u) - alpha * _frac(1.0 / u)
    val = np.where(u > 1, 0.0, val)
    return float(val) if val.ndim == 0 else val


def rho_alpha_steps(alpha, u):
    """Same kernel through the step form alpha*floor(1/u) - floor(alpha/u)."""
    u = np.asarray(u, dtype=float)
    return alpha * np.floor(1.0 / u) - np.floor(alpha / u)


def big_A(u):
    """A(u) = n log u + log n! + n with n = floor(1/u), for 0 < u <= 1."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u > 1)):
        raise DomainError("big_A is defined for 0 < u <= 1")
    n = np.floor(1.0 / u)
    val = n * np.log(u) + gammaln(n + 1) + n
    return float(val) if val.ndim == 0 else val


def rho_piecewise(alpha, lower):
    """rho_alpha restricted to [lower, 1] as an exact step function."""
    if not 0 < lower < 1:
        raise DomainError("lower cutoff must lie in (0, 1)")
    kmax = int(1.0 / lower)
    pts = [1.0 / k for k in range(1, kmax + 1)]
    pts += [alpha / k for k in range(1, int(alpha / lower) + 1)]
    pts = np.unique(np.array([p for p in pts if lower < p <= 1] + [lower, 1.0]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    return PiecewiseLogPoly.step(pts, rho_alpha_steps(alpha, mids))


# ---------------------------------------------------------------------------
# operators on PiecewiseLogPoly

def dilation_apply(lam, f: PiecewiseLogPoly) -> PiecewiseLogPoly:
    if not 0 < lam <= 1:
        raise DomainError("dilation parameter must lie in (0, 1]")
    return f.dilate(lam)


def inversion_apply(f: PiecewiseLogPoly) -> PiecewiseLogPoly:
    return f.invert()


def V_additive(f: PiecewiseLogPoly) -> PiecewiseLogPoly:
    """Vf(u) = f(u) - int_u^inf f(t)/t dt, exact."""
    return f - f.tail_integral_operator(-1.0, 0.0)


def A_mult(f: PiecewiseLogPoly) -> PiecewiseLogPoly:
    """Multiplicative-model convolution with a(w) = sqrt(w) 1_{w<=1} in d*u:
    (Af)(u0) = sqrt(u0) int_{u0}^inf u^{-3/2} f(u) du."""
    return f.tail_integral_operator(-1.5, 0.5)


def A_mult_convolve(f: PiecewiseLogPoly, u0):
    if np.any(np.asarray(u0) <= 0):
        raise DomainError("u0 must be positive")
    return A_mult(f)(u0)


def V_mult(f: PiecewiseLogPoly) -> PiecewiseLogPoly:
    return f - A_mult(f)


def mellin_mult(f: PiecewiseLogPoly, s):
    """Mellin transform in the multiplicative model: int f(u) u^(s-1/2) d*u."""
    return f.mellin(as_complex(s) - 0.5)


# ---------------------------------------------------------------------------
# smooth bumps

def _std_bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    inside = (t > 0) & (t < 1)
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (ti * (1.0 - ti)))
    return out


@dataclass(frozen=True)
class SmoothBump:
    """Smooth test function with compact support [a, b] inside (0, inf)."""

    func: Callable
    support: tuple
    moment: float
    grade: str = "C-infinity"
    breakpoints: tuple = field(default=())

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @classmethod
    def standard(cls, a=0.0, b=1.0):
        """exp(-1/(t(1-t))) with t = (x-a)/(b-a)."""
        w = b - a
        f = (lambda x, a=a, w=w: _std_bump((x - a) / w))
        return cls(f, (a, b), w * standard_bump_moment())

    @classmethod
    def zero_moment(cls):
        """phi(x) - 2 phi(2x) on [0, 1]; the factor 2 cancels the moment."""
        f = (lambda x: _std_bump(x) - 2.0 * _std_bump(2.0 * x))
        return cls(f, (0.0, 1.0), 0.0, breakpoints=(0.5,))

    def panels(self, n=32):
        a, b = self.support
        pts = set(np.linspace(a, b, n + 1)) | set(self.breakpoints)
        return np.array(sorted(pts))


_BUMP_MOMENT = []


def standard_bump_moment():
    if not _BUMP_MOMENT:
        r = gk_integrate(_std_bump, 0.0, 1.0, tol=1e-17, initial=16)
        _BUMP_MOMENT.append(r.value)
    return _BUMP_MOMENT[0]


def bump_mellin(phi: SmoothBump, s, tol=1e-13):
    """phi-hat(s) = int phi(x) x^(s-1) dx by adaptive Gauss-Kronrod."""
    s = as_complex(s)
    a, b = phi.support
    r = gk_integrate(lambda x: phi(x) * x ** (s - 1), a, b, tol=tol,
                     breakpoints=tuple(phi.panels(8)[1:-1]))
    return r.value, r.error


# ---------------------------------------------------------------------------
# T, E and VE on the half-line

def T_sum(phi: SmoothBump, u):
    """T(phi)(u) = sum_{n>=1} phi(n u); finitely many terms."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise DomainError("T_sum needs u > 0")
    b = phi.support[1]
    out = np.zeros(u.shape)
    for i, ui in enumerate(u):
        n = np.arange(1, int(b / ui) + 1)
        if n.size:
            out[i] = math.fsum(phi(n * ui))
    return out if out.size > 1 else float(out[0])


def E_halfline(phi: SmoothBump, u):
    """E(phi)(u) = sum phi(n u) - (int phi)/u."""
    u = np.asarray(u, dtype=float)
    return T_sum(phi, u) - phi.moment / u


def _phi_over_x_tail(phi: SmoothBump, x):
    """Phi(x) = int_x^inf phi(v)/v dv at every entry of x, via one sorted sweep."""
    x = np.asarray(x, dtype=float)
    a, b = phi.support
    xs = np.clip(x, a, b)
    nodes = np.unique(np.concatenate([phi.panels(64), xs]))
    pieces = gauss_legendre_fixed(lambda v: phi(v) / v, nodes[:-1], nodes[1:], order=20)
    # suffix sums in a fixed order
    tail = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    return tail[np.searchsorted(nodes, xs)]


def VE_halfline(phi: SmoothBump, u):
    """VE(phi)(u) = sum phi(n u) - int_0^inf floor(v/u) phi(v) dv/v.

    The integral equals sum_{k>=1} Phi(k u) with Phi(x) = int_x^inf phi(v)/v dv.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise DomainError("VE_halfline needs u > 0")
    b = phi.support[1]
    out = np.zeros(u.shape)
    for i, ui in enumerate(u):
        if ui > b:
            continue
        k = np.arange(1, int(b / ui) + 1)
        out[i] = math.fsum(phi(k * ui)) - math.fsum(_phi_over_x_tail(phi, k * ui))
    return out if out.size > 1 else float(out[0])


def V_numeric(func, u, upper, tail_moment=0.0, tol=1e-12):
    """Vf(u) for a callable f that equals -tail_moment/t beyond ``upper``."""
    u = float(u)
    if u >= upper:
        return float(func(np.array([u]))[0]) + tail_moment / u
    r = gk_integrate(lambda t: func(t) / t, u, upper, tol=tol, initial=8)
    inner = r.value - tail_moment / upper
    return float(func(np.array([u]))[0]) - inner


# ---------------------------------------------------------------------------
# Mellin transforms of the fractional-part kernels

@dataclass(frozen=True)
class MellinSample:
    s: ComplexPoint
    value: complex
    abs_error_bound: float


def _bernoulli_poly(k, x):
    B = bernoulli_numbers(max(1, (k + 1) // 2 + 1))
    coeffs = [float(math.comb(k, j) * Fraction(B[j])) for j in range(k + 1)]
    return sum(c * x ** (k - j) for j, c in enumerate(coeffs))


def periodic_bernoulli(k, x):
    """P_k(x) = B_k({x}) / k!."""
    return _bernoulli_poly(k, _frac(np.asarray(x, dtype=float))) / math.factorial(k)


def bernoulli_tail(Y, s, terms=8):
    """J(Y, s) = int_Y^inf P_1(w) w^(-s-1) dw by repeated integration by parts.

    Returns (value, bound on the remainder)."""
    s = complex(s)
    frac = math.fmod(Y, 1.0)
    total = 0.0
    rising = 1.0 + 0j
    for k in range(2, terms + 2):
        total -= rising * periodic_bernoulli(k, frac) * Y ** (-s - k + 1)
        rising *= s + k - 1
    # remainder |rising| * max|P_K| * Y^(1-sigma-K)/(sigma+K-1), max|P_K| <= 2/(2 pi)^K
    K = terms + 2
    bound = abs(rising) * 2 / (2 * math.pi) ** K * Y ** (1 - s.real - K) / (s.real + K - 1)
    return complex(total), bound


def _power_increment(v0, v1, s):
    """(v0^-s - v1^-s)/s without cancellation for short intervals."""
    h = (v1 - v0) / v0
    return v0 ** (-s) * (-np.expm1(-s * np.log1p(h))) / s


def _check_mellin_strip(s):
    if s.real <= 0:
        raise DomainError(f"Mellin integral diverges at u -> 0 for Re(s) = {s.real} <= 0",)


def _rho_unit_pieces(alpha, n):
    """Sub-pieces of [n, n+1) on which alpha*n - floor(alpha*v) is constant."""
    k = np.floor(alpha * n)
    jump = (k + 1) / alpha
    j = np.minimum(np.maximum(jump, n), n + 1.0)
    lo = np.concatenate([n, j])
    hi = np.concatenate([j, n + 1.0])
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    mid = 0.5 * (lo + hi)
    val = alpha * np.floor(mid) - np.floor(alpha * mid)
    return lo, hi, val


def _unit_grid(X):
    return np.arange(1, int(X), dtype=float)


def mellin_rho(alpha, s, eps=DEFAULT_EPS) -> MellinSample:
    """int_0^1 rho_alpha(u) u^(s-1) du for Re(s) > 0."""
    s0 = as_complex(s)
    _check_mellin_strip(s0)
    X = float(round(1.0 / eps))
    lo, hi, val = _rho_unit_pieces(alpha, _unit_grid(X))
    terms = val * _power_increment(lo, hi, s0)
    head = complex(math.fsum(terms.real), math.fsum(terms.imag))
    jx, bx = bernoulli_tail(X, s0)
    jy, by = bernoulli_tail(alpha * X, s0)
    tail = (1 - alpha) / 2 * X ** (-s0) / s0 - alpha * jx + alpha ** s0 * jy
    err = alpha * bx + abs(alpha ** s0) * by + 1e-16 * len(terms) ** 0.5 * 10
    return MellinSample(ComplexPoint.of(s0), head + tail, err)


def _log_factorial_shifted(n):
    """log n! + n - n log n, with Stirling for large n to avoid cancellation."""
    n = np.asarray(n, dtype=float)
    small = n < 30
    out = np.empty(n.shape)
    ns = n[small]
    out[small] = gammaln(ns + 1) + ns - ns * np.log(ns)
    nl = n[~small]
    B = bernoulli_numbers(6)
    series = sum(float(B[2 * k]) / (2 * k * (2 * k - 1)) * nl ** (1 - 2 * k) for k in range(1, 7))
    out[~small] = 0.5 * np.log(2 * math.pi * nl) + series
    return out


def mellin_A(s, eps=DEFAULT_EPS) -> MellinSample:
    """int_0^1 A(u) u^(s-1) du for Re(s) > 0.

    On v in [n, n+1) (u = 1/v): A = d_n - n log(v/n) with d_n = log n! + n - n log n.
    """
    s0 = as_complex(s)
    _check_mellin_strip(s0)
    X = float(round(1.0 / eps))
    n = _unit_grid(X)
    L = np.log1p(1.0 / n)
    ns = n ** (-s0)
    em = np.expm1(-s0 * L)
    I = ns * (-em) / s0
    K = ns * ((-em) / s0 ** 2 - (1 + em) * L / s0)
    terms = _log_factorial_shifted(n) * I - n * K
    head = complex(math.fsum(terms.real), math.fsum(terms.imag))
    # tail: A ~ 1/2 log v + 1/2 log 2pi - 1/2 - P_1(v) + P_2(v)/v + O(v^-2), X integer
    xs = X ** (-s0)
    tail = 0.5 * xs * (math.log(X) / s0 + 1 / s0 ** 2)
    tail += (0.5 * LOG_2PI - 0.5) * xs / s0
    jx, bx = bernoulli_tail(X, s0)
    tail -= jx
    # int_X^inf P_2(v) v^(-s-2) dv = -P_3(X) X^(-s-2) - (s+2) P_4(X) X^(-s-3) - ...
    p2tail = -(s0 + 2) * (-1.0 / 720) * X ** (-s0 - 3)
    tail += p2tail
    err = bx + 1.0 * X ** (-2 - s0.real) / (1 + s0.real) + 1e-15 * len(n) ** 0.5
    return MellinSample(ComplexPoint.of(s0), head + tail, err)


def mellin_frac(s, eps=DEFAULT_EPS) -> MellinSample:
    """int_0^1 {1/u} u^(s-1) du for Re(s) > 0."""
    s0 = as_complex(s)
    _check_mellin_strip(s0)
    X = float(round(1.0 / eps))
    n = _unit_grid(X)
    L = np.log1p(1.0 / n)
    ns = n ** (-s0)
    em = np.expm1(-s0 * L)
    # int_n^{n+1} (v - n) v^(-s-1) dv = n^(1-s) * int_1^{1+h} (w - 1) w^(-s-1) dw
    if abs(s0 - 1) < 1e-12:
        inner = np.log1p(1.0 / n) - (1.0 / n) / (1 + 1.0 / n)
    else:
        em1 = np.expm1((1 - s0) * L)
        inner = em1 / (1 - s0) + em / s0
    terms = n * ns * inner
    head = complex(math.fsum(terms.real), math.fsum(terms.imag))
    jx, bx = bernoulli_tail(X, s0)
    tail = 0.5 * X ** (-s0) / s0 + jx
    return MellinSample(ComplexPoint.of(s0), head + tail, bx + 1e-15 * len(n) ** 0.5)


def mellin_numeric(f, s, domain="(0,1)") -> MellinSample:
    """Mellin transform of a PiecewiseLogPoly (exact) or SmoothBump (quadrature)."""
    s0 = as_complex(s)
    upper = 1.0 if domain == "(0,1)" else math.inf
    if domain not in ("(0,1)", "(0,inf)"):
        raise ValueError("domain must be '(0,1)' or '(0,inf)'")
    if isinstance(f, PiecewiseLogPoly):
        value = f.mellin(s0, upper=upper)
        return MellinSample(ComplexPoint.of(s0), value, 0.0)
    if isinstance(f, SmoothBump):
        a, b = f.support
        b = min(b, upper)
        if b <= a:
            return MellinSample(ComplexPoint.of(s0), 0j, 0.0)
        r = gk_integrate(lambda x: f(x) * x ** (s0 - 1), a, b, tol=1e-13,
                         breakpoints=tuple(f.panels(8)[1:-1]))
        return MellinSample(ComplexPoint.of(s0), complex(r.value), r.error)
    raise TypeError(f"no Mellin rule for {type(f).__name__}")


def mellin_rho_closed(alpha, s):
    """(alpha - alpha^s) zeta(s) / s; the removable point s = 1 gives -alpha log(alpha)."""
    s0 = as_complex(s)
    if s0 == 1:
        return complex(-alpha * math.log(alpha))
    z = riemann_zeta(s0).value
    return (alpha - alpha ** s0) * z / s0


def mellin_A_closed(s):
    """(s-1) zeta(s) / s^2."""
    s0 = as_complex(s)
    return complex(zeta_times_s_minus_1(np.array([s0]))[0]) / s0 ** 2
