import math

import numpy as np
import pytest

from nymanlab import hardy as hd
from nymanlab.analytic import character_table, zeta_times_s_minus_1
from nymanlab.errors import BoundaryZeroError, DomainError, IncompleteTableError

RHO = 0.7 + 5j


def random_zero_set(rng, n=4):
    z = rng.uniform(0.51, 3.0, n) + 1j * rng.uniform(-30, 30, n)
    return hd.BadZeroSet(tuple(z))


# --- Blaschke products --------------------------------------------------------------

def test_empty_product_is_one():
    assert hd.blaschke_eval(hd.BadZeroSet(), 2 + 3j) == 1
    assert np.all(hd.blaschke_eval(hd.BadZeroSet(), np.array([1, 2j])) == 1)


def test_single_factor_values():
    t = np.linspace(-50, 50, 101)
    Z = hd.BadZeroSet((RHO,))
    assert np.max(np.abs(np.abs(hd.blaschke_eval(Z, 0.5 + 1j * t)) - 1)) < 1e-12
    expected = abs(1 - RHO) / abs(RHO)
    assert abs(abs(hd.blaschke_eval(Z, 1.0)) - expected) < 1e-15
    assert expected == pytest.approx(math.sqrt(25.09 / 25.49), abs=1e-15)
    assert abs(expected - 0.992120) < 5e-6  # quoted figure is rounded
    assert abs(hd.blaschke_eval(Z, RHO)) == 0


@pytest.mark.parametrize("seed", range(5))
def test_modulus_one_on_line_and_below_inside(seed):
    rng = np.random.default_rng(seed)
    Z = random_zero_set(rng)
    t = rng.uniform(-100, 100, 20)
    assert np.max(np.abs(np.abs(hd.blaschke_eval(Z, 0.5 + 1j * t)) - 1)) < 1e-12
    inner = rng.uniform(0.5001, 5, 20) + 1j * rng.uniform(-100, 100, 20)
    assert np.all(np.abs(hd.blaschke_eval(Z, inner)) < 1)


@pytest.mark.parametrize("seed", range(5))
def test_reflection_inverts_modulus(seed):
    rng = np.random.default_rng(100 + seed)
    Z = random_zero_set(rng)
    s = rng.uniform(0.6, 4, 20) + 1j * rng.uniform(-40, 40, 20)
    B = hd.blaschke_eval(Z, s)
    Br = hd.blaschke_eval(Z, 1 - np.conj(s))
    assert np.max(np.abs(np.abs(Br) - 1 / np.abs(B))) < 1e-12 * np.max(1 / np.abs(B))


def test_disc_product():
    Z = hd.BadZeroSet((0.3 + 0.2j, 0.0, -0.5j), mode="disc")
    th = np.linspace(0, 2 * np.pi, 40)
    assert np.max(np.abs(np.abs(hd.blaschke_eval(Z, np.exp(1j * th))) - 1)) < 1e-12
    assert abs(hd.blaschke_eval(Z, 0.3 + 0.2j)) == 0
    assert abs(hd.blaschke_eval(Z, 0.1)) < 1


def test_zero_set_validation_and_pole():
    with pytest.raises(DomainError):
        hd.BadZeroSet((0.5 + 3j,))
    with pytest.raises(DomainError):
        hd.BadZeroSet((1.0,), mode="disc")
    with pytest.raises(DomainError):
        hd.BadZeroSet((1,), mode="annulus")
    with pytest.raises(DomainError):
        hd.blaschke_eval(hd.BadZeroSet((RHO,)), 1 - np.conj(RHO))


# --- Poisson and Jensen -------------------------------------------------------------

def test_poisson_outer_example():
    # F = 1/(s+1); beyond T, log|F| = -log|t| + O(t^-2)
    h = lambda t: -0.5 * np.log(2.25 + t * t)
    v, bound = hd.poisson_log_modulus(h, 2.0, T=1e4, growth=hd.GrowthModel(0.0, -1.0, 9 / 8, -2.0))
    assert abs(v + math.log(3)) < 1e-6
    assert bound < 1e-6


def test_poisson_inner_defect_and_constant():
    h = lambda t: np.log(np.abs((-0.5 + 1j * t) / (0.5 + 1j * t)))
    v, _ = hd.poisson_log_modulus(h, 2.0, T=1e3)
    assert abs(v) < 1e-12
    assert math.log(abs((2 - 1) / 2)) - v == pytest.approx(-math.log(2))
    v, _ = hd.poisson_log_modulus(lambda t: np.zeros_like(t), 1.3 + 2j, T=1e3)
    assert v == 0.0


def test_poisson_constant_boundary_extends_to_constant():
    v, _ = hd.poisson_log_modulus(lambda t: np.full_like(t, 2.5), 1.0 + 1j, T=100.0,
                                  growth=hd.GrowthModel(2.5))
    assert abs(v - 2.5) < 1e-10


def test_poisson_guards():
    h = lambda t: np.zeros_like(t)
    with pytest.raises(DomainError):
        hd.poisson_log_modulus(h, 0.5 + 1j)
    with pytest.raises(DomainError):
        hd.poisson_log_modulus(h, 1 + 100j, T=150)
    with pytest.raises(DomainError):
        hd.GrowthModel(0, 0, 1.0, power=1.0)


def test_poisson_log_points_match_plain_quadrature():
    # log|t - g| singularities: the subtracted route agrees with brute-force splitting
    g = np.array([-7.3, 2.0, 11.5])
    h = lambda t: np.sum(np.log(np.maximum(np.abs(t[..., None] - g), 1e-300)), axis=-1) / (1 + t * t)
    s = 1.2 + 1j
    a, _ = hd.poisson_log_modulus(h, s, T=60.0, log_points=g, tol=1e-12)
    b, _ = hd.poisson_log_modulus(h, s, T=60.0, breakpoints=g, tol=1e-12)
    assert abs(a - b) < 1e-9


def test_jensen_blaschke_factor_itself():
    Z = hd.BadZeroSet((RHO,))
    F = lambda s: hd.blaschke_eval(Z, s)
    assert abs(hd.jensen_check(F, Z, 2.0, T=1e3)) < 1e-10


def test_jensen_declared_unit_factor():
    Z = hd.BadZeroSet((RHO, 1.0))
    F = lambda s: (s - 1) / s * hd.blaschke_eval(hd.BadZeroSet((RHO,)), s)
    assert abs(hd.jensen_check(F, Z, 2.0, T=1e3)) < 1e-4


def test_jensen_omitted_zero():
    Zf = hd.BadZeroSet((RHO,))
    F = lambda s: hd.blaschke_eval(Zf, s)
    r = hd.jensen_check(F, hd.BadZeroSet(), 2.0, T=1e3)
    assert abs(r - math.log(abs(hd.blaschke_eval(Zf, 2.0)))) < 1e-10


def test_jensen_additivity():
    rho2 = 1.3 - 2j
    s0 = 1.5 + 0.5j
    both = hd.BadZeroSet((RHO, rho2))
    F = lambda s: hd.blaschke_eval(both, s) / (s + 1)
    gm = hd.GrowthModel(0.0, -1.0, 0.5, -2.0)
    r1 = hd.jensen_check(F, hd.BadZeroSet((RHO,)), s0, T=1e4, growth=gm)
    r2 = hd.jensen_check(F, both, s0, T=1e4, growth=gm)
    b2 = abs(hd.blaschke_eval(hd.BadZeroSet((rho2,)), s0))
    assert abs((r2 - r1) + math.log(b2)) < 1e-8


@pytest.mark.slow
def test_jensen_zeta_injection_shift(zero_table):
    g = np.asarray(zero_table)
    pts = sorted(list(g[g < 200]) + list(-g[g < 200]))
    F = lambda s: zeta_times_s_minus_1(s) / s ** 2
    Zr = hd.BadZeroSet((RHO,))
    Fi = lambda s: F(s) * hd.blaschke_eval(Zr, s)
    gm = hd.GrowthModel(0.0, -1.0)
    clean = hd.jensen_check(F, hd.BadZeroSet(), 1.0, T=200.0, growth=gm, log_points=pts, tol=1e-8)
    inj = hd.jensen_check(Fi, hd.BadZeroSet(), 1.0, T=200.0, growth=gm, log_points=pts, tol=1e-8)
    assert abs((clean - inj) - math.log(abs(RHO) / abs(1 - RHO))) < 1e-10
    # declaring the injected zero restores the clean residual
    dec = hd.jensen_check(Fi, Zr, 1.0, T=200.0, growth=gm, log_points=pts, tol=1e-8)
    assert abs(dec - clean) < 1e-10


# --- BSY ------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def bsy_pair(zero_table):
    g = zero_table[:79]
    return (hd.bsy_integral(200.0, g, scheme="subtract"),
            hd.bsy_integral(200.0, g, scheme="graded"), g)


@pytest.mark.slow
def test_bsy_consistency(bsy_pair):
    sub, grad, _ = bsy_pair
    assert abs(sub.value) <= sub.tail_bound
    assert abs(sub.value - grad.value) <= sub.quad_error + grad.quad_error + 1e-9
    assert sub.heuristic_tail and sub.ordinates_used == 79


@pytest.mark.slow
def test_bsy_mirror(bsy_pair):
    sub, _, g = bsy_pair
    mir = hd.bsy_integral(200.0, g, scheme="subtract", mirror=True, constants=(sub.c1, sub.c2))
    assert abs(mir.value - sub.value) < 1e-10


def test_bsy_missing_ordinate(zero_table):
    g = list(zero_table[:10])
    del g[4]
    with pytest.raises(IncompleteTableError):
        hd.bsy_integral(45.0, g, constants=(1.0, 0.0))


def test_bsy_input_validation():
    with pytest.raises(DomainError):
        hd.bsy_integral(2000.0, [14.1])
    with pytest.raises(DomainError):
        hd.bsy_integral(20.0, [21.0, 14.0])


def test_bsy_tail_bound_formula():
    assert hd.bsy_tail_bound(200.0, 1.0, 0.0) == pytest.approx(2 / math.pi / 200)
    assert hd.bsy_tail_bound(200.0, 0.0, 1.0) == pytest.approx(
        2 / math.pi * (math.log(200) + 1) / 200)


def test_calibrated_constants_dominate_window():
    c1, c2 = hd.calibrate_tail_constants()
    assert c1 > 0 and c2 >= 0


# --- zero counts -------------------------------------------------------------------

@pytest.mark.slow
def test_zero_count_critical_strip(zero_table):
    zc = hd.zero_count_rectangle("zeta", hd.Rectangle(0.05, 0.95, 1, 50))
    assert zc.count == sum(1 for g in zero_table if g < 50) == 10
    assert abs(zc.winding - round(zc.winding)) < 1e-3


@pytest.mark.slow
def test_zero_count_right_of_line():
    zc = hd.zero_count_rectangle("zeta", hd.Rectangle(0.55, 0.95, 1, 60))
    assert zc.count == 0 and not zc.pole_adjusted


def test_zero_count_pole_inside():
    zc = hd.zero_count_rectangle("zeta", hd.Rectangle(0.5, 1.5, -0.5, 0.5))
    assert zc.pole_adjusted and zc.count == 0
    assert abs(zc.winding + 1) < 1e-3


def test_zero_count_pole_too_close():
    with pytest.raises(DomainError):
        hd.zero_count_rectangle("zeta", hd.Rectangle(0.5, 0.97, -0.5, 0.5))


def test_zero_count_boundary_zero(zero_table):
    with pytest.raises(BoundaryZeroError) as info:
        hd.zero_count_rectangle("zeta", hd.Rectangle(0.4, 0.6, zero_table[0], 15))
    assert abs(info.value.location - complex(0.5, zero_table[0])) < 1e-6


def test_zero_count_dirichlet():
    chi = [c for c in character_table(4) if not c.is_principal][0]
    zc = hd.zero_count_rectangle(chi, hd.Rectangle(0.05, 0.95, 1, 10))
    assert zc.count == 1 and not zc.pole_adjusted


def test_zero_count_window_guard():
    with pytest.raises(DomainError):
        hd.zero_count_rectangle("zeta", hd.Rectangle(0.1, 0.9, 990, 1010))
    with pytest.raises(DomainError):
        hd.Rectangle(0.9, 0.1, 0, 1)


def test_rectangle_grid_tiles_region():
    region = hd.Rectangle(0.55, 0.95, 1, 60)
    rects = hd.rectangle_grid(region, 2, 3)
    assert len(rects) == 6
    area = sum((r.sigma_max - r.sigma_min) * (r.t_max - r.t_min) for r in rects)
    assert area == pytest.approx(0.4 * 59)


# --- scattering and causality -----------------------------------------------------------

def test_scattering_examples():
    t = np.linspace(-80, 80, 33)
    for x in t:
        S = hd.scattering_multiplier(hd.BadZeroSet(), True, "halfplane", 0.5 + 1j * x)
        assert abs(abs(S) - 1) < 1e-12
    assert abs(hd.scattering_multiplier(hd.BadZeroSet(), True, "halfplane", 2.0)) == pytest.approx(0.25)
    Z = hd.BadZeroSet((RHO,))
    mags = [abs(hd.scattering_multiplier(Z, True, "halfplane", RHO + d)) for d in (1e-1, 1e-3, 1e-5)]
    assert mags[0] < mags[1] < mags[2] and mags[2] > 1e6
    assert math.isinf(abs(hd.scattering_multiplier(Z, True, "halfplane", RHO)))


def test_scattering_nontrivial_character_and_disc():
    Z = hd.BadZeroSet((RHO,))
    s = 1.1 + 2j
    assert hd.scattering_multiplier(Z, False, "halfplane", s) == pytest.approx(
        hd.blaschke_eval(Z, s) ** -2)
    for th in np.linspace(0, 2 * np.pi, 12):
        z = np.exp(1j * th)
        assert abs(abs(hd.scattering_multiplier(hd.BadZeroSet(mode="disc"), True, "disc", z, q=5)) - 1) < 1e-12
    with pytest.raises(DomainError):
        hd.scattering_multiplier(hd.BadZeroSet(mode="disc"), True, "disc", 0.5)
    with pytest.raises(DomainError):
        hd.scattering_multiplier(hd.BadZeroSet(), True, "halfplane", 0.0)


def test_causality_verdicts():
    r = hd.causality_verdict(hd.BadZeroSet())
    assert r.verdict == "causal" and r.bad_zero_count == 0 and r.witness is None
    r = hd.causality_verdict(hd.BadZeroSet((RHO,)))
    assert r.verdict == "violated" and r.bad_zero_count == 1
    assert abs(r.witness - RHO) < 0.1 and r.witness_modulus > 1 + 1e-6
    r = hd.causality_verdict(hd.BadZeroSet((0.4 + 0.1j,), mode="disc"), q=5)
    assert r.verdict == "violated" and r.witness_modulus > 1


@pytest.mark.slow
def test_causality_scan_window():
    region = hd.Rectangle(0.55, 0.95, 1, 60)
    r = hd.causality_scan("zeta", region, nx=1, ny=3, threads=3)
    assert r.verdict == "causal" and r.bad_zero_count == 0
    assert r.scanned_region == region and len(r.rectangles) == 3
    assert "window" in r.notes


def test_causality_scan_threads_identical():
    region = hd.Rectangle(0.6, 0.9, 2, 8)
    a = hd.causality_scan("zeta", region, nx=2, ny=2, threads=1)
    b = hd.causality_scan("zeta", region, nx=2, ny=2, threads=4)
    assert a.rectangles == b.rectangles and a.verdict == b.verdict == "causal"


def test_causality_scan_needs_right_half():
    with pytest.raises(DomainError):
        hd.causality_scan("zeta", hd.Rectangle(0.4, 0.9, 1, 5))
