import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nymanlab import function_field as ff
from nymanlab.errors import DomainError, InputFormatError
from nymanlab.hardy import scattering_multiplier


def test_prime_powers():
    assert [q for q in range(2, 30) if ff.is_prime_power(q)] == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


def test_validate_examples():
    P = ff.lpoly_validate(ff.LPolynomial(2, (1,)))
    assert P.genus == 0
    P = ff.lpoly_validate(ff.LPolynomial(5, (1, -2, 5)))
    assert P.genus == 1
    with pytest.raises(DomainError, match="coefficient 1"):
        ff.lpoly_validate(ff.LPolynomial(4, (1, -5, 4)))
    # the same polynomial is admitted when labelled synthetic
    assert ff.lpoly_validate(ff.LPolynomial(4, (1, -5, 4), "synthetic")).degree == 2


def test_validate_shape():
    with pytest.raises(DomainError, match="coefficient 2"):
        ff.lpoly_validate(ff.LPolynomial(3, (1, 1, 4)))
    with pytest.raises(DomainError, match="odd degree"):
        ff.lpoly_validate(ff.LPolynomial(3, (1, 1)))
    # genus 2 shape: c3 = q c1, c4 = q^2
    ff.lpoly_validate(ff.LPolynomial(3, (1, 1, 2, 3, 9)))
    with pytest.raises(DomainError):
        ff.LPolynomial(6, (1,))
    with pytest.raises(DomainError):
        ff.LPolynomial(3, (2, 1, 3))
    with pytest.raises(DomainError):
        ff.LPolynomial(3, (1, 0.5, 3))


def test_zeta_eval():
    P = ff.LPolynomial(2, (1,))
    assert abs(ff.ff_zeta_eval(P, 2) - 8 / 3) < 1e-15
    s = 0.5 + 1j * math.pi / math.log(3)
    v = ff.ff_zeta_eval(ff.LPolynomial(3, (1,)), s)
    assert math.isfinite(abs(v)) and abs(v) > 0
    with pytest.raises(DomainError, match="1 - q\\^-s"):
        ff.ff_zeta_eval(P, 0)
    with pytest.raises(DomainError, match="1 - q\\^\\(1-s\\)"):
        ff.ff_zeta_eval(P, 1)


def test_zeta_zeros_are_numerator_zeros():
    P = ff.LPolynomial(5, (1, -2, 5))
    for T0 in ff.ff_roots(P).T:
        s = -np.log(T0) / math.log(5)
        assert abs(ff.ff_zeta_eval(P, s)) < 1e-12


def test_roots_q5():
    r = ff.ff_roots(ff.LPolynomial(5, (1, -2, 5)))
    expected = np.array([(1 - 2j) / 5, (1 + 2j) / 5])
    assert np.allclose(np.sort_complex(r.T), np.sort_complex(expected), atol=1e-15)
    assert np.max(np.abs(np.abs(r.T) - 5 ** -0.5)) < 1e-12
    assert np.max(np.abs(np.abs(r.z) - 1)) < 1e-12
    assert np.all(r.residuals < 1e-10 * ff.LPolynomial(5, (1, -2, 5)).norm)


def test_roots_trivial_and_synthetic():
    assert ff.ff_roots(ff.LPolynomial(3, (1,))).T.size == 0
    r = ff.ff_roots(ff.LPolynomial(4, (1, -3, 2), "synthetic"))
    assert np.allclose(np.sort(np.abs(r.T)), [0.5, 1.0], atol=1e-14)
    assert np.allclose(np.sort(np.abs(r.z)), [1.0, 2.0], atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9).filter(ff.is_prime_power), st.lists(st.integers(-6, 6), min_size=1, max_size=6))
def test_roots_certified(q, tail):
    P = ff.LPolynomial(q, (1, *tail), "synthetic")
    if P.degree < 1:
        return
    r = ff.ff_roots(P)
    assert len(r.T) == P.degree
    assert np.all(r.residuals < 1e-10 * P.norm)
    assert np.allclose(r.z, math.sqrt(q) * r.T)


def test_rh_check_examples():
    res = ff.ff_rh_check(ff.LPolynomial(5, (1, -2, 5)))
    assert res.verdict == "on_circle" and res.max_deviation < 1e-12
    res = ff.ff_rh_check(ff.LPolynomial(7, (1,)))
    assert res.verdict == "on_circle" and len(res.bad_zeros) == 0
    # roots 1/2 and 1 at q = 4: z = 1 sits on the circle, z = 2 outside
    res = ff.ff_rh_check(ff.LPolynomial(4, (1, -3, 2), "synthetic"))
    assert res.verdict == "violated" and len(res.bad_zeros) == 0
    assert ff.ff_causality(ff.LPolynomial(4, (1, -3, 2), "synthetic")).verdict == "causal"


def test_genuine_curves_on_circle():
    curves = ff.genuine_curves()
    assert len(curves) == 5 + 7 + 9 + 11
    for P in curves:
        res = ff.ff_rh_check(P)
        assert res.verdict == "on_circle" and res.max_deviation < 1e-8
        assert ff.ff_causality(P).verdict == "causal"


def test_corpus_verdicts():
    rows = ff.load_curve_corpus()
    synth = [P for P in rows if P.label == "synthetic"]
    assert synth and len(rows) - len(synth) >= 32
    for P in rows:
        rep = ff.ff_causality(P)
        if P.label == "curve":
            assert rep.verdict == "causal"
        else:
            assert rep.verdict == "violated"
            S = scattering_multiplier(ff.ff_rh_check(P).bad_zeros, True, "disc", rep.witness, q=P.q)
            assert abs(S) > 1


def test_corpus_errors(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("q,label,coefficients\n5,curve,1 -2 5\n4,curve,1 -5 4\n")
    with pytest.raises(InputFormatError, match="line 3"):
        ff.load_curve_corpus(p)
    p.write_text("q,label,coefficients\n5,curve,1 x 5\n")
    with pytest.raises(InputFormatError, match="line 2"):
        ff.load_curve_corpus(p)
    p.write_text("q;label;coefficients\n")
    with pytest.raises(InputFormatError, match="line 1"):
        ff.load_curve_corpus(p)
    p.write_text("q,label,coefficients\n5,curve\n")
    with pytest.raises(InputFormatError, match="line 2"):
        ff.load_curve_corpus(p)
    with pytest.raises(InputFormatError):
        ff.load_curve_corpus(tmp_path / "missing.csv")


def test_corpus_q5_a2_root_modulus():
    P = [P for P in ff.load_curve_corpus() if P.q == 5 and P.coeffs == (1, -2, 5)][0]
    assert np.max(np.abs(np.abs(ff.ff_roots(P).T) - 5 ** -0.5)) < 1e-12


# --- multipliers ---------------------------------------------------------------------

def test_multiplier_examples():
    for q in (2, 4, 5, 9):
        assert abs(ff.ff_multiplier_eval("V", q, 0) - 1 / math.sqrt(q)) < 1e-15
        th = np.linspace(0, 2 * np.pi, 20, endpoint=False)
        for z in np.exp(1j * th):
            assert abs(abs(ff.ff_multiplier_eval("V", q, z)) - 1) < 1e-12
    assert ff.ff_multiplier_eval("Z", 5, 0.3 + 0.1j) == 0.3 + 0.1j
    with pytest.raises(DomainError):
        ff.ff_multiplier_eval("V", 4, 2.0)
    with pytest.raises(DomainError):
        ff.ff_multiplier_eval("W", 4, 0.1)


def test_A_closed_form_random():
    rng = np.random.default_rng(8)
    for q in (2, 3, 5, 7):
        z = rng.normal(size=20) + 1j * rng.normal(size=20)
        for zi in z:
            assert abs(ff.ff_multiplier_eval("A", q, zi) - ff.A_closed_form(q, zi)) < 1e-12 * max(
                1, abs(ff.A_closed_form(q, zi)))


def test_disc_scattering_inner_when_empty():
    rng = np.random.default_rng(4)
    r = np.sqrt(rng.uniform(0, 1, 100))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    for q in (2, 5):
        vals = [abs(scattering_multiplier(ff.BadZeroSet((), "disc"), True, "disc", zi, q=q)) for zi in z]
        assert max(vals) <= 1 + 1e-10


# --- discrete convolution --------------------------------------------------------------

def test_delta_convolution_q4():
    Af = ff.ff_discrete_conv(ff.DiscreteSequence(0, [1.0]), 4)
    assert Af(0) == pytest.approx(0.5)
    for m in range(1, 12):
        assert Af(m) == pytest.approx(2.0 ** -m * 1.5, abs=1e-16)
    assert Af(-1) == 0


def test_kernel_values():
    k = ff.ff_kernel(9, np.array([-2, -1, 0, 1, 2]))
    assert np.allclose(k, [0, 0, 2 / 3, (3 - 1 / 3) / 3, (3 - 1 / 3) / 9])


@pytest.mark.parametrize("q", [2, 4, 5, 7])
def test_ztransform_identity(q):
    rng = np.random.default_rng(q)
    f = ff.DiscreteSequence(-2, rng.normal(size=6) + 1j * rng.normal(size=6))
    Af = ff.ff_discrete_conv(f, q)
    for th in rng.uniform(0, 2 * np.pi, 10):
        z = 0.7 * np.exp(1j * th)
        assert abs(Af.ztransform(z) - ff.A_closed_form(q, z) * f.ztransform(z)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7, 9]), st.integers(-5, 5),
       st.lists(st.floats(-3, 3), min_size=1, max_size=8))
def test_V_unitary(q, start, vals):
    f = ff.DiscreteSequence(start, np.array(vals))
    Vf = ff.ff_V(f, q)
    assert abs(Vf.norm2() - f.norm2()) < 1e-10 * max(1, f.norm2())


def test_V_ztransform_is_multiplier():
    f = ff.DiscreteSequence(0, [1.0, -2.0, 0.5])
    Vf = ff.ff_V(f, 5)
    for z in (0.3, -0.5j, 0.6 + 0.2j):
        assert abs(Vf.ztransform(z) - ff.ff_multiplier_eval("V", 5, z) * f.ztransform(z)) < 1e-12


def test_sequence_guards():
    with pytest.raises(DomainError):
        ff.DiscreteSequence(0, [])
    with pytest.raises(DomainError):
        ff.DiscreteSequence(0, [1.0], tail_ratio=1.0)
    g = ff.DiscreteSequence(0, [1.0], tail_ratio=0.5)
    with pytest.raises(DomainError):
        ff.ff_discrete_conv(g, 4)
    with pytest.raises(DomainError):
        g.ztransform(3.0)
    d = ff.DiscreteSequence.from_dict({2: 1.0, -1: 3.0})
    assert d.start == -1 and d(0) == 0 and d(2) == 1
