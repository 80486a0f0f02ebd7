"""Special functions on the critical strip: log-gamma, zeta, Hurwitz zeta,
Dirichlet characters and L-functions.

All series are summed with ``math.fsum`` (correctly rounded), so each value
is bit-reproducible for a given input regardless of how calls are batched.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, UnsupportedRangeError

SIGMA_MIN, SIGMA_MAX = -2.0, 10.0
T_MAX = 1000.0
EM_CORRECTIONS = 15
STIRLING_TERMS = 12
LOG_2PI = math.log(2 * math.pi)

# Extended-precision constants: phases like t*log(n) reach ~1e4 rad inside the
# window, and double rounding of them costs ~1e-12 relative accuracy.
_LD = np.longdouble
PI_LD = _LD("3.14159265358979323846264338327950288")
LOG2_LD = _LD("0.693147180559945309417232121458176568")
LOGPI_LD = _LD("1.14472988584940017414342735135305871")
LOG2PI_LD = _LD("1.83787706640934548356065947281123528")
_EPS_LD = float(np.finfo(np.longdouble).eps)


@dataclass(frozen=True)
class ComplexPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite point ({self.re}, {self.im})")

    @classmethod
    def of(cls, s):
        if isinstance(s, ComplexPoint):
            return s
        s = complex(s)
        return cls(s.real, s.imag)

    def __complex__(self):
        return complex(self.re, self.im)


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_bound: float
    terms_used: int
    rigorous: bool = False


def as_complex(s) -> complex:
    """Validated conversion of a point (complex, real or ComplexPoint)."""
    return complex(ComplexPoint.of(s))


def bernoulli_numbers(count: int) -> list[Fraction]:
    """Exact B_0 .. B_{2*count} from sum_{j<=m} C(m+1, j) B_j = 0."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if count > 60:
        raise OverflowError(f"Bernoulli index {2 * count} beyond supported range (count <= 60)")
    top = 2 * count
    B = [Fraction(1)]
    for m in range(1, top + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * B[j]
        B.append(-acc / (m + 1))
    return B


@lru_cache(maxsize=None)
def _even_bernoulli_floats(count):
    B = bernoulli_numbers(count)
    return tuple(float(B[2 * k]) for k in range(count + 1))


# ---------------------------------------------------------------- log-gamma

def _log_sin_pi(z):
    """A logarithm of sin(pi z), safe for large |Im z| (branch unspecified)."""
    z = np.asarray(z, dtype=np.clongdouble)
    upper = z.imag >= 0
    w = np.where(upper, z, np.conj(z))
    # sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 pi i w}),  |e^{2 pi i w}| <= 1
    val = -1j * PI_LD * w + np.log(1 - np.exp(2j * PI_LD * w)) + np.log(np.clongdouble(0.5j))
    return np.where(upper, val, np.conj(val))


def _log_gamma_right(z):
    """log Gamma on Re(z) >= 1/2 with the continuous principal branch."""
    z = np.asarray(z, dtype=np.clongdouble)
    shift = np.where(np.abs(z) < 15.0, np.ceil(np.maximum(0.0, 15.0 - z.real)), 0.0)
    nmax = int(shift.max()) if shift.size else 0
    acc = np.zeros_like(z)
    for k in range(nmax):
        acc = acc + np.where(k < shift, np.log(z + k), 0.0)
    w = z + shift
    B = _even_bernoulli_floats(STIRLING_TERMS + 1)
    series = (w - _LD(0.5)) * np.log(w) - w + LOG2PI_LD / 2
    inv = 1 / w
    inv2 = inv * inv
    p = inv
    for k in range(1, STIRLING_TERMS + 1):
        series = series + _LD(B[k]) / (2 * k * (2 * k - 1)) * p
        p = p * inv2
    err = np.abs(B[STIRLING_TERMS + 1] / ((2 * STIRLING_TERMS + 2) * (2 * STIRLING_TERMS + 1))
                 * p.astype(complex))
    return series - acc, err + 1e-18 * np.abs(series.astype(complex))


def _log_gamma_ld(z):
    z = np.asarray(z, dtype=np.clongdouble)
    left = z.real < 0.5
    zr = np.where(left, 1 - z, z)
    val, err = _log_gamma_right(zr)
    val = np.where(left, LOGPI_LD - _log_sin_pi(z) - val, val)
    return val, err


def log_gamma_array(z):
    """Vectorised log Gamma; returns (values, error estimates)."""
    val, err = _log_gamma_ld(z)
    return val.astype(complex), err


def log_gamma(s) -> EvalResult:
    """Principal log Gamma(s); continuous on the right half-plane."""
    z = as_complex(s)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Gamma has a pole at {z.real:g}")
    val, err = log_gamma_array(np.array([z]))
    return EvalResult(complex(val[0]), float(err[0]), STIRLING_TERMS, rigorous=False)


# ------------------------------------------------------------ zeta family

def _em_length(t_abs):
    return max(20, int(math.ceil(1.3 * t_abs)))


def _check_window(s, what="zeta"):
    if not (SIGMA_MIN <= s.real <= SIGMA_MAX and abs(s.imag) <= T_MAX):
        raise UnsupportedRangeError(
            f"{what}({s}) outside the supported window "
            f"{SIGMA_MIN} <= Re(s) <= {SIGMA_MAX}, |Im(s)| <= {T_MAX}")


def _split_sum(values):
    """Correctly rounded sum of extended-precision complex values."""
    hi = values.astype(complex)
    lo = (values - hi).astype(complex)
    re = math.fsum(itertools.chain(hi.real, lo.real))
    im = math.fsum(itertools.chain(hi.imag, lo.imag))
    return complex(re, im)


def _hurwitz_regular(s, a, M=None):
    """zeta(s, a) - 1/(s-1) by Euler-Maclaurin, vectorised over ``s``.

    Returns (values, error estimates, M).  Removing the polar part makes
    weighted sums with zero total weight analytic at s = 1.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if M is None:
        M = _em_length(float(np.max(np.abs(s.imag))) if s.size else 0.0)
    logs = np.log(np.arange(M, dtype=_LD) + _LD(a))
    x = _LD(M) + _LD(a)
    logx = np.log(x)
    B = _even_bernoulli_floats(EM_CORRECTIONS + 1)
    coef = []
    fact = 2
    for k in range(1, EM_CORRECTIONS + 2):
        coef.append(_LD(B[k]) / _LD(fact))
        fact *= (2 * k + 1) * (2 * k + 2)
    out = np.empty(s.shape, dtype=complex)
    err = np.empty(s.shape, dtype=float)
    terms = np.empty(M + EM_CORRECTIONS + 2, dtype=np.clongdouble)
    for i, si in enumerate(s):
        sl = np.clongdouble(si)
        terms[:M] = np.exp(-sl * logs)
        xs = np.exp(-sl * logx)
        u = (1 - sl) * logx
        if abs(complex(u)) < 1e-6:
            polar = -logx * (1 + u / 2 + u * u / 6 + u * u * u / 24)
        else:
            polar = -logx * np.expm1(u) / u
        terms[M] = polar
        terms[M + 1] = xs / 2
        poch = sl
        xpow = xs / x
        for k in range(1, EM_CORRECTIONS + 1):
            terms[M + 1 + k] = coef[k - 1] * poch * xpow
            poch = poch * (sl + 2 * k - 1) * (sl + 2 * k)
            xpow = xpow / (x * x)
        out[i] = _split_sum(terms)
        mags = np.abs(terms[:M].astype(complex))
        # phase rounding of s*log(n) dominates for large |Im s|
        phase = float(np.sum(mags * (1.0 + abs(si) * logs.astype(float))))
        tail = float(np.sum(np.abs(terms[M:].astype(complex))))
        err[i] = abs(complex(coef[EM_CORRECTIONS] * poch * xpow)) + _EPS_LD * (phase + tail) \
            + 2e-16 * abs(out[i])
    return out, err, M


def hurwitz_zeta(s, a: float, *, enforce_window: bool = True) -> EvalResult:
    """Hurwitz zeta(s, a) = sum_{n>=0} (n + a)^{-s}, 0 < a <= 1."""
    z = as_complex(s)
    if not (0.0 < a <= 1.0):
        raise DomainError(f"Hurwitz parameter a={a} outside (0, 1]")
    if z == 1:
        raise DomainError("zeta(s, a) has a pole at s = 1")
    if enforce_window:
        _check_window(z, "hurwitz_zeta")
    val, err, M = _hurwitz_regular(np.array([z]), a)
    return EvalResult(complex(val[0] + 1 / (z - 1)), float(err[0]), M + EM_CORRECTIONS + 2)


def riemann_zeta(s, *, enforce_window: bool = True) -> EvalResult:
    """Riemann zeta by Euler-Maclaurin summation.

    ``enforce_window=False`` allows evaluation outside the certified window
    (used for functional-equation cross-checks); accuracy there is relative
    rather than absolute.
    """
    z = as_complex(s)
    if z == 1:
        raise DomainError("zeta has a pole at s = 1")
    if enforce_window:
        _check_window(z)
    val, err, M = _hurwitz_regular(np.array([z]), 1.0)
    return EvalResult(complex(val[0] + 1 / (z - 1)), float(err[0]), M + EM_CORRECTIONS + 2)


def zeta_array(s):
    """Vectorised zeta without window checks (s = 1 gives inf)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    val, _, _ = _hurwitz_regular(s, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return val + 1 / (s - 1)


def zeta_times_s_minus_1(s):
    """(s - 1) zeta(s), entire; equals 1 at s = 1."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    val, _, _ = _hurwitz_regular(s, 1.0)
    return 1 + (s - 1) * val


# ------------------------------------------------------ Dirichlet characters

def _factorize(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _mult_order(g, m):
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _cyclic_components(p, e):
    """Generators and orders of (Z/p^e)^x; returns list of (modulus, gen, order)."""
    pe = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(pe, pe - 1, 2)]
        return [(pe, pe - 1, 2), (pe, 5, 2 ** (e - 2))]
    phi = pe - pe // p
    for g in range(2, pe):
        if math.gcd(g, p) == 1 and _mult_order(g, pe) == phi:
            return [(pe, g, phi)]
    raise AssertionError("no primitive root found")  # unreachable for odd prime powers


def _root_of_unity(m, n):
    fr = Fraction(m % n, n)
    exact = {Fraction(0): 1 + 0j, Fraction(1, 2): -1 + 0j,
             Fraction(1, 4): 1j, Fraction(3, 4): -1j}
    if fr in exact:
        return exact[fr]
    return cmath.exp(2j * math.pi * fr.numerator / fr.denominator)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A Dirichlet character mod ``modulus``.

    ``values[a]`` is chi(a) for a = 0..q-1.  ``log_table[a]`` holds the
    exponent m with chi(a) = exp(2 pi i m / root_order), or -1 at non-units,
    so group-theoretic identities can be checked in exact integer arithmetic.
    """

    modulus: int
    values: np.ndarray = field(repr=False)
    index: int
    exponents: tuple
    log_table: tuple = field(repr=False)
    root_order: int = 1

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def __eq__(self, other):
        return (isinstance(other, DirichletCharacter) and other.modulus == self.modulus
                and other.exponents == self.exponents)

    def __hash__(self):
        return hash((self.modulus, self.exponents))


@lru_cache(maxsize=64)
def character_table(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) characters mod q, lexicographic in the exponent vectors of
    the cyclic decomposition (components ordered by prime; at 2^e, <-1> then <5>)."""
    if not (1 <= q <= 1000):
        raise DomainError(f"modulus {q} outside 1..1000")
    comps = []
    for p, e in _factorize(q):
        comps.extend(_cyclic_components(p, e))
    orders = [c[2] for c in comps]
    N = math.lcm(*orders) if orders else 1
    # discrete logs of every residue in each component
    dlogs = []
    for mod, g, order in comps:
        table = {}
        x = 1
        for k in range(order):
            table[x] = k
            x = x * g % mod
        if mod % 2 == 0 and mod >= 8:
            # (Z/2^e)^x = <-1> x <5>: split a = (-1)^i 5^j
            five = {}
            x = 1
            for k in range(mod // 4):
                five[x] = k
                x = x * 5 % mod
            table = five
        dlogs.append(table)
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    unit_exps = {}
    for a in units:
        vec = []
        for ci, (mod, g, order) in enumerate(comps):
            r = a % mod
            if mod % 2 == 0 and mod >= 8:
                if g == mod - 1:
                    vec.append(0 if r % 4 == 1 else 1)
                else:
                    vec.append(dlogs[ci][r if r % 4 == 1 else (-r) % mod])
            else:
                vec.append(dlogs[ci][r])
        unit_exps[a] = vec
    chars = []
    for idx, jvec in enumerate(itertools.product(*[range(n) for n in orders])):
        logs = []
        vals = np.zeros(q, dtype=complex)
        for a in range(q):
            if a in unit_exps:
                m = sum(j * e * (N // n) for j, e, n in zip(jvec, unit_exps[a], orders)) % N
                logs.append(m)
                vals[a] = _root_of_unity(m, N)
            else:
                logs.append(-1)
        vals.flags.writeable = False
        chars.append(DirichletCharacter(q, vals, idx, tuple(jvec), tuple(logs), N))
    return tuple(chars)


def dirichlet_L(chi: DirichletCharacter, s, *, enforce_window: bool = True) -> EvalResult:
    """L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q), continued to the window."""
    z = as_complex(s)
    if enforce_window:
        _check_window(z, "dirichlet_L")
    q = chi.modulus
    weight_total = complex(sum(chi.values))
    if z == 1 and abs(weight_total) > 0.5:
        raise DomainError("principal L-function has a pole at s = 1")
    parts = []
    errs = []
    terms = 0
    for a in range(1, q + 1):
        c = chi(a)
        if c == 0:
            continue
        val, err, M = _hurwitz_regular(np.array([z]), a / q)
        parts.append(c * val[0])
        errs.append(err[0])
        terms += M + EM_CORRECTIONS + 2
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if abs(weight_total) > 0.5:
        total += weight_total / (z - 1)
    scale = cmath.exp(-z * math.log(q))
    return EvalResult(scale * total, abs(scale) * math.fsum(errs), terms)


def dirichlet_L_array(chi: DirichletCharacter, s):
    """Vectorised L(s, chi) without window checks."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    q = chi.modulus
    total = np.zeros(s.shape, dtype=complex)
    M = _em_length(float(np.max(np.abs(s.imag))) if s.size else 0.0)
    for a in range(1, q + 1):
        c = chi(a)
        if c == 0:
            continue
        val, _, _ = _hurwitz_regular(s, a / q, M)
        total = total + c * val
    w = complex(sum(chi.values))
    if abs(w) > 0.5:
        with np.errstate(divide="ignore", invalid="ignore"):
            total = total + w / (s - 1)
    return np.exp(-s * math.log(q)) * total


def functional_equation_factor(s):
    """chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s), so zeta(s) = chi(s) zeta(1 - s)."""
    z = np.atleast_1d(np.asarray(s, dtype=complex)).astype(np.clongdouble)
    lg, _ = _log_gamma_ld(1 - z)
    logchi = z * LOG2_LD + (z - 1) * LOGPI_LD + _log_sin_pi(z / 2) + lg
    out = np.exp(logchi).astype(complex)
    return out if np.ndim(s) else complex(out[0])


def hardy_theta(t):
    """Riemann-Siegel theta: arg Gamma(1/4 + it/2) - (t/2) log pi (continuous)."""
    t = np.asarray(t, dtype=float)
    lg, _ = log_gamma_array(0.25 + 0.5j * t)
    return lg.imag - 0.5 * t * math.log(math.pi)


def hardy_Z(t):
    """Real-valued Z(t) = exp(i theta(t)) zeta(1/2 + it)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return (np.exp(1j * hardy_theta(t)) * zeta_array(0.5 + 1j * t)).real
