"""Function-field model over F_q: L-polynomials, the module group q^Z,
the discrete A-kernel and the multipliers V(1,z), A(1,z), Z.

Disc coordinate: z = q^-(s - 1/2) = sqrt(q) * T with T = q^-s, so the RH
circle |T| = q^-1/2 is |z| = 1 and bad zeros sit at |z| < 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DomainError, InconclusiveError, InputFormatError
from .hardy import BadZeroSet, CausalityReport, causality_verdict

CIRCLE_TOL = 1e-8
DK_MAX_ITER = 200


def is_prime_power(q):
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


@dataclass(frozen=True)
class LPolynomial:
    """P(T) = sum coeffs[k] T^k with integer coefficients and P(0) = 1."""

    q: int
    coeffs: tuple
    label: str = "curve"

    def __post_init__(self):
        if not is_prime_power(int(self.q)) or int(self.q) != self.q:
            raise DomainError(f"q = {self.q} is not a prime power")
        c = tuple(int(x) for x in self.coeffs)
        if any(int(x) != x for x in self.coeffs):
            raise DomainError("L-polynomial coefficients must be integers")
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or c[0] != 1:
            raise DomainError("L-polynomial needs P(0) = 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def genus(self):
        return self.degree // 2

    def __call__(self, T):
        return np.polynomial.polynomial.polyval(T, np.asarray(self.coeffs, dtype=float))

    @property
    def norm(self):
        return float(np.linalg.norm(np.asarray(self.coeffs, dtype=float)))


def lpoly_validate(P: LPolynomial) -> LPolynomial:
    """Functional-equation shape and (genus 1) Hasse bound for curve-labelled input."""
    if P.label == "synthetic":
        return P
    if P.label != "curve":
        raise DomainError(f"unknown label {P.label!r} (use 'curve' or 'synthetic')")
    if P.degree % 2:
        raise DomainError(f"curve L-polynomial has odd degree {P.degree}")
    g = P.genus
    c = P.coeffs
    for k in range(g + 1):
        # P(T) = q^g T^2g P(1/(qT)):  c[2g-k] = q^(g-k) c[k]
        if c[2 * g - k] != P.q ** (g - k) * c[k]:
            raise DomainError(
                f"functional-equation shape fails at coefficient {2 * g - k}: "
                f"{c[2 * g - k]} != q^{g - k} * {c[k]}")
    if g == 1:
        a = -c[1]
        if a * a > 4 * P.q:
            raise DomainError(f"coefficient 1: |a| = {abs(a)} exceeds the Hasse bound 2*sqrt({P.q})")
    return P


def ff_zeta_eval(P: LPolynomial, s):
    """Z(s) = P(q^-s) / ((1 - q^-s)(1 - q^(1-s)))."""
    s = complex(s)
    T = P.q ** (-s)
    d1 = 1 - T
    d2 = 1 - P.q * T
    if abs(d1) < 1e-14:
        raise DomainError("pole: the factor 1 - q^-s vanishes")
    if abs(d2) < 1e-14:
        raise DomainError("pole: the factor 1 - q^(1-s) vanishes")
    return complex(P(T) / (d1 * d2))


@dataclass
class FFRoots:
    T: np.ndarray
    z: np.ndarray
    residuals: np.ndarray
    method: str


def _durand_kerner(coeffs_desc, max_iter=DK_MAX_ITER, tol=1e-15):
    a = np.asarray(coeffs_desc, dtype=complex)
    a = a / a[0]
    n = len(a) - 1
    radius = 1 + np.max(np.abs(a[1:]))
    roots = radius * 0.5 * (0.4 + 0.9j) ** np.arange(n)
    for _ in range(max_iter):
        prev = roots.copy()
        for i in range(n):
            num = np.polyval(a, roots[i])
            den = np.prod(roots[i] - np.delete(roots, i))
            if den != 0:
                roots[i] = roots[i] - num / den
        if np.max(np.abs(roots - prev)) <= tol * max(1.0, np.max(np.abs(roots))):
            break
    return roots


def _polish(coeffs_desc, roots, steps=3):
    p = np.asarray(coeffs_desc, dtype=complex)
    dp = np.polyder(p)
    out = roots.copy()
    for _ in range(steps):
        d = np.polyval(dp, out)
        safe = np.abs(d) > 0
        out[safe] = out[safe] - np.polyval(p, out[safe]) / d[safe]
    return out


def ff_roots(P: LPolynomial) -> FFRoots:
    """Roots of P(T) with residual certification, and z = sqrt(q) T."""
    if P.degree < 1:
        empty = np.zeros(0, dtype=complex)
        return FFRoots(empty, empty, np.zeros(0), "none")
    desc = np.asarray(P.coeffs[::-1], dtype=float)
    limit = 1e-10 * P.norm
    method = "durand-kerner"
    roots = _polish(desc, _durand_kerner(desc))
    res = np.abs(P(roots))
    if not np.all(res < limit):
        method = "companion"
        roots = _polish(desc, np.roots(desc).astype(complex))
        res = np.abs(P(roots))
        if not np.all(res < limit):
            raise InconclusiveError(f"root finding did not certify: residuals {res.tolist()}")
    order = np.lexsort((roots.imag, np.abs(roots)))
    roots = roots[order]
    return FFRoots(roots, math.sqrt(P.q) * roots, res[order], method)


@dataclass
class FFRHResult:
    verdict: str
    max_deviation: float
    bad_zeros: BadZeroSet
    roots: FFRoots


def ff_rh_check(P: LPolynomial) -> FFRHResult:
    """on_circle iff every | |z0| - 1 | < 1e-8; interior roots become bad zeros."""
    lpoly_validate(P)
    r = ff_roots(P)
    dev = np.abs(np.abs(r.z) - 1.0)
    maxdev = float(dev.max()) if dev.size else 0.0
    verdict = "on_circle" if maxdev < CIRCLE_TOL else "violated"
    bad = tuple(z for z, d in zip(r.z, dev) if abs(z) < 1 and d >= CIRCLE_TOL)
    return FFRHResult(verdict, maxdev, BadZeroSet(bad, "disc", P.q), r)


def ff_causality(P: LPolynomial) -> CausalityReport:
    rh = ff_rh_check(P)
    return causality_verdict(rh.bad_zeros, mode="disc", q=P.q)


def ff_multiplier_eval(which, q, z):
    """V(1,z) = (1 - sqrt(q) z)/(sqrt(q) - z), A = 1 - V, Z = z."""
    z = complex(z)
    rq = math.sqrt(q)
    if which == "Z":
        return z
    if which not in ("V", "A"):
        raise DomainError(f"unknown multiplier {which!r}")
    if abs(z - rq) < 1e-14:
        raise DomainError("pole at z = sqrt(q)")
    v = (1 - rq * z) / (rq - z)
    return v if which == "V" else 1 - v


def A_closed_form(q, z):
    """(sqrt(q) - 1)(1 + z)/(sqrt(q) - z), the simplified form of 1 - V(1, z)."""
    rq = math.sqrt(q)
    return (rq - 1) * (1 + z) / (rq - z)


# ---------------------------------------------------------------------------
# sequences on the module group

@dataclass(frozen=True)
class DiscreteSequence:
    """Values f(n) for n = start .. start+len-1, then (optionally) a geometric
    tail f(n) = values[-1] * ratio^(n - last) for n > last."""

    start: int
    values: np.ndarray
    tail_ratio: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 1 or v.size == 0:
            raise DomainError("a DiscreteSequence needs at least one value")
        if not abs(self.tail_ratio) < 1:
            raise DomainError("geometric tail ratio must satisfy |r| < 1")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_dict(cls, d):
        lo, hi = min(d), max(d)
        vals = np.zeros(hi - lo + 1, dtype=complex)
        for n, x in d.items():
            vals[n - lo] = x
        return cls(lo, vals)

    @property
    def last(self):
        return self.start + len(self.values) - 1

    def __call__(self, n):
        n = int(n)
        if n < self.start:
            return 0j
        if n <= self.last:
            return complex(self.values[n - self.start])
        if self.tail_ratio == 0:
            return 0j
        return complex(self.values[-1] * self.tail_ratio ** (n - self.last))

    def norm2(self):
        """sum |f(n)|^2 with unit weight per n; the tail is summed in closed form."""
        head = math.fsum(np.abs(self.values) ** 2)
        r2 = abs(self.tail_ratio) ** 2
        return head + abs(self.values[-1]) ** 2 * r2 / (1 - r2)

    def ztransform(self, z):
        """sum f(n) z^n, tail included (needs |ratio * z| < 1)."""
        z = complex(z)
        n = np.arange(self.start, self.last + 1)
        total = complex(np.sum(self.values * z ** n))
        if self.tail_ratio:
            rz = self.tail_ratio * z
            if not abs(rz) < 1:
                raise DomainError("z-transform of the geometric tail diverges")
            total += self.values[-1] * z ** self.last * rz / (1 - rz)
        return total

    def __sub__(self, other):
        if self.tail_ratio and other.tail_ratio and self.tail_ratio != other.tail_ratio:
            raise DomainError("cannot combine different geometric tails")
        ratio = self.tail_ratio or other.tail_ratio
        lo = min(self.start, other.start)
        hi = max(self.last, other.last) + (1 if ratio else 0)
        vals = np.array([self(n) - other(n) for n in range(lo, hi + 1)])
        return DiscreteSequence(lo, vals, ratio)


def ff_kernel(q, m):
    """a(m): 1 - q^-1/2 at m = 0, q^(-m/2)(sqrt(q) - 1/sqrt(q)) for m >= 1, 0 for m < 0."""
    m = np.asarray(m)
    rq = math.sqrt(q)
    out = np.where(m >= 1, rq ** (-m.astype(float)) * (rq - 1 / rq), 0.0)
    return np.where(m == 0, 1 - 1 / rq, out)


def ff_discrete_conv(f: DiscreteSequence, q) -> DiscreteSequence:
    """(A f)(n0) = sum_n a(n0 - n) f(n) for finitely supported f.

    Beyond the last support point every term has n0 - n >= 1, so the output
    continues geometrically with ratio q^-1/2; that tail is kept exactly.
    """
    if f.tail_ratio:
        raise DomainError("ff_discrete_conv expects a finitely supported sequence")
    n = np.arange(f.start, f.last + 1)
    out = np.array([np.sum(ff_kernel(q, n0 - n) * f.values) for n0 in n])
    # one extra point past the support fixes the tail's first term
    n0 = f.last + 1
    extra = np.sum(ff_kernel(q, n0 - n) * f.values)
    return DiscreteSequence(f.start, np.append(out, extra), 1 / math.sqrt(q))


def ff_V(f: DiscreteSequence, q) -> DiscreteSequence:
    return f - ff_discrete_conv(f, q)


# ---------------------------------------------------------------------------
# curve corpus

def genuine_curves(qs=(2, 3, 5, 7)):
    """Every genus-1 L-polynomial 1 - aT + qT^2 with a^2 <= 4q."""
    out = []
    for q in qs:
        amax = int(math.isqrt(4 * q))
        for a in range(-amax, amax + 1):
            out.append(LPolynomial(q, (1, -a, q), "curve"))
    return out


def load_curve_corpus(path=None):
    """Rows of q,label,coefficients (ascending powers of T, separated by spaces)."""
    if path is None:
        text = resources.files("nymanlab.data").joinpath("curve_corpus.csv").read_text()
    else:
        try:
            with open(path, newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputFormatError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or [h.strip() for h in rows[0]] != ["q", "label", "coefficients"]:
        raise InputFormatError("header must be q,label,coefficients", line=1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 3:
            raise InputFormatError(f"expected 3 fields, got {len(row)}", line=lineno)
        try:
            q = int(row[0])
            coeffs = tuple(int(x) for x in row[2].split())
        except ValueError as exc:
            raise InputFormatError(f"non-integer field ({exc})", line=lineno) from exc
        try:
            out.append(lpoly_validate(LPolynomial(q, coeffs, row[1].strip())))
        except DomainError as exc:
            raise InputFormatError(str(exc), line=lineno) from exc
    return out
