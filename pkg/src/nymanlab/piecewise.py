"""Exact piecewise power-log functions on (0, inf).

On each interval [b_i, b_{i+1}) the function is a finite sum of terms
u**p * (log u)**j.  The class is closed under addition, the dilations
U(lam), the inversion I, the operator V and the multiplicative A-kernel,
and every inner product or Mellin transform reduces to the elementary
integral  int u**c (log u)**k du.  Breakpoints 0 and inf are allowed so
that power-law tails live in the same structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _clean(terms):
    out = {}
    for p, c in terms.items():
        c = np.trim_zeros(np.asarray(c), "b")
        if c.size and np.any(c != 0):
            out[float(p)] = c
    return out


def _add_terms(t1, t2, scale=1.0):
    out = {p: np.array(c, copy=True) for p, c in t1.items()}
    for p, c in t2.items():
        c = scale * np.asarray(c)
        if p in out:
            a = out[p]
            n = max(len(a), len(c))
            out[p] = np.pad(a, (0, n - len(a))) + np.pad(c, (0, n - len(c)))
        else:
            out[p] = c
    return out


def _mul_terms(t1, t2):
    out = {}
    for p, a in t1.items():
        for r, b in t2.items():
            out = _add_terms(out, {p + r: np.convolve(a, b)})
    return out


def log_power_integral(c, k, a, b):
    """int_a^b u**c (log u)**k du for 0 <= a < b <= inf (c may be complex)."""
    lam = c + 1
    if a == b:
        return 0.0
    xa = -math.inf if a == 0 else math.log(a)
    xb = math.inf if b == math.inf else math.log(b)
    if lam == 0:
        if not (math.isfinite(xa) and math.isfinite(xb)):
            raise DomainError(f"divergent integral of u^{c} (log u)^{k} on ({a}, {b})")
        return (xb ** (k + 1) - xa ** (k + 1)) / (k + 1)
    if a == 0 and not np.real(lam) > 0:
        raise DomainError(f"divergent integral of u^{c} (log u)^{k} at 0")
    if b == math.inf and not np.real(lam) < 0:
        raise DomainError(f"divergent integral of u^{c} (log u)^{k} at infinity")
    xmax = max(abs(x) for x in (xa, xb) if math.isfinite(x)) if (
        math.isfinite(xa) or math.isfinite(xb)) else 0.0
    if math.isfinite(xa) and math.isfinite(xb) and abs(lam) * max(xmax, 1.0) < 1e-3:
        # series in lam avoids cancellation among the 1/lam**i terms
        total = 0.0
        term_fact = 1.0
        for m in range(40):
            total += term_fact * (xb ** (k + m + 1) - xa ** (k + m + 1)) / (k + m + 1)
            term_fact *= lam / (m + 1)
        return total
    return _antiderivative(lam, k, xb) - _antiderivative(lam, k, xa)


def _antiderivative(lam, k, x):
    """Antiderivative of e^{lam x} x^k evaluated at x (limits at +-inf are 0)."""
    if not math.isfinite(x):
        return 0.0
    acc = 0.0
    fact = 1.0
    for i in range(k + 1):
        acc += (-1) ** i * fact * x ** (k - i) / lam ** (i + 1)
        fact *= k - i
    return np.exp(lam * x) * acc


def _antiderivative_terms(p, j):
    """Terms of an antiderivative of t**(p-1) (log t)**j as {power: coeffs}."""
    if p == 0:
        coeffs = np.zeros(j + 2)
        coeffs[j + 1] = 1.0 / (j + 1)
        return {0.0: coeffs}
    coeffs = np.zeros(j + 1)
    fact = 1.0
    for i in range(j + 1):
        coeffs[j - i] = (-1) ** i * fact / p ** (i + 1)
        fact *= j - i
    return {float(p): coeffs}


def _eval_terms(terms, u):
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape, dtype=complex if any(np.iscomplexobj(c) for c in terms.values())
                   else float)
    if not terms:
        return out
    lu = np.log(u)
    for p, c in terms.items():
        out = out + u ** p * np.polynomial.polynomial.polyval(lu, c)
    return out


@dataclass(frozen=True, eq=False)
class PiecewiseLogPoly:
    """``pieces[i]`` maps power p to coefficients of (log u)**j on
    [breakpoints[i], breakpoints[i+1]); zero outside the breakpoint range."""

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        b = self.breakpoints
        if len(self.pieces) != max(len(b) - 1, 0):
            raise ValueError("need one piece per interval")
        if any(not (x < y) for x, y in zip(b[:-1], b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if b and (b[0] < 0 or math.isnan(b[-1])):
            raise ValueError("breakpoints must lie in [0, inf]")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls((), ())

    @classmethod
    def step(cls, breakpoints, values):
        bp = tuple(float(x) for x in breakpoints)
        return cls(bp, tuple(_clean({0.0: [v]}) for v in values))

    @classmethod
    def indicator(cls, a, b, value=1.0):
        return cls.step((a, b), (value,))

    @classmethod
    def power(cls, p, a=0.0, b=math.inf, coeff=1.0, log_coeffs=None):
        coeffs = [coeff] if log_coeffs is None else list(log_coeffs)
        return cls((float(a), float(b)), (_clean({float(p): coeffs}),))

    # -- introspection ------------------------------------------------------
    @property
    def left_tail(self):
        """Terms on (0, u_0) when the first breakpoint is 0, else None."""
        if self.breakpoints and self.breakpoints[0] == 0:
            return self.pieces[0]
        return None

    @property
    def right_tail(self):
        if self.breakpoints and self.breakpoints[-1] == math.inf:
            return self.pieces[-1]
        return None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        out = np.zeros(u.shape, dtype=float)
        if self.breakpoints:
            idx = np.searchsorted(np.asarray(self.breakpoints), u, side="right") - 1
            for i, terms in enumerate(self.pieces):
                mask = idx == i
                if np.any(mask) and terms:
                    vals = _eval_terms(terms, u[mask])
                    if np.iscomplexobj(vals):
                        out = out.astype(complex)
                    out[mask] = vals
        return out[0] if scalar else out

    # -- algebra ------------------------------------------------------------
    def refine(self, points):
        """Same function on breakpoints ∪ points (points outside the support add zero pieces)."""
        new = sorted(set(self.breakpoints) | {float(p) for p in points})
        pieces = []
        old = self.breakpoints
        for lo, hi in zip(new[:-1], new[1:]):
            terms = {}
            for i in range(len(old) - 1):
                if old[i] <= lo and hi <= old[i + 1]:
                    terms = self.pieces[i]
                    break
            pieces.append(terms)
        return PiecewiseLogPoly(tuple(new), tuple(pieces))

    def _combine(self, other, scale):
        pts = set(self.breakpoints) | set(other.breakpoints)
        f, g = self.refine(pts), other.refine(pts)
        pieces = tuple(_clean(_add_terms(a, b, scale)) for a, b in zip(f.pieces, g.pieces))
        return PiecewiseLogPoly(f.breakpoints, pieces).simplify()

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, c):
        if isinstance(c, PiecewiseLogPoly):
            return NotImplemented
        return PiecewiseLogPoly(self.breakpoints,
                                tuple(_clean({p: c * v for p, v in t.items()})
                                      for t in self.pieces)).simplify()

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def simplify(self):
        """Drop empty pieces at both ends and merge equal neighbours."""
        bp = list(self.breakpoints)
        pcs = list(self.pieces)
        while pcs and not pcs[0]:
            pcs.pop(0)
            bp.pop(0)
        while pcs and not pcs[-1]:
            pcs.pop()
            bp.pop()
        if not pcs:
            return PiecewiseLogPoly.zero()
        out_bp = [bp[0]]
        out_pc = [pcs[0]]
        for x, terms in zip(bp[1:-1], pcs[1:]):
            prev = out_pc[-1]
            same = prev.keys() == terms.keys() and all(
                len(prev[p]) == len(terms[p]) and np.all(prev[p] == terms[p]) for p in prev)
            if same:
                continue
            out_bp.append(x)
            out_pc.append(terms)
        out_bp.append(bp[-1])
        return PiecewiseLogPoly(tuple(out_bp), tuple(out_pc))

    # -- operators ----------------------------------------------------------
    def dilate(self, lam):
        """U(lam): f(u) -> lam**-1/2 f(u / lam)."""
        if not lam > 0:
            raise DomainError("dilation parameter must be positive")
        ll = math.log(lam)
        pieces = []
        for terms in self.pieces:
            new = {}
            for p, c in terms.items():
                # (log u - log lam)**j expanded binomially
                shifted = np.zeros(len(c), dtype=np.result_type(c, float))
                for j, cj in enumerate(c):
                    for i in range(j + 1):
                        shifted[i] += cj * math.comb(j, i) * (-ll) ** (j - i)
                new = _add_terms(new, {p: lam ** (-p - 0.5) * shifted})
            pieces.append(_clean(new))
        bp = tuple(lam * b for b in self.breakpoints)
        return PiecewiseLogPoly(bp, tuple(pieces))

    def invert(self):
        """I: f(u) -> f(1/u) / u."""
        bp = tuple(math.inf if b == 0 else (0.0 if b == math.inf else 1.0 / b)
                   for b in reversed(self.breakpoints))
        pieces = []
        for terms in reversed(self.pieces):
            new = {}
            for p, c in terms.items():
                signs = (-1.0) ** np.arange(len(c))
                new[-p - 1.0] = np.asarray(c) * signs
            pieces.append(_clean(new))
        return PiecewiseLogPoly(bp, tuple(pieces))

    def tail_integral_operator(self, weight_power, prefactor_power):
        """g(u) = u**prefactor_power * int_u^inf t**(weight_power) f(t) dt, exactly.

        Used for V (weight -1, prefactor 0) and the multiplicative A-kernel
        (weight -3/2, prefactor 1/2).
        """
        bp = list(self.breakpoints)
        n = len(self.pieces)
        # integral over each whole interval, then suffix sums
        whole = []
        for i, terms in enumerate(self.pieces):
            acc = 0.0
            if bp[i] == 0:
                # only suffix sums of later pieces are ever needed here
                whole.append(acc)
                continue
            for p, c in terms.items():
                for j, cj in enumerate(c):
                    if cj != 0:
                        acc += cj * log_power_integral(p + weight_power, j, bp[i], bp[i + 1])
            whole.append(acc)
        suffix = [0.0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + whole[i]
        pieces = []
        for i, terms in enumerate(self.pieces):
            # int_u^{b} = G(b) - G(u);  G from the antiderivative of t^{p+w} (log t)^j
            G = {}
            const = suffix[i + 1]
            for p, c in terms.items():
                q = p + weight_power + 1.0
                for j, cj in enumerate(c):
                    if cj == 0:
                        continue
                    anti = _antiderivative_terms(q, j)
                    G = _add_terms(G, anti, -cj)
                    if bp[i + 1] == math.inf:
                        if q >= 0:
                            raise DomainError(
                                f"divergent tail integral of t^{p + weight_power} (log t)^{j}")
                    else:
                        const += cj * float(np.real_if_close(
                            _eval_terms(anti, np.array([bp[i + 1]]))[0]))
            G = _add_terms(G, {0.0: [const]})
            pieces.append(_clean({p + prefactor_power: v for p, v in G.items()}))
        if bp and bp[0] > 0 and suffix[0] != 0:
            bp = [0.0] + bp
            pieces = [_clean({prefactor_power: [suffix[0]]})] + pieces
        return PiecewiseLogPoly(tuple(bp), tuple(pieces)).simplify()

    # -- integrals ----------------------------------------------------------
    def inner(self, other):
        """Exact L2(0, inf; du) inner product  int f * conj(g) du."""
        pts = set(self.breakpoints) | set(other.breakpoints)
        f, g = self.refine(pts), other.refine(pts)
        bp = f.breakpoints
        total = []
        for i, (a, b) in enumerate(zip(f.pieces, g.pieces)):
            if not a or not b:
                continue
            gb = {p: np.conj(c) for p, c in b.items()}
            for p, c in _mul_terms(a, gb).items():
                for k, ck in enumerate(c):
                    if ck != 0:
                        total.append(ck * log_power_integral(p, k, bp[i], bp[i + 1]))
        if any(np.iscomplexobj(t) or isinstance(t, complex) for t in total):
            return complex(math.fsum(np.real(total)), math.fsum(np.imag(total)))
        return math.fsum(total)

    def norm2(self):
        return float(np.real(self.inner(self)))

    def mellin(self, s, upper=math.inf):
        """int_0^upper f(u) u**(s-1) du in closed form."""
        s = complex(s)
        f = self.refine([upper]) if 0 < upper < math.inf else self
        bp = f.breakpoints
        re_parts, im_parts = [], []
        for i, terms in enumerate(f.pieces):
            if bp[i] >= upper:
                break
            for p, c in terms.items():
                for j, cj in enumerate(c):
                    if cj != 0:
                        v = cj * log_power_integral(p + s - 1, j, bp[i], bp[i + 1])
                        re_parts.append(v.real)
                        im_parts.append(v.imag)
        return complex(math.fsum(re_parts), math.fsum(im_parts))
