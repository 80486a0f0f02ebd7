"""Blaschke products, Poisson and Jensen machinery, the BSY integral,
argument-principle zero counts and scattering multipliers.

Half-plane objects live on Re(s) > 1/2 with boundary Re(s) = 1/2; disc
objects live on |z| < 1.  Every verdict here is exact with respect to the
zero set it is handed and only window-relative with respect to an actual
L-function; reports always carry the region they cover.

Assumption carried into every causality report: the inner factor
lambda^(s - 1/2) of the multiplier is taken to be absent (lambda = 1).
Numerically lambda = 1 - 1e-15 cannot be told apart from 1.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .analytic import (SIGMA_MAX, SIGMA_MIN, T_MAX, DirichletCharacter, dirichlet_L_array,
                       hardy_theta, zeta_array)
from .errors import (BoundaryZeroError, DomainError, IncompleteTableError, InconclusiveError)
from .quadrature import gk_integrate

POLE_TOL = 1e-12
ASSUMPTIONS = ("no singular inner factor", "dilation inner factor lambda^(s-1/2) absent (lambda = 1)")
WITNESS_TOL = 1e-6
DIP_LEVEL = -30.0


# ---------------------------------------------------------------------------
# zero sets and Blaschke products

@dataclass(frozen=True)
class BadZeroSet:
    zeros: tuple = ()
    mode: str = "halfplane"
    q: float | None = None

    def __post_init__(self):
        if self.mode not in ("halfplane", "disc"):
            raise DomainError(f"unknown mode {self.mode!r}")
        zs = tuple(complex(z) for z in self.zeros)
        for z in zs:
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise DomainError("zeros must be finite")
            if self.mode == "halfplane" and not z.real > 0.5 + 1e-12:
                raise DomainError(f"half-plane zero {z} needs Re > 1/2")
            if self.mode == "disc" and not abs(z) < 1 - 1e-12:
                raise DomainError(f"disc zero {z} needs |z| < 1")
        object.__setattr__(self, "zeros", zs)

    @classmethod
    def empty(cls, mode="halfplane", q=None):
        return cls((), mode, q)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)


def _halfplane_factor(rho, s):
    pole = 1 - np.conj(rho)
    if np.any(np.abs(s - pole) < POLE_TOL):
        raise DomainError(f"evaluation point within {POLE_TOL} of the reflected pole {pole}")
    if rho == 1:
        # the s = 1 factor is kept unnormalised: (s - 1)/s
        return (s - 1) / s
    norm = (1 - np.conj(rho)) / rho * abs(rho) / abs(1 - rho)
    return (s - rho) / (s - pole) * norm


def _disc_factor(z0, z):
    if z0 == 0:
        return z
    pole = 1 / np.conj(z0)
    if np.any(np.abs(z - pole) < POLE_TOL):
        raise DomainError(f"evaluation point within {POLE_TOL} of the reflected pole {pole}")
    return abs(z0) / z0 * (z0 - z) / (1 - np.conj(z0) * z)


def blaschke_eval(zeros: BadZeroSet, s):
    """Finite Blaschke product at s (half-plane) or z (disc); arrays allowed."""
    s_arr = np.asarray(s, dtype=complex)
    out = np.ones(s_arr.shape, dtype=complex)
    factor = _halfplane_factor if zeros.mode == "halfplane" else _disc_factor
    for rho in zeros:
        out = out * factor(rho, s_arr)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Poisson extension of boundary log-modulus

@dataclass(frozen=True)
class GrowthModel:
    """Beyond |t| = T: h(t) = c1 + c2 log|t| + r(t) with |r(t)| <= R |t|**power."""

    c1: float = 0.0
    c2: float = 0.0
    R: float = 0.0
    power: float = -2.0
    heuristic: bool = False

    def __post_init__(self):
        if self.power >= 1:
            raise DomainError("declared remainder growth |t|^p with p >= 1 is not Poisson-integrable")


def _poisson_kernel(s, t):
    w = s.real - 0.5
    return (2 * w) / (w * w + (t - s.imag) ** 2) / (2 * math.pi)


def poisson_log_modulus(h, s, T=1e4, growth=GrowthModel(), breakpoints=(), tol=1e-10,
                        log_points=()):
    """Harmonic extension of boundary data h(t) = log|F(1/2 + it)| to s.

    Returns (value, tail_bound).  The part |t| > T is integrated analytically
    for the declared model c1 + c2 log|t|; the remainder r is bounded.
    ``log_points`` lists ordinates g where h behaves like log|t - g| (simple
    zeros on the line); on the pieces next to each g that singularity is
    subtracted and integrated in closed form.
    """
    s = complex(s)
    if not s.real > 0.5:
        raise DomainError("Poisson extension needs Re(s) > 1/2")
    if T <= 2 * abs(s.imag) or T <= 1:
        raise DomainError("truncation T must exceed 2|Im s| and 1")
    w = s.real - 0.5
    g = np.unique(np.asarray([p for p in log_points if -T < p < T], dtype=float))
    pts = {s.imag + sign * w * k for k in (0, 1, 3, 10, 30, 100, 300) for sign in (-1, 1)}
    pts |= set(breakpoints) | set(g.tolist())
    pts = sorted(p for p in pts if -T < p < T)
    splits = np.concatenate([[-T], g, [T]])
    kg = _poisson_kernel(s, g)

    def integrand(t):
        val = h(t) * _poisson_kernel(s, t)
        if not len(g):
            return val
        idx = np.searchsorted(splits, t)
        for j in (idx - 1, idx):
            inner = (j >= 1) & (j <= len(g))
            k = np.clip(j - 1, 0, len(g) - 1)
            d = np.maximum(np.abs(t - g[k]), 1e-300)
            val = val - np.where(inner, kg[k] * np.log(d), 0.0)
        return val

    main = gk_integrate(integrand, -T, T, tol=tol, breakpoints=pts, initial=4,
                        min_width=1e-9 if len(g) else 0.0)
    closed = 0.0
    for i, (a, b) in enumerate(zip(splits[:-1], splits[1:])):
        if i >= 1:
            closed += kg[i - 1] * _log_segment_integral(a, b, g[i - 1])
        if i < len(g):
            closed += kg[i] * _log_segment_integral(a, b, g[i])

    # t = +-T/x, x in (0, 1]
    def tail_integrand(x):
        t = T / x
        jac = T / (x * x)
        model = growth.c1 + growth.c2 * np.log(t)
        return model * (_poisson_kernel(s, t) + _poisson_kernel(s, -t)) * jac

    tail = gk_integrate(tail_integrand, 0.0, 1.0, tol=tol * 0.1,
                        breakpoints=[10.0 ** -k for k in range(1, 12)])
    bound = main.error + tail.error
    if growth.R:
        # for t > T >= 2|tau| the kernel is at most 4*(2w)/(2 pi t^2)
        bound += growth.R * 2 * 4 * (2 * w) / (2 * math.pi) * T ** (growth.power - 1) / (
            1 - growth.power)
    return float(main.value + closed + tail.value), float(bound)


@dataclass
class JensenResult:
    residual: float
    log_F: float
    log_B: float
    poisson: float
    tail_bound: float


def jensen_check(F, zeros: BadZeroSet, s0, T=1e4, growth=GrowthModel(), breakpoints=(),
                 tol=1e-10, full=False, log_points=()):
    """log|F(s0)| - log|B(s0)| - P[log|F| on the line](s0); ~0 for a complete zero set.

    ``F`` must accept numpy complex arrays.
    """
    s0 = complex(s0)
    logF = math.log(abs(complex(np.atleast_1d(F(np.array([s0])))[0])))
    logB = math.log(abs(blaschke_eval(zeros, s0)))

    def h(t):
        return np.log(np.abs(F(0.5 + 1j * t)))

    pv, tb = poisson_log_modulus(h, s0, T=T, growth=growth, breakpoints=breakpoints, tol=tol,
                                 log_points=log_points)
    res = JensenResult(logF - logB - pv, logF, logB, pv, tb)
    return res if full else res.residual


# ---------------------------------------------------------------------------
# BSY integral

@dataclass
class BSYResult:
    value: float
    tail_bound: float
    quad_error: float
    scheme: str
    ordinates_used: int
    c1: float
    c2: float
    heuristic_tail: bool = True

    def __iter__(self):
        return iter((self.value, self.tail_bound))


def _log_abs_zeta_line(t):
    return np.log(np.abs(zeta_array(0.5 + 1j * np.asarray(t, dtype=float))))


@lru_cache(maxsize=4)
def calibrate_tail_constants(t0=500.0, t1=1000.0, window=25.0, per_unit=6):
    """Heuristic c1, c2 with mean |log|zeta(1/2+it)|| <= c1 + c2 log t on [t0, t1].

    Window means are fitted by least squares in log t, then c1 is raised so
    the line dominates every window mean.
    """
    edges = np.arange(t0, t1 + 1e-9, window)
    x, wts = np.polynomial.legendre.leggauss(per_unit * int(window))
    centers, means = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        t = 0.5 * (a + b) + 0.5 * (b - a) * x
        v = np.abs(_log_abs_zeta_line(t))
        means.append(0.5 * float(wts @ v))
        centers.append(0.5 * (a + b))
    lt = np.log(centers)
    c2, c1 = np.polyfit(lt, means, 1)
    c2 = max(c2, 0.0)
    c1 += max(0.0, float(np.max(np.asarray(means) - (c1 + c2 * lt))))
    return float(c1), float(c2)


def bsy_tail_bound(T, c1, c2):
    """(2/pi) int_T^inf (c1 + c2 log t)/t^2 dt."""
    return 2 / math.pi * (c1 + c2 * (math.log(T) + 1)) / T


def _validate_ordinates(ordinates):
    g = np.asarray(ordinates, dtype=float)
    if g.size and (np.any(g <= 0) or np.any(np.diff(g) <= 0)):
        raise DomainError("zero ordinates must be positive and strictly ascending")
    return g


def _check_missing(splits, gammas, T, sign=1.0, step=0.05, guard=1e-4):
    """Hardy Z must keep one sign between consecutive declared ordinates."""
    for a, b in zip(splits[:-1], splits[1:]):
        lo = a + guard if a in gammas else a
        hi = b - guard if b in gammas else b
        if hi <= lo:
            continue
        n = max(2, int(math.ceil((hi - lo) / step)) + 1)
        t = np.linspace(lo, hi, n)
        z = zeta_array(0.5 + 1j * sign * t)
        Z = (np.exp(1j * hardy_theta(t)) * (z if sign > 0 else np.conj(z))).real
        flips = np.nonzero(np.sign(Z[:-1]) * np.sign(Z[1:]) < 0)[0]
        if flips.size:
            loc = float(sign * 0.5 * (t[flips[0]] + t[flips[0] + 1]))
            raise IncompleteTableError(
                f"undeclared zero of zeta(1/2+it) near t = {loc:.6f} (table incomplete below T={T})")


def _dip_guard(t, logz, gammas, sign):
    bad = logz < DIP_LEVEL
    if np.any(bad):
        tb = np.abs(t[bad])
        if gammas.size:
            d = np.min(np.abs(tb[:, None] - gammas[None, :]), axis=1)
        else:
            d = np.full(tb.shape, np.inf)
        far = d > 1e-6
        if np.any(far):
            raise IncompleteTableError(
                f"log|zeta| below {DIP_LEVEL} at t = {sign * tb[far][0]:.9f}, away from declared ordinates")


def _log_segment_integral(a, b, g):
    """int_a^b log|t - g| dt."""
    def F(x):
        d = x - g
        return d * math.log(abs(d)) - d if d != 0 else 0.0
    return F(b) - F(a)


def bsy_integral(T, zero_ordinates, *, scheme="subtract", mirror=False, tol=1e-11,
                 constants=None, check_table=True):
    """(1/pi) int_0^T log|zeta(1/2+it)| / (1/4+t^2) dt and a heuristic tail bound.

    ``scheme='subtract'`` removes w(g) log|t-g| at every ordinate g bounding
    the current interval and adds its closed form; ``scheme='graded'`` uses
    Gauss-Legendre on meshes graded geometrically toward each ordinate.
    ``mirror=True`` integrates over [-T, 0] instead, evaluating zeta directly.
    """
    if not 0 < T <= T_MAX:
        raise DomainError(f"T must lie in (0, {T_MAX}]")
    g = _validate_ordinates(zero_ordinates)
    g = g[g < T]
    splits = np.concatenate([[0.0], g, [T]])
    sign = -1.0 if mirror else 1.0
    if check_table:
        _check_missing(splits, set(g.tolist()), T, sign)
    c1, c2 = constants if constants is not None else calibrate_tail_constants()
    weights = 1.0 / (0.25 + g * g)

    def base(t):
        lz = _log_abs_zeta_line(sign * t)
        _dip_guard(sign * t, lz, g, sign)
        return lz / (0.25 + t * t)

    if scheme == "subtract":
        def integrand(t):
            val = base(t)
            if not len(g):
                return val
            # t lies in (splits[idx-1], splits[idx]); splits[j] = g[j-1] for 1 <= j <= len(g)
            idx = np.searchsorted(splits, t)
            for j in (idx - 1, idx):
                inner = (j >= 1) & (j <= len(g))
                k = np.clip(j - 1, 0, len(g) - 1)
                d = np.maximum(np.abs(t - g[k]), 1e-300)
                val = val - np.where(inner, weights[k] * np.log(d), 0.0)
            return val

        # ordinates carry ~1e-13 absolute error, so the subtraction leaves a log spike of
        # that width; pieces below 1e-9 are accepted with their error estimate counted
        r = gk_integrate(integrand, 0.0, T, tol=tol, breakpoints=g.tolist(), initial=2,
                         min_width=1e-9)
        closed = 0.0
        for i, (a, b) in enumerate(zip(splits[:-1], splits[1:])):
            if i >= 1:
                closed += weights[i - 1] * _log_segment_integral(a, b, g[i - 1])
            if i < len(g):
                closed += weights[i] * _log_segment_integral(a, b, g[i])
        value = (r.value + closed) / math.pi
        qerr = r.error / math.pi
    elif scheme == "graded":
        x20, w20 = np.polynomial.legendre.leggauss(20)
        x10, w10 = np.polynomial.legendre.leggauss(10)
        panels = []
        gset = set(g.tolist())
        for a, b in zip(splits[:-1], splits[1:]):
            mid = 0.5 * (a + b)
            pts = {a, b, mid}
            pts.update(np.linspace(a, b, int(math.ceil(b - a)) + 1).tolist())
            for e, d in ((a, 1.0), (b, -1.0)):
                if e in gset:
                    width = 0.5 * (b - a)
                    for k in range(1, 60):
                        width *= 0.15
                        if width < 1e-15 * max(1.0, e):
                            break
                        pts.add(e + d * width)
            p = np.array(sorted(pts))
            panels.append(np.stack([p[:-1], p[1:]], axis=1))
        P = np.concatenate(panels)
        half = 0.5 * (P[:, 1] - P[:, 0])
        mids = 0.5 * (P[:, 1] + P[:, 0])
        f20 = base((mids[:, None] + half[:, None] * x20).ravel()).reshape(-1, 20)
        f10 = base((mids[:, None] + half[:, None] * x10).ravel()).reshape(-1, 10)
        v20 = half * (f20 @ w20)
        v10 = half * (f10 @ w10)
        value = math.fsum(v20) / math.pi
        qerr = float(np.sum(np.abs(v20 - v10))) / math.pi
    else:
        raise DomainError(f"unknown scheme {scheme!r}")
    return BSYResult(float(value), bsy_tail_bound(T, c1, c2), float(qerr), scheme, int(len(g)),
                     c1, c2)


# ---------------------------------------------------------------------------
# argument-principle zero counting

@dataclass(frozen=True)
class Rectangle:
    sigma_min: float
    sigma_max: float
    t_min: float
    t_max: float

    def __post_init__(self):
        if not (self.sigma_min < self.sigma_max and self.t_min < self.t_max):
            raise DomainError("rectangle needs sigma_min < sigma_max and t_min < t_max")

    def corners(self):
        return (complex(self.sigma_min, self.t_min), complex(self.sigma_max, self.t_min),
                complex(self.sigma_max, self.t_max), complex(self.sigma_min, self.t_max))

    def contains(self, s):
        return self.sigma_min < s.real < self.sigma_max and self.t_min < s.imag < self.t_max

    def boundary_distance(self, s):
        """Distance from s to the rectangle boundary."""
        dx = max(self.sigma_min - s.real, 0.0, s.real - self.sigma_max)
        dy = max(self.t_min - s.imag, 0.0, s.imag - self.t_max)
        if dx or dy:
            return math.hypot(dx, dy)
        return min(s.real - self.sigma_min, self.sigma_max - s.real,
                   s.imag - self.t_min, self.t_max - s.imag)

    def as_dict(self):
        return {"sigma_min": self.sigma_min, "sigma_max": self.sigma_max,
                "t_min": self.t_min, "t_max": self.t_max}


@dataclass
class ZeroCount:
    count: int
    pole_adjusted: bool
    winding: float
    evaluations: int
    rectangle: Rectangle


def _L_function(L):
    if L == "zeta":
        return (lambda s: zeta_array(np.array([s]))[0]), True
    if isinstance(L, DirichletCharacter):
        return (lambda s: dirichlet_L_array(L, np.array([s]))[0]), L.is_principal
    raise DomainError(f"unknown L-function {L!r}")


def zero_count_rectangle(L, rect: Rectangle, *, criterion=0.8, min_step=1e-9, max_step=0.25):
    """Zeros of L inside ``rect`` by tracking arg L along the boundary."""
    if not (SIGMA_MIN <= rect.sigma_min and rect.sigma_max <= SIGMA_MAX
            and -T_MAX <= rect.t_min and rect.t_max <= T_MAX):
        raise DomainError("rectangle leaves the supported evaluation window")
    f, has_pole = _L_function(L)
    pole_inside = False
    if has_pole:
        d = rect.boundary_distance(1 + 0j)
        if rect.contains(1 + 0j):
            if d < 0.05:
                raise DomainError("pole at s = 1 lies within 0.05 of the rectangle boundary")
            pole_inside = True
        elif d < 0.05:
            raise DomainError("pole at s = 1 lies within 0.05 of the rectangle boundary")
    corners = rect.corners()
    total = 0.0
    evals = 0
    for p0, p1 in zip(corners, corners[1:] + corners[:1]):
        length = abs(p1 - p0)
        direction = (p1 - p0) / length
        x = 0.0
        v0 = f(p0)
        evals += 1
        h = min(0.05, length)
        while x < length:
            x1 = min(x + h, length)
            s1 = p0 + direction * x1
            v1 = f(s1)
            evals += 1
            if abs(v1 - v0) < criterion * min(abs(v0), abs(v1)):
                total += cmath.phase(v1 / v0)
                x, v0 = x1, v1
                h = min(h * 1.5, max_step)
            else:
                h *= 0.5
                if h < min_step:
                    raise BoundaryZeroError(
                        f"boundary passes within ~{min_step:g} of a zero near {p0 + direction * x}",
                        location=p0 + direction * x)
    winding = total / (2 * math.pi)
    k = round(winding)
    if abs(winding - k) > 1e-3:
        if criterion > 0.1:
            return zero_count_rectangle(L, rect, criterion=criterion / 2, min_step=min_step,
                                        max_step=max_step / 2)
        raise InconclusiveError(f"winding number {winding} is not close to an integer")
    count = k + (1 if pole_inside else 0)
    return ZeroCount(int(count), pole_inside, winding, evals, rect)


def rectangle_grid(region: Rectangle, nx, ny):
    xs = np.linspace(region.sigma_min, region.sigma_max, nx + 1)
    ys = np.linspace(region.t_min, region.t_max, ny + 1)
    return [Rectangle(float(xs[i]), float(xs[i + 1]), float(ys[j]), float(ys[j + 1]))
            for j in range(ny) for i in range(nx)]


# ---------------------------------------------------------------------------
# scattering

def scattering_multiplier(zeros: BadZeroSet, chi_trivial, mode, s_or_z, q=None):
    """S = V^2 B^-2 (half-plane) or z V(1,z)^2 B^-2 (disc, module group q^Z)."""
    s = complex(s_or_z)
    B = blaschke_eval(zeros, s) if len(zeros) else 1.0
    if B == 0:
        return complex(math.inf, 0.0)
    if mode == "halfplane":
        if chi_trivial:
            if s == 0:
                raise DomainError("V(1, s) = (s-1)/s has a pole at s = 0")
            v = (s - 1) / s
        else:
            v = 1.0
        return v * v / (B * B)
    if mode == "disc":
        qq = q if q is not None else zeros.q
        if qq is None:
            raise DomainError("disc mode needs the field size q")
        rq = math.sqrt(qq)
        if s == rq:
            raise DomainError("V(1, z) has a pole at z = sqrt(q)")
        v = (1 - rq * s) / (rq - s) if chi_trivial else 1.0
        return s * v * v / (B * B)
    raise DomainError(f"unknown mode {mode!r}")


@dataclass
class CausalityReport:
    verdict: str
    witness: complex | None
    scanned_region: Rectangle | None
    bad_zero_count: int
    witness_modulus: float | None = None
    rectangles: list = field(default_factory=list)
    notes: str = ""


def _find_witness(zeros: BadZeroSet, chi_trivial, mode, q):
    for z0 in zeros:
        for delta in (1e-2, 1e-3, 1e-4, 1e-6):
            if mode == "halfplane":
                pt = z0 + delta
            else:
                pt = z0 * (1 - delta) if z0 != 0 else complex(delta, 0)
            try:
                S = scattering_multiplier(zeros, chi_trivial, mode, pt, q)
            except DomainError:
                continue
            if abs(S) > 1 + WITNESS_TOL:
                return pt, abs(S)
    return None, None


def causality_verdict(zeros: BadZeroSet, mode=None, scan: Rectangle | None = None,
                      chi_trivial=True, q=None) -> CausalityReport:
    """Causal iff the bad-zero set is empty (S inner); otherwise a witness |S| > 1."""
    mode = mode or zeros.mode
    if not len(zeros):
        return CausalityReport("causal", None, scan, 0,
                               notes="empty bad-zero set: scattering multiplier is inner")
    w, m = _find_witness(zeros, chi_trivial, mode, q)
    if w is None:
        return CausalityReport("inconclusive", None, scan, len(zeros),
                               notes="no sample with |S| > 1 + 1e-6 found near the declared zeros")
    return CausalityReport("violated", w, scan, len(zeros), witness_modulus=m)


def _locate_zero(L, rect, depth=0):
    """Bisect a rectangle with a positive count down to a small box; return its centre."""
    if depth >= 14 or (rect.sigma_max - rect.sigma_min) + (rect.t_max - rect.t_min) < 1e-4:
        return complex(0.5 * (rect.sigma_min + rect.sigma_max), 0.5 * (rect.t_min + rect.t_max))
    if rect.sigma_max - rect.sigma_min > rect.t_max - rect.t_min:
        m = 0.5 * (rect.sigma_min + rect.sigma_max)
        halves = (Rectangle(rect.sigma_min, m, rect.t_min, rect.t_max),
                  Rectangle(m, rect.sigma_max, rect.t_min, rect.t_max))
    else:
        m = 0.5 * (rect.t_min + rect.t_max)
        halves = (Rectangle(rect.sigma_min, rect.sigma_max, rect.t_min, m),
                  Rectangle(rect.sigma_min, rect.sigma_max, m, rect.t_max))
    for h in halves:
        if zero_count_rectangle(L, h).count > 0:
            return _locate_zero(L, h, depth + 1)
    raise InconclusiveError("zero escaped during bisection (it sits on a split line)")


def causality_scan(L, region: Rectangle, nx=1, ny=1, threads=1) -> CausalityReport:
    """Window-relative verdict from argument-principle counts on a grid of rectangles."""
    if region.sigma_min <= 0.5:
        raise DomainError("causality scans look for bad zeros: the region must satisfy Re(s) > 1/2")
    rects = rectangle_grid(region, nx, ny)

    def run(r):
        try:
            return zero_count_rectangle(L, r), None
        except InconclusiveError as exc:
            return None, exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, rects))
    else:
        results = [run(r) for r in rects]
    rows = []
    total = 0
    failed = None
    for r, (zc, exc) in zip(rects, results):
        row = r.as_dict()
        if zc is None:
            row.update(count=None, error=str(exc))
            failed = failed or exc
        else:
            row.update(count=zc.count, winding=zc.winding, evaluations=zc.evaluations)
            total += zc.count
        rows.append(row)
    if failed is not None:
        return CausalityReport("inconclusive", None, region, total, rectangles=rows,
                               notes=f"rectangle scan failed: {failed}")
    if total == 0:
        return CausalityReport("causal", None, region, 0, rectangles=rows,
                               notes="no zeros with Re(s) > 1/2 in the scanned window; "
                                     "the verdict is relative to this window only")
    for r, (zc, _) in zip(rects, results):
        if zc.count > 0:
            rho = _locate_zero(L, r)
            zs = BadZeroSet((rho,))
            w, m = _find_witness(zs, L == "zeta" or getattr(L, "is_principal", False),
                                 "halfplane", None)
            return CausalityReport("violated", w, region, total, witness_modulus=m,
                                   rectangles=rows)
    raise AssertionError("unreachable")
