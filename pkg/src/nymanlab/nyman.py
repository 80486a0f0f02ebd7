"""Nyman-Beurling distance: Gram systems of rho_alpha kernels and their least squares.

All inner products are computed in the variable v = 1/u, where
rho_alpha(1/v) = alpha*floor(v) - floor(alpha*v) is a step function with at
most one jump of floor(alpha*v) inside each unit interval [n, n+1).  Every
entry is therefore an exact finite sum over v in [1, X), X = 1/eps, plus the
cutoff bound (1+alpha)(1+beta) eps for the neglected piece (0, eps) in u.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .errors import DomainError, InconsistencyError
from .kernels import DEFAULT_EPS, rho_alpha
from .quadrature import gk_integrate

RIDGE_TRIGGER = 1e12
RIDGE_SCALE = 1e-12


@dataclass(frozen=True)
class StepCombination:
    alphas: tuple
    coeffs: tuple = ()

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise DomainError("need at least one alpha")
        if np.any((a <= 0) | (a >= 1)):
            raise DomainError("every alpha must lie in (0, 1)")
        if np.any(np.diff(a) <= 1e-12):
            raise DomainError("alphas must be strictly increasing and separated by > 1e-12")
        if self.coeffs and len(self.coeffs) != len(self.alphas):
            raise DomainError("coeffs and alphas differ in length")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape)
        for a, c in zip(self.alphas, self.coeffs):
            out += c * rho_alpha(a, u)
        return out


@dataclass
class GramSystem:
    alphas: np.ndarray
    G: np.ndarray
    b: np.ndarray
    entry_error_bound: float
    entry_bounds: np.ndarray = field(repr=False, default=None)
    eps: float = DEFAULT_EPS


@dataclass
class DistanceResult:
    d_squared: float
    coeffs: np.ndarray
    condition_estimate: float
    d_squared_direct: float
    rank: int
    d_squared_ridge: float | None = None
    coeffs_ridge: np.ndarray | None = None
    ridge: float | None = None
    min_eigenvalue: float = 0.0


# ---------------------------------------------------------------------------
# exact piecewise inner products

def _unit_pieces(alphas, X):
    """Column arrays for v in [n, n+1): n, and per alpha the jump position clipped to [n, n+1]."""
    n = np.arange(1, int(X), dtype=float)
    jumps = []
    for a in alphas:
        j = (np.floor(a * n) + 1) / a
        jumps.append(np.clip(j, n, n + 1.0))
    return n, jumps


def _step_value(alpha, mid):
    return alpha * np.floor(mid) - np.floor(alpha * mid)


def _integrate_product(alphas, X):
    """int_1^X prod_i rho_{alpha_i}(1/v) v^-2 dv, alphas of length 0, 1 or 2."""
    n, jumps = _unit_pieces(alphas, X)
    cols = np.sort(np.stack([n] + jumps + [n + 1.0], axis=1), axis=1)
    total = 0.0
    for k in range(cols.shape[1] - 1):
        lo, hi = cols[:, k], cols[:, k + 1]
        mid = 0.5 * (lo + hi)
        val = np.ones_like(mid)
        for a in alphas:
            val = val * _step_value(a, mid)
        total += np.sum(val * (hi - lo) / (lo * hi))
    return float(total)


def inner_product_rho(alpha, beta, eps=DEFAULT_EPS):
    """<rho_alpha, rho_beta> on L2(0, 1): exact on (eps, 1), bounded on (0, eps)."""
    for a in (alpha, beta):
        if not 0 < a < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {a}")
    X = round(1.0 / eps)
    pair = sorted((alpha, beta))
    value = _integrate_product(pair, X)
    return value, (1 + alpha) * (1 + beta) * eps


def inner_one_rho(alpha, eps=DEFAULT_EPS):
    """<1, rho_alpha> on L2(0, 1)."""
    X = round(1.0 / eps)
    return _integrate_product([alpha], X), (1 + alpha) * eps


def inner_product_rho_quadrature(alpha, beta, lower=1e-3, tol=1e-13):
    """Oracle: Gauss-Kronrod in u on (lower, 1), split at every alpha/k, beta/k, 1/k."""
    pts = set()
    for a in (alpha, beta, 1.0):
        k = np.arange(1, int(a / lower) + 1)
        pts.update((a / k).tolist())
    pts = sorted(p for p in pts if lower < p < 1)
    r = gk_integrate(lambda u: rho_alpha(alpha, u) * rho_alpha(beta, u), lower, 1.0,
                     tol=tol, breakpoints=pts)
    return r.value, r.error + (1 + alpha) * (1 + beta) * lower


def gram_assemble(alphas, eps=DEFAULT_EPS, threads=1) -> GramSystem:
    alphas = np.asarray(StepCombination(tuple(float(a) for a in alphas)).alphas)
    N = len(alphas)
    if N > 200:
        raise DomainError("gram_assemble supports N <= 200")
    X = round(1.0 / eps)
    pairs = [(i, j) for i in range(N) for j in range(i, N)]

    def entry(ij):
        i, j = ij
        return _integrate_product([alphas[i], alphas[j]], X)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(entry, pairs))
    else:
        values = [entry(p) for p in pairs]
    G = np.zeros((N, N))
    bounds = np.zeros((N, N))
    for (i, j), v in zip(pairs, values):
        G[i, j] = G[j, i] = v
        bounds[i, j] = bounds[j, i] = (1 + alphas[i]) * (1 + alphas[j]) * eps
    b = np.array([_integrate_product([a], X) for a in alphas])
    return GramSystem(alphas, G, b, float(bounds.max()), bounds, eps)


# ---------------------------------------------------------------------------
# least squares

def _pivoted_cholesky_solve(G, b):
    N = len(b)
    fact, piv, rank, info = lapack.dpstrf(G, lower=0, tol=-1.0)
    if info < 0:
        raise InconsistencyError(f"dpstrf failed with info={info}")
    piv = piv - 1
    R = np.triu(fact)[:rank, :rank]
    bp = b[piv][:rank]
    y = solve_triangular(R.T, bp, lower=True)
    x = solve_triangular(R, y, lower=False)
    c = np.zeros(N)
    c[piv[:rank]] = x
    return c, rank


def nb_distance(system: GramSystem) -> DistanceResult:
    """Minimise ||1 - sum c_k rho_k||^2 from the normal equations G c = b."""
    G = 0.5 * (system.G + system.G.T)
    b = system.b
    N = len(b)
    eig = np.linalg.eigvalsh(G)
    if eig[0] < -N * system.entry_error_bound:
        raise InconsistencyError(
            f"Gram matrix has eigenvalue {eig[0]:.3e} below -N*entry_error_bound")
    cond = float(eig[-1] / eig[0]) if eig[0] > 0 else math.inf
    c, rank = _pivoted_cholesky_solve(G, b)
    d2 = 1.0 - float(b @ c)
    d2_direct = 1.0 - 2.0 * float(c @ b) + float(c @ G @ c)
    res = DistanceResult(d2, c, cond, d2_direct, rank, min_eigenvalue=float(eig[0]))
    if cond > RIDGE_TRIGGER:
        lam = RIDGE_SCALE * np.trace(G) / N
        cr = np.linalg.solve(G + lam * np.eye(N), b)
        res.ridge = float(lam)
        res.coeffs_ridge = cr
        res.d_squared_ridge = 1.0 - 2.0 * float(cr @ b) + float(cr @ G @ cr)
    return res


def reciprocal_grid(N):
    return np.sort(1.0 / np.arange(2, N + 2))


def uniform_grid(N):
    return np.arange(1, N + 1) / (N + 1)


def distance_curve(N_values, grid_rule="reciprocal", custom=None, eps=DEFAULT_EPS, threads=1):
    """Rows (N, d_squared, d_squared_ridge, condition_estimate, entry_error_bound)."""
    if max(N_values) > 200:
        raise DomainError("distance_curve supports N <= 200")
    rows = []
    for N in N_values:
        if grid_rule == "reciprocal":
            alphas = reciprocal_grid(N)
        elif grid_rule == "uniform":
            alphas = uniform_grid(N)
        elif grid_rule == "custom":
            alphas = np.sort(np.asarray(custom, dtype=float))[:N]
        else:
            raise DomainError(f"unknown grid rule {grid_rule!r}")
        system = gram_assemble(alphas, eps=eps, threads=threads)
        r = nb_distance(system)
        rows.append({
            "N": int(N),
            "d_squared": r.d_squared,
            "d_squared_ridge": r.d_squared_ridge,
            "condition_estimate": r.condition_estimate,
            "entry_error_bound": system.entry_error_bound,
        })
    return rows
