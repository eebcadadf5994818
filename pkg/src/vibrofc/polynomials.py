"""Orthogonal polynomial evaluators used by the Franck-Condon machinery.

All evaluators run the standard three-term recurrences directly, which keeps
them stable for the index ranges this package needs (tens of quanta) and
makes the multidimensional Hermite family available for complex symmetric
matrix parameters, where no library routine applies.

Conventions:
  * hermite_1d is the physicists' polynomial, H_{n+1} = 2x H_n - 2n H_{n-1}.
  * legendre_assoc includes the Condon-Shortley phase (-1)^m.
  * hermite_multidim follows the generating function
        exp(-t'Rt/2 + t'Ry) = sum_v (prod_k t_k^{v_k}/v_k!) H_v(y),
    so the 1x1 parameter R=[2] reduces exactly to hermite_1d.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "hermite_1d",
    "laguerre_assoc",
    "legendre_assoc",
    "as_multi_index",
    "HermiteMatrixParam",
    "hermite_multidim",
]


def hermite_1d(n, x):
    """Physicists' Hermite polynomial H_n(x); x may be complex or an array."""
    if n < 0 or n != int(n):
        raise DomainError(f"hermite_1d: order must be a nonnegative integer, got {n}")
    n = int(n)
    x = np.asarray(x)
    h_prev = np.zeros_like(x, dtype=x.dtype if np.iscomplexobj(x) else float)
    h = np.ones_like(h_prev)
    for k in range(n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.shape else h[()]


def laguerre_assoc(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence."""
    if n < 0 or n != int(n):
        raise DomainError(f"laguerre_assoc: order must be a nonnegative integer, got {n}")
    n = int(n)
    x = np.asarray(x, dtype=float)
    l_prev = np.zeros_like(x)
    l = np.ones_like(x)
    for k in range(n):
        l, l_prev = ((2 * k + 1 + alpha - x) * l - (k + alpha) * l_prev) / (k + 1), l
    return l if l.shape else l[()]


def legendre_assoc(l, m, x):
    """Associated Legendre P_l^m(x) for |x| <= 1, Condon-Shortley phase included."""
    if l < 0 or m < 0 or l != int(l) or m != int(m):
        raise DomainError(f"legendre_assoc: need integer l >= 0, m >= 0, got l={l}, m={m}")
    l, m = int(l), int(m)
    if m > l:
        raise DomainError(f"legendre_assoc: m={m} exceeds l={l}")
    x = float(x)
    if abs(x) > 1.0:
        raise DomainError(f"legendre_assoc: |x|={abs(x)} > 1")
    # seed P_m^m, then climb in degree
    pmm = 1.0
    if m > 0:
        s = np.sqrt((1.0 - x) * (1.0 + x))
        dfact = 1.0
        for k in range(1, 2 * m, 2):
            dfact *= k
        pmm = (-1.0) ** m * dfact * s**m
    if l == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for deg in range(m + 2, l + 1):
        pmm, pm1 = pm1, ((2 * deg - 1) * x * pm1 - (deg + m - 1) * pmm) / (deg - m)
    return pm1


def as_multi_index(v, dim=None):
    """Validate and normalize a multi-index to a tuple of nonnegative ints."""
    try:
        out = tuple(int(c) for c in v)
    except TypeError as exc:
        raise DomainError(f"multi-index must be a sequence of integers, got {v!r}") from exc
    if any(int(c) != c or c < 0 for c in v):
        raise DomainError(f"multi-index entries must be nonnegative integers, got {tuple(v)}")
    if dim is not None and len(out) != dim:
        raise DimensionError(f"multi-index length {len(out)} != expected dimension {dim}")
    return out


@dataclass(frozen=True)
class HermiteMatrixParam:
    """Complex symmetric matrix R and evaluation point y for hermite_multidim."""

    r_mat: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        r = np.atleast_2d(np.asarray(self.r_mat, dtype=complex))
        y = np.atleast_1d(np.asarray(self.y, dtype=complex))
        if r.shape[0] != r.shape[1]:
            raise DimensionError(f"R must be square, got shape {r.shape}")
        if y.shape != (r.shape[0],):
            raise DimensionError(f"y length {y.shape} incompatible with R shape {r.shape}")
        if not np.allclose(r, r.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(r).max())):
            raise DomainError("R must be symmetric")
        object.__setattr__(self, "r_mat", r)
        object.__setattr__(self, "y", y)

    @property
    def dim(self):
        return self.r_mat.shape[0]


_GH_CACHE = {}


def _gauss_hermite_compensated(n):
    """Gauss-Hermite nodes u and compensated weights w exp(u^2).

    numpy's hermgauss weights underflow to zero (and past ~400 nodes turn
    NaN outright) because the raw w carry the exp(-u^2) decay. The
    compensated product is O(1) at every node and equals
    1 / (n psi_{n-1}(u)^2) with psi the orthonormal Hermite function, so
    build the nodes from the Jacobi matrix and the weights from that
    recurrence. Cached per order; callers must not mutate the arrays.
    """
    if n in _GH_CACHE:
        return _GH_CACHE[n]
    if n < 1:
        raise DomainError(f"quadrature order must be positive, got {n}")
    off = np.sqrt(np.arange(1, n) / 2.0)
    u = np.linalg.eigvalsh(np.diag(off, 1) + np.diag(off, -1))
    psi_prev = np.zeros_like(u)
    psi = np.pi**-0.25 * np.exp(-0.5 * u * u)
    for k in range(1, n):
        psi, psi_prev = u * np.sqrt(2.0 / k) * psi - np.sqrt((k - 1.0) / k) * psi_prev, psi
    lw = 1.0 / (n * psi * psi)
    _GH_CACHE[n] = (u, lw)
    return u, lw


def _hermite_descend(r_mat, w, v, memo, pivot="first"):
    """Evaluate H_v from the descent recurrence.

    w = R y is passed precomputed so callers holding the linear form exactly
    (rather than y itself) keep full precision. memo maps sub-index tuples to
    values and is written once per key, so one dict may be shared across many
    indices for the same (R, y).
    """
    stack = [v]
    while stack:
        vv = stack.pop()
        if vv in memo:
            continue
        if not any(vv):
            memo[vv] = 1.0 + 0.0j
            continue
        if pivot == "first":
            k = next(i for i, c in enumerate(vv) if c > 0)
        else:
            k = max(i for i, c in enumerate(vv) if c > 0)
        u = list(vv)
        u[k] -= 1
        u = tuple(u)
        needed = [u]
        for j in range(len(vv)):
            if j != k and u[j] > 0:
                uj = list(u)
                uj[j] -= 1
                needed.append(tuple(uj))
        if u[k] > 0:
            uk = list(u)
            uk[k] -= 1
            needed.append(tuple(uk))
        missing = [q for q in needed if q not in memo]
        if missing:
            stack.append(vv)
            stack.extend(missing)
            continue
        val = w[k] * memo[u]
        for j in range(len(vv)):
            if j != k and u[j] > 0:
                uj = list(u)
                uj[j] -= 1
                val -= r_mat[k, j] * u[j] * memo[tuple(uj)]
        if u[k] > 0:
            uk = list(u)
            uk[k] -= 1
            val -= r_mat[k, k] * u[k] * memo[tuple(uk)]
        memo[vv] = val
    return memo[v]


def hermite_multidim(param, v, _memo=None, _pivot="first"):
    """Multidimensional Hermite polynomial H_v^{R}(y).

    Parameters
    ----------
    param : HermiteMatrixParam
    v : sequence of nonnegative ints, one order per dimension
    """
    if not isinstance(param, HermiteMatrixParam):
        param = HermiteMatrixParam(*param)
    v = as_multi_index(v, dim=param.dim)
    memo = {} if _memo is None else _memo
    w = param.r_mat @ param.y
    return _hermite_descend(param.r_mat, w, v, memo, pivot=_pivot)
