"""Brute-force cross-checks: tensor quadrature overlaps, the Gaussian-Hermite
integral identity, and sum rules.

These routines deliberately know nothing about the closed-form machinery.
Overlaps are computed by evaluating both wavefunctions pointwise on a tensor
Gauss-Hermite (or trapezoid) grid whose per-axis width is the geometric mean
of the two Gaussian widths, so any bookkeeping error in the analytic formulas
shows up as a disagreement rather than being reproduced here.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NormalizationWarning
from .polynomials import (
    HermiteMatrixParam,
    _gauss_hermite_compensated,
    _hermite_descend,
    hermite_multidim,
)
from .states import TransformedState

__all__ = [
    "QuadratureSpec",
    "overlap_quadrature",
    "hermite_identity_check",
    "sum_rule",
]

_MAX_DIM = 3


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the brute-force integrators."""

    nodes_per_axis: int = 64
    scaling: float = 1.0
    scheme: str = "gauss_hermite"

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise DomainError("nodes_per_axis must be at least 2")
        if self.scaling <= 0:
            raise DomainError("scaling must be positive")
        if self.scheme not in ("gauss_hermite", "trapezoid"):
            raise DomainError(f"unknown scheme {self.scheme!r}")


def _gaussian_profile(state):
    """Per-axis precision diag and center of a state's Gaussian envelope."""
    if isinstance(state, TransformedState):
        quad = state.exponent_quad
        lin = np.real(state.exponent_lin)
    else:
        quad = state.sigma
        lin = np.real(state.varpi)
    prec = np.diag(quad).astype(float)
    center = np.linalg.solve(quad, lin)
    return prec, center, sum(state.quanta)


def _tensor_nodes(state_a, state_b, spec):
    n = state_a.dim
    prec_a, cen_a, qa = _gaussian_profile(state_a)
    prec_b, cen_b, qb = _gaussian_profile(state_b)
    # geometric mean of the two Gaussian widths per axis
    prec = np.sqrt(prec_a * prec_b)
    center = 0.5 * (cen_a + cen_b)
    alpha = np.sqrt(2.0 / prec) * spec.scaling
    if spec.scheme == "gauss_hermite":
        u, lw = _gauss_hermite_compensated(spec.nodes_per_axis)
        axes = [center[k] + alpha[k] * u for k in range(n)]
        wts = [alpha[k] * lw for k in range(n)]
    else:
        span = (8.0 + 2.0 * max(qa, qb)) * spec.scaling
        axes, wts = [], []
        for k in range(n):
            half = span / np.sqrt(prec[k])
            t = np.linspace(center[k] - half, center[k] + half, spec.nodes_per_axis)
            h = t[1] - t[0]
            wt = np.full(t.shape, h)
            wt[0] *= 0.5
            wt[-1] *= 0.5
            axes.append(t)
            wts.append(wt)
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrid = np.meshgrid(*wts, indexing="ij")
    weight = np.ones(pts.shape[0])
    for g in wgrid:
        weight = weight * g.ravel()
    return pts, weight


def overlap_quadrature(state_a, state_b, spec=None):
    """|<a|b>|^2 by direct tensor quadrature. Dimensions up to 3.

    b may be a transformed state. Warns when either input looks non-normalized.
    """
    spec = spec or QuadratureSpec()
    if state_a.dim != state_b.dim:
        raise DimensionError("states have different dimensions")
    if state_a.dim > _MAX_DIM:
        raise DimensionError(f"quadrature oracle supports dimension <= {_MAX_DIM}")
    pts, weight = _tensor_nodes(state_a, state_b, spec)
    fa = state_a.wavefunction(pts)
    fb = state_b.wavefunction(pts)
    amp = np.sum(weight * np.conj(fa) * fb)
    norm_a = float(np.real(np.sum(weight * np.abs(fa) ** 2)))
    norm_b = float(np.real(np.sum(weight * np.abs(fb) ** 2)))
    for label, nrm in (("first", norm_a), ("second", norm_b)):
        if abs(nrm - 1.0) > 1e-6:
            warnings.warn(
                f"{label} state norm deviates from 1 by {nrm - 1.0:+.3e} on the quadrature grid",
                NormalizationWarning,
                stacklevel=2,
            )
    return float(np.abs(amp) ** 2)


def hermite_identity_check(s_mat, t_mat, lam, gamma, m_mat, c_vec, n_idx, m_idx, spec=None):
    """Residual of the Gaussian integral identity for multidim Hermites.

    Left side: quadrature of H_n^{S}(x) H_m^{T}(Lambda x + gamma)
    exp(-x'Mx + c'x) over R^N. Right side: the closed form
    pi^{N/2}/sqrt(det M) exp(c'M^-1 c/4) H_{(n,m)}^{R}(y) with

        R11 = S - S M^-1 S / 2          z1 = S M^-1 c / 2
        R22 = T - T Lam M^-1 Lam' T / 2 z2 = T Lam M^-1 c / 2 + T gamma
        R21 = -T Lam M^-1 S / 2         z  = (z1, z2) = R y

    The Hermite value is taken straight from the descent recurrence in z, so
    a singular R (which symmetric parameter sets do produce) is fine.
    Returns |lhs - rhs| / max(|rhs|, 1e-30). M must be real positive definite.
    """
    spec = spec or QuadratureSpec(nodes_per_axis=96)
    s_mat = np.atleast_2d(np.asarray(s_mat, dtype=complex))
    t_mat = np.atleast_2d(np.asarray(t_mat, dtype=complex))
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    m_mat = np.atleast_2d(np.asarray(m_mat, dtype=float))
    c_vec = np.atleast_1d(np.asarray(c_vec, dtype=float))
    n = s_mat.shape[0]
    if n > _MAX_DIM:
        raise DimensionError(f"identity check supports dimension <= {_MAX_DIM}")
    evals = np.linalg.eigvalsh(m_mat)
    if np.min(evals) <= 0:
        raise DomainError("M must be positive definite")

    n_idx = tuple(int(k) for k in n_idx)
    m_idx = tuple(int(k) for k in m_idx)

    # left side: rotate to the M eigenframe, center at M^-1 c / 2; the exponent
    # becomes exactly -|u|^2 + const there, so Gauss-Hermite is exact once the
    # node count exceeds the polynomial degree
    minv = np.linalg.inv(m_mat)
    x0 = 0.5 * minv @ c_vec
    w_evals, q = np.linalg.eigh(m_mat)
    u, lw = _gauss_hermite_compensated(spec.nodes_per_axis)
    axes = np.meshgrid(*[u] * n, indexing="ij")
    wgts = np.meshgrid(*[lw] * n, indexing="ij")
    upts = np.stack([g.ravel() for g in axes], axis=-1)
    weight = np.ones(upts.shape[0])
    for g in wgts:
        weight = weight * g.ravel()
    xpts = x0 + (upts / np.sqrt(w_evals)) @ q.T
    jac = float(np.prod(1.0 / np.sqrt(w_evals)))
    gauss = np.exp(-np.einsum("pi,ij,pj->p", xpts, m_mat, xpts) + xpts @ c_vec)
    hs = np.array([hermite_multidim(HermiteMatrixParam(s_mat, x), n_idx) for x in xpts])
    inner = xpts @ lam.T + gamma
    ht = np.array([hermite_multidim(HermiteMatrixParam(t_mat, x), m_idx) for x in inner])
    lhs = np.sum(weight * jac * hs * ht * gauss)

    # right side
    r11 = s_mat - 0.5 * s_mat @ minv @ s_mat
    r22 = t_mat - 0.5 * (t_mat @ lam) @ minv @ (t_mat @ lam).T
    r21 = -0.5 * t_mat @ lam @ minv @ s_mat
    r = np.block([[r11, r21.T], [r21, r22]])
    z1 = 0.5 * s_mat @ minv @ c_vec
    z2 = 0.5 * t_mat @ lam @ minv @ c_vec + t_mat @ gamma
    z = np.concatenate([z1, z2])
    det_m = np.linalg.det(m_mat)
    # R can be singular for symmetric parameter sets; the descent recurrence
    # only needs the linear form z = R y, which is known exactly
    h_big = _hermite_descend(r, z, n_idx + m_idx, {})
    rhs = np.pi ** (n / 2.0) / np.sqrt(det_m) * np.exp(0.25 * c_vec @ minv @ c_vec) * h_big
    return float(np.abs(lhs - rhs) / max(np.abs(rhs), 1e-30))


def sum_rule(initial, transform, fc_engine, cutoff):
    """Deficit 1 - sum of probabilities into all final states with total quanta <= cutoff.

    fc_engine maps (initial, transform, final_quanta_tuple) -> probability.
    Enumeration is graded lexicographic, so the summation order is deterministic.
    """
    from .spectrum import enumerate_final_states

    if cutoff < 0:
        raise DomainError("cutoff must be nonnegative")
    total = 0.0
    for m_idx in enumerate_final_states(initial.dim, cutoff):
        total += fc_engine(initial, transform, m_idx)
    return 1.0 - total
