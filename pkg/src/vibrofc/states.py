"""Gaussian-Hermite vibrational states and the mode-mixing transform.

A state is written as

    psi_n(x) = (pi^{N/4} sqrt(2^{|n|} prod n_k!))^{-1}
               * exp(-x' sigma x / 2 + varpi' x + phi)
               * prod_k H_{n_k}((s x)_k)

with sigma symmetric positive definite, s = sqrt(sigma) on the diagonal case,
and hbar = 1 with unit reduced masses throughout (oscillator length
l = omega^{-1/2}). For uncoupled modes (diagonal sigma, varpi = 0) these are
the orthonormal eigenstates of the harmonic Hamiltonian.

The mode-mixing (linear + displacement) transform q' = Lambda q + gamma acts
by composition: the transformed state evaluates the base wavefunction at
Lambda x + gamma. A factor |det Lambda|^{1/2} is absorbed into the constant
part of the exponent so the transformed basis stays orthonormal even for
|det Lambda| != 1; for the usual rotation-plus-shift case it is exactly the
composed wavefunction.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfigurationError, DimensionError, DomainError
from .polynomials import as_multi_index, hermite_1d

__all__ = [
    "QuadraticState",
    "DushinskyTransform",
    "TransformedState",
    "mode_eigenstate",
    "quadratic_state",
    "normalize_phase",
    "wavefunction_eval",
    "apply_dushinsky",
]

_SINGULAR_TOL = 1e-12


def _log_factorial_sum(quanta):
    import math

    return sum(math.lgamma(k + 1) for k in quanta)


@dataclass(frozen=True)
class QuadraticState:
    """Gaussian-Hermite state; see the module docstring for the wavefunction."""

    sigma: np.ndarray
    varpi: np.ndarray
    phase: complex
    quanta: tuple
    scale: np.ndarray  # diagonal entries of s, in the normal-mode frame
    basis: np.ndarray = None  # orthogonal Q with sigma = Q diag(omega) Q'; None means identity

    def __post_init__(self):
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        n = sigma.shape[0]
        if sigma.shape != (n, n):
            raise DimensionError(f"sigma must be square, got {sigma.shape}")
        if not np.allclose(sigma, sigma.T, atol=1e-12):
            raise DomainError("sigma must be symmetric")
        varpi = np.atleast_1d(np.asarray(self.varpi, dtype=float))
        if varpi.shape != (n,):
            raise DimensionError(f"varpi length {varpi.shape[0]} != dimension {n}")
        quanta = as_multi_index(self.quanta, dim=n)
        scale = np.atleast_1d(np.asarray(self.scale, dtype=float))
        if scale.shape != (n,):
            raise DimensionError("scale must hold one diagonal entry per mode")
        basis = self.basis
        if basis is not None:
            basis = np.atleast_2d(np.asarray(basis, dtype=float))
            if basis.shape != (n, n):
                raise DimensionError("basis must be N x N")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "varpi", varpi)
        object.__setattr__(self, "phase", complex(self.phase))
        object.__setattr__(self, "quanta", quanta)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self):
        return self.sigma.shape[0]

    @property
    def frequencies(self):
        """Normal-mode frequencies (eigenvalues of sigma)."""
        return self.scale**2

    def normal_modes(self):
        """Return (omega, Q) with sigma = Q diag(omega) Q'. Q is identity when diagonal."""
        q = np.eye(self.dim) if self.basis is None else self.basis
        return self.scale**2, q

    def wavefunction(self, x):
        """Evaluate psi at x of shape (N,) or batched (..., N); returns complex."""
        x = np.asarray(x, dtype=float)
        squeeze = x.ndim == 1
        xs = np.atleast_2d(x)
        if xs.shape[-1] != self.dim:
            raise DimensionError(f"point dimension {xs.shape[-1]} != state dimension {self.dim}")
        quad = -0.5 * np.einsum("...i,ij,...j->...", xs, self.sigma, xs)
        lin = xs @ self.varpi
        val = np.exp(quad + lin + self.phase)
        _, q = self.normal_modes()
        args = (xs @ q) * self.scale
        for k, nk in enumerate(self.quanta):
            if nk:
                val = val * hermite_1d(nk, args[..., k])
        total = sum(self.quanta)
        import math

        lognorm = -0.25 * self.dim * math.log(math.pi) - 0.5 * (
            total * math.log(2.0) + _log_factorial_sum(self.quanta)
        )
        out = val * math.exp(lognorm)
        return out[0] if squeeze else out


@dataclass(frozen=True)
class DushinskyTransform:
    """Invertible linear map plus displacement: q' = Lambda q + gamma."""

    lam: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        lam = np.atleast_2d(np.asarray(self.lam, dtype=float))
        n = lam.shape[0]
        if lam.shape != (n, n):
            raise DimensionError(f"Lambda must be square, got {lam.shape}")
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        if gamma.shape != (n,):
            raise DimensionError(f"gamma length {gamma.shape[0]} != dimension {n}")
        if abs(np.linalg.det(lam)) <= _SINGULAR_TOL:
            raise DegenerateConfigurationError("Lambda is singular (|det| <= 1e-12)")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "gamma", gamma)

    @property
    def dim(self):
        return self.lam.shape[0]


@dataclass(frozen=True)
class TransformedState:
    """A base state composed with a transform: psi(Lambda x + gamma), renormalized.

    exponent_quad, exponent_lin, exponent_const give the composite exponent in
    canonical form: -x' A x / 2 + b' x + c0, with the |det Lambda|^{1/2}
    normalization folded into c0.
    """

    base: QuadraticState
    transform: DushinskyTransform

    def __post_init__(self):
        if self.base.dim != self.transform.dim:
            raise DimensionError("state and transform dimensions differ")

    @property
    def dim(self):
        return self.base.dim

    @property
    def quanta(self):
        return self.base.quanta

    @property
    def exponent_quad(self):
        lam = self.transform.lam
        return lam.T @ self.base.sigma @ lam

    @property
    def exponent_lin(self):
        lam, gamma = self.transform.lam, self.transform.gamma
        return lam.T @ (self.base.varpi - self.base.sigma @ gamma)

    @property
    def exponent_const(self):
        gamma = self.transform.gamma
        jac = 0.5 * np.log(abs(np.linalg.det(self.transform.lam)))
        return (
            -0.5 * gamma @ self.base.sigma @ gamma
            + self.base.varpi @ gamma
            + self.base.phase
            + jac
        )

    def wavefunction(self, x):
        x = np.asarray(x, dtype=float)
        inner = x @ self.transform.lam.T + self.transform.gamma
        jac = abs(np.linalg.det(self.transform.lam)) ** 0.5
        return jac * self.base.wavefunction(inner)


def mode_eigenstate(frequencies, quanta):
    """Uncoupled harmonic eigenstate with the given mode frequencies and quanta."""
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if np.any(freqs <= 0):
        raise DomainError(f"frequencies must be positive, got {freqs}")
    quanta = as_multi_index(quanta, dim=freqs.shape[0])
    state = QuadraticState(
        sigma=np.diag(freqs),
        varpi=np.zeros_like(freqs),
        phase=0.0,
        quanta=quanta,
        scale=np.sqrt(freqs),
    )
    return normalize_phase(state)


def quadratic_state(sigma, varpi, quanta, phase=0.0):
    """Build a normalized state from a general symmetric positive definite sigma.

    Non-diagonal sigma is handled by orthogonal diagonalization; the Hermite
    factors live in the normal-mode frame.
    """
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
    evals, q = np.linalg.eigh(sigma)
    if np.min(evals) <= _SINGULAR_TOL:
        raise DegenerateConfigurationError("sigma is not positive definite")
    diagonal = np.allclose(sigma, np.diag(np.diag(sigma)), atol=1e-14)
    if diagonal:
        evals = np.diag(sigma).copy()
        q = None
    state = QuadraticState(
        sigma=sigma,
        varpi=np.asarray(varpi, dtype=float),
        phase=phase,
        quanta=quanta,
        scale=np.sqrt(evals),
        basis=q,
    )
    return normalize_phase(state)


def normalize_phase(state):
    """Fix Re(phase) from the Gaussian normalization integral; keep Im(phase).

    Re phi = (1/4) ln det sigma - (1/2) varpi' sigma^-1 varpi. For zero-quanta
    states (any varpi) and for centered states with quanta (varpi = 0) this
    makes the state exactly unit norm.
    """
    sign, logdet = np.linalg.slogdet(state.sigma)
    if sign <= 0:
        raise DegenerateConfigurationError("sigma must be positive definite")
    evals = np.linalg.eigvalsh(state.sigma)
    if np.min(evals) <= _SINGULAR_TOL:
        raise DegenerateConfigurationError("sigma is numerically singular")
    shift = np.linalg.solve(state.sigma, state.varpi)
    re_phi = 0.25 * logdet - 0.5 * float(state.varpi @ shift)
    new_phase = re_phi + 1j * np.imag(state.phase)
    return QuadraticState(
        sigma=state.sigma,
        varpi=state.varpi,
        phase=new_phase,
        quanta=state.quanta,
        scale=state.scale,
        basis=state.basis,
    )


def wavefunction_eval(state, x):
    """Evaluate a state's wavefunction at x; works for transformed states too."""
    return state.wavefunction(x)


def apply_dushinsky(state, transform):
    """Compose a state with q' = Lambda q + gamma.

    The result evaluates the base wavefunction at Lambda x + gamma and exposes
    the composite exponent in canonical (quadratic, linear, constant) form.
    """
    if not isinstance(state, QuadraticState):
        raise DomainError("apply_dushinsky expects an untransformed state")
    return TransformedState(base=state, transform=transform)
