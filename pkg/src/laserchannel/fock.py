"""Linear algebra on a truncated single-mode Fock space.

Operators are plain ``numpy`` complex arrays of shape ``(dim, dim)`` acting on
the number states ``|0>, ..., |dim-1>``. Truncation artifacts always sit on the
top level ``dim-1``; callers keep enough headroom that nothing of interest
lives there.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import DomainError, InvalidDimensionError, NumericalError, ShapeError

__all__ = [
    "annihilation",
    "creation",
    "number_operator",
    "coherent_vector",
    "coherent_density",
    "thermal_density",
    "matrix_exponential",
    "von_neumann_entropy",
    "expectation",
    "check_density_matrix",
]

#: Eigenvalues of a density matrix above this (negative) floor are roundoff.
NEGATIVE_EIGENVALUE_FLOOR = -1e-10


def _check_dim(dim) -> int:
    if int(dim) != dim or dim < 1:
        raise InvalidDimensionError(f"Fock dimension must be a positive integer, got {dim!r}")
    return int(dim)


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator ``a`` with ``a|n> = sqrt(n)|n-1>``."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation(dim: int) -> np.ndarray:
    return annihilation(dim).conj().T


def number_operator(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def coherent_vector(z: complex, dim: int, renormalize: bool = False) -> np.ndarray:
    """Number-basis amplitudes of the coherent state ``|z>``.

    ``c_n = exp(-|z|^2/2) z^n / sqrt(n!)`` for ``n < dim``, evaluated through
    log-factorials so that large ``|z|`` does not overflow the intermediate
    ``z^n``. With ``renormalize`` the truncated vector is scaled to unit norm;
    otherwise the norm is left slightly below one.
    """
    dim = _check_dim(dim)
    z = complex(z)
    if not np.isfinite(z):
        raise DomainError(f"coherent amplitude must be finite, got {z!r}")
    n = np.arange(dim)
    if z == 0:
        c = np.zeros(dim, dtype=complex)
        c[0] = 1.0
        return c
    r, phi = abs(z), np.angle(z)
    log_mag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1)
    c = np.exp(log_mag) * np.exp(1j * phi * n)
    if renormalize:
        c = c / np.linalg.norm(c)
    return c


def coherent_density(z: complex, dim: int, renormalize: bool = False) -> np.ndarray:
    c = coherent_vector(z, dim, renormalize)
    return np.outer(c, c.conj())


def thermal_density(mean_photons: float, dim: int) -> np.ndarray:
    """Diagonal Bose-Einstein state ``(1-q) q^n`` with ``q = nbar/(nbar+1)``, truncated."""
    dim = _check_dim(dim)
    if mean_photons < 0:
        raise DomainError("mean photon number must be non-negative")
    if mean_photons == 0:
        p = np.zeros(dim)
        p[0] = 1.0
    else:
        q = mean_photons / (mean_photons + 1.0)
        p = (1.0 - q) * q ** np.arange(dim)
    return np.diag(p).astype(complex)


def matrix_exponential(m) -> np.ndarray:
    """``exp(m)`` for a general (possibly non-normal) square matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix exponential needs a square matrix, got shape {m.shape}")
    # Pade scaling-and-squaring; no normality assumption
    return scipy.linalg.expm(m.astype(complex))


def check_density_matrix(rho, trace_tol: float = 1e-8) -> np.ndarray:
    """Validate the density-matrix invariants and return ``rho`` as an array.

    Raises
    ------
    NumericalError
        If ``rho`` is not Hermitian to ``1e-12`` relative, its trace is off by
        more than ``trace_tol`` or its smallest eigenvalue is below ``-1e-10``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise NumericalError("density matrix has non-finite entries")
    scale = np.abs(rho).max()
    asym = np.abs(rho - rho.conj().T).max()
    if asym > 1e-12 * scale:
        raise NumericalError(f"density matrix not Hermitian: max asymmetry {asym:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise NumericalError(f"density matrix trace {tr!r} differs from 1 by more than {trace_tol}")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lam_min < NEGATIVE_EIGENVALUE_FLOOR:
        raise NumericalError(f"density matrix not positive: smallest eigenvalue {lam_min:.3e}")
    return rho


def von_neumann_entropy(rho) -> float:
    """Entropy ``-Tr[rho ln rho]`` in units of ``k_B``.

    Computed from the eigenvalues of the Hermitian part of ``rho``. Eigenvalues
    in ``[-1e-10, 0)`` count as zero, anything more negative is an error.
    """
    rho = np.asarray(rho, dtype=complex)
    herm = 0.5 * (rho + rho.conj().T)
    try:
        lam = np.linalg.eigvalsh(herm)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed on {herm.shape} matrix "
            f"(trace {np.trace(herm).real:.6g}, max |entry| {np.abs(herm).max():.3g})"
        ) from exc
    if lam.min() < NEGATIVE_EIGENVALUE_FLOOR:
        raise NumericalError(f"negative eigenvalue {lam.min():.3e} in entropy argument")
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def expectation(rho, obs) -> complex:
    """``Tr[rho obs]``."""
    rho = np.asarray(rho)
    obs = np.asarray(obs)
    if rho.shape != obs.shape:
        raise ShapeError(f"dimension mismatch: rho {rho.shape} vs observable {obs.shape}")
    # Tr[A B] = sum_ij A_ij B_ji
    return complex(np.sum(rho * obs.T))
