"""Normal ordering of quadratic bosonic exponentials and the disentangled laser propagator.

For ``H = 1/2 B Gamma B^T`` with ``B = (A^dag, A)`` and a symmetric ``2n x 2n``
matrix ``Gamma``, the symplectic matrix ``exp(Gamma Pi) = [[Q, L], [N, P]]``
determines the normally ordered form

    exp(H) = det(P)^(-1/2) exp(-1/2 A^dag (L P^-1) A^dag^T)
             exp(A^dag ln(P^T^-1) A^T) exp(1/2 A (P^-1 N) A^T).

The laser propagator on the doubled (real + fictitious "tilde") Fock space is
such an exponential with mode order ``A = (a~, a)``. Two-mode vectors are
indexed ``n * dim + n~`` (real mode major), i.e. ``kron(real, tilde)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.special import gammaln

from .channel import coefficients
from .errors import DomainError, HeadroomError, InvalidDimensionError, SingularBlockError
from .fock import annihilation, matrix_exponential
from .params import LaserParams, check_time

__all__ = [
    "QuadraticForm",
    "SymplecticBlocks",
    "NormalOrderData",
    "pi_matrix",
    "swap_matrix",
    "laser_gamma",
    "blocks_numeric",
    "laser_blocks_closed",
    "normal_order_data",
    "two_mode_operators",
    "eta_zero_vector",
    "vectorize",
    "unvectorize",
    "laser_generator_two_mode",
    "disentangled_propagator",
    "factorization_check",
]

J2 = np.array([[0.0, 1.0], [1.0, 0.0]])


def swap_matrix() -> np.ndarray:
    return J2.copy()


def pi_matrix(n_modes: int) -> np.ndarray:
    """``[[0, -I], [I, 0]]`` of size ``2n``."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise InvalidDimensionError(f"n_modes must be a positive integer, got {n_modes!r}")
    n = int(n_modes)
    eye = np.eye(n)
    z = np.zeros((n, n))
    return np.block([[z, -eye], [eye, z]])


@dataclass(frozen=True)
class QuadraticForm:
    n_modes: int
    gamma: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gamma)
        if g.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise DomainError(f"gamma must be {2 * self.n_modes}x{2 * self.n_modes}, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise DomainError("gamma has non-finite entries")
        if np.abs(g - g.T).max() > 1e-14 * max(1.0, np.abs(g).max()):
            raise DomainError("gamma must be symmetric")


@dataclass(frozen=True)
class SymplecticBlocks:
    Q: np.ndarray
    L: np.ndarray
    N: np.ndarray
    P: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.Q.shape[0]

    def matrix(self) -> np.ndarray:
        return np.block([[self.Q, self.L], [self.N, self.P]])

    def relation_residuals(self) -> dict[str, float]:
        """Max-abs residuals of the four block identities of a symplectic matrix."""
        Q, L, N, P = self.Q, self.L, self.N, self.P
        eye = np.eye(self.n_modes)
        return {
            "QL^T = LQ^T": float(np.abs(Q @ L.T - L @ Q.T).max()),
            "QP^T - LN^T = I": float(np.abs(Q @ P.T - L @ N.T - eye).max()),
            "NP^T = PN^T": float(np.abs(N @ P.T - P @ N.T).max()),
            "PQ^T - NL^T = I": float(np.abs(P @ Q.T - N @ L.T - eye).max()),
        }


@dataclass(frozen=True)
class NormalOrderData:
    """Factors of the normally ordered exponential.

    ``exp(H) = prefactor * exp(1/2 A^dag pair_creation A^dag^T)
    * exp(A^dag log_middle A^T) * exp(1/2 A pair_annihilation A^T)``, so
    ``pair_creation = -L P^-1``, ``log_middle = ln(P^T^-1)`` and
    ``pair_annihilation = P^-1 N``.
    """

    prefactor: complex
    pair_creation: np.ndarray
    log_middle: np.ndarray
    pair_annihilation: np.ndarray


def laser_gamma(params: LaserParams, t: float) -> QuadraticForm:
    """``t [[2g J2, -(g+kappa) I2], [-(g+kappa) I2, 2 kappa J2]]`` for modes ``(a~, a)``."""
    t = check_time(t)
    g, kappa = params.g, params.kappa
    eye = np.eye(2)
    gamma = t * np.block([[2 * g * J2, -(g + kappa) * eye], [-(g + kappa) * eye, 2 * kappa * J2]])
    return QuadraticForm(2, gamma)


def blocks_numeric(form: QuadraticForm) -> SymplecticBlocks:
    """Split ``exp(Gamma Pi)`` into its four ``n x n`` blocks."""
    n = form.n_modes
    m = matrix_exponential(np.asarray(form.gamma) @ pi_matrix(n))
    return SymplecticBlocks(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])


def laser_blocks_closed(params: LaserParams, t: float) -> SymplecticBlocks:
    """Closed-form blocks of ``exp(Gamma Pi)`` for the laser quadratic form.

    With ``delta = g - kappa``::

        Q = (g e^{-delta t} - kappa e^{delta t}) / delta  I2
        L = g (e^{-delta t} - e^{delta t}) / delta        J2
        N = kappa (e^{delta t} - e^{-delta t}) / delta    J2
        P = (g e^{delta t} - kappa e^{-delta t}) / delta  I2

    and their ``delta -> 0`` limits ``Q = 1 - 2gt``, ``L = -2gt``,
    ``N = 2 kappa t``, ``P = 1 + 2gt`` when the rates balance.
    """
    t = check_time(t)
    g, kappa = params.g, params.kappa
    eye = np.eye(2)
    if params.balanced:
        q, l, n, p = 1 - 2 * g * t, -2 * g * t, 2 * kappa * t, 1 + 2 * g * t
    else:
        delta = g - kappa
        ep, em = math.exp(delta * t), math.exp(-delta * t)
        q = (g * em - kappa * ep) / delta
        l = g * (em - ep) / delta
        n = kappa * (ep - em) / delta
        p = (g * ep - kappa * em) / delta
    cplx = complex
    return SymplecticBlocks(cplx(q) * eye, cplx(l) * J2, cplx(n) * J2, cplx(p) * eye)


def normal_order_data(blocks: SymplecticBlocks) -> NormalOrderData:
    """Normal-ordering factors from the symplectic blocks.

    ``det P`` must be real and positive (true on the whole laser parameter
    domain); the principal square root and principal matrix logarithm are then
    unambiguous. Otherwise raises :class:`SingularBlockError`.
    """
    P = np.asarray(blocks.P)
    det = np.linalg.det(P)
    if abs(det) <= 1e-12:
        raise SingularBlockError(f"P block is singular (det P = {det!r})")
    if abs(det.imag) > 1e-12 * abs(det) or det.real <= 0:
        raise SingularBlockError(f"det P = {det!r} is not positive; no principal branch chosen")
    p_inv = np.linalg.inv(P)
    log_middle = scipy.linalg.logm(p_inv.T)
    return NormalOrderData(
        prefactor=complex(1.0 / math.sqrt(det.real)),
        pair_creation=-(blocks.L @ p_inv),
        log_middle=np.asarray(log_middle, dtype=complex),
        pair_annihilation=p_inv @ blocks.N,
    )


# --- two-mode Fock space -------------------------------------------------


def two_mode_operators(dim: int) -> tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """``(a~, a)`` as sparse ``dim^2 x dim^2`` matrices (index ``n * dim + n~``)."""
    a = sparse.csr_matrix(annihilation(dim))
    eye = sparse.identity(dim, format="csr")
    return sparse.kron(eye, a, format="csr"), sparse.kron(a, eye, format="csr")


def eta_zero_vector(dim: int) -> np.ndarray:
    """Truncated ``exp(a^dag a~^dag)|0 0~>`` = ``sum_n |n>|n~>``, unnormalized."""
    if int(dim) != dim or dim < 1:
        raise InvalidDimensionError(f"dim must be a positive integer, got {dim!r}")
    return np.eye(int(dim), dtype=complex).ravel()


def vectorize(rho) -> np.ndarray:
    """``rho|eta=0>``: the operator ``rho`` as a two-mode vector."""
    return np.asarray(rho, dtype=complex).ravel()


def unvectorize(vec) -> np.ndarray:
    vec = np.asarray(vec)
    dim = math.isqrt(vec.size)
    if dim * dim != vec.size:
        raise InvalidDimensionError(f"vector length {vec.size} is not a square")
    return vec.reshape(dim, dim)


def laser_generator_two_mode(params: LaserParams, t: float, dim: int) -> sparse.csr_matrix:
    """``t`` times the two-mode master-equation generator acting on ``rho|eta=0>``.

    ``g t (2 a^dag a~^dag - a a^dag - a~ a~^dag) + kappa t (2 a a~ - a^dag a - a~^dag a~)``
    with ``a a^dag`` written as ``a^dag a + 1`` so the only truncation artifact
    is the missing pair creation out of the top level.
    """
    t = check_time(t)
    at, a = two_mode_operators(dim)
    n_real = a.conj().T @ a
    n_tilde = at.conj().T @ at
    eye = sparse.identity(dim * dim, format="csr")
    pair_up = a.conj().T @ at.conj().T
    pair_down = a @ at
    gen = (params.g * t * (2 * pair_up - (n_real + eye) - (n_tilde + eye))
           + params.kappa * t * (2 * pair_down - n_real - n_tilde))
    return gen.tocsr()


def _pair_exponential(c: complex, dim: int) -> sparse.csr_matrix:
    """``exp(c a^dag a~^dag)`` built from its terminating series.

    ``|m, m~> -> sum_k c^k/k! sqrt((m+k)!/m!) sqrt((m~+k)!/m~!) |m+k, m~+k>``; exact on
    the truncated space because it only raises.
    """
    m = np.arange(dim)
    mm, mt = (x.ravel() for x in np.meshgrid(m, m, indexing="ij"))
    rows, cols, vals = [], [], []
    for k in range(dim if c != 0 else 1):
        ok = (mm + k < dim) & (mt + k < dim)
        a_, b_ = mm[ok], mt[ok]
        log_amp = (0.5 * (gammaln(a_ + k + 1) - gammaln(a_ + 1) + gammaln(b_ + k + 1) - gammaln(b_ + 1))
                   - gammaln(k + 1))
        rows.append((a_ + k) * dim + (b_ + k))
        cols.append(a_ * dim + b_)
        vals.append(np.exp(log_amp) * complex(c) ** k)
    size = dim * dim
    return sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(size, size))


def disentangled_propagator(params: LaserParams, t: float, dim: int) -> sparse.csr_matrix:
    """``T3 exp(g T1 a^dag a~^dag) T2^(N + N~) exp(kappa T1 a a~)`` on ``dim^2`` levels (sparse)."""
    c = coefficients(params, t)
    n = np.arange(dim)
    total = (n[:, None] + n[None, :]).ravel()
    up = _pair_exponential(params.g * c.t1, dim)
    down = _pair_exponential(params.kappa * c.t1, dim).T
    middle = sparse.diags(c.t2 ** total.astype(float))
    return (c.t3 * (up @ middle @ down)).tocsr()


def _normal_ordered_propagator(params: LaserParams, t: float, dim: int) -> np.ndarray:
    """Same propagator assembled from :func:`normal_order_data` of the numeric blocks (dense)."""
    data = normal_order_data(blocks_numeric(laser_gamma(params, t)))
    modes = [m.toarray() for m in two_mode_operators(dim)]
    daggers = [m.conj().T for m in modes]
    up = sum(0.5 * data.pair_creation[i, j] * daggers[i] @ daggers[j] for i in range(2) for j in range(2))
    mid = sum(data.log_middle[i, j] * daggers[i] @ modes[j] for i in range(2) for j in range(2))
    down = sum(0.5 * data.pair_annihilation[i, j] * modes[i] @ modes[j] for i in range(2) for j in range(2))
    scalar = math.exp(params.detuning * t) * data.prefactor
    return scalar * matrix_exponential(up) @ matrix_exponential(mid) @ matrix_exponential(down)


def _sectors(dim: int):
    # both propagators conserve n - n~; yield the index set of each sector
    n = np.arange(dim)
    sector = (n[:, None] - n[None, :]).ravel()
    for s in range(-(dim - 1), dim):
        yield np.nonzero(sector == s)[0]


def factorization_check(params: LaserParams, t: float, dim: int, cutoff: int | None = None,
                        headroom_tol: float = 1e-8) -> float:
    """Max deviation between the brute-force and the disentangled propagator.

    The two-mode generator is exponentiated directly on ``dim^2`` states and
    compared entrywise with :func:`disentangled_propagator` on the block where
    both photon numbers of row and column are below ``cutoff`` (default
    ``dim // 2``). Truncation only corrupts the brute-force side.

    Raises :class:`HeadroomError` when the vacuum, propagated to ``t``, puts more
    than ``headroom_tol`` on the top level (``T3 (g T1)^(dim-1)``).
    """
    t = check_time(t)
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dim must be an integer >= 2, got {dim!r}")
    if dim * dim > 4096:
        raise DomainError(f"dim={dim} gives a {dim * dim}-state two-mode space; limit is 4096")
    if t * max(params.g, params.kappa) > 1:
        raise DomainError("factorization_check needs t * max(g, kappa) <= 1")
    c = coefficients(params, t)
    boundary = c.t3 * (params.g * c.t1) ** (dim - 1)
    if boundary > headroom_tol:
        raise HeadroomError(f"vacuum population {boundary:.3e} reaches level {dim - 1}; increase dim")
    cutoff = dim // 2 if cutoff is None else cutoff
    gen = laser_generator_two_mode(params, t, dim)
    factored = disentangled_propagator(params, t, dim)
    n = np.arange(dim)
    low = ((n[:, None] < cutoff) & (n[None, :] < cutoff)).ravel()
    worst = 0.0
    for idx in _sectors(dim):
        keep = low[idx]
        if not keep.any():
            continue
        # exp of a block-diagonal matrix is the block-diagonal of the exps
        brute = matrix_exponential(gen[idx][:, idx].toarray())
        exact = factored[idx][:, idx].toarray()
        worst = max(worst, float(np.abs(brute - exact)[np.ix_(keep, keep)].max()))
    return worst
