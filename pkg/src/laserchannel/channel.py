"""Analytic laser channel: coefficients, Kraus operators and the evolved coherent state.

The channel produced by the gain/loss master equation over a time ``t`` is

    rho(t) = sum_{i,j} M_ij rho0 M_ij^dagger,
    M_ij   = sqrt(kappa^i g^j T3 T1^(i+j) / (i! j! T2^(2j))) T2^N a^dagger^j a^i,

with ``N = a^dagger a`` and three scalar coefficients ``T1, T2, T3`` that depend
only on ``(g, kappa, t)``. Every ``M_ij`` moves ``|n>`` to ``|n - i + j>``, so a
Kraus operator is stored as one weight per source level instead of a dense
matrix; :meth:`KrausSet.operator` rebuilds the dense form when it is wanted.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import (
    ConvergenceError,
    DegenerateChannelError,
    DomainError,
    HeadroomError,
    InvalidDimensionError,
    KrausOverflowError,
    ShapeError,
)
from .fock import (
    annihilation,
    check_density_matrix,
    coherent_density,
    creation,
    matrix_exponential,
    number_operator,
)
from .params import LaserParams, check_time

logger = logging.getLogger(__name__)

__all__ = [
    "ChannelCoefficients",
    "KrausSet",
    "coefficients",
    "kraus_set",
    "adaptive_kraus_set",
    "completeness_defect",
    "apply_channel",
    "rho_coherent_closed",
]

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ChannelCoefficients:
    t1: float
    t2: float
    t3: float
    t: float


def coefficients(params: LaserParams, t: float) -> ChannelCoefficients:
    """Channel coefficients ``T1, T2, T3`` at time ``t``.

    Uses ``h = (kappa - g) / (1 - exp(-2 (kappa - g) t))``, which is positive and
    smooth in ``kappa - g``, so that

        T1 = 1 / (h + g),   T3 = h / (h + g) = 1 - g T1,   T2 = h exp(-(kappa - g) t) / (h + g).

    At ``kappa == g`` (within ``BALANCE_RTOL``) the limits
    ``T1 = 2t / (1 + 2gt)`` and ``T2 = T3 = 1 / (1 + 2gt)`` are used directly.
    """
    t = check_time(t)
    g, kappa = params.g, params.kappa
    if t == 0.0:
        return ChannelCoefficients(0.0, 1.0, 1.0, 0.0)
    if params.balanced:
        s = 1.0 + 2.0 * g * t
        return ChannelCoefficients(2.0 * t / s, 1.0 / s, 1.0 / s, t)
    d = params.detuning
    if -2.0 * d * t >= _LOG_MAX:
        # h underflows: the t -> inf limit of the gain-dominated channel
        return ChannelCoefficients(1.0 / g, 0.0, 0.0, t)
    # same as the h form with x = d / h; stays finite when t is so small that h overflows
    x = -math.expm1(-2.0 * d * t)
    den = d + g * x
    t1 = x / den
    t3 = d / den
    t2 = math.exp(math.log(d / den) - d * t)
    return ChannelCoefficients(t1, t2, t3, t)


@dataclass(frozen=True)
class KrausSet:
    """Truncated Kraus family ``{M_ij : i <= i_max, j <= j_max}`` on ``dim`` levels.

    ``log_weights[i, j, n]`` is ``log`` of the single nonzero entry of column ``n``
    of ``M_ij`` (row ``n - i + j``); ``-inf`` marks an exact zero. Indices with
    ``i >= dim`` or ``j >= dim`` give vanishing operators in the truncated space
    and are not stored.
    """

    params: LaserParams
    t: float
    dim: int
    i_max: int
    j_max: int
    log_weights: np.ndarray

    def __len__(self):
        return (self.i_max + 1) * (self.j_max + 1)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    def operator(self, i: int, j: int) -> np.ndarray:
        """Dense ``dim x dim`` matrix of ``M_ij``."""
        if not (0 <= i <= self.i_max and 0 <= j <= self.j_max):
            raise IndexError(f"Kraus index ({i}, {j}) outside cutoffs ({self.i_max}, {self.j_max})")
        m = np.zeros((self.dim, self.dim), dtype=complex)
        if i >= self.log_weights.shape[0] or j >= self.log_weights.shape[1]:
            return m
        w = np.exp(self.log_weights[i, j])
        src = np.nonzero(w)[0]
        m[src - i + j, src] = w[src]
        return m

    def operators(self) -> Iterator[tuple[tuple[int, int], np.ndarray]]:
        for i in range(self.i_max + 1):
            for j in range(self.j_max + 1):
                yield (i, j), self.operator(i, j)

    def completeness_diagonal(self) -> np.ndarray:
        """Diagonal of ``sum M^dagger M`` (the off-diagonal part vanishes identically)."""
        return np.exp(2.0 * self.log_weights).sum(axis=(0, 1))


def kraus_set(params: LaserParams, t: float, dim: int, i_max: int | None = None,
              j_max: int | None = None) -> KrausSet:
    """Build the truncated Kraus family.

    ``i_max`` defaults to ``dim`` and ``j_max`` to ``dim - 1``; beyond those every
    operator is zero on ``dim`` levels. Prefactors go through log-gamma.
    """
    t = check_time(t)
    if int(dim) != dim or dim < 1:
        raise InvalidDimensionError(f"dim must be a positive integer, got {dim!r}")
    dim = int(dim)
    i_max = dim if i_max is None else int(i_max)
    j_max = dim - 1 if j_max is None else int(j_max)
    if i_max < 0 or j_max < 0:
        raise DomainError("Kraus cutoffs must be non-negative")
    if i_max > dim:
        raise DomainError(f"i_max={i_max} exceeds dim={dim}; a^i vanishes for i >= dim")

    c = coefficients(params, t)
    if c.t2 <= 0.0 or c.t3 <= 0.0:
        raise DegenerateChannelError(f"T2={c.t2!r}, T3={c.t3!r} at t={t}: channel is at its t -> inf limit")
    g, kappa = params.g, params.kappa

    i = np.arange(min(i_max, dim - 1) + 1)[:, None, None]
    j = np.arange(min(j_max, dim - 1) + 1)[None, :, None]
    n = np.arange(dim)[None, None, :]
    log_t2 = math.log(c.t2)
    with np.errstate(divide="ignore"):
        log_pref = 0.5 * (xlogy(i, kappa) + xlogy(j, g) + math.log(c.t3) + xlogy(i + j, c.t1)
                          - gammaln(i + 1) - gammaln(j + 1) - 2.0 * j * log_t2)
    m = n - i  # level after a^i
    valid = (m >= 0) & (m + j < dim)
    ms = np.where(valid, m, 0)
    ns = np.where(valid, n, 0)
    log_w = (log_pref + (ms + j) * log_t2
             + 0.5 * (gammaln(ns + 1) - gammaln(ms + 1))
             + 0.5 * (gammaln(ms + j + 1) - gammaln(ms + 1)))
    log_w = np.where(valid, log_w, -np.inf)
    if np.any(np.isnan(log_w)):
        raise KrausOverflowError("NaN in Kraus prefactors")
    if log_w.max() > _LOG_MAX:
        raise KrausOverflowError(f"Kraus weight exp({log_w.max():.1f}) overflows")
    return KrausSet(params, t, dim, i_max, j_max, log_w)


def completeness_defect(ks: KrausSet, probe_dim: int) -> float:
    """Max deviation of ``sum M^dagger M`` from the identity on the first ``probe_dim`` levels."""
    if not 1 <= probe_dim <= ks.dim:
        raise InvalidDimensionError(f"probe_dim must lie in [1, {ks.dim}], got {probe_dim}")
    return float(np.abs(ks.completeness_diagonal()[:probe_dim] - 1.0).max())


def adaptive_kraus_set(params: LaserParams, t: float, dim: int, probe_dim: int | None = None,
                       tol: float = 1e-8, j_start: int = 8) -> KrausSet:
    """Kraus set with ``i_max = dim`` and ``j_max`` doubled until the completeness defect is below ``tol``.

    Gives up with :class:`ConvergenceError` once ``j_max`` would pass ``4 * dim``.
    """
    probe_dim = dim // 2 if probe_dim is None else probe_dim
    j_max = min(j_start, 4 * dim)
    while True:
        ks = kraus_set(params, t, dim, i_max=dim, j_max=j_max)
        defect = completeness_defect(ks, probe_dim)
        if defect < tol:
            return ks
        if j_max >= 4 * dim:
            raise ConvergenceError(
                f"completeness defect {defect:.3e} > {tol:g} at j_max={j_max} "
                f"(g={params.g}, kappa={params.kappa}, t={t}, dim={dim}); increase dim"
            )
        j_max = min(2 * j_max, 4 * dim)


def apply_channel(ks: KrausSet, rho0, headroom_tol: float = 1e-10, trace_tol: float = 1e-8) -> np.ndarray:
    """``sum_ij M_ij rho0 M_ij^dagger``.

    ``rho0`` may carry at most ``headroom_tol`` population on levels ``>= dim/2``.
    The trace lost to truncation is logged at debug level; losing more than
    ``trace_tol`` raises :class:`HeadroomError`.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    d = ks.dim
    if rho0.shape != (d, d):
        raise ShapeError(f"rho0 has shape {rho0.shape}, Kraus set acts on {d} levels")
    upper = np.diag(rho0).real[d // 2:].sum()
    if upper > headroom_tol:
        raise HeadroomError(f"input population {upper:.3e} on levels >= {d // 2} exceeds {headroom_tol:g}")

    w = ks.weights
    n_i, n_j, _ = w.shape
    out = np.zeros_like(rho0)
    # group by shift s = j - i: operators with equal shift share the same index map
    for s in range(-(n_i - 1), n_j):
        i_idx = np.arange(max(0, -s), min(n_i, n_j - s))
        if i_idx.size == 0 or abs(s) >= d:
            continue
        ws = w[i_idx, i_idx + s]
        k = ws.T @ ws
        term = 0.5 * (k + k.T) * rho0
        if s >= 0:
            out[s:, s:] += term[: d - s, : d - s]
        else:
            out[: d + s, : d + s] += term[-s:, -s:]
    out = 0.5 * (out + out.conj().T)
    deficit = np.trace(rho0).real - np.trace(out).real
    logger.debug("apply_channel: trace deficit %.3e (dim=%d, t=%g)", deficit, d, ks.t)
    if deficit > trace_tol:
        raise HeadroomError(
            f"channel output lost {deficit:.3e} of its trace past level {d - 1} "
            f"(g={ks.params.g}, kappa={ks.params.kappa}, t={ks.t}); increase dim"
        )
    return check_density_matrix(out, trace_tol=trace_tol + abs(np.trace(rho0).real - 1.0))


def _raising_exponential(c: complex, dim: int) -> np.ndarray:
    """``exp(c a^dagger)`` on ``dim`` levels; lower triangular and exact under truncation."""
    m = np.arange(dim)[:, None]
    k = np.arange(dim)[None, :]
    p = m - k
    ok = p >= 0
    ps = np.where(ok, p, 0)
    with np.errstate(divide="ignore"):
        log_mag = xlogy(ps, abs(c)) + 0.5 * (gammaln(m + 1) - gammaln(k + 1)) - gammaln(ps + 1)
    out = np.exp(log_mag) * np.exp(1j * np.angle(c) * ps)
    return np.where(ok, out, 0.0)


def rho_coherent_closed(z: complex, params: LaserParams, t: float, dim: int,
                        path: str = "triple", pad: int | None = None) -> np.ndarray:
    """Evolved state of an initial coherent state ``|z><z|`` in closed form.

    ``path="triple"`` evaluates the normally ordered product

        T3 exp((kappa T1 - 1)|z|^2) exp(z T2 a^dagger) (g T1)^N exp(z* T2 a),

    which is exact entry by entry on the truncated space. ``path="single"``
    evaluates the same state as one exponential,

        T3 (g T1)^(|alpha|^2) exp(ln(g T1) [N - alpha a^dagger - alpha* a]),  alpha = z e^((g-kappa) t),

    through :func:`matrix_exponential` on ``dim + pad`` levels and crops back to
    ``dim`` (the truncated exponent is only accurate well below its top level).

    ``g = 0`` and ``t = 0`` return the exact limit, a pure coherent state of
    amplitude ``z exp(-kappa t)``. A state whose tail does not fit in ``dim``
    levels raises :class:`HeadroomError`.
    """
    t = check_time(t)
    z = complex(z)
    if path not in ("triple", "single"):
        raise ValueError(f"unknown path {path!r}")
    if t == 0.0 or params.g == 0.0:
        return coherent_density(z * math.exp(-params.kappa * t), dim)

    c = coefficients(params, t)
    q = params.g * c.t1
    if not 0.0 < q < 1.0:
        raise DegenerateChannelError(f"g*T1 = {q!r} outside (0, 1)")
    if path == "triple":
        scale = c.t3 * math.exp((params.kappa * c.t1 - 1.0) * abs(z) ** 2)
        raise_op = _raising_exponential(z * c.t2, dim)
        rho = scale * (raise_op * q ** np.arange(dim)) @ raise_op.conj().T
    else:
        big = dim + (max(32, dim) if pad is None else pad)
        alpha = z * c.t2 / c.t3
        a = annihilation(big)
        gen = math.log(q) * (number_operator(big) - alpha * creation(big) - np.conj(alpha) * a)
        rho = c.t3 * q ** (abs(alpha) ** 2) * matrix_exponential(gen)
        rho = rho[:dim, :dim]
    rho = 0.5 * (rho + rho.conj().T)
    lost = 1.0 - float(np.trace(rho).real)
    if lost > 1e-8:
        raise HeadroomError(f"closed-form state lost {lost:.3e} of its trace past level {dim - 1} "
                            f"(z={z}, g={params.g}, kappa={params.kappa}, t={t}); increase dim")
    return check_density_matrix(rho)
