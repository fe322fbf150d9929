"""Brute-force integration of the gain/loss master equation.

    d rho/dt = g [2 a^dag rho a - a a^dag rho - rho a a^dag]
             + kappa [2 a rho a^dag - a^dag a rho - rho a^dag a]

Fixed-step classical RK4 on the truncated Fock space, with the state
re-Hermitized after every step. All operator products use the truncated
matrices, which makes the generator exactly trace-free even at the top level.
This module shares nothing with the analytic channel code and serves as its
independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, HeadroomError, ShapeError
from .fock import check_density_matrix
from .params import LaserParams, check_time

__all__ = ["IntegrationConfig", "liouvillian_apply", "evolve", "evolve_series"]


@dataclass(frozen=True)
class IntegrationConfig:
    """RK4 settings. ``dt=None`` picks ``1e-3 / max(g, kappa, 1)``."""

    dt: float | None = None
    boundary_tolerance: float = 1e-10
    convergence_tol: float = 1e-8
    check_convergence: bool = True

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt!r}")
        if not 0 < self.boundary_tolerance < 1:
            raise DomainError("boundary_tolerance must lie in (0, 1)")

    def step_for(self, params: LaserParams) -> float:
        if self.dt is not None:
            return self.dt
        return 1e-3 / max(params.g, params.kappa, 1.0)


class _Generator:
    # a is bidiagonal, so every product reduces to a diagonal shift and scaling:
    #   (a^dag rho a)[p, q] = sqrt(p q) rho[p-1, q-1]
    #   (a rho a^dag)[p, q] = sqrt((p+1)(q+1)) rho[p+1, q+1]
    # and a a^dag = diag(1, ..., D-1, 0), a^dag a = diag(0, ..., D-1) (truncated).
    def __init__(self, params: LaserParams, dim: int):
        n = np.arange(dim, dtype=float)
        root = np.sqrt(n)
        self.g, self.kappa = params.g, params.kappa
        self.up = np.outer(root[1:], root[1:])
        self.aad = np.append(n[1:], 0.0)
        self.ada = n
        self.gain_diag = self.aad[:, None] + self.aad[None, :]
        self.loss_diag = n[:, None] + n[None, :]

    def __call__(self, rho):
        out = -(self.g * self.gain_diag + self.kappa * self.loss_diag) * rho
        if self.g:
            out[1:, 1:] += 2.0 * self.g * self.up * rho[:-1, :-1]
        if self.kappa:
            out[:-1, :-1] += 2.0 * self.kappa * self.up * rho[1:, 1:]
        return out


def liouvillian_apply(rho, params: LaserParams) -> np.ndarray:
    """Right-hand side of the master equation for the state ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"rho must be square, got shape {rho.shape}")
    return _Generator(params, rho.shape[0])(rho)


def _boundary_population(rho):
    return np.diag(rho).real[-2:].sum()


def _integrate(rho0, params, times, dt, boundary_tol):
    gen = _Generator(params, rho0.shape[0])
    rho = rho0.copy()
    now = 0.0
    out = []
    step = 0
    for target in times:
        n_steps = int(np.ceil((target - now) / dt - 1e-9))
        h = (target - now) / n_steps if n_steps > 0 else 0.0
        for k in range(n_steps):
            k1 = gen(rho)
            k2 = gen(rho + 0.5 * h * k1)
            k3 = gen(rho + 0.5 * h * k2)
            k4 = gen(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            rho = 0.5 * (rho + rho.conj().T)
            step += 1
            pop = _boundary_population(rho)
            if pop > boundary_tol:
                raise HeadroomError(
                    f"lindblad: top-level population {pop:.3e} > {boundary_tol:g} at step {step} "
                    f"(t={now + (k + 1) * h:.6g}, g={params.g}, kappa={params.kappa}, dim={rho.shape[0]})"
                )
        now = target
        out.append(rho.copy())
    return out


def evolve_series(rho0, params: LaserParams, times, config: IntegrationConfig | None = None) -> list[np.ndarray]:
    """States at each of the increasing, non-negative ``times``.

    The step is shrunk slightly where needed so every requested time is hit
    exactly. With ``config.check_convergence`` the run is repeated at half the
    step and the final states must agree entrywise within ``config.convergence_tol``.
    """
    config = config or IntegrationConfig()
    rho0 = check_density_matrix(rho0)
    times = [check_time(t) for t in times]
    if any(b < a for a, b in zip(times, times[1:])):
        raise DomainError("times must be non-decreasing")
    if _boundary_population(rho0) > config.boundary_tolerance:
        raise HeadroomError(f"lindblad: initial state already populates the top levels of dim={rho0.shape[0]}")
    dt = config.step_for(params)
    states = _integrate(rho0, params, times, dt, config.boundary_tolerance)
    if config.check_convergence and times and times[-1] > 0:
        fine = _integrate(rho0, params, [times[-1]], dt / 2, config.boundary_tolerance)[-1]
        err = np.abs(fine - states[-1]).max()
        if err > config.convergence_tol:
            raise ConvergenceError(
                f"lindblad: halving dt={dt:g} changed the state by {err:.3e} > {config.convergence_tol:g}"
            )
    return [check_density_matrix(s, trace_tol=1e-9) for s in states]


def evolve(rho0, params: LaserParams, t: float, config: IntegrationConfig | None = None) -> np.ndarray:
    """State at time ``t`` starting from ``rho0``."""
    return evolve_series(rho0, params, [t], config)[-1]
