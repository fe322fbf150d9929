"""Cross-validation suite run by ``laserchannel verify``.

Each check reduces to one number (a max deviation) compared against a
tolerance. The ``strict`` profile divides every tolerance by ten.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .channel import adaptive_kraus_set, apply_channel, coefficients, kraus_set, rho_coherent_closed
from .fock import coherent_density, expectation, number_operator, von_neumann_entropy
from .lindblad import evolve
from .observables import asymptotics, entropy_closed, entropy_log_form, mean_photon_closed
from .params import LaserParams
from .symplectic import (
    J2,
    QuadraticForm,
    blocks_numeric,
    factorization_check,
    laser_blocks_closed,
    laser_gamma,
    normal_order_data,
)

PROFILES = {"default": 1.0, "strict": 0.1}

RATE_GRID = [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0)]
AMPLITUDES = [0.0, 2.0]
TIMES = [0.1, 0.3]
# dim per gain: the gain ladder needs more room than the photon number suggests
STATE_DIM = {0.5: 64, 1.0: 64, 2.0: 96}
FACTORIZATION_POINTS = [(0.5, 1, 0.3), (1, 1, 0.2), (1, 0.5, 0.1), (2, 1, 0.1), (0, 1, 0.5),
                        (1, 0, 0.1), (0.5, 2, 0.3), (2, 2, 0.1), (1, 1, 0.3), (2, 1, 0.2)]


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<40s} max_dev={self.deviation:.3e}  tol={self.tolerance:.1e}"


def _symplectic_relations():
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(20):
            x = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
            x = x + x.T
            x *= 2.0 * rng.uniform() / np.linalg.norm(x, 2)
            residuals = blocks_numeric(QuadraticForm(n, x)).relation_residuals()
            worst = max(worst, max(residuals.values()))
    return worst


def _closed_blocks():
    worst = 0.0
    for g in (0, 0.5, 1, 2):
        for kappa in (0, 0.5, 1, 2):
            for t in (0, 0.1, 0.5, 1):
                p = LaserParams(g, kappa)
                diff = blocks_numeric(laser_gamma(p, t)).matrix() - laser_blocks_closed(p, t).matrix()
                worst = max(worst, np.abs(diff).max())
    return worst


def _normal_order_vs_coefficients():
    worst = 0.0
    for g, kappa, t in [(1, 2, 0.4), (0.5, 1, 0.3), (2, 1, 0.2), (1, 1, 0.5)]:
        p = LaserParams(g, kappa)
        c = coefficients(p, t)
        data = normal_order_data(laser_blocks_closed(p, t))
        scalar = math.exp(p.detuning * t) * data.prefactor
        worst = max(worst,
                    np.abs(data.pair_creation - g * c.t1 * J2).max(),
                    np.abs(data.pair_annihilation - kappa * c.t1 * J2).max(),
                    np.abs(data.log_middle - math.log(c.t2) * np.eye(2)).max(),
                    abs(scalar - c.t3))
    return worst


def _factorization():
    return max(factorization_check(LaserParams(g, k), t, 32) for g, k, t in FACTORIZATION_POINTS)


def _completeness():
    ks = adaptive_kraus_set(LaserParams(0.5, 1.0), 0.5, 32, probe_dim=8)
    return float(np.abs(ks.completeness_diagonal()[:8] - 1).max())


class _States:
    """Kraus, closed-form and RK4 states on the shared grid, computed once."""

    def __init__(self):
        self.rows = []
        for g, kappa in RATE_GRID:
            p = LaserParams(g, kappa)
            dim = STATE_DIM[g]
            for z in AMPLITUDES:
                rho0 = coherent_density(z, dim)
                for t in TIMES:
                    self.rows.append({
                        "params": p, "z": z, "t": t, "dim": dim,
                        "kraus": apply_channel(kraus_set(p, t, dim), rho0),
                        "closed": rho_coherent_closed(z, p, t, dim),
                        "single": rho_coherent_closed(z, p, t, dim, path="single"),
                        "lindblad": evolve(rho0, p, t),
                    })


def _three_way(states):
    worst = 0.0
    for r in states.rows:
        k, c, l_ = r["kraus"], r["closed"], r["lindblad"]
        worst = max(worst, np.abs(k - c).max(), np.abs(k - l_).max(), np.abs(c - l_).max())
    return worst


def _photon_law(states):
    worst = 0.0
    for r in states.rows:
        n = expectation(r["lindblad"], number_operator(r["dim"])).real
        exact = mean_photon_closed(r["z"], r["params"], r["t"])
        worst = max(worst, abs(n - exact) / max(exact, 1e-300))
    return worst


def _entropy_law(states):
    return max(abs(von_neumann_entropy(r["kraus"]) - entropy_closed(r["params"], r["t"])) for r in states.rows)


def _bch(states):
    return max(np.abs(r["closed"] - r["single"]).max() for r in states.rows)


def _trace(states):
    return max(abs(np.trace(r[key]).real - 1) for r in states.rows for key in ("kraus", "lindblad"))


def _z_independence():
    p, t, dim = LaserParams(0.5, 1.0), 0.3, 64
    ks = kraus_set(p, t, dim)
    s = [von_neumann_entropy(apply_channel(ks, coherent_density(z, dim))) for z in (0.0, 1.0, 2.0)]
    return max(s) - min(s)


def _entropy_forms():
    rng = np.random.default_rng(7)
    worst = 0.0
    for g, kappa, t in rng.uniform([0, 0, 0], [3, 3, 2], size=(2000, 3)):
        p = LaserParams(g, kappa)
        worst = max(worst, abs(entropy_closed(p, t) - entropy_log_form(p, t)))
    return worst


def _pure_damping():
    p, dim = LaserParams(0.0, 1.0), 32
    rho0 = coherent_density(1.0, dim)
    target = coherent_density(math.exp(-0.5), dim)
    rho_k = apply_channel(kraus_set(p, 0.5, dim), rho0)
    rho_l = evolve(rho0, p, 0.5)
    return max(np.abs(rho_k - target).max(), np.abs(rho_l - target).max())


def _asymptotes():
    damp = LaserParams(0.5, 1.0)
    gain = LaserParams(2.0, 1.0)
    bal = LaserParams(1.0, 1.0)
    slope = (entropy_closed(gain, 8) - entropy_closed(gain, 6)) / 2
    return {
        "damping: <n>(20) -> g/(kappa-g)": (abs(mean_photon_closed(4, damp, 20) - 1.0), 1e-3),
        "damping: S(20) -> constant": (abs(entropy_closed(damp, 20) - asymptotics(4, damp).entropy_value(20)), 1e-3),
        "gain: entropy slope / 2(g-kappa)": (abs(slope / asymptotics(4, gain).entropy["slope"] - 1), 1e-2),
        "balanced: S - (1 + ln 2gt) at t=1e4": (abs(entropy_closed(bal, 1e4) - asymptotics(4, bal).entropy_value(1e4)), 1e-2),
    }


def run_checks(profile: str = "default", progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    """Run every check; ``progress`` is called with each result as it completes."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    scale = PROFILES[profile]
    results = []

    def record(name, value, tol):
        res = CheckResult(name, float(value), tol * scale)
        results.append(res)
        if progress:
            progress(res)

    record("symplectic block identities", _symplectic_relations(), 1e-10)
    record("closed vs numeric exp(Gamma Pi)", _closed_blocks(), 1e-9)
    record("normal order data vs T1,T2,T3", _normal_order_vs_coefficients(), 1e-10)
    record("disentangled propagator (dim 32)", _factorization(), 1e-8)
    record("Kraus completeness", _completeness(), 1e-8)
    states = _States()
    record("trace preservation", _trace(states), 1e-8)
    record("three-way state equivalence", _three_way(states), 1e-7)
    record("triple vs single exponential", _bch(states), 1e-9)
    record("photon number law (relative)", _photon_law(states), 1e-6)
    record("entropy law", _entropy_law(states), 1e-6)
    record("entropy independent of z", _z_independence(), 1e-7)
    record("entropy log form vs thermal form", _entropy_forms(), 1e-12)
    record("pure damping keeps coherence", _pure_damping(), 1e-8)
    for name, (value, tol) in _asymptotes().items():
        record(name, value, tol)
    return results
