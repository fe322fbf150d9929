"""Closed-form photon number and entropy for a coherent input, and their t -> inf regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .channel import coefficients
from .errors import DomainError, NoEquilibriumError, UndefinedRatioError
from .params import LaserParams, check_time

__all__ = [
    "RegimeKind",
    "Regime",
    "mean_photon_closed",
    "thermal_occupation",
    "entropy_closed",
    "entropy_log_form",
    "thermal_entropy",
    "specific_entropy",
    "asymptotics",
    "equivalent_temperature",
    "recommended_dim",
]


def mean_photon_closed(z: complex, params: LaserParams, t: float) -> float:
    """Expected photon number ``<n>(t)`` for the initial coherent state ``|z>``.

    ``g (1 - e^{-2(kappa-g)t}) / (kappa - g) + |z|^2 e^{-2(kappa-g)t}``, or
    ``|z|^2 + 2 g t`` when the rates balance.
    """
    t = check_time(t)
    r2 = abs(complex(z)) ** 2
    if params.balanced:
        return r2 + 2.0 * params.g * t
    d = params.detuning
    growth = math.exp(-2.0 * d * t)
    # (1 - e^{-2dt}) / d without cancellation for small d t
    frac = -math.expm1(-2.0 * d * t) / d
    return params.g * frac + r2 * growth


def thermal_occupation(params: LaserParams, t: float) -> float:
    """``g T1 / T3``: mean occupation of the thermal part of the evolved state."""
    c = coefficients(params, t)
    return params.g * c.t1 / c.t3


def thermal_entropy(nbar: float) -> float:
    """Entropy of a Bose-Einstein state, ``(n+1) ln(n+1) - n ln n``."""
    if nbar < 0:
        raise DomainError(f"occupation must be non-negative, got {nbar!r}")
    if nbar == 0:
        return 0.0
    if nbar < 1.0:
        # 1/nbar may overflow for subnormal nbar
        return (nbar + 1.0) * math.log1p(nbar) - nbar * math.log(nbar)
    return math.log1p(nbar) + nbar * math.log1p(1.0 / nbar)


def entropy_closed(params: LaserParams, t: float) -> float:
    """Von Neumann entropy (units of ``k_B``) of the evolved coherent state.

    Independent of the initial amplitude: the state is a displaced thermal
    state, and displacement does not change the spectrum.
    """
    return thermal_entropy(thermal_occupation(params, t))


def entropy_log_form(params: LaserParams, t: float) -> float:
    """Same entropy written through the channel coefficients,
    ``-(ln T3 + g T1 ln(g T1) / (1 - g T1))``.
    """
    c = coefficients(params, t)
    q = params.g * c.t1
    if q == 0.0:
        return 0.0
    return -(math.log(c.t3) + q * math.log(q) / (1.0 - q))


def specific_entropy(z: complex, params: LaserParams, t: float) -> float:
    """Entropy per expected photon, ``S / <n>``."""
    n = mean_photon_closed(z, params, t)
    if n <= 0.0:
        raise UndefinedRatioError("specific entropy undefined: expected photon number is zero")
    return entropy_closed(params, t) / n


class RegimeKind(str, Enum):
    DAMPING_DOMINATED = "damping_dominated"
    BALANCED = "balanced"
    GAIN_DOMINATED = "gain_dominated"


@dataclass(frozen=True)
class Regime:
    """Large-time behaviour of ``<n>`` and ``S``.

    ``photon`` and ``entropy`` hold the shape (``"constant"``, ``"linear"``,
    ``"logarithmic"``, ``"exponential"``) plus its coefficients:

    * constant: ``value``
    * linear: ``slope``, ``intercept`` (value ``intercept + slope t``)
    * logarithmic: ``offset``, ``scale`` (value ``offset + ln(scale t)``)
    * exponential: ``prefactor``, ``rate`` (value ``prefactor e^{rate t}``)
    """

    kind: RegimeKind
    n_asymptote: float | None
    photon: dict = field(default_factory=dict)
    entropy: dict = field(default_factory=dict)

    def photon_number(self, t: float) -> float:
        return _evaluate(self.photon, t)

    def entropy_value(self, t: float) -> float:
        return _evaluate(self.entropy, t)


def _evaluate(form, t):
    shape = form["shape"]
    if shape == "constant":
        return form["value"]
    if shape == "linear":
        return form["intercept"] + form["slope"] * t
    if shape == "logarithmic":
        return form["offset"] + math.log(form["scale"] * t)
    if shape == "exponential":
        return form["prefactor"] * math.exp(form["rate"] * t)
    raise ValueError(shape)


def asymptotics(z: complex, params: LaserParams) -> Regime:
    g, kappa = params.g, params.kappa
    r2 = abs(complex(z)) ** 2
    if g == 0.0 and kappa == 0.0:
        # no dynamics at all
        return Regime(RegimeKind.BALANCED, r2, {"shape": "constant", "value": r2},
                      {"shape": "constant", "value": 0.0})
    if params.balanced:
        return Regime(
            RegimeKind.BALANCED,
            None,
            {"shape": "linear", "slope": 2.0 * g, "intercept": r2},
            {"shape": "logarithmic", "offset": 1.0, "scale": 2.0 * g},
        )
    if kappa > g:
        nbar = g / (kappa - g)
        s_inf = math.log(kappa / (kappa - g)) + (nbar * math.log(kappa / g) if g > 0 else 0.0)
        return Regime(
            RegimeKind.DAMPING_DOMINATED,
            nbar,
            {"shape": "constant", "value": nbar},
            {"shape": "constant", "value": s_inf},
        )
    rate = 2.0 * (g - kappa)
    return Regime(
        RegimeKind.GAIN_DOMINATED,
        None,
        {"shape": "exponential", "prefactor": g / (g - kappa) + r2, "rate": rate},
        {"shape": "linear", "slope": rate, "intercept": 1.0 + math.log(g / (g - kappa))},
    )


def equivalent_temperature(params: LaserParams, hbar_omega_over_kb: float = 1.0) -> float:
    """Temperature whose Bose-Einstein occupancy equals the steady state ``g / (kappa - g)``.

    ``T = (hbar omega / k_B) / ln(kappa / g)``, returned in the units of
    ``hbar_omega_over_kb``. Only defined when loss beats gain.
    """
    g, kappa = params.g, params.kappa
    if not kappa > g > 0 or params.balanced:
        raise NoEquilibriumError(f"no thermal steady state for g={g}, kappa={kappa} (needs kappa > g > 0)")
    return hbar_omega_over_kb / math.log(kappa / g)


def recommended_dim(z: complex, params: LaserParams, t: float, minimum: int = 0) -> int:
    """Working dimension ``ceil(4 <n>(t) + 20)`` (at least ``minimum``)."""
    return max(minimum, math.ceil(4.0 * mean_photon_closed(z, params, t) + 20.0))
