"""Gain/loss laser channel on a truncated Fock space.

Three independent routes to the evolved state of a single cavity mode with
gain rate ``g`` and loss rate ``kappa``:

* :mod:`laserchannel.channel` -- analytic Kraus operators and the closed-form
  displaced-thermal state for coherent input,
* :mod:`laserchannel.observables` -- closed-form photon number and entropy,
* :mod:`laserchannel.lindblad` -- RK4 integration of the master equation,

plus :mod:`laserchannel.symplectic`, which derives the channel coefficients
from the normal ordering of the two-mode propagator and checks it against a
brute-force exponential.
"""

from .channel import (
    ChannelCoefficients,
    KrausSet,
    adaptive_kraus_set,
    apply_channel,
    coefficients,
    completeness_defect,
    kraus_set,
    rho_coherent_closed,
)
from .errors import (
    ConvergenceError,
    DegenerateChannelError,
    DomainError,
    HeadroomError,
    InvalidDimensionError,
    LaserChannelError,
    NoEquilibriumError,
    NumericalError,
    ShapeError,
    SingularBlockError,
    UndefinedRatioError,
)
from .fock import (
    annihilation,
    check_density_matrix,
    coherent_density,
    coherent_vector,
    creation,
    expectation,
    matrix_exponential,
    number_operator,
    thermal_density,
    von_neumann_entropy,
)
from .lindblad import IntegrationConfig, evolve, evolve_series, liouvillian_apply
from .observables import (
    Regime,
    RegimeKind,
    asymptotics,
    entropy_closed,
    entropy_log_form,
    equivalent_temperature,
    mean_photon_closed,
    recommended_dim,
    specific_entropy,
    thermal_entropy,
)
from .params import LaserParams
from .symplectic import (
    NormalOrderData,
    QuadraticForm,
    SymplecticBlocks,
    blocks_numeric,
    disentangled_propagator,
    eta_zero_vector,
    factorization_check,
    laser_blocks_closed,
    laser_gamma,
    normal_order_data,
    pi_matrix,
)

__version__ = "0.1.0"
