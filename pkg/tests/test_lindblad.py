import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laserchannel import (
    ConvergenceError,
    DomainError,
    HeadroomError,
    IntegrationConfig,
    LaserParams,
    ShapeError,
    annihilation,
    coherent_density,
    evolve,
    evolve_series,
    liouvillian_apply,
    mean_photon_closed,
    rho_coherent_closed,
    thermal_density,
)


def _dense_rhs(rho, g, kappa):
    # literal master equation with full (untruncated-looking) dense products
    a = annihilation(rho.shape[0])
    ad = a.conj().T
    return (g * (2 * ad @ rho @ a - a @ ad @ rho - rho @ a @ ad)
            + kappa * (2 * a @ rho @ ad - ad @ a @ rho - rho @ ad @ a))


def test_vacuum_fixed_under_damping():
    vac = coherent_density(0, 8)
    assert not liouvillian_apply(vac, LaserParams(0, 1)).any()


def test_vacuum_gain():
    vac = coherent_density(0, 8)
    expected = np.zeros((8, 8))
    expected[0, 0], expected[1, 1] = -2, 2
    np.testing.assert_allclose(liouvillian_apply(vac, LaserParams(1, 0)), expected, atol=0)


def test_rhs_matches_dense_below_top_level():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    rho = x @ x.conj().T
    rho /= np.trace(rho)
    lhs = liouvillian_apply(rho, LaserParams(0.7, 1.3))
    rhs = _dense_rhs(rho, 0.7, 1.3)
    np.testing.assert_allclose(lhs[:11, :11], rhs[:11, :11], atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 3), st.floats(0, 3), st.floats(0.05, 3))
def test_rate_equation(g, kappa, nbar):
    dim = 400
    rho = thermal_density(nbar, dim)
    drho = liouvillian_apply(rho, LaserParams(g, kappa))
    dn = np.sum(np.diag(drho).real * np.arange(dim))
    n = np.sum(np.diag(rho).real * np.arange(dim))
    assert dn == pytest.approx(2 * g * (n + 1) - 2 * kappa * n, abs=1e-9)


def test_generator_trace_free():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    rho = x @ x.conj().T
    rho /= np.trace(rho)
    assert abs(np.trace(liouvillian_apply(rho, LaserParams(1.2, 0.4)))) <= 1e-12


def test_shape_error():
    with pytest.raises(ShapeError):
        liouvillian_apply(np.zeros((2, 3)), LaserParams(1, 1))


def test_evolve_t0():
    rho0 = coherent_density(1 + 1j, 20)
    np.testing.assert_array_equal(evolve(rho0, LaserParams(1, 1), 0.0), rho0)


def test_pure_damping_stays_coherent():
    out = evolve(coherent_density(1, 32), LaserParams(0, 1), 0.5)
    np.testing.assert_allclose(out, coherent_density(math.exp(-0.5), 32), atol=1e-8)


def test_photon_number_against_closed_form():
    p, t = LaserParams(0.5, 1), 0.4
    rho = evolve(coherent_density(2, 64), p, t)
    n = np.sum(np.diag(rho).real * np.arange(64))
    assert abs(n - mean_photon_closed(2, p, t)) <= 1e-7


@pytest.mark.parametrize("g,kappa", [(0.5, 1), (1, 1), (2, 1)])
def test_series_trace_and_hermiticity(g, kappa):
    p = LaserParams(g, kappa)
    states = evolve_series(coherent_density(2, 96), p, [0.1, 0.2, 0.3])
    for rho in states:
        assert abs(np.trace(rho).real - 1) <= 1e-9
        assert np.array_equal(rho, rho.conj().T)
    np.testing.assert_allclose(states[-1], rho_coherent_closed(2, p, 0.3, 96), atol=1e-9)


def test_fourth_order_convergence():
    p, t = LaserParams(1, 1), 0.2
    rho0 = coherent_density(1, 48)
    exact = rho_coherent_closed(1, p, t, 48)
    errs = []
    for dt in (0.02, 0.01):
        cfg = IntegrationConfig(dt=dt, check_convergence=False)
        errs.append(np.abs(evolve(rho0, p, t, cfg) - exact).max())
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.15)


def test_convergence_gate():
    rho0 = coherent_density(1, 48)
    with pytest.raises(ConvergenceError):
        evolve(rho0, LaserParams(1, 1), 0.2, IntegrationConfig(dt=0.05))


def test_headroom_error_names_step():
    with pytest.raises(HeadroomError, match="step"):
        evolve(coherent_density(0, 6), LaserParams(2, 0), 1.0)


def test_bad_inputs():
    with pytest.raises(DomainError):
        IntegrationConfig(dt=0)
    with pytest.raises(DomainError):
        IntegrationConfig(boundary_tolerance=1.5)
    with pytest.raises(DomainError):
        evolve(coherent_density(0, 8), LaserParams(1, 1), -0.1)
    with pytest.raises(DomainError):
        evolve_series(coherent_density(0, 8), LaserParams(1, 1), [0.2, 0.1])
