"""Tests for single-mode quantum observables."""

import numpy as np
import pytest
from pydantic import ValidationError

from xwave_quant.errors import DomainError
from xwave_quant.models.basis import XWaveSpectrum
from xwave_quant.models.field import VelocityCoefficients
from xwave_quant.models.quantum import GaussianModeState, ModeIndex, StateKind
from xwave_quant.tools.quantum import (
    coherent_expectations,
    fock_energy_density,
    hamiltonian_expectation,
    mode_frequency,
    oscillator_energy,
    quadratures,
)
from xwave_quant.tools.xwave import build_basis_config, energy_of_coefficients, eval_field

R_GRID = np.linspace(0.0, 2.0, 7)
ZETA_GRID = np.linspace(-1.0, 1.0, 9)


@pytest.fixture
def mode_basis():
    return build_basis_config(1.0, p_max=3, v_max=1.0, v_points=5)


def test_mode_frequency_is_independent_of_order(medium):
    assert mode_frequency(ModeIndex(p=0, v=0.4), medium) == pytest.approx(0.08)
    assert mode_frequency(ModeIndex(p=3, v=0.4), medium) == mode_frequency(ModeIndex(p=0, v=0.4), medium)


def test_coherent_energy_is_hbar_omega_alpha_squared(medium, natural, mode_basis):
    rng = np.random.default_rng(7)
    for _ in range(10):
        v = float(rng.uniform(-1.0, 1.0))
        alpha = complex(rng.normal(), rng.normal())
        state = GaussianModeState(kind=StateKind.COHERENT, mode=ModeIndex(p=1, v=v), alpha=alpha)
        result = coherent_expectations(state, mode_basis, medium, R_GRID, ZETA_GRID, natural)
        expected = natural.hbar * v * v / (2.0 * medium.omega2) * abs(alpha) ** 2
        assert result.energy == pytest.approx(expected, rel=1e-12)


def test_coherent_mean_field_follows_mode(medium, natural, mode_basis):
    mode = ModeIndex(p=0, v=0.5)
    state = GaussianModeState(kind=StateKind.COHERENT, mode=mode, alpha=2.0 - 1.0j)
    t = 3.0
    result = coherent_expectations(state, mode_basis, medium, R_GRID, ZETA_GRID, natural, t=t)
    frequency = mode_frequency(mode, medium)
    psi = eval_field(
        XWaveSpectrum(p=0, params=medium, delta=1.0), mode.v, R_GRID, ZETA_GRID - mode.v * t,
        rule=mode_basis.alpha_rule,
    )
    expected = np.sqrt(frequency) * (2.0 - 1.0j) * np.exp(-1j * frequency * t) * psi
    np.testing.assert_allclose(result.mean_field.values, expected, rtol=1e-12, atol=1e-15)
    assert result.mean_field.t == t


def test_fock_density_is_proportional_to_mode_intensity(medium, natural, mode_basis):
    mode = ModeIndex(p=2, v=-0.6)
    state = GaussianModeState(kind=StateKind.FOCK, mode=mode, n=3)
    density = fock_energy_density(state, mode_basis, medium, R_GRID, ZETA_GRID, natural)
    psi = eval_field(XWaveSpectrum(p=2, params=medium, delta=1.0), mode.v, R_GRID, ZETA_GRID, rule=mode_basis.alpha_rule)
    intensity = np.abs(psi) ** 2
    mask = intensity > 1e-12 * intensity.max()
    ratio = density.values.real[mask] / intensity[mask]
    np.testing.assert_allclose(ratio, 3.0 * mode_frequency(mode, medium), rtol=1e-12)


def test_empty_states_give_zero_fields(medium, natural, mode_basis):
    vacuum = GaussianModeState(kind=StateKind.FOCK, mode=ModeIndex(p=0, v=0.3), n=0)
    assert not np.any(fock_energy_density(vacuum, mode_basis, medium, R_GRID, ZETA_GRID, natural).values)

    coherent = GaussianModeState(kind=StateKind.COHERENT, mode=ModeIndex(p=0, v=0.3), alpha=0)
    result = coherent_expectations(coherent, mode_basis, medium, R_GRID, ZETA_GRID, natural)
    assert result.energy == 0.0
    assert result.mean_field.values.shape == (R_GRID.size, ZETA_GRID.size)
    assert not np.any(result.mean_field.values)


def test_state_kind_must_match_observable(medium, natural, mode_basis):
    fock = GaussianModeState(kind=StateKind.FOCK, mode=ModeIndex(p=0, v=0.3), n=1)
    with pytest.raises(DomainError):
        coherent_expectations(fock, mode_basis, medium, R_GRID, ZETA_GRID, natural)
    coherent = GaussianModeState(kind=StateKind.COHERENT, mode=ModeIndex(p=0, v=0.3), alpha=1.0)
    with pytest.raises(DomainError):
        fock_energy_density(coherent, mode_basis, medium, R_GRID, ZETA_GRID, natural)


def test_state_needs_its_parameter():
    with pytest.raises(ValidationError):
        GaussianModeState(kind=StateKind.FOCK, mode=ModeIndex(p=0, v=0.1))
    with pytest.raises(ValidationError):
        GaussianModeState(kind=StateKind.COHERENT, mode=ModeIndex(p=0, v=0.1))
    with pytest.raises(ValidationError):
        ModeIndex(p=-1, v=0.0)


def test_mean_occupation():
    mode = ModeIndex(p=0, v=0.1)
    assert GaussianModeState(kind=StateKind.FOCK, mode=mode, n=4).mean_occupation == 4.0
    assert GaussianModeState(kind=StateKind.COHERENT, mode=mode, alpha=3 + 4j).mean_occupation == pytest.approx(25.0)


def test_oscillator_energy_matches_coefficient_energy(medium):
    v = np.linspace(-1.0, 1.0, 21)
    g = np.exp(-(v**2))
    # the real part vanishes where the oscillator frequency does
    coeffs = np.vstack([(v + 1j) * g, (0.5 * v - 2j) * g])
    coefficients = VelocityCoefficients(v_grid=v, coeffs=coeffs)
    position, momentum = quadratures(coefficients, medium)
    assert np.isnan(position[:, 10]).all()
    assert oscillator_energy(position, momentum, v, medium) == pytest.approx(energy_of_coefficients(coefficients), rel=1e-12)


def test_hamiltonian_expectation(medium, natural):
    occupations = [(ModeIndex(p=0, v=0.2), 2.0), (ModeIndex(p=5, v=-0.4), 1.0)]
    assert hamiltonian_expectation(occupations, medium, natural) == pytest.approx(2 * 0.02 + 0.08)
    assert hamiltonian_expectation([], medium, natural) == 0.0
    with pytest.raises(DomainError):
        hamiltonian_expectation([(ModeIndex(p=0, v=0.2), -1.0)], medium, natural)
