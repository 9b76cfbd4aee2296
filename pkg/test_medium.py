"""Tests for medium parameters and quasi-particle relations."""

import math

import pytest
from pydantic import ValidationError

from xwave_quant.errors import DomainError
from xwave_quant.models.medium import Constants, MediumParams, UnitSystem
from xwave_quant.tools.medium import (
    effective_mass,
    group_velocity_mismatch,
    kinetic_energy,
    medium_params,
    vacuum_params,
    velocity_ratio_rho,
)


@pytest.mark.parametrize("omega", [0.1, 1.0, 2.5, 1e3])
def test_einstein_relation_natural_units(natural, omega):
    params = vacuum_params(omega, natural)
    assert params.k == pytest.approx(omega)
    assert params.omega1 == 1.0
    mass = effective_mass(params, natural)
    assert mass * natural.c**2 == pytest.approx(natural.hbar * omega, rel=1e-14)


def test_einstein_relation_si_units():
    constants = Constants.si()
    omega = 2.35e15
    params = vacuum_params(omega, constants)
    assert effective_mass(params, constants) * constants.c**2 == pytest.approx(constants.hbar * omega, rel=1e-14)


def test_natural_units_must_be_unity():
    with pytest.raises(ValidationError):
        Constants(hbar=2.0, c=1.0, unit_system=UnitSystem.NATURAL)


def test_vacuum_rejects_non_positive_frequency(natural):
    with pytest.raises(DomainError):
        vacuum_params(0.0, natural)


def test_medium_params_validation():
    assert medium_params(omega=1.0, k=2.0, omega1=0.5, omega2=0.1).n == 1.0
    with pytest.raises(DomainError):
        medium_params(omega=1.0, k=-2.0, omega1=0.5, omega2=0.1)
    with pytest.raises(DomainError):
        medium_params(omega=1.0, k=2.0, omega1=math.nan, omega2=0.1)


def test_transverse_scale(medium):
    assert medium.transverse_scale == pytest.approx(1.0 / math.sqrt(3.0))


def test_velocity_ratio_and_mismatch(opa_fields):
    field1, field2 = opa_fields
    assert velocity_ratio_rho(field1, field2) == pytest.approx(math.sqrt(0.5 / 1.9))
    assert velocity_ratio_rho(field1, field1) == 1.0
    assert group_velocity_mismatch(field1, field2) == pytest.approx(0.5)


def test_kinetic_energy(natural):
    params = MediumParams(omega=1.0, k=1.0, omega1=1.0, omega2=0.25)
    assert kinetic_energy(0.5, params, natural) == pytest.approx(0.5 * 4.0 * 0.25)
    assert kinetic_energy(0.0, params, natural) == 0.0
