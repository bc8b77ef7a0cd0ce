import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import CLOSED_P, CLOSED_QN, physics_params, quantum_numbers
from dkposc import nu
from dkposc.params import PhysicsParams, QuantumNumbers


def test_c11_for_pure_oscillator():
    c = nu.nu_coefficients(3.7, QuantumNumbers(0, 1), PhysicsParams(M=1.0, omega=1.0, A=1.0, Omega=0.0))
    assert c.c11 == 1.0


def test_c12_example():
    c = nu.nu_coefficients(2.0, QuantumNumbers(0, 1), PhysicsParams(alpha=1.0, B=0.0))
    assert c.c12 == pytest.approx(0.75, abs=1e-15)


@given(physics_params(flux=False), quantum_numbers(), st.floats(-10, 10))
def test_lambda3_is_four_zeta2(p, qn, E):
    c = nu.nu_coefficients(E, qn, p)
    assert c.lambda3 == 4 * c.zeta2


@given(physics_params(), quantum_numbers(), st.floats(-10, 10))
def test_nu_constant_identities(p, qn, E):
    c = nu.nu_coefficients(E, qn, p)
    assert c.zeta1 >= 0
    assert c.c10 - 2 * c.c12 == pytest.approx(0.5, abs=1e-13)
    assert c.c13 == -c.c11 / 2
    assert (c.c2, c.c3, c.c5) == (0.0, 0.0, 0.0)


@given(physics_params(), quantum_numbers(), st.floats(-10, 10))
def test_parametric_condition_is_quarter_residual(p, qn, E):
    c = nu.nu_coefficients(E, qn, p)
    g = nu.quantization_residual(E, qn, p)
    assert nu.parametric_energy_condition(c, qn.n) == pytest.approx(g / 4, abs=1e-12 * max(1.0, abs(g)))


def test_quantization_residual_examples():
    assert nu.quantization_residual(2.0, CLOSED_QN, CLOSED_P) == 0.0
    assert nu.quantization_residual(0.0, CLOSED_QN, CLOSED_P) == 4.0


@given(physics_params(flux=False), quantum_numbers(), st.floats(-20, 20))
def test_flux_zero_bit_identical(p, qn, E):
    assert nu.quantization_residual(E, qn, p) == nu.quantization_residual_no_flux(E, qn, p)


def test_quantization_residual_vectorizes():
    E = np.linspace(-5, 5, 11)
    g = nu.quantization_residual(E, CLOSED_QN, CLOSED_P)
    assert g.shape == E.shape
    assert g[7] == nu.quantization_residual(2.0, CLOSED_QN, CLOSED_P)


@pytest.mark.parametrize("qn,p,expected", [
    (QuantumNumbers(0, 1), PhysicsParams(B=1.0), math.sqrt(2)),
    (QuantumNumbers(0, 1), PhysicsParams(B=0.0, phi=1.0), 0.0),
    (QuantumNumbers(0, 2), PhysicsParams(B=0.0, phi=0.5, alpha=0.5), 3.0),
])
def test_eigenfunction_exponent(qn, p, expected):
    assert nu.eigenfunction_exponent(qn, p) == pytest.approx(expected, abs=1e-15)


@given(physics_params(), quantum_numbers(), st.floats(-10, 10))
def test_eigenfunction_parameters(p, qn, E):
    exponent, scale = nu.eigenfunction_parameters(E, qn, p)
    assert exponent == pytest.approx(nu.eigenfunction_exponent(qn, p), abs=1e-12)
    assert scale == pytest.approx(math.sqrt(p.M**2 * p.omega**2 * p.A**2 + E**2 * p.Omega**2), rel=1e-14)


@given(physics_params(), quantum_numbers(), st.floats(-10, 10))
def test_overlapping_constants(p, qn, E):
    c = nu.nu_coefficients(E, qn, p)
    assert (c.c1, c.c4) == (0.5, 0.5)
    assert c.c6 == c.zeta1 == c.c9 and c.c7 == -c.zeta2
    assert c.c11 == 2 * math.sqrt(c.zeta1) and c.c13 == -math.sqrt(c.zeta1)
    assert c.c8 == pytest.approx(c.zeta3 + 1 / 16, abs=1e-14 * max(1.0, abs(c.zeta3)))


@given(physics_params(flux=False), quantum_numbers(), st.floats(-20, 20))
def test_residual_even_under_energy_and_m_reversal(p, qn, E):
    flipped = QuantumNumbers(qn.n, -qn.m)
    assert nu.quantization_residual(E, qn, p) == nu.quantization_residual(-E, flipped, p)


@given(physics_params(), quantum_numbers())
def test_flux_exponent_is_shifted_exponent(p, qn):
    radicand = (p.M**2 * p.omega**2 * p.B**2 + qn.m**2 / p.alpha**2 - 2 * p.phi * qn.m / p.alpha**2
                + p.phi**2 / p.alpha**2)
    assert nu.eigenfunction_exponent(qn, p) == pytest.approx(math.sqrt(max(radicand, 0.0)), abs=1e-7)
