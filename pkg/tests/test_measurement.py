import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ursa.bounds import MAXIMALLY_MIXED
from ursa.errors import DimMismatch, ValidationError
from ursa.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix, kron
from ursa.measurement import (
    MeasurementModel,
    cnot_model,
    cnot_unitary,
    disturbance,
    error,
    evaluate,
    generalized_coefficient,
    noise_operator,
    random_commuting_meters,
    random_model,
    unbiasedness_defect,
)
from ursa.sampling import SeededRng, random_density

I2 = np.eye(2)


def test_cnot_noise_operator(qubit_quarter):
    m = cnot_model(qubit_quarter)
    np.testing.assert_allclose(noise_operator(m, "A").matrix, kron(SIGMA_Z, SIGMA_Z - I2), atol=1e-15)
    np.testing.assert_allclose(noise_operator(m, "B").matrix, -kron(SIGMA_X, I2), atol=1e-15)


@pytest.mark.parametrize("rho", [np.diag([0.25, 0.75]), np.diag([1.0, 0.0]), (I2 + 0.3 * SIGMA_Y) / 2])
def test_cnot_error_and_disturbance(rho):
    m = cnot_model(rho)
    assert error(m, "A") == 0.0
    # (X (x) (X - I))^2 = I (x) (2I - 2X), and <0|X|0> = 0
    assert abs(disturbance(m) - np.sqrt(2)) <= 1e-12
    assert error(m, "B") == pytest.approx(1.0, abs=1e-15)
    assert unbiasedness_defect(m, "A") == pytest.approx(0.0, abs=1e-15)
    assert unbiasedness_defect(m, "B") == pytest.approx(1.0, abs=1e-15)


def test_cnot_report():
    rep = evaluate(cnot_model(np.diag([0.25, 0.75])))
    assert rep.coeff_generalized == 0.5
    assert rep.rhs_generalized == rep.rhs_classical
    assert rep.ozawa1_holds and rep.ozawa2_holds
    assert not rep.ag_assumption_met and not rep.theorem_violated
    assert rep.to_dict()["eta_B"] == rep.eta_B


@pytest.mark.parametrize("sys, app, expected", [
    ((0.25, 0.75), (0.0, 1.0), 0.5),
    ((0.25, 0.75), (0.25, 0.75), 5 / 8),
    ((0.1, 0.9), (0.5, 0.5), (0.45 + 0.05) / (2 * 0.4)),
])
def test_generalized_coefficient_values(sys, app, expected):
    assert generalized_coefficient(sys, app) == pytest.approx(expected, abs=1e-12)


def test_generalized_coefficient_exact_cases():
    assert generalized_coefficient((0.25, 0.75), (0.0, 1.0)) == 0.5
    assert abs(generalized_coefficient((0.25, 0.75), (0.25, 0.75)) - 5 / 8) <= 1e-12
    assert generalized_coefficient((0.5, 0.5), (0.5, 0.5)) is MAXIMALLY_MIXED


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(2, 4), st.integers(2, 4))
def test_coefficient_symmetric_and_matches_joint_spectrum(seed, d1, d2):
    rng = SeededRng(seed)
    s, t = random_density(rng, d1), random_density(rng, d2)
    c = generalized_coefficient(s, t)
    assert c == generalized_coefficient(t, s)
    joint = np.linalg.eigvalsh(kron(s.matrix, t.matrix))
    hi, lo = joint[-1], max(joint[0], 0.0)
    assert c == pytest.approx((hi + lo) / (2 * (hi - lo)), rel=1e-9)
    assert c >= 0.5


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_pure_apparatus_matches_classical_exactly(seed):
    rep = evaluate(random_model(SeededRng(seed), app_spectrum=(0.0, 1.0)))
    assert rep.coeff_generalized == 0.5
    assert rep.rhs_generalized == rep.rhs_classical


def test_random_models_obey_ozawa():
    for k in range(200):
        rep = evaluate(random_model(SeededRng(31, k)))
        assert rep.ozawa1_generalized_holds and rep.ozawa2_generalized_holds, k
        assert rep.ozawa1_holds and rep.ozawa2_holds, k
        assert rep.rhs_generalized >= rep.rhs_classical
        assert not rep.theorem_violated


def test_random_meters_commute(rng):
    a, b = random_commuting_meters(rng, 3)
    np.testing.assert_allclose(a.matrix @ b.matrix, b.matrix @ a.matrix, atol=1e-10)


def test_model_validation():
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    with pytest.raises(ValidationError, match="unitarity"):
        MeasurementModel(rho, rho, 2 * np.eye(4), SIGMA_Z, SIGMA_X, SIGMA_Z, I2)
    with pytest.raises(ValidationError, match="commute"):
        MeasurementModel(rho, rho, cnot_unitary(), SIGMA_Z, SIGMA_X, SIGMA_Z, SIGMA_X)
    with pytest.raises(DimMismatch):
        MeasurementModel(rho, rho, np.eye(8), SIGMA_Z, SIGMA_X, SIGMA_Z, I2)
    with pytest.raises(DimMismatch):
        MeasurementModel(rho, rho, cnot_unitary(), np.eye(3), SIGMA_X, SIGMA_Z, I2)
    with pytest.raises(ValueError):
        error(cnot_model(rho), "C")
