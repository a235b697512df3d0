import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ursa.bounds import RelationKind, c_prime_opt, check
from ursa.errors import MaximallyMixedState, NotFaithful, ZeroScale
from ursa.linalg import SIGMA_X, SIGMA_Y, DensityMatrix
from ursa.sampling import SeededRng, haar_unitary, random_density, random_observable
from ursa.witness import extremal_pair, minimize_ratio, tightness_residual, uncertainty_ratio

seeds = st.integers(min_value=0, max_value=2 ** 32)


def test_qubit_pair_is_pauli_x_y(qubit_quarter):
    pair = extremal_pair(qubit_quarter)
    np.testing.assert_allclose(pair.A.matrix, SIGMA_X, atol=1e-15)
    np.testing.assert_allclose(pair.B.matrix, SIGMA_Y, atol=1e-15)
    rep = check(RelationKind.GENERALIZED_ROBERTSON, qubit_quarter, pair.A, pair.B)
    assert rep.lhs == pytest.approx(1.0, abs=1e-15)
    assert rep.rhs == pytest.approx(1.0, abs=1e-15)


def test_qutrit_with_scales():
    rho = DensityMatrix(np.diag([1 / 6, 1 / 3, 1 / 2]))
    pair = extremal_pair(rho, 2.0, 3.0)
    # V(A) = a^2 (l1 + ld), V(B) = b^2 (l1 + ld), |<[A,B]>|^2 = 4 a^2 b^2 (ld - l1)^2
    rep = check(RelationKind.GENERALIZED_ROBERTSON, rho, pair.A, pair.B)
    assert rep.lhs == pytest.approx(36 * (2 / 3) ** 2, rel=1e-14)
    assert tightness_residual(rho, 2.0, 3.0) <= 1e-10 * max(1, rep.lhs)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 8), st.floats(0.1, 10), st.floats(-10, -0.1))
def test_equality_on_random_spectra(seed, d, a, b):
    rho = random_density(SeededRng(seed), d)
    pair = extremal_pair(rho, a, b)
    lhs = check(RelationKind.GENERALIZED_ROBERTSON, rho, pair.A, pair.B).lhs
    assert tightness_residual(rho, a, b) <= 1e-10 * max(1.0, lhs)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 6))
def test_ratio_of_pair_equals_coefficient_in_any_basis(seed, d):
    rng = SeededRng(seed)
    rho = random_density(rng, d)
    u = haar_unitary(rng, d)
    moved = DensityMatrix(u @ rho.matrix @ u.conj().T)
    p0, p1 = extremal_pair(rho), extremal_pair(moved)
    r0 = uncertainty_ratio(rho, p0.A.matrix, p0.B.matrix)
    r1 = uncertainty_ratio(moved, p1.A.matrix, p1.B.matrix)
    assert r0 == pytest.approx(c_prime_opt(rho), rel=1e-10)
    assert r1 == pytest.approx(r0, rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 5))
def test_ratio_never_beats_coefficient(seed, d):
    rng = SeededRng(seed)
    rho = random_density(rng, d)
    a, b = random_observable(rng, d).matrix, random_observable(rng, d).matrix
    assert uncertainty_ratio(rho, a, b) >= c_prime_opt(rho) * (1 - 1e-9)


def test_ratio_infinite_for_commuting_pair(qubit_quarter):
    assert uncertainty_ratio(qubit_quarter, SIGMA_X, SIGMA_X) == float("inf")


def test_pair_rejections():
    with pytest.raises(MaximallyMixedState):
        extremal_pair(DensityMatrix.maximally_mixed(3))
    with pytest.raises(ZeroScale):
        extremal_pair(np.diag([0.25, 0.75]), 0.0, 1.0)
    with pytest.raises(MaximallyMixedState):
        minimize_ratio(DensityMatrix.maximally_mixed(2))
    with pytest.raises(NotFaithful):
        minimize_ratio(np.diag([0.0, 1.0]))


@pytest.mark.parametrize("spec, expected", [
    ((0.25, 0.75), 1.0),
    ((1 / 6, 1 / 3, 1 / 2), 1.0),
    ((0.05, 0.15, 0.8), 0.85 ** 2 / (4 * 0.75 ** 2)),
])
def test_search_finds_coefficient(spec, expected):
    res = minimize_ratio(np.diag(spec), restarts=8, seed=3)
    assert res.c_prime_opt == pytest.approx(expected, rel=1e-14)
    assert res.converged
    assert abs(res.difference) <= 1e-6
    assert res.best_ratio >= expected * (1 - 1e-9)
    assert uncertainty_ratio(np.diag(spec), res.best_A.matrix, res.best_B.matrix) == res.best_ratio
    assert res.restarts == 8 and res.evaluations > 0


def test_search_is_deterministic():
    rho = random_density(SeededRng(5), 3)
    r0 = minimize_ratio(rho, restarts=4, seed=11)
    r1 = minimize_ratio(rho, restarts=4, seed=11)
    assert r0.best_ratio == r1.best_ratio
    np.testing.assert_array_equal(r0.best_A.matrix, r1.best_A.matrix)
