import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ursa.config import DEFAULT_TOL
from ursa.errors import DimMismatch, ValidationError
from ursa.linalg import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    HermitianObservable,
    Spectrum,
    anticommutator,
    commutator,
    covariance,
    expectation,
    hermitian_eigen,
    jacobi_eigh,
    kron,
    operator_norm,
    partial_trace_second,
    rho_norm_sq,
    unitarity_defect,
    variance,
)
from ursa.sampling import SeededRng, haar_unitary, random_density, random_observable

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2 ** 32)


@given(finite, finite, finite, finite)
def test_eigen_2x2_matches_closed_form(a, d, br, bi):
    h = np.array([[a, br + 1j * bi], [br - 1j * bi, d]])
    mid, rad = (a + d) / 2, np.hypot((a - d) / 2, np.hypot(br, bi))
    for method in ("lapack", "jacobi"):
        w, v = hermitian_eigen(h, method)
        np.testing.assert_allclose(w, [mid - rad, mid + rad], atol=1e-12 * max(1, abs(mid) + rad))
        np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 8))
def test_jacobi_agrees_with_lapack(seed, d):
    h = random_observable(SeededRng(seed), d).matrix
    w, v = jacobi_eigh(h)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose(h @ v, v * w, atol=1e-11)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-12)


def test_jacobi_handles_degenerate_and_diagonal():
    w, v = jacobi_eigh(np.diag([3.0, 1.0, 1.0]))
    np.testing.assert_array_equal(w, [1.0, 1.0, 3.0])
    w, _ = jacobi_eigh(np.eye(4))
    np.testing.assert_array_equal(w, np.ones(4))


def test_unknown_eigen_method():
    with pytest.raises(ValueError):
        hermitian_eigen(np.eye(2), "qr")


def test_pauli_algebra():
    np.testing.assert_allclose(commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
    np.testing.assert_allclose(anticommutator(SIGMA_X, SIGMA_Y), np.zeros((2, 2)))
    np.testing.assert_allclose(anticommutator(SIGMA_Z, SIGMA_Z), 2 * np.eye(2))


def test_qubit_statistics(qubit_quarter):
    # <Z> = 1/4 - 3/4 = -1/2, Var Z = 1 - 1/4
    assert expectation(SIGMA_Z, qubit_quarter) == pytest.approx(-0.5, abs=1e-15)
    assert variance(SIGMA_Z, qubit_quarter) == pytest.approx(0.75, abs=1e-15)
    assert variance(SIGMA_X, qubit_quarter) == pytest.approx(1.0, abs=1e-15)
    assert covariance(SIGMA_X, SIGMA_Y, qubit_quarter) == pytest.approx(0.0, abs=1e-15)
    # [X, Y] = 2i Z, so ||[X,Y]||_rho^2 = Tr(rho 4 I) = 4
    assert rho_norm_sq(commutator(SIGMA_X, SIGMA_Y), qubit_quarter) == pytest.approx(4.0, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6))
def test_functionals_match_direct_traces(seed, d):
    rng = SeededRng(seed)
    rho = random_density(rng, d)
    a, b = random_observable(rng, d).matrix, random_observable(rng, d).matrix
    r = rho.matrix
    ea, eb = np.trace(r @ a).real, np.trace(r @ b).real
    assert expectation(a, rho) == pytest.approx(ea, abs=1e-12)
    assert variance(a, rho) == pytest.approx(np.trace(r @ a @ a).real - ea ** 2, abs=1e-11)
    cov = 0.5 * np.trace(r @ (a @ b + b @ a)).real - ea * eb
    assert covariance(a, b, rho) == pytest.approx(cov, abs=1e-11)
    x = a + 1j * b
    assert rho_norm_sq(x, rho) == pytest.approx(np.trace(r @ x.conj().T @ x).real, abs=1e-11)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 6), st.floats(-5, 5))
def test_variance_shift_invariant_and_covariance_diagonal(seed, d, shift):
    rng = SeededRng(seed)
    rho = random_density(rng, d)
    a = random_observable(rng, d).matrix
    v = variance(a, rho)
    assert v >= 0
    assert variance(a + shift * np.eye(d), rho) == pytest.approx(v, abs=1e-10)
    assert covariance(a, a, rho) == v


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 6))
def test_zero_diagonal_norm_in_eigenbasis(seed, d):
    # for X with zero diagonal in rho's eigenbasis, ||X||_rho^2 = sum_ij |X_ij|^2 lambda_j
    rng = SeededRng(seed)
    rho = random_density(rng, d)
    x = rng.complex_normal((d, d))
    np.fill_diagonal(x, 0)
    lam = rho.spectrum.values
    expected = float(np.sum(np.abs(x) ** 2 * lam[None, :]))
    assert rho_norm_sq(rho.from_eigenbasis(x), rho) == pytest.approx(expected, rel=1e-11)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6))
def test_operator_norm_is_top_singular_value(seed, d):
    x = SeededRng(seed).complex_normal((d, d))
    assert operator_norm(x) == pytest.approx(np.sqrt(np.linalg.eigvalsh(x.conj().T @ x)[-1]), rel=1e-12)
    assert operator_norm(np.zeros((d, d))) == 0.0


def test_density_matrix_constructors():
    rho = DensityMatrix.maximally_mixed(3)
    np.testing.assert_allclose(rho.matrix, np.eye(3) / 3)
    assert rho.spectrum.is_maximally_mixed(DEFAULT_TOL)
    psi = np.array([1, 1j]) / np.sqrt(2)
    pure = DensityMatrix.pure(psi)
    assert pure.purity == pytest.approx(1.0)
    assert not pure.spectrum.is_faithful()
    u = haar_unitary(SeededRng(1), 3)
    rho = DensityMatrix.from_spectrum([0.5, 0.2, 0.3], u)
    np.testing.assert_allclose(rho.spectrum.values, [0.2, 0.3, 0.5], atol=1e-14)
    assert rho.purity == pytest.approx(0.38)
    np.testing.assert_allclose(rho.sqrt @ rho.sqrt, rho.matrix, atol=1e-14)


def test_spectrum_accessors():
    s = Spectrum.of([0.5, 0.1, 0.4])
    assert (s.lambda_min, s.lambda_smin, s.lambda_max, s.dim) == (0.1, 0.4, 0.5, 3)
    with pytest.raises(ValidationError):
        Spectrum([0.5, 0.1])


def test_tiny_negative_eigenvalues_are_clipped():
    rho = DensityMatrix(np.diag([1.0 + 1e-12, -1e-12]))
    assert rho.spectrum.values.min() >= 0
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("bad", [
    np.array([[0.5, 0.1], [0.2, 0.5]]),   # not Hermitian
    np.diag([0.6, 0.6]),                  # trace 1.2
    np.diag([1.5, -0.5]),                 # negative eigenvalue
    np.ones((2, 3)) / 2,                  # not square
    np.array([[np.nan, 0], [0, 1]]),      # not finite
])
def test_density_matrix_rejects(bad):
    with pytest.raises(ValidationError):
        DensityMatrix(bad)


def test_observable_rejects_non_hermitian_and_dim_mismatch():
    with pytest.raises(ValidationError):
        HermitianObservable([[0, 1], [0, 0]])
    with pytest.raises(DimMismatch):
        variance(np.eye(3), DensityMatrix.maximally_mixed(2))
    with pytest.raises(DimMismatch):
        covariance(SIGMA_X, np.eye(3), DensityMatrix.maximally_mixed(2))


def test_observable_storage_is_hermitian_and_read_only():
    obs = HermitianObservable(SIGMA_Y + 1e-14 * np.array([[0, 1], [0, 0]]))
    np.testing.assert_array_equal(obs.matrix, obs.matrix.conj().T)
    with pytest.raises(ValueError):
        obs.matrix[0, 0] = 1


def test_kron_and_partial_trace():
    a = np.arange(4).reshape(2, 2) + 1j
    b = np.array([[0.2, 0.1], [0.1, 0.8]])
    np.testing.assert_allclose(partial_trace_second(kron(a, b), 2, 2), a * np.trace(b))
    np.testing.assert_allclose(kron(SIGMA_X, SIGMA_Z, np.eye(2)), np.kron(np.kron(SIGMA_X, SIGMA_Z), np.eye(2)))
    assert unitarity_defect(haar_unitary(SeededRng(0), 5)) < 1e-13
    assert unitarity_defect(2 * np.eye(2)) == pytest.approx(3.0)
