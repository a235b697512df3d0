"""Dense complex linear algebra and the statistical functionals on states.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Two validated
wrappers carry the invariants the rest of the package relies on:
:class:`HermitianObservable` and :class:`DensityMatrix`. Both are immutable;
their arrays are flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DimMismatch, NonConvergence, ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
for _m in (SIGMA_X, SIGMA_Y, SIGMA_Z, PAULI):
    _m.setflags(write=False)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Coerce ``x`` to a square, finite, complex128 array.

    Accepts arrays, nested lists, :class:`HermitianObservable` and
    :class:`DensityMatrix`.
    """
    if isinstance(x, (HermitianObservable, DensityMatrix)):
        return x.matrix
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"{name}: expected a square d x d matrix with d >= 1, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name}: entries must be finite")
    return a


def dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(x, -1, -2))


def operator_norm(x) -> float:
    """Largest singular value."""
    a = as_matrix(x)
    if not a.any():
        return 0.0
    return float(np.linalg.norm(a, 2))


# --------------------------------------------------------------------------
# eigensolvers


def jacobi_eigh(h, max_sweeps: int | None = None, tol: float = 1e-15):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot ``h[p, q]`` and then
    applies the real 2x2 rotation that annihilates it. Sweeps stop once the
    off-diagonal Frobenius norm falls below ``tol * ||h||_F``.

    Returns ascending eigenvalues and the unitary whose columns are the
    eigenvectors. Raises :class:`NonConvergence` after ``max_sweeps``
    (default ``100 * d**2``).
    """
    a = np.array(as_matrix(h), dtype=complex)
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    if max_sweeps is None:
        max_sweeps = 100 * d * d
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = abs(a[p, q])
                if g <= np.finfo(float).tiny:
                    continue
                phase = a[p, q] / g
                theta = 0.5 * np.arctan2(2.0 * g, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                w = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ w
                a[idx, :] = dagger(w) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ w
    else:
        raise NonConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    w_diag = np.real(np.diag(a))
    order = np.argsort(w_diag, kind="stable")
    return w_diag[order], v[:, order]


def hermitian_eigen(h, method: str = "auto", tol: Tolerances = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    ``method`` is ``"lapack"`` (numpy), ``"jacobi"`` (pure-Python fallback)
    or ``"auto"``, which tries LAPACK and falls back to Jacobi when LAPACK
    fails or its residual is out of tolerance.
    """
    a = as_matrix(h)
    if method not in ("auto", "lapack", "jacobi"):
        raise ValueError(f"unknown eigensolver method {method!r}")
    def residual_ok(w, v):
        # for Hermitian input ||H||_op = max |eigenvalue|
        bound = tol.eig_residual * max(1.0, float(np.max(np.abs(w))))
        return np.max(np.linalg.norm(a @ v - v * w, axis=0)) <= bound

    if method in ("auto", "lapack"):
        try:
            w, v = np.linalg.eigh(a)
        except np.linalg.LinAlgError:
            if method == "lapack":
                raise NonConvergence("LAPACK eigh failed") from None
        else:
            if residual_ok(w, v):
                return w, v
            if method == "lapack":
                raise NonConvergence("LAPACK eigh residual exceeds tolerance")
    w, v = jacobi_eigh(a)
    if not residual_ok(w, v):
        raise NonConvergence("Jacobi eigh residual exceeds tolerance")
    return w, v


# --------------------------------------------------------------------------
# validated types


def _hermitize(a: np.ndarray, name: str, tol: Tolerances) -> np.ndarray:
    diff = a - dagger(a)
    if diff.any():
        # ||D||_op <= ||D||_F and ||X||_op >= ||X||_F / sqrt(d): the exact
        # operator norms are only needed when this cheap test is inconclusive
        d = a.shape[0]
        if np.linalg.norm(diff) > tol.hermitian * max(1.0, np.linalg.norm(a) / np.sqrt(d)):
            defect = operator_norm(diff)
            if defect > tol.hermitian * max(1.0, operator_norm(a)):
                raise ValidationError(f"{name}: not Hermitian (defect {defect:.3e})")
    return (a + dagger(a)) / 2


class HermitianObservable:
    """A validated Hermitian matrix; the stored form is exactly (X + X^dag)/2."""

    __slots__ = ("_m",)

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL, name: str = "observable"):
        self._m = _frozen(_hermitize(as_matrix(matrix, name), name, tol))

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._m, dtype=dtype)

    def __repr__(self) -> str:
        return f"HermitianObservable(dim={self.dim})"


Operand = Union[HermitianObservable, np.ndarray, Sequence]


def observable(x, tol: Tolerances = DEFAULT_TOL, name: str = "observable") -> HermitianObservable:
    return x if isinstance(x, HermitianObservable) else HermitianObservable(x, tol, name)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues of a state."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.size < 1 or not np.all(np.isfinite(vals)):
            raise ValidationError("spectrum must be a non-empty finite vector")
        if np.any(np.diff(vals) < 0):
            raise ValidationError("spectrum must be sorted ascending")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values) -> "Spectrum":
        return cls(np.sort(np.asarray(values, dtype=float).reshape(-1)))

    @property
    def dim(self) -> int:
        return self.values.size

    @property
    def lambda_min(self) -> float:
        return float(self.values[0])

    @property
    def lambda_smin(self) -> float:
        return float(self.values[1 if self.dim > 1 else 0])

    @property
    def lambda_max(self) -> float:
        return float(self.values[-1])

    def is_maximally_mixed(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self.lambda_max - self.lambda_min <= tol.degeneracy * self.lambda_max

    def is_faithful(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self.lambda_min > tol.degeneracy * self.lambda_max

    def __repr__(self) -> str:
        return f"Spectrum({np.array2string(self.values, precision=6)})"


class DensityMatrix:
    """A validated quantum state with cached ascending spectrum and eigenbasis.

    Eigenvalues in ``[-tol.psd, 0)`` are clipped to zero and the spectrum is
    renormalized (the matrix is then rebuilt from the repaired spectrum);
    anything more negative is rejected.
    """

    __slots__ = ("_m", "_spectrum", "_vecs", "_sqrt")

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL, name: str = "state"):
        m = _hermitize(as_matrix(matrix, name), name, tol)
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.trace:
            raise ValidationError(f"{name}: trace is {tr!r}, expected 1")
        w, v = hermitian_eigen(m, tol=tol)
        if w[0] < -tol.psd:
            raise ValidationError(f"{name}: not positive semidefinite (eigenvalue {w[0]:.3e})")
        if w[0] < 0:
            w = np.clip(w, 0.0, None)
            w = w / w.sum()
            m = (v * w) @ dagger(v)
        self._m = _frozen(m)
        self._spectrum = Spectrum(w)
        self._vecs = _frozen(v)
        self._sqrt = _frozen((v * np.sqrt(w)) @ dagger(v))

    @classmethod
    def from_spectrum(cls, values, basis=None, tol: Tolerances = DEFAULT_TOL) -> "DensityMatrix":
        """``U diag(values) U^dag`` with ``U = basis`` (identity by default)."""
        lam = np.asarray(values, dtype=float).reshape(-1)
        if basis is None:
            return cls(np.diag(lam).astype(complex), tol)
        u = as_matrix(basis, "basis")
        return cls((u * lam) @ dagger(u), tol)

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return _maximally_mixed(int(d))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def spectrum(self) -> Spectrum:
        return self._spectrum

    @property
    def eigenvectors(self) -> np.ndarray:
        """Columns ordered like ``spectrum.values``."""
        return self._vecs

    @property
    def sqrt(self) -> np.ndarray:
        return self._sqrt

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def purity(self) -> float:
        return float(np.sum(self._spectrum.values ** 2))

    def is_maximally_mixed(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self._spectrum.is_maximally_mixed(tol)

    def is_faithful(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self._spectrum.is_faithful(tol)

    def to_eigenbasis(self, x) -> np.ndarray:
        v = self._vecs
        return dagger(v) @ as_matrix(x) @ v

    def from_eigenbasis(self, x) -> np.ndarray:
        v = self._vecs
        return v @ as_matrix(x) @ dagger(v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._m, dtype=dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, spectrum={self._spectrum!r})"


@lru_cache(maxsize=64)
def _maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def state(x, tol: Tolerances = DEFAULT_TOL, name: str = "state") -> DensityMatrix:
    return x if isinstance(x, DensityMatrix) else DensityMatrix(x, tol, name)


# --------------------------------------------------------------------------
# functionals


def _same_dim(*mats: np.ndarray) -> int:
    d = mats[0].shape[0]
    if any(m.shape[0] != d for m in mats):
        raise DimMismatch("dimension mismatch: " + ", ".join(str(m.shape[0]) for m in mats))
    return d


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b + b @ a


def _trace_with(x: np.ndarray, rho: DensityMatrix) -> complex:
    return complex(np.sum(x * rho.matrix.T))


def _expect(x: np.ndarray, rho: DensityMatrix, tol: Tolerances) -> float:
    val = _trace_with(x, rho)
    if abs(val.imag) > tol.imag * max(1.0, np.linalg.norm(x)):
        raise ValidationError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def _norm_sq(x: np.ndarray, rho: DensityMatrix) -> float:
    y = x @ rho.sqrt
    return float(np.vdot(y, y).real)


def _centered(x: np.ndarray, rho: DensityMatrix, tol: Tolerances) -> np.ndarray:
    return x - _expect(x, rho, tol) * np.eye(x.shape[0])


def expectation(x, rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr[X rho] for Hermitian X."""
    x = observable(x, tol).matrix
    rho = state(rho, tol)
    _same_dim(x, rho.matrix)
    return _expect(x, rho, tol)


def rho_norm_sq(x, rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """State-dependent norm Tr(rho X^dag X), computed as ||X rho^(1/2)||_F^2."""
    x = as_matrix(x)
    rho = state(rho, tol)
    _same_dim(x, rho.matrix)
    return _norm_sq(x, rho)


def variance(x, rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Tr[(X - <X>)^2 rho], never negative."""
    x = observable(x, tol).matrix
    rho = state(rho, tol)
    _same_dim(x, rho.matrix)
    return _norm_sq(_centered(x, rho, tol), rho)


def covariance(a, b, rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Symmetrized covariance 1/2 <{A,B}> - <A><B>.

    Evaluated as Re Tr(rho A' B') on the centred operators so that
    ``covariance(X, X, rho)`` reproduces ``variance(X, rho)`` bit for bit.
    """
    a = observable(a, tol).matrix
    b = observable(b, tol).matrix
    rho = state(rho, tol)
    _same_dim(a, b, rho.matrix)
    s = rho.sqrt
    return float(np.vdot(_centered(a, rho, tol) @ s, _centered(b, rho, tol) @ s).real)


def kron(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, as_matrix(m))
    return out


def partial_trace_second(x, d1: int, d2: int) -> np.ndarray:
    """Trace out the second factor of an operator on C^d1 (x) C^d2."""
    x = as_matrix(x)
    if x.shape[0] != d1 * d2:
        raise DimMismatch(f"operator of dim {x.shape[0]} is not {d1} x {d2}")
    return np.einsum("ijkj->ik", x.reshape(d1, d2, d1, d2))


def unitarity_defect(u) -> float:
    u = as_matrix(u)
    return operator_norm(dagger(u) @ u - np.eye(u.shape[0]))
