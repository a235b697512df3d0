"""Equality witnesses and a numerical optimality check for c'_opt.

Two complementary certificates that ``c'_opt`` cannot be increased:

* :func:`extremal_pair` builds observables that saturate
  ``V(A) V(B) >= c'_opt |<[A,B]>|^2`` exactly;
* :func:`minimize_ratio` searches, without derivatives, for the infimum of
  ``V(A) V(B) / |<[A,B]>|^2`` and should land on ``c'_opt`` from above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bounds import MAXIMALLY_MIXED, RelationKind, c_prime_opt, check
from .config import DEFAULT_TOL, Tolerances
from .errors import MaximallyMixedState, NotFaithful, ZeroScale
from .linalg import DensityMatrix, HermitianObservable, commutator, state, variance
from .sampling import SeededRng


@dataclass(frozen=True)
class ExtremalPair:
    A: HermitianObservable
    B: HermitianObservable
    a: float
    b: float


def _require_not_maximally_mixed(rho: DensityMatrix, tol: Tolerances) -> None:
    if rho.is_maximally_mixed(tol):
        raise MaximallyMixedState(
            "state is maximally mixed; c'_opt diverges there, use the "
            "maximally-mixed relation (||[A,B]||_op^2 / d^2) instead"
        )


def extremal_pair(rho, a: float = 1.0, b: float = 1.0, tol: Tolerances = DEFAULT_TOL) -> ExtremalPair:
    """Observables attaining equality in the generalized Robertson relation.

    In the eigenbasis of ``rho`` (ascending), ``A`` couples the smallest and
    largest eigenvectors with real amplitude ``a``; ``B`` couples them with
    ``B[d,1] = i b`` and ``B[1,d] = -i b``. Both are rotated back to the input
    basis.
    """
    rho = state(rho, tol)
    _require_not_maximally_mixed(rho, tol)
    if a == 0 or b == 0:
        raise ZeroScale("scale parameters a and b must be nonzero")
    d = rho.dim
    ae = np.zeros((d, d), dtype=complex)
    be = np.zeros((d, d), dtype=complex)
    ae[d - 1, 0] = ae[0, d - 1] = a
    be[d - 1, 0] = 1j * b
    be[0, d - 1] = -1j * b
    return ExtremalPair(
        HermitianObservable(rho.from_eigenbasis(ae)),
        HermitianObservable(rho.from_eigenbasis(be)),
        float(a),
        float(b),
    )


def tightness_residual(rho, a: float = 1.0, b: float = 1.0, tol: Tolerances = DEFAULT_TOL) -> float:
    """|lhs - rhs| of the generalized Robertson relation on the extremal pair."""
    pair = extremal_pair(rho, a, b, tol)
    rep = check(RelationKind.GENERALIZED_ROBERTSON, rho, pair.A, pair.B, tol)
    return abs(rep.lhs - rep.rhs)


def uncertainty_ratio(rho, a, b, tol: Tolerances = DEFAULT_TOL) -> float:
    """``V(A) V(B) / |<[A,B]>|^2`` (``inf`` when the denominator vanishes)."""
    rho = state(rho, tol)
    c = commutator(np.asarray(a), np.asarray(b))
    denom = abs(np.sum(c * rho.matrix.T)) ** 2
    num = variance(a, rho, tol) * variance(b, rho, tol)
    return num / denom if denom > 0 else float("inf")


# --------------------------------------------------------------------------
# ratio search


@dataclass(frozen=True)
class RatioSearchResult:
    best_ratio: float
    best_A: HermitianObservable
    best_B: HermitianObservable
    restarts: int
    evaluations: int
    converged: bool
    c_prime_opt: float

    @property
    def difference(self) -> float:
        return self.best_ratio - self.c_prime_opt


class _ZeroDiagonalRatio:
    """Ratio objective over zero-diagonal Hermitian pairs in rho's eigenbasis.

    Parameters are the real and imaginary parts of the upper-triangular
    entries of A then B. For zero-diagonal Hermitian X the mean vanishes, so
    ``V(X) = sum_{i<j} (l_i + l_j) |x_ij|^2`` and
    ``<[A,B]> = 2i sum_{i<j} (l_j - l_i) Im(conj(a_ij) b_ij)``.
    """

    def __init__(self, lam: np.ndarray, degenerate: float = 1e-14):
        self.d = lam.size
        self.iu = np.triu_indices(self.d, 1)
        i, j = self.iu
        self.m = i.size
        self.w = lam[i] + lam[j]
        self.delta = lam[j] - lam[i]
        self.degenerate = degenerate
        self.calls = 0

    def split(self, x):
        m = self.m
        return x[:m], x[m:2 * m], x[2 * m:3 * m], x[3 * m:]

    def normalize(self, x):
        ar, ai, br, bi = self.split(x)
        na = np.sqrt(self.w @ (ar * ar + ai * ai))
        nb = np.sqrt(self.w @ (br * br + bi * bi))
        if na == 0 or nb == 0:
            return x
        return np.concatenate([ar / na, ai / na, br / nb, bi / nb])

    def __call__(self, x) -> float:
        self.calls += 1
        ar, ai, br, bi = self.split(x)
        va = self.w @ (ar * ar + ai * ai)
        vb = self.w @ (br * br + bi * bi)
        s = self.delta @ (ar * bi - ai * br)
        c2 = 4.0 * s * s
        if va == 0 or vb == 0 or c2 < self.degenerate * va * vb:
            return np.inf
        return va * vb / c2

    def matrices(self, x):
        ar, ai, br, bi = self.split(x)
        a = np.zeros((self.d, self.d), dtype=complex)
        b = np.zeros((self.d, self.d), dtype=complex)
        a[self.iu] = ar + 1j * ai
        b[self.iu] = br + 1j * bi
        return a + a.conj().T, b + b.conj().T


def minimize_ratio(rho, restarts: int = 32, max_evals: int | None = None, seed: int = 42,
                   tol: float = 1e-6, polish: int = 1,
                   tolerances: Tolerances = DEFAULT_TOL) -> RatioSearchResult:
    """Multi-start Nelder-Mead search for min ``V(A) V(B) / |<[A,B]>|^2``.

    Restart ``r`` starts from a Gaussian point drawn from
    ``SeededRng(seed, r)``; after the first descent it is re-launched from
    its own normalized minimizer up to ``polish`` times, which rebuilds a
    fresh simplex and stops the usual Nelder-Mead stagnation. ``max_evals``
    caps function evaluations per descent (default ``200 * n_params``).

    The winner is re-evaluated with the general ``variance``/``commutator``
    routines in the input basis; that value is ``best_ratio``.
    ``converged`` means ``|best_ratio - c'_opt| <= tol``.
    """
    rho = state(rho, tolerances)
    _require_not_maximally_mixed(rho, tolerances)
    if not rho.is_faithful(tolerances):
        raise NotFaithful("ratio search needs a faithful state (smallest eigenvalue > 0)")
    target = c_prime_opt(rho.spectrum, tolerances)
    assert target is not MAXIMALLY_MIXED
    f = _ZeroDiagonalRatio(rho.spectrum.values)
    n_params = 4 * f.m
    if max_evals is None:
        max_evals = 200 * n_params
    opts = {"maxfev": max_evals, "xatol": 1e-5, "fatol": 1e-11, "adaptive": n_params > 4}

    best = (np.inf, -1, None)
    for r in range(restarts):
        x = SeededRng(seed, r).normal(n_params)
        fx = f(x)
        for _ in range(1 + polish):
            res = minimize(f, f.normalize(x), method="Nelder-Mead", options=opts)
            if not res.fun < fx:
                break
            gain = fx - float(res.fun)
            x, fx = res.x, float(res.fun)
            if gain <= 1e-15 * fx:
                break
        if (fx, r) < best[:2]:
            best = (fx, r, f.normalize(x))

    if best[2] is None:
        # every start was degenerate; report a commuting pair
        ae = be = np.zeros((rho.dim, rho.dim), dtype=complex)
    else:
        ae, be = f.matrices(best[2])
    a = HermitianObservable(rho.from_eigenbasis(ae))
    b = HermitianObservable(rho.from_eigenbasis(be))
    ratio = uncertainty_ratio(rho, a, b, tolerances)
    return RatioSearchResult(
        best_ratio=float(ratio),
        best_A=a,
        best_B=b,
        restarts=restarts,
        evaluations=f.calls,
        converged=bool(abs(ratio - target) <= tol),
        c_prime_opt=float(target),
    )
