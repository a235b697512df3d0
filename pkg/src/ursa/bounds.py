"""Catalog of variance uncertainty relations and a uniform checker.

Each :class:`RelationKind` names one lower bound on ``V(A) V(B)``:

==========================  ================================================
Robertson                   1/4 |<[A,B]>|^2
Schrodinger                 Robertson + Cov(A,B)^2
NormTypeI                   c_opt(rho) ||[A,B]||_rho^2
StrengthenedSchrodinger     Schrodinger + c_opt(rho) ||[A,B]||_rho^2
GeneralizedRobertson        c'_opt(rho) |<[A,B]>|^2
GeneralizedSchrodinger      c'_opt(rho) |<[A,B]>|^2 + Cov(A,B)^2
NormTypeIIcombined          same formula as GeneralizedSchrodinger
MaximallyMixed              ||[A,B]||_op^2 / d^2, on rho = I/d
==========================  ================================================

with ``c_opt = l_min l_smin / (l_min + l_smin)`` and
``c'_opt = (l_max + l_min)^2 / (4 (l_max - l_min)^2)``.

The generalized Schrodinger coefficient is sometimes printed with
``(l_max + l_1)^2`` in its numerator; ``l_1`` is the smallest eigenvalue, so
this is the same quantity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .linalg import (
    DensityMatrix,
    Spectrum,
    _centered,
    _norm_sq,
    _same_dim,
    _trace_with,
    commutator,
    observable,
    operator_norm,
    state,
)


class Signal(enum.Enum):
    """Returned instead of a coefficient when that coefficient diverges."""

    MAXIMALLY_MIXED = "maximally_mixed"


MAXIMALLY_MIXED = Signal.MAXIMALLY_MIXED


class RelationKind(enum.Enum):
    ROBERTSON = "robertson"
    SCHRODINGER = "schrodinger"
    NORM_TYPE_I = "norm-type-i"
    STRENGTHENED_SCHRODINGER = "strengthened-schrodinger"
    GENERALIZED_ROBERTSON = "generalized-robertson"
    GENERALIZED_SCHRODINGER = "generalized-schrodinger"
    NORM_TYPE_II_COMBINED = "norm-type-ii-combined"
    MAXIMALLY_MIXED = "maximally-mixed"

    @classmethod
    def parse(cls, name: str) -> "RelationKind":
        key = name.strip().lower().replace("_", "-")
        for kind in cls:
            if key in (kind.value, kind.name.lower().replace("_", "-"), kind.value.replace("-", "")):
                return kind
        raise ValueError(f"unknown relation kind {name!r}; choose from {[k.value for k in cls]}")


def _spectrum(x) -> Spectrum:
    if isinstance(x, DensityMatrix):
        return x.spectrum
    if isinstance(x, Spectrum):
        return x
    return Spectrum.of(x)


def c_opt(spec) -> float:
    """Optimal coefficient of the state-norm relation ``V V >= c ||[A,B]||_rho^2``."""
    s = _spectrum(spec)
    lo, lo2 = s.lambda_min, s.lambda_smin
    if lo + lo2 <= 0:
        return 0.0
    return lo * lo2 / (lo + lo2)


def c_prime_opt(spec, tol: Tolerances = DEFAULT_TOL):
    """Spectral replacement for Robertson's 1/4, or ``MAXIMALLY_MIXED``.

    Always >= 1/4, with equality exactly when the smallest eigenvalue is 0.
    """
    s = _spectrum(spec)
    if s.is_maximally_mixed(tol):
        return MAXIMALLY_MIXED
    lo, hi = s.lambda_min, s.lambda_max
    if lo <= 0.0:
        return 0.25
    return (hi + lo) ** 2 / (4.0 * (hi - lo) ** 2)


@dataclass(frozen=True)
class BoundReport:
    kind: RelationKind
    lhs: float
    rhs: float
    slack: float
    holds: bool
    terms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "terms": dict(self.terms),
        }


class _Quantities:
    """Everything the eight formulas share, computed once per (rho, A, B)."""

    def __init__(self, rho: DensityMatrix, a: np.ndarray, b: np.ndarray, tol: Tolerances):
        self.rho = rho
        self.a, self.b = a, b
        self.tol = tol
        self.comm = commutator(a, b)
        # <[A,B]> is purely imaginary for Hermitian A, B
        self.comm_exp = _trace_with(self.comm, rho)
        self.comm_exp_sq = abs(self.comm_exp) ** 2
        ca, cb = _centered(a, rho, tol) @ rho.sqrt, _centered(b, rho, tol) @ rho.sqrt
        self.cov = float(np.vdot(ca, cb).real)
        self.var_a = float(np.vdot(ca, ca).real)
        self.var_b = float(np.vdot(cb, cb).real)
        self._norm_rho = None
        self._norm_op = None
        self._mm = None

    @property
    def comm_rho_norm_sq(self) -> float:
        if self._norm_rho is None:
            self._norm_rho = _norm_sq(self.comm, self.rho)
        return self._norm_rho

    @property
    def comm_op_norm(self) -> float:
        if self._norm_op is None:
            self._norm_op = operator_norm(self.comm)
        return self._norm_op

    @property
    def mm_lhs(self) -> float:
        """V(A) V(B) on the maximally mixed state of the same dimension."""
        if self._mm is None:
            if self.rho.is_maximally_mixed(self.tol):
                self._mm = self.var_a * self.var_b
            else:
                mm = DensityMatrix.maximally_mixed(self.rho.dim)
                va = _norm_sq(_centered(self.a, mm, self.tol), mm)
                vb = _norm_sq(_centered(self.b, mm, self.tol), mm)
                self._mm = va * vb
        return self._mm


def _mm_term(q: _Quantities) -> float:
    return q.comm_op_norm ** 2 / q.rho.dim ** 2


def _generalized(q: _Quantities, with_cov: bool):
    coeff = c_prime_opt(q.rho.spectrum, q.tol)
    terms: dict = {}
    if coeff is MAXIMALLY_MIXED:
        terms["maximally_mixed_substitution"] = True
        terms["maximally_mixed_term"] = _mm_term(q)
        value = terms["maximally_mixed_term"]
    else:
        terms["coefficient"] = coeff
        terms["generalized_robertson_term"] = coeff * q.comm_exp_sq
        if coeff > q.tol.ill_conditioned:
            terms["ill_conditioned"] = True
        value = terms["generalized_robertson_term"]
    if with_cov:
        terms["covariance_term"] = q.cov ** 2
        value += terms["covariance_term"]
    return value, terms


def _rhs(kind: RelationKind, q: _Quantities):
    if kind is RelationKind.ROBERTSON:
        t = {"robertson_term": 0.25 * q.comm_exp_sq}
        return t["robertson_term"], t
    if kind is RelationKind.SCHRODINGER:
        t = {"robertson_term": 0.25 * q.comm_exp_sq, "covariance_term": q.cov ** 2}
        return t["robertson_term"] + t["covariance_term"], t
    if kind is RelationKind.NORM_TYPE_I:
        c = c_opt(q.rho.spectrum)
        t = {"coefficient": c, "norm_term": c * q.comm_rho_norm_sq}
        return t["norm_term"], t
    if kind is RelationKind.STRENGTHENED_SCHRODINGER:
        c = c_opt(q.rho.spectrum)
        t = {
            "robertson_term": 0.25 * q.comm_exp_sq,
            "covariance_term": q.cov ** 2,
            "coefficient": c,
            "norm_term": c * q.comm_rho_norm_sq,
        }
        return t["robertson_term"] + t["covariance_term"] + t["norm_term"], t
    if kind is RelationKind.GENERALIZED_ROBERTSON:
        return _generalized(q, with_cov=False)
    if kind in (RelationKind.GENERALIZED_SCHRODINGER, RelationKind.NORM_TYPE_II_COMBINED):
        return _generalized(q, with_cov=True)
    if kind is RelationKind.MAXIMALLY_MIXED:
        t = {"maximally_mixed_term": _mm_term(q)}
        if not q.rho.is_maximally_mixed(q.tol):
            t["evaluated_at_maximally_mixed"] = True
        return t["maximally_mixed_term"], t
    raise ValueError(f"unhandled kind {kind}")  # pragma: no cover


def _prepare(rho, a, b, tol: Tolerances) -> _Quantities:
    rho = state(rho, tol)
    a = observable(a, tol, "A").matrix
    b = observable(b, tol, "B").matrix
    _same_dim(rho.matrix, a, b)
    return _Quantities(rho, a, b, tol)


def rhs(kind, rho, a, b, tol: Tolerances = DEFAULT_TOL):
    """Right-hand side of ``kind`` and its named components."""
    kind = kind if isinstance(kind, RelationKind) else RelationKind.parse(kind)
    return _rhs(kind, _prepare(rho, a, b, tol))


def _report(kind: RelationKind, q: _Quantities) -> BoundReport:
    value, terms = _rhs(kind, q)
    lhs = q.mm_lhs if kind is RelationKind.MAXIMALLY_MIXED else q.var_a * q.var_b
    slack = lhs - value
    holds = slack >= -q.tol.slack_rel * max(1.0, lhs)
    return BoundReport(kind, float(lhs), float(value), float(slack), bool(holds), terms)


def check(kind, rho, a, b, tol: Tolerances = DEFAULT_TOL) -> BoundReport:
    """Evaluate one relation on ``(rho, A, B)``.

    ``lhs`` is ``V(A) V(B)``. For ``MaximallyMixed`` both sides are taken on
    ``I/d`` regardless of ``rho``, since that relation is a statement about
    the maximally mixed state only; ``terms`` records when this happened.
    """
    kind = kind if isinstance(kind, RelationKind) else RelationKind.parse(kind)
    return _report(kind, _prepare(rho, a, b, tol))


def check_all(rho, a, b, kinds=None, tol: Tolerances = DEFAULT_TOL) -> list[BoundReport]:
    """``check`` for several kinds (all by default), sharing the work."""
    q = _prepare(rho, a, b, tol)
    kinds = list(RelationKind) if kinds is None else [
        k if isinstance(k, RelationKind) else RelationKind.parse(k) for k in kinds
    ]
    return [_report(k, q) for k in kinds]


def relative_slack(report: BoundReport) -> float:
    return report.slack / max(1.0, report.lhs)
