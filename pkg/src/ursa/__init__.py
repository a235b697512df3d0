"""Spectral uncertainty relations: bounds, equality witnesses, purity
averages and error-disturbance inequalities."""

from .bounds import (
    MAXIMALLY_MIXED,
    BoundReport,
    RelationKind,
    c_opt,
    c_prime_opt,
    check,
    check_all,
    rhs,
)
from .config import DEFAULT_TOL, Tolerances
from .linalg import (
    DensityMatrix,
    HermitianObservable,
    Spectrum,
    anticommutator,
    commutator,
    covariance,
    expectation,
    hermitian_eigen,
    operator_norm,
    rho_norm_sq,
    variance,
)
from .measurement import MeasurementModel, evaluate
from .sampling import SeededRng, avg_bounds_analytic, avg_bounds_mc
from .witness import extremal_pair, minimize_ratio

__version__ = "0.1.0"

__all__ = [
    "MAXIMALLY_MIXED", "BoundReport", "RelationKind", "c_opt", "c_prime_opt", "check", "check_all", "rhs",
    "DEFAULT_TOL", "Tolerances",
    "DensityMatrix", "HermitianObservable", "Spectrum", "anticommutator", "commutator", "covariance",
    "expectation", "hermitian_eigen", "operator_norm", "rho_norm_sq", "variance",
    "MeasurementModel", "evaluate",
    "SeededRng", "avg_bounds_analytic", "avg_bounds_mc",
    "extremal_pair", "minimize_ratio",
]
