"""Numerical tolerances.

Every threshold used by the library lives here. Functions that need one take
an optional ``tol`` argument; pass ``DEFAULT_TOL.replace(...)`` to override a
single value for one call.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    """Relative Hermiticity defect absorbed by symmetrization."""
    trace: float = 1e-12
    psd: float = 1e-10
    """Most negative eigenvalue a density matrix may have before rejection."""
    eig_residual: float = 1e-10
    degeneracy: float = 1e-12
    """Relative gap below which a spectrum counts as maximally mixed."""
    imag: float = 1e-12
    slack_rel: float = 1e-9
    unitary: float = 1e-10
    commute: float = 1e-10
    unbiased: float = 1e-9
    ill_conditioned: float = 1e12
    """Coefficient magnitude above which bound reports carry a warning flag."""

    def replace(self, **changes: float) -> "Tolerances":
        return replace(self, **changes)

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


DEFAULT_TOL = Tolerances()
