"""Indirect measurement models and error-disturbance inequalities.

A model couples a system (state ``rho``, observables ``A``, ``B``) to an
apparatus (state ``rho_app``, commuting meters ``A_app``, ``B_app``) through a
unitary ``U`` on ``system (x) apparatus``. From it we evaluate

* noise ``N_X = U^dag (I (x) X_app) U - X (x) I`` and error
  ``eps(X) = sqrt(Tr[(rho (x) rho_app) N_X^2])``;
* disturbance ``eta(B) = sqrt(Tr[(rho (x) rho_app) (B_out - B (x) I)^2])``
  with the Heisenberg-picture output ``B_out = U^dag (B (x) I) U``;
* the Arthurs-Goodman and both Ozawa inequalities, with the classical
  coefficient 1/2 and with the spectral coefficient
  ``(L_max + L_min) / (2 (L_max - L_min))``, where ``L_max = l_max m_max`` and
  ``L_min = l_min m_min`` are the extreme eigenvalues of ``rho (x) rho_app``.

Arthurs-Goodman needs unbiased meters; when :func:`unbiasedness_defect`
exceeds tolerance its verdicts are reported but not treated as theorems.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .bounds import MAXIMALLY_MIXED, Signal, _spectrum
from .config import DEFAULT_TOL, Tolerances
from .errors import DimMismatch, ValidationError
from .linalg import (
    SIGMA_X,
    SIGMA_Z,
    DensityMatrix,
    HermitianObservable,
    as_matrix,
    commutator,
    dagger,
    kron,
    observable,
    operator_norm,
    partial_trace_second,
    rho_norm_sq,
    state,
    unitarity_defect,
    variance,
)
from .sampling import SeededRng, haar_unitary, random_density, random_observable


@dataclass(frozen=True)
class MeasurementModel:
    rho: DensityMatrix
    rho_app: DensityMatrix
    U: np.ndarray
    A: HermitianObservable
    B: HermitianObservable
    A_app: HermitianObservable
    B_app: HermitianObservable
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        tol = self.tol
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("rho", state(self.rho, tol, "rho"))
        set_("rho_app", state(self.rho_app, tol, "rho_app"))
        for name in ("A", "B", "A_app", "B_app"):
            set_(name, observable(getattr(self, name), tol, name))
        u = np.array(as_matrix(self.U, "U"))
        u.setflags(write=False)
        set_("U", u)

        ds, da = self.rho.dim, self.rho_app.dim
        for name, d in (("A", ds), ("B", ds), ("A_app", da), ("B_app", da)):
            if getattr(self, name).dim != d:
                raise DimMismatch(f"{name} has dim {getattr(self, name).dim}, expected {d}")
        if u.shape[0] != ds * da:
            raise DimMismatch(f"U has dim {u.shape[0]}, expected {ds} * {da} = {ds * da}")
        defect = unitarity_defect(u)
        if defect > tol.unitary:
            raise ValidationError(f"U: unitarity defect {defect:.3e} exceeds {tol.unitary:g}")
        comm = operator_norm(commutator(self.A_app, self.B_app))
        if comm > tol.commute:
            raise ValidationError(f"meters A_app, B_app do not commute (||[A_app,B_app]|| = {comm:.3e})")

    @property
    def d_sys(self) -> int:
        return self.rho.dim

    @property
    def d_app(self) -> int:
        return self.rho_app.dim

    @property
    def joint_state(self) -> DensityMatrix:
        return DensityMatrix(kron(self.rho, self.rho_app), self.tol, "rho (x) rho_app")

    def heisenberg(self, x) -> np.ndarray:
        return dagger(self.U) @ as_matrix(x) @ self.U

    def _pick(self, which: str):
        key = which.upper()
        if key == "A":
            return self.A, self.A_app
        if key == "B":
            return self.B, self.B_app
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def noise_operator(m: MeasurementModel, which: str) -> HermitianObservable:
    x, x_app = m._pick(which)
    meter = m.heisenberg(kron(np.eye(m.d_sys), x_app))
    return HermitianObservable(meter - kron(x, np.eye(m.d_app)), m.tol, f"N_{which}")


def error(m: MeasurementModel, which: str) -> float:
    return math.sqrt(rho_norm_sq(noise_operator(m, which).matrix, m.joint_state, m.tol))


def disturbance(m: MeasurementModel) -> float:
    b_in = kron(m.B, np.eye(m.d_app))
    return math.sqrt(rho_norm_sq(m.heisenberg(b_in) - b_in, m.joint_state, m.tol))


def unbiasedness_defect(m: MeasurementModel, which: str) -> float:
    """``|| Tr_app[(I (x) rho_app) U^dag (I (x) X_app) U] - X ||_op``."""
    x, x_app = m._pick(which)
    meter = m.heisenberg(kron(np.eye(m.d_sys), x_app))
    mean_op = partial_trace_second(kron(np.eye(m.d_sys), m.rho_app) @ meter, m.d_sys, m.d_app)
    return operator_norm(mean_op - x.matrix)


def generalized_coefficient(spec_sys, spec_app, tol: Tolerances = DEFAULT_TOL):
    """Spectral coefficient replacing 1/2, or ``MAXIMALLY_MIXED``."""
    s, t = _spectrum(spec_sys), _spectrum(spec_app)
    hi = s.lambda_max * t.lambda_max
    lo = s.lambda_min * t.lambda_min
    if hi - lo <= tol.degeneracy * hi:
        return MAXIMALLY_MIXED
    if lo == 0.0:
        return 0.5
    return (hi + lo) / (2.0 * (hi - lo))


@dataclass(frozen=True)
class ErrorDisturbanceReport:
    eps_A: float
    eps_B: float
    eta_B: float
    sigma_A: float
    sigma_B: float
    commutator_term: float
    coeff_classical: float
    coeff_generalized: float | None
    ag_lhs: float
    ozawa1_lhs: float
    ozawa2_lhs: float
    rhs_classical: float
    rhs_generalized: float
    ag_holds: bool
    ag_generalized_holds: bool
    ozawa1_holds: bool
    ozawa1_generalized_holds: bool
    ozawa2_holds: bool
    ozawa2_generalized_holds: bool
    unbias_defect_A: float
    unbias_defect_B: float
    ag_assumption_met: bool

    @property
    def theorem_violated(self) -> bool:
        """True when a verdict that must hold came out false."""
        bad = not (self.ozawa1_holds and self.ozawa2_holds
                   and self.ozawa1_generalized_holds and self.ozawa2_generalized_holds)
        if self.ag_assumption_met:
            bad = bad or not (self.ag_holds and self.ag_generalized_holds)
        return bad

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(m: MeasurementModel) -> ErrorDisturbanceReport:
    tol = m.tol
    eps_a, eps_b, eta_b = error(m, "A"), error(m, "B"), disturbance(m)
    sig_a = math.sqrt(variance(m.A, m.rho, tol))
    sig_b = math.sqrt(variance(m.B, m.rho, tol))
    term = abs(np.sum(commutator(m.A, m.B) * m.rho.matrix.T))
    coeff = generalized_coefficient(m.rho.spectrum, m.rho_app.spectrum, tol)
    # both states maximally mixed: <[A,B]> vanishes, keep the classical 1/2
    coeff_value = 0.5 if isinstance(coeff, Signal) else coeff

    lhs = {
        "ag": eps_a * eps_b,
        "ozawa1": eps_a * eps_b + eps_a * sig_b + sig_a * eps_b,
        "ozawa2": eps_a * eta_b + eps_a * sig_b + sig_a * eta_b,
    }
    rhs_c, rhs_g = 0.5 * term, coeff_value * term

    def holds(l, r):
        return bool(l - r >= -tol.slack_rel * max(1.0, l))

    defect_a, defect_b = unbiasedness_defect(m, "A"), unbiasedness_defect(m, "B")
    return ErrorDisturbanceReport(
        eps_A=eps_a,
        eps_B=eps_b,
        eta_B=eta_b,
        sigma_A=sig_a,
        sigma_B=sig_b,
        commutator_term=float(term),
        coeff_classical=0.5,
        coeff_generalized=None if isinstance(coeff, Signal) else float(coeff),
        ag_lhs=lhs["ag"],
        ozawa1_lhs=lhs["ozawa1"],
        ozawa2_lhs=lhs["ozawa2"],
        rhs_classical=float(rhs_c),
        rhs_generalized=float(rhs_g),
        ag_holds=holds(lhs["ag"], rhs_c),
        ag_generalized_holds=holds(lhs["ag"], rhs_g),
        ozawa1_holds=holds(lhs["ozawa1"], rhs_c),
        ozawa1_generalized_holds=holds(lhs["ozawa1"], rhs_g),
        ozawa2_holds=holds(lhs["ozawa2"], rhs_c),
        ozawa2_generalized_holds=holds(lhs["ozawa2"], rhs_g),
        unbias_defect_A=defect_a,
        unbias_defect_B=defect_b,
        ag_assumption_met=bool(max(defect_a, defect_b) <= tol.unbiased),
    )


# --------------------------------------------------------------------------
# model builders


def cnot_unitary() -> np.ndarray:
    """CNOT with the system qubit as control and the apparatus as target."""
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return kron(p0, np.eye(2)) + kron(p1, SIGMA_X)


def cnot_model(rho, rho_app=None, A=SIGMA_Z, B=SIGMA_X, A_app=SIGMA_Z, B_app=None) -> MeasurementModel:
    """Qubit CNOT pre-measurement of ``A`` read out by ``A_app`` on the target."""
    if rho_app is None:
        rho_app = np.diag([1.0, 0.0]).astype(complex)
    if B_app is None:
        B_app = np.zeros((2, 2), dtype=complex)
    return MeasurementModel(rho, rho_app, cnot_unitary(), A, B, A_app, B_app)


def random_commuting_meters(rng: SeededRng, d: int, degree: int = 3):
    """``f(M)``, ``g(M)`` for a random Hermitian ``M`` and random polynomials."""
    m = random_observable(rng, d)
    w, v = np.linalg.eigh(m.matrix)
    powers = np.vander(w, degree + 1, increasing=True)
    f = powers @ rng.normal(degree + 1)
    g = powers @ rng.normal(degree + 1)
    return (HermitianObservable((v * f) @ dagger(v)),
            HermitianObservable((v * g) @ dagger(v)))


def random_model(rng: SeededRng, d_sys: int = 2, d_app: int = 2, app_spectrum=None) -> MeasurementModel:
    a_app, b_app = random_commuting_meters(rng, d_app)
    return MeasurementModel(
        rho=random_density(rng, d_sys),
        rho_app=random_density(rng, d_app, app_spectrum),
        U=haar_unitary(rng, d_sys * d_app),
        A=random_observable(rng, d_sys),
        B=random_observable(rng, d_sys),
        A_app=a_app,
        B_app=b_app,
    )
