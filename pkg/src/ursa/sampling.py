"""Reproducible random states and observables, and qubit bound averaging.

All randomness flows through :class:`SeededRng`: a PCG64 bit stream keyed by
``(seed, stream)`` through ``numpy.random.SeedSequence``. Uniform variates use
the top 53 bits of each 64-bit word, and normals come from Box-Muller on
those uniforms, so a given key yields the same floats on every platform and
numpy release.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import MAXIMALLY_MIXED, RelationKind, c_opt, c_prime_opt
from .config import DEFAULT_TOL, Tolerances
from .errors import BadSpectrum, NonUnitVector, PurityOutOfRange, ValidationError
from .linalg import PAULI, DensityMatrix, HermitianObservable, dagger

_TWO_POW_M53 = 2.0 ** -53


class SeededRng:
    """Deterministic generator identified by a 64-bit seed and a stream key.

    ``stream`` may be an int or a tuple of ints; independent sub-streams are
    obtained with :meth:`substream`.
    """

    def __init__(self, seed: int = 42, stream=0):
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.stream = tuple(stream) if isinstance(stream, (tuple, list)) else (int(stream),)
        self._bits = np.random.PCG64(np.random.SeedSequence(seed, spawn_key=self.stream))

    def substream(self, *key: int) -> "SeededRng":
        return SeededRng(self.seed, self.stream + tuple(int(k) for k in key))

    def _raw(self, n: int) -> np.ndarray:
        return np.asarray(self._bits.random_raw(n), dtype=np.uint64)

    def uniform(self, size=None):
        """Uniform variates on [0, 1) with 53-bit resolution."""
        n = 1 if size is None else int(np.prod(size))
        u = (self._raw(n) >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53
        return float(u[0]) if size is None else u.reshape(size)

    def normal(self, size=None):
        """Standard normals by Box-Muller; pairs are emitted cos-first."""
        n = 1 if size is None else int(np.prod(size))
        m = (n + 1) // 2
        u = self.uniform(2 * m).reshape(m, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        t = 2.0 * np.pi * u[:, 1]
        z = np.column_stack([r * np.cos(t), r * np.sin(t)]).reshape(-1)[:n]
        return float(z[0]) if size is None else z.reshape(size)

    def exponential(self, size=None):
        n = 1 if size is None else int(np.prod(size))
        e = -np.log1p(-self.uniform(n))
        return float(e[0]) if size is None else e.reshape(size)

    def complex_normal(self, shape) -> np.ndarray:
        """Entries with E|z|^2 = 1."""
        g = self.normal(tuple(shape) + (2,))
        return (g[..., 0] + 1j * g[..., 1]) / np.sqrt(2.0)

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, stream={self.stream})"


def as_rng(rng) -> SeededRng:
    if isinstance(rng, SeededRng):
        return rng
    return SeededRng(42 if rng is None else rng)


# --------------------------------------------------------------------------
# sphere and qubit objects


def random_unit_vectors(rng: SeededRng, n: int) -> np.ndarray:
    """``n`` points uniform on the 2-sphere (normalized Gaussians), shape (n, 3)."""
    v = rng.normal((n, 3))
    norms = np.linalg.norm(v, axis=1)
    bad = norms < 1e-150
    while np.any(bad):
        v[bad] = rng.normal((int(bad.sum()), 3))
        norms = np.linalg.norm(v, axis=1)
        bad = norms < 1e-150
    return v / norms[:, None]


def random_unit_vector3(rng: SeededRng) -> np.ndarray:
    return random_unit_vectors(rng, 1)[0]


def _unit(a, name: str = "vector") -> np.ndarray:
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > 1e-10:
        raise NonUnitVector(f"{name} must be a real unit 3-vector, got {a}")
    return a


def qubit_observable(a) -> HermitianObservable:
    """``a . sigma`` for a real unit vector ``a``."""
    return HermitianObservable(np.tensordot(_unit(a), PAULI, axes=1))


def bloch_radius(purity: float) -> float:
    if not (0.5 - 1e-12 <= purity <= 1.0 + 1e-12):
        raise PurityOutOfRange(f"qubit purity must lie in [1/2, 1], got {purity}")
    return math.sqrt(min(max(2.0 * purity - 1.0, 0.0), 1.0))


def qubit_state(purity: float, n=(0.0, 0.0, 1.0)) -> DensityMatrix:
    """``(I + r n . sigma)/2`` with Bloch radius ``r = sqrt(2P - 1)``."""
    r = bloch_radius(purity)
    n = _unit(n, "direction")
    return DensityMatrix((np.eye(2) + r * np.tensordot(n, PAULI, axes=1)) / 2)


# --------------------------------------------------------------------------
# random states and observables


def haar_unitary(rng: SeededRng, d: int) -> np.ndarray:
    """QR of a complex Ginibre matrix with the phases of R's diagonal removed."""
    q, r = np.linalg.qr(rng.complex_normal((d, d)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_spectrum(rng: SeededRng, d: int) -> np.ndarray:
    """Uniform point on the probability simplex."""
    e = rng.exponential(d)
    return e / e.sum()


def random_density(rng: SeededRng, d: int, spectrum=None, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    if d < 2:
        raise ValidationError("random_density needs d >= 2")
    if spectrum is None:
        lam = random_spectrum(rng, d)
    else:
        lam = np.asarray(spectrum, dtype=float).reshape(-1)
        if lam.size != d or np.any(lam < 0) or not np.all(np.isfinite(lam)) or abs(lam.sum() - 1) > 1e-12:
            raise BadSpectrum(f"spectrum must be a probability vector of length {d}")
    u = haar_unitary(rng, d)
    return DensityMatrix((u * lam) @ dagger(u), tol)


def random_observable(rng: SeededRng, d: int, scale: float = 1.0) -> HermitianObservable:
    g = rng.complex_normal((d, d))
    return HermitianObservable(scale * (g + dagger(g)) / 2)


# --------------------------------------------------------------------------
# purity averages

SWEEP_KINDS = (
    RelationKind.ROBERTSON,
    RelationKind.SCHRODINGER,
    RelationKind.GENERALIZED_ROBERTSON,
    RelationKind.GENERALIZED_SCHRODINGER,
)
SWEEP_HEADER = (
    "P,n,rob_mc,rob_se,sch_mc,sch_se,grob_mc,grob_se,gsch_mc,gsch_se,"
    "rob_an,sch_an,grob_an,gsch_an,seed"
)


def avg_bounds_analytic(purity: float) -> tuple[float, float, float, float]:
    """Closed-form averages over uniform a, b of the four plotted bounds.

    Order: Robertson, Schrodinger, generalized Robertson, generalized
    Schrodinger (``c'_opt |<[A,B]>|^2 + Cov^2``).
    """
    bloch_radius(purity)
    p = purity
    return (
        2.0 / 9.0 * (2.0 * p - 1.0),
        4.0 / 9.0 * (p * p - p + 1.0),
        2.0 / 9.0,
        4.0 / 9.0 * (p * p - 2.0 * p + 2.0),
    )


def _batched_rhs(rho: DensityMatrix, direction: np.ndarray, a: np.ndarray, b: np.ndarray, kinds) -> dict:
    """Right-hand sides for many observable pairs on one qubit state.

    On the maximally mixed qubit the generalized coefficient is replaced by
    its limit along ``direction`` (state ``(I + r n.sigma)/2`` with r -> 0+),
    which is ``|Tr(n.sigma [A,B])|^2 / 16``. This keeps the purity curves
    continuous at P = 1/2.
    """
    A = np.tensordot(a, PAULI, axes=1)
    B = np.tensordot(b, PAULI, axes=1)
    r = rho.matrix
    AB, BA = A @ B, B @ A
    C = AB - BA
    comm_sq = np.abs(np.einsum("kij,ji->k", C, r)) ** 2
    ea = np.einsum("kij,ji->k", A, r).real
    eb = np.einsum("kij,ji->k", B, r).real
    cov = 0.5 * np.einsum("kij,ji->k", AB + BA, r).real - ea * eb
    rob = 0.25 * comm_sq
    out = {}
    need = set(kinds)
    if need & {RelationKind.ROBERTSON, RelationKind.SCHRODINGER, RelationKind.STRENGTHENED_SCHRODINGER}:
        out[RelationKind.ROBERTSON] = rob
        out[RelationKind.SCHRODINGER] = rob + cov ** 2
    if need & {RelationKind.NORM_TYPE_I, RelationKind.STRENGTHENED_SCHRODINGER}:
        norm_sq = np.einsum("kji,kjl,li->k", C.conj(), C, r).real
        out[RelationKind.NORM_TYPE_I] = c_opt(rho.spectrum) * norm_sq
        out[RelationKind.STRENGTHENED_SCHRODINGER] = out[RelationKind.SCHRODINGER] + out[RelationKind.NORM_TYPE_I]
    if need & {RelationKind.GENERALIZED_ROBERTSON, RelationKind.GENERALIZED_SCHRODINGER,
               RelationKind.NORM_TYPE_II_COMBINED}:
        coeff = c_prime_opt(rho.spectrum)
        if coeff is MAXIMALLY_MIXED:
            nsig = np.tensordot(direction, PAULI, axes=1)
            grob = np.abs(np.einsum("ij,kji->k", nsig, C)) ** 2 / 16.0
        else:
            grob = coeff * comm_sq
        out[RelationKind.GENERALIZED_ROBERTSON] = grob
        out[RelationKind.GENERALIZED_SCHRODINGER] = grob + cov ** 2
        out[RelationKind.NORM_TYPE_II_COMBINED] = out[RelationKind.GENERALIZED_SCHRODINGER]
    if RelationKind.MAXIMALLY_MIXED in need:
        out[RelationKind.MAXIMALLY_MIXED] = np.linalg.norm(C, ord=2, axis=(1, 2)) ** 2 / 4.0
    return {k: out[k] for k in kinds}


def mc_average(purity: float, n: int, rng=None, kinds=SWEEP_KINDS, direction=(0.0, 0.0, 1.0),
               chunk: int = 1 << 14) -> dict:
    """Monte Carlo mean and standard error of each bound over uniform a, b.

    Samples are drawn in fixed chunks of ``chunk`` pairs, chunk ``k`` from
    ``rng.substream(k)``. Per-chunk sums (numpy pairwise summation) are merged
    in chunk order, so the result depends only on (seed, stream, P, n, chunk).
    """
    if n < 1:
        raise ValidationError("need at least one sample")
    rng = as_rng(rng)
    direction = _unit(direction, "direction")
    rho = qubit_state(purity, direction)
    kinds = tuple(kinds)
    sums = {k: [] for k in kinds}
    m2s = {k: [] for k in kinds}
    counts = []
    for k, start in enumerate(range(0, n, chunk)):
        m = min(chunk, n - start)
        sub = rng.substream(k)
        a = random_unit_vectors(sub, m)
        b = random_unit_vectors(sub, m)
        vals = _batched_rhs(rho, direction, a, b, kinds)
        counts.append(m)
        for kind, v in vals.items():
            s = float(np.sum(v))
            sums[kind].append(s)
            m2s[kind].append(float(np.sum((v - s / m) ** 2)))
    counts_arr = np.array(counts, dtype=float)
    result = {}
    for kind in kinds:
        s = np.array(sums[kind])
        mean = float(np.sum(s)) / n
        m2 = float(np.sum(np.array(m2s[kind]) + counts_arr * (s / counts_arr - mean) ** 2))
        se = math.sqrt(m2 / (n - 1) / n) if n > 1 else float("nan")
        result[kind] = (mean, se)
    return result


@dataclass(frozen=True)
class PuritySweepRow:
    purity: float
    n_samples: int
    seed: int
    mc: tuple
    se: tuple
    analytic: tuple

    def csv_fields(self) -> list[str]:
        cols = [repr(float(self.purity)), str(self.n_samples)]
        for m, s in zip(self.mc, self.se):
            cols += [repr(float(m)), repr(float(s))]
        cols += [repr(float(x)) for x in self.analytic]
        cols.append(str(self.seed))
        return cols

    def to_dict(self) -> dict:
        names = ("rob", "sch", "grob", "gsch")
        out = {"P": self.purity, "n": self.n_samples}
        for name, m, s, an in zip(names, self.mc, self.se, self.analytic):
            out[f"{name}_mc"], out[f"{name}_se"], out[f"{name}_an"] = m, s, an
        out["seed"] = self.seed
        return out

    def z_scores(self) -> tuple:
        return tuple((m - a) / s if s > 0 else (0.0 if m == a else math.inf)
                     for m, s, a in zip(self.mc, self.se, self.analytic))


def avg_bounds_mc(purity: float, n: int, rng=None, direction=(0.0, 0.0, 1.0)) -> PuritySweepRow:
    rng = as_rng(rng)
    res = mc_average(purity, n, rng, SWEEP_KINDS, direction)
    return PuritySweepRow(
        purity=float(purity),
        n_samples=int(n),
        seed=rng.seed,
        mc=tuple(res[k][0] for k in SWEEP_KINDS),
        se=tuple(res[k][1] for k in SWEEP_KINDS),
        analytic=avg_bounds_analytic(purity),
    )


def purity_grid(pmin: float, pmax: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    if not (0.5 <= pmin <= pmax <= 1.0):
        raise PurityOutOfRange(f"need 0.5 <= pmin <= pmax <= 1, got pmin={pmin}, pmax={pmax}")
    return np.linspace(pmin, pmax, steps)


def purity_sweep(pmin: float, pmax: float, steps: int, samples: int, seed: int = 42) -> list[PuritySweepRow]:
    """One row per grid point; every row reuses the same sample streams."""
    return [avg_bounds_mc(float(p), samples, SeededRng(seed)) for p in purity_grid(pmin, pmax, steps)]
