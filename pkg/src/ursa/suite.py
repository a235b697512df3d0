"""Bulk randomized verification of every relation in the catalog."""

from __future__ import annotations

import numpy as np

from .bounds import RelationKind, check_all, relative_slack
from .config import DEFAULT_TOL, Tolerances
from .measurement import random_model, evaluate
from .sampling import SeededRng, random_density, random_observable, random_spectrum

DOMINATION_ABS_TOL = 1e-12
STRICT_THRESHOLD = 1e-6


def random_instance(rng: SeededRng, d: int, k: int):
    """Instance ``k`` of dimension ``d``.

    Every 100th state is maximally mixed and every 10th has a rank
    deficiency, so the degenerate code paths are exercised alongside generic
    faithful states.
    """
    if k % 100 == 99:
        lam = np.full(d, 1.0 / d)
    elif k % 10 == 9:
        lam = random_spectrum(rng, d)
        zeros = 1 + int(rng.uniform() * (d - 1))
        lam[:zeros] = 0.0
        lam /= lam.sum()
    else:
        lam = None
    rho = random_density(rng, d, lam)
    return rho, random_observable(rng, d), random_observable(rng, d)


def _new_stats() -> dict:
    return {"checked": 0, "violations": 0, "worst_relative_slack": None}


def _update(stats: dict, value: float, ok: bool) -> None:
    stats["checked"] += 1
    stats["violations"] += 0 if ok else 1
    w = stats["worst_relative_slack"]
    stats["worst_relative_slack"] = value if w is None else min(w, value)


def run_suite(dims=(2, 3, 4, 5, 6), instances: int = 1000, seed: int = 42, models: int = 100,
              tol: Tolerances = DEFAULT_TOL) -> dict:
    """Check all relation kinds on ``instances`` random (rho, A, B) per dimension.

    Also tracks the two domination gaps (generalized minus classical
    Robertson and Schrodinger right-hand sides) and, when ``models > 0``,
    the error-disturbance inequalities on random two-qubit models.
    """
    relations = {k.value: _new_stats() for k in RelationKind}
    per_dim = {}
    domination = {
        "generalized_robertson_minus_robertson": {"checked": 0, "violations": 0, "min_gap": None,
                                                  "strict_expected": 0, "strict_failures": 0},
        "generalized_schrodinger_minus_schrodinger": {"checked": 0, "violations": 0, "min_gap": None},
    }
    for d in dims:
        base = SeededRng(seed, (int(d),))
        worst = None
        violations = 0
        for k in range(instances):
            rho, a, b = random_instance(base.substream(k), d, k)
            reports = {r.kind: r for r in check_all(rho, a, b, tol=tol)}
            for kind, rep in reports.items():
                rs = relative_slack(rep)
                _update(relations[kind.value], rs, rep.holds)
                worst = rs if worst is None else min(worst, rs)
                violations += 0 if rep.holds else 1
            for name, hi, lo in (
                ("generalized_robertson_minus_robertson", RelationKind.GENERALIZED_ROBERTSON, RelationKind.ROBERTSON),
                ("generalized_schrodinger_minus_schrodinger", RelationKind.GENERALIZED_SCHRODINGER,
                 RelationKind.SCHRODINGER),
            ):
                gap = reports[hi].rhs - reports[lo].rhs
                st = domination[name]
                st["checked"] += 1
                st["violations"] += 0 if gap >= -DOMINATION_ABS_TOL else 1
                st["min_gap"] = gap if st["min_gap"] is None else min(st["min_gap"], gap)
                if name.startswith("generalized_robertson"):
                    comm = np.sqrt(reports[RelationKind.ROBERTSON].rhs * 4.0)
                    if rho.spectrum.lambda_min > STRICT_THRESHOLD and comm > STRICT_THRESHOLD:
                        st["strict_expected"] += 1
                        st["strict_failures"] += 0 if gap > 0 else 1
        per_dim[str(d)] = {"instances": instances, "violations": violations, "worst_relative_slack": worst}

    summary = {
        "seed": seed,
        "dims": [int(d) for d in dims],
        "instances_per_dim": instances,
        "relations": relations,
        "per_dim": per_dim,
        "domination": domination,
    }
    if models > 0:
        summary["measurement"] = run_measurement_suite(models, seed, tol)
    summary["theorem_violations"] = (
        sum(s["violations"] for s in relations.values())
        + sum(s["violations"] for s in domination.values())
        + domination["generalized_robertson_minus_robertson"]["strict_failures"]
        + summary.get("measurement", {}).get("violations", 0)
    )
    return summary


def run_measurement_suite(models: int, seed: int = 42, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Error-disturbance verdicts on random two-qubit models.

    Every third model uses a pure apparatus, where the spectral coefficient
    must equal 1/2.
    """
    base = SeededRng(seed, (0xED,))
    counts = {"ozawa1": 0, "ozawa2": 0, "ozawa1_generalized": 0, "ozawa2_generalized": 0}
    worst = None
    dominated = 0
    for k in range(models):
        spec = (0.0, 1.0) if k % 3 == 0 else None
        rep = evaluate(random_model(base.substream(k), 2, 2, spec))
        for key, ok in (("ozawa1", rep.ozawa1_holds), ("ozawa2", rep.ozawa2_holds),
                        ("ozawa1_generalized", rep.ozawa1_generalized_holds),
                        ("ozawa2_generalized", rep.ozawa2_generalized_holds)):
            counts[key] += 0 if ok else 1
        for lhs in (rep.ozawa1_lhs, rep.ozawa2_lhs):
            rs = (lhs - rep.rhs_generalized) / max(1.0, lhs)
            worst = rs if worst is None else min(worst, rs)
        dominated += 0 if rep.rhs_generalized >= rep.rhs_classical else 1
    return {
        "models": models,
        "failures": counts,
        "generalized_below_classical": dominated,
        "worst_relative_slack_generalized": worst,
        "violations": sum(counts.values()) + dominated,
    }
