"""JSON wire formats.

Matrix: ``{"dim": d, "re": [[...]], "im": [[...]]}``, row-major, both blocks
d x d (``im`` may be omitted for real matrices).

Model: ``{"rho", "rho_app", "U", "A", "B", "A_app", "B_app"}``, each a matrix.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .linalg import as_matrix
from .measurement import MeasurementModel

MODEL_KEYS = ("rho", "rho_app", "U", "A", "B", "A_app", "B_app")


def matrix_to_json(x) -> dict:
    a = as_matrix(x)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_json(obj, source: str = "<matrix>") -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise ParseError(f"{source}: expected an object with keys 'dim', 're', 'im'")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{source}: non-numeric matrix entries ({exc})") from None
    dim = obj.get("dim", re.shape[0] if re.ndim else None)
    if re.ndim != 2 or re.shape != im.shape or re.shape != (dim, dim):
        raise ParseError(f"{source}: 're'/'im' must both be {dim} x {dim} arrays")
    try:
        return as_matrix(re + 1j * im, source)
    except ValidationError as exc:
        raise ParseError(str(exc)) from None


def _read_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(_read_json(path), str(path))


def save_matrix(path, x) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(x)))


def model_to_json(m: MeasurementModel) -> dict:
    return {k: matrix_to_json(getattr(m, k)) for k in MODEL_KEYS}


def model_from_json(obj, source: str = "<model>") -> MeasurementModel:
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: expected a JSON object")
    missing = [k for k in MODEL_KEYS if k not in obj]
    if missing:
        raise ParseError(f"{source}: missing keys {missing}")
    mats = {k: matrix_from_json(obj[k], f"{source}:{k}") for k in MODEL_KEYS}
    return MeasurementModel(**mats)


def load_model(path) -> MeasurementModel:
    return model_from_json(_read_json(path), str(path))


def save_model(path, m: MeasurementModel) -> None:
    Path(path).write_text(json.dumps(model_to_json(m)))
