"""JSON interchange for operators, boxes, measurement models and synthesis output.

Complex numbers are encoded as ``[re, im]`` pairs; matrices as row-major
nested lists of such pairs. Boxes store a flat probability list ordered by
settings first, then outcomes, lexicographically with 0-based indices.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .boxes import CorrelationBox, Scenario
from .errors import TraceRuleError
from .hilbert import HermitianOperator
from .operators import MeasurementModel, Povm


class FormatError(TraceRuleError):
    """Malformed or inconsistent JSON document."""


def encode_matrix(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not a rectangular array of [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"matrix must have shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_vector(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex).ravel()]


def operator_to_json(op: HermitianOperator) -> dict:
    return {"local_dims": list(op.local_dims), "matrix": encode_matrix(op.matrix)}


def operator_from_json(data: dict) -> HermitianOperator:
    try:
        return HermitianOperator(decode_matrix(data["matrix"]), data["local_dims"])
    except KeyError as exc:
        raise FormatError(f"operator document is missing {exc}") from None


def box_to_json(box: CorrelationBox) -> dict:
    n, m, r = box.scenario
    return {
        "n_parties": n,
        "n_settings": m,
        "n_outcomes": r,
        "probs": [float(p) for p in box.flat()],
    }


def box_from_json(data: dict, strict: bool = True) -> CorrelationBox:
    try:
        scenario = Scenario(int(data["n_parties"]), int(data["n_settings"]), int(data["n_outcomes"]))
        probs = np.asarray(data["probs"], dtype=float)
    except KeyError as exc:
        raise FormatError(f"box document is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad box document: {exc}") from None
    if probs.ndim != 1:
        raise FormatError("probs must be a flat list")
    return CorrelationBox(scenario, probs, strict=strict)


def measurements_to_json(mm: MeasurementModel) -> dict:
    return {
        "parties": [
            {"dim": settings[0].dim, "settings": [[encode_matrix(e) for e in p] for p in settings]}
            for settings in mm.parties
        ]
    }


def measurements_from_json(data: dict) -> MeasurementModel:
    try:
        parties = []
        for party in data["parties"]:
            settings = [Povm([decode_matrix(e) for e in elems]) for elems in party["settings"]]
            if any(p.dim != int(party["dim"]) for p in settings):
                raise FormatError("POVM size disagrees with declared party dim")
            parties.append(settings)
    except KeyError as exc:
        raise FormatError(f"measurement document is missing {exc}") from None
    return MeasurementModel(parties)


def model_to_json(operator: HermitianOperator, mm: MeasurementModel, **extra) -> dict:
    """Operator + measurements document accepted by the ``evaluate`` command."""
    doc = {"operator": operator_to_json(operator), "measurements": measurements_to_json(mm)}
    doc.update(extra)
    return doc


def model_from_json(data: dict):
    try:
        return operator_from_json(data["operator"]), measurements_from_json(data["measurements"])
    except KeyError as exc:
        raise FormatError(f"model document is missing {exc}") from None


def synthesis_to_json(model) -> dict:
    n, m, r = model.scenario
    return model_to_json(
        model.operator,
        model.povms,
        scenario={"n_parties": n, "n_settings": m, "n_outcomes": r},
        seed=model.seed,
        local_dim=model.local_dim,
        weights=model.weights.tolist(),
        vectors=[[encode_vector(v) for v in row] for row in model.vectors],
    )


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
