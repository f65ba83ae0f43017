"""JSON documents for matrices, partitions, channels, witnesses and certificates.

A matrix is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in row-major
order. Floats go through ``json`` unchanged, so finite doubles round-trip
bit for bit.
"""

import json
from dataclasses import fields, is_dataclass

import numpy as np

from .channels import ChoiMatrix, KrausMap
from .matrixcore import DimensionError, as_matrix
from .opconvex import DecompositionWitness
from .partitions import OperationalPartition


class FormatError(ValueError):
    """Malformed JSON document."""


def matrix_to_doc(m) -> dict:
    m = as_matrix(m)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_doc(doc) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix document: {exc}") from None
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise FormatError(f"matrix document has {len(data)} entries for shape {rows}x{cols}")
    try:
        arr = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix entry: {exc}") from None
    if not np.all(np.isfinite(arr)):
        raise FormatError("matrix entries must be finite")
    return arr.reshape(rows, cols)


def partition_to_doc(p) -> list:
    members = p.members if isinstance(p, OperationalPartition) else p
    return [matrix_to_doc(m) for m in members]


def partition_from_doc(doc) -> OperationalPartition:
    if not isinstance(doc, list) or not doc:
        raise FormatError("a partition is a non-empty list of matrices")
    return OperationalPartition.of(matrix_from_doc(m) for m in doc)


def channel_to_doc(phi) -> dict:
    if isinstance(phi, ChoiMatrix):
        return {"dim": phi.dim, "choi": matrix_to_doc(phi.matrix)}
    return {"dim": phi.dim, "kraus": [matrix_to_doc(v) for v in phi.kraus]}


def channel_from_doc(doc):
    """KrausMap from {"dim", "kraus"}, or ChoiMatrix from {"dim", "choi"}."""
    if not isinstance(doc, dict) or "dim" not in doc:
        raise FormatError("a channel document needs 'dim' and 'kraus' (or 'choi')")
    dim = int(doc["dim"])
    try:
        if "kraus" in doc:
            phi = KrausMap.of(matrix_from_doc(m) for m in doc["kraus"])
        elif "choi" in doc:
            phi = ChoiMatrix(dim, matrix_from_doc(doc["choi"]))
        else:
            raise FormatError("channel document has neither 'kraus' nor 'choi'")
    except DimensionError as exc:
        raise FormatError(str(exc)) from None
    if phi.dim != dim:
        raise FormatError(f"declared dim {dim} does not match operators of size {phi.dim}")
    return phi


def witness_to_doc(w: DecompositionWitness) -> dict:
    return {
        "a": matrix_to_doc(w.a),
        "phi1": channel_to_doc(w.phi1),
        "b": matrix_to_doc(w.b),
        "phi2": channel_to_doc(w.phi2),
    }


def witness_from_doc(doc) -> DecompositionWitness:
    try:
        parts = doc["a"], doc["phi1"], doc["b"], doc["phi2"]
    except (KeyError, TypeError):
        raise FormatError("a witness needs 'a', 'phi1', 'b', 'phi2'") from None
    phi1, phi2 = channel_from_doc(parts[1]), channel_from_doc(parts[3])
    if not (isinstance(phi1, KrausMap) and isinstance(phi2, KrausMap)):
        raise FormatError("witness maps must be given by Kraus operators")
    return DecompositionWitness(matrix_from_doc(parts[0]), phi1, matrix_from_doc(parts[2]), phi2)


def to_jsonable(obj):
    """Recursively turn library objects into JSON-compatible values."""
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2:
            return matrix_to_doc(obj)
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (KrausMap, ChoiMatrix)):
        return channel_to_doc(obj)
    if isinstance(obj, DecompositionWitness):
        return witness_to_doc(obj)
    if isinstance(obj, OperationalPartition):
        return partition_to_doc(obj)
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(obj, **kwargs) -> str:
    return json.dumps(to_jsonable(obj), **kwargs)


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
