"""
Matrix JSON format and witness serialization.

Matrix document: {"dim": n, "entries": [[[re, im], ...], ...]} row-major.
Vector document: {"length": n, "entries": [[re, im], ...]}.
Python floats serialize through repr, so JSON round-trips are bit-exact.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence

import numpy as np

from .errors import CorruptWitness, MatrixFormatError
from .linalg_core import as_matrix, as_vector

logger = logging.getLogger(__name__)


def _pair(z: complex):
    return [float(z.real), float(z.imag)]


def _parse_pair(item, field: str) -> complex:
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise MatrixFormatError(f"{field}: expected [re, im] pair")
    try:
        re, im = float(item[0]), float(item[1])
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"{field}: non-numeric entry") from e
    if not (math.isfinite(re) and math.isfinite(im)):
        raise MatrixFormatError(f"{field}: non-finite entry")
    return complex(re, im)


def matrix_to_json(M) -> Dict[str, Any]:
    M = as_matrix(M)
    return {
        "dim": int(M.shape[0]),
        "entries": [[_pair(z) for z in row] for row in M],
    }


def matrix_from_json(data: Any, name: str = "matrix") -> np.ndarray:
    """
    Parse the matrix JSON format.

    Raises:
        MatrixFormatError: naming the offending field
    """
    if not isinstance(data, Mapping):
        raise MatrixFormatError(f"{name}: expected a JSON object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MatrixFormatError(f"{name}.dim: must be a positive integer")
    rows = data.get("entries")
    if not isinstance(rows, list) or len(rows) != dim:
        raise MatrixFormatError(f"{name}.entries: expected {dim} rows")

    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise MatrixFormatError(f"{name}.entries[{i}]: expected {dim} columns (matrix must be square)")
        for j, item in enumerate(row):
            out[i, j] = _parse_pair(item, f"{name}.entries[{i}][{j}]")
    return out


def vector_to_json(v) -> Dict[str, Any]:
    v = as_vector(v)
    return {"length": int(v.shape[0]), "entries": [_pair(z) for z in v]}


def vector_from_json(data: Any, name: str = "vector") -> np.ndarray:
    if not isinstance(data, Mapping):
        raise MatrixFormatError(f"{name}: expected a JSON object")
    length = data.get("length")
    items = data.get("entries")
    if not isinstance(length, int) or isinstance(length, bool) or length < 1:
        raise MatrixFormatError(f"{name}.length: must be a positive integer")
    if not isinstance(items, list) or len(items) != length:
        raise MatrixFormatError(f"{name}.entries: expected {length} entries")
    return np.array([_parse_pair(item, f"{name}.entries[{i}]") for i, item in enumerate(items)],
                    dtype=np.complex128)


def load_matrix(path: str, name: Optional[str] = None) -> np.ndarray:
    """Read a matrix (or vector) document from disk."""
    name = name or Path(path).name
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise MatrixFormatError(f"{name}: cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"{name}: invalid JSON: {e}") from e

    if isinstance(data, Mapping) and "length" in data:
        return vector_from_json(data, name)
    return matrix_from_json(data, name)


def save_matrix(M, path: str) -> str:
    arr = np.asarray(M)
    doc = vector_to_json(arr) if arr.ndim == 1 else matrix_to_json(arr)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)
    return str(path)


# Witnesses

def structure_digest(inputs: Mapping[str, Any], param_names: Sequence[str]) -> str:
    """SHA-256 over input names, kinds and shapes plus parameter names (not values)."""
    parts = []
    for key in sorted(inputs):
        doc = inputs[key]
        if "dim" in doc:
            parts.append(f"{key}:matrix:{doc['dim']}")
        else:
            parts.append(f"{key}:vector:{doc.get('length')}")
    parts.append("params:" + ",".join(sorted(param_names)))
    return hashlib.sha256("|".join(parts).encode("utf-8")).hexdigest()


def make_witness(inputs: Mapping[str, np.ndarray], params: Mapping[str, float],
                 extra: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Serialize checker inputs so the evaluation can be replayed exactly."""
    docs = {}
    for key, value in inputs.items():
        arr = np.asarray(value)
        docs[key] = vector_to_json(arr) if arr.ndim == 1 else matrix_to_json(arr)
    witness = {
        "inputs": docs,
        "structure_digest": structure_digest(docs, list(params)),
    }
    if extra:
        witness.update(extra)
    return witness


def read_witness(witness: Mapping[str, Any], param_names: Sequence[str]) -> Dict[str, np.ndarray]:
    """
    Decode witness inputs, verifying the structure digest.

    Raises:
        CorruptWitness: missing fields or structural mismatch
    """
    docs = witness.get("inputs") if isinstance(witness, Mapping) else None
    if not isinstance(docs, Mapping) or not docs:
        raise CorruptWitness("witness.inputs: missing")
    digest = witness.get("structure_digest")
    try:
        expected = structure_digest(docs, list(param_names))
    except (TypeError, AttributeError) as e:
        raise CorruptWitness(f"witness.inputs: malformed ({e})") from e
    if digest != expected:
        raise CorruptWitness("witness.structure_digest: does not match inputs")

    decoded = {}
    for key, doc in docs.items():
        try:
            if "dim" in doc:
                decoded[key] = matrix_from_json(doc, key)
            else:
                decoded[key] = vector_from_json(doc, key)
        except MatrixFormatError as e:
            raise CorruptWitness(f"witness.inputs.{key}: {e}") from e
    return decoded
