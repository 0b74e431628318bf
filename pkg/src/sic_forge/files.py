"""JSON artifact formats: atomic writes and strict loads.

Every artifact carries ``format_version`` and ``dim``.  Complex numbers are
two-element ``[re, im]`` arrays and matrices are row-major arrays of rows.
Readers ignore unknown fields; a malformed file raises ``FileFormatError``
with the offending field named in the message.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

__all__ = [
    "FORMAT_VERSION",
    "FileFormatError",
    "density_payload",
    "fiducial_payload",
    "load_density",
    "load_json",
    "load_probabilities",
    "load_state_vector",
    "matrix_to_pairs",
    "probabilities_payload",
    "vector_to_pairs",
    "write_json_atomic",
]

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    """Raised when an artifact file is malformed; the message names the bad field."""


def vector_to_pairs(v) -> list:
    """Complex vector as a list of [re, im] pairs."""
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def matrix_to_pairs(m) -> list:
    """Complex matrix as row-major nested lists of [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def write_json_atomic(path, payload) -> None:
    """Serialize to a temp file in the target directory, then rename into place."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    text = json.dumps(payload, indent=2) + "\n"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_json(path) -> dict:
    """Parse a JSON file, mapping syntax errors to FileFormatError."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise FileFormatError(f"{path}: top level must be a JSON object")
    return payload


def _require(payload: dict, field: str, label: str):
    if field not in payload:
        raise FileFormatError(f"{label} file: missing field '{field}'")
    return payload[field]


def _dim_field(payload: dict, label: str) -> int:
    raw = _require(payload, "dim", label)
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 2:
        raise FileFormatError(f"{label} file: field 'dim' must be an integer >= 2")
    return raw


def _pairs_to_vector(data, field: str, label: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{label} file: field '{field}' must be an array of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise FileFormatError(f"{label} file: field '{field}' must be an array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def fiducial_payload(psi, gram: float, quartic: float) -> dict:
    """Fiducial artifact: raw components plus a recomputable residual block."""
    psi = np.asarray(psi, dtype=complex)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "fiducial",
        "dim": int(psi.shape[0]),
        "components": vector_to_pairs(psi),
        "residuals": {"gram": float(gram), "quartic": float(quartic)},
    }


def load_state_vector(path, label: str = "state") -> np.ndarray:
    """Read the components of a state-vector artifact (fiducial files included)."""
    payload = load_json(path)
    d = _dim_field(payload, label)
    psi = _pairs_to_vector(_require(payload, "components", label), "components", label)
    if psi.shape[0] != d:
        raise FileFormatError(f"{label} file: field 'components' has length {psi.shape[0]}, expected dim {d}")
    return psi


def load_fiducial(path) -> np.ndarray:
    """Read a fiducial file; residual blocks are advisory and recomputed by users."""
    return load_state_vector(path, label="fiducial")


def density_payload(matrix, extra: dict | None = None) -> dict:
    """Density-matrix artifact; ``extra`` blocks (diagnostics) are appended as-is."""
    matrix = np.asarray(matrix, dtype=complex)
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "density_matrix",
        "dim": int(matrix.shape[0]),
        "matrix": matrix_to_pairs(matrix),
    }
    if extra:
        payload.update(extra)
    return payload


def load_density(path) -> np.ndarray:
    """Read a density-matrix artifact (structure only; physics checks live elsewhere)."""
    payload = load_json(path)
    d = _dim_field(payload, "density")
    raw = _require(payload, "matrix", "density")
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError("density file: field 'matrix' must be rows of [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise FileFormatError("density file: field 'matrix' must be a square array of [re, im] pairs")
    if arr.shape[0] != d:
        raise FileFormatError(f"density file: field 'matrix' has side {arr.shape[0]}, expected dim {d}")
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def probabilities_payload(p, d: int, extra: dict | None = None) -> dict:
    """Probability-vector artifact; entries are stored as plain floats."""
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "probabilities",
        "dim": int(d),
        "p": [float(x) for x in np.asarray(p, dtype=float)],
    }
    if extra:
        payload.update(extra)
    return payload


def load_probabilities(path) -> np.ndarray:
    """Read a probability-vector artifact of length dim^2."""
    payload = load_json(path)
    d = _dim_field(payload, "probabilities")
    raw = _require(payload, "p", "probabilities")
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError("probabilities file: field 'p' must be a flat list of numbers") from exc
    if arr.ndim != 1 or arr.shape[0] != d * d:
        raise FileFormatError(f"probabilities file: field 'p' must have length dim^2 = {d * d}")
    return arr
