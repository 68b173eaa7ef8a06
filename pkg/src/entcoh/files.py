"""JSON state and density files.

State file::

    {"dims": [d_a, d_b], "amplitudes": [[re, im], ...]}      # row-major, i*d_b + j

Density file::

    {"dims": [d_a, d_b], "entries": [[re, im], ...]}         # row-major D x D

For a density ``D`` is the product of ``dims``; ``dims`` may hold a single
entry for a system with no bipartite structure.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import DEFAULT_TOL
from .states import DensityOperator, PureBipartiteState, new_state


class FileFormatError(Exception):
    """The file is unreadable or not shaped like a state/density document."""


def _load(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    return doc


def _dims(doc: dict, path) -> tuple[int, ...]:
    dims = doc.get("dims")
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)):
        raise FileFormatError(f"{path}: 'dims' must be a list of positive integers")
    return tuple(dims)


def _complex_list(doc: dict, key: str, path) -> np.ndarray:
    raw = doc.get(key)
    if not isinstance(raw, list):
        raise FileFormatError(f"{path}: '{key}' must be a list of [re, im] pairs")
    out = np.empty(len(raw), dtype=np.complex128)
    for i, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise FileFormatError(f"{path}: {key}[{i}] is not an [re, im] pair")
        out[i] = complex(pair[0], pair[1])
    return out


def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def read_state(path) -> PureBipartiteState:
    doc = _load(path)
    dims = _dims(doc, path)
    if len(dims) != 2:
        raise FileFormatError(f"{path}: a state needs two subsystem dimensions")
    return new_state(dims[0], dims[1], _complex_list(doc, "amplitudes", path))


def read_density(path, tol: float = DEFAULT_TOL) -> tuple[DensityOperator, tuple[int, ...]]:
    doc = _load(path)
    dims = _dims(doc, path)
    size = int(np.prod(dims))
    entries = _complex_list(doc, "entries", path)
    if entries.size != size * size:
        raise FileFormatError(f"{path}: expected {size * size} entries, got {entries.size}")
    return DensityOperator.from_matrix(entries.reshape(size, size), tol), dims


def write_state(path, psi: PureBipartiteState) -> None:
    doc = {"dims": [psi.dim_a, psi.dim_b], "amplitudes": _pairs(psi.coeffs)}
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def write_density(path, matrix, dims) -> None:
    doc = {"dims": [int(d) for d in dims], "entries": _pairs(matrix)}
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")
