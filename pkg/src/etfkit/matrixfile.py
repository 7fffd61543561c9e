"""JSON matrix files.

Seidel matrices are stored either densely or as root-of-unity exponents::

    {"n": 4, "format": "dense", "entries": [[[re, im], ...], ...]}
    {"n": 4, "format": "rou", "order": 12, "exponents": [[null, 0, ...], ...]}

Analysis operators of arbitrary Parseval frames use ``"format": "frame"``
with an extra ``"k"`` and an n x k ``entries`` grid. Unknown keys (such as
``"provenance"``) are ignored on read.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Union

import numpy as np

from .errors import MatrixFormatError, NonzeroDiagonal
from .etf import AnalysisOperator
from .seidel import RootOfUnityGrid, SeidelMatrix, validate

Loaded = Union[SeidelMatrix, AnalysisOperator]


def _need(obj: dict, key: str, kind):
    if key not in obj:
        raise MatrixFormatError(f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise MatrixFormatError(f"key {key!r} has the wrong type")
    return val


def _complex_grid(rows, n_rows: int, n_cols: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n_rows:
        raise MatrixFormatError(f"'entries' must have {n_rows} rows")
    out = np.zeros((n_rows, n_cols), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n_cols:
            raise MatrixFormatError(f"row {i} must have {n_cols} entries")
        for j, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)):
                raise MatrixFormatError(f"entry ({i},{j}) must be a [re, im] pair")
            out[i, j] = complex(cell[0], cell[1])
    return out


def from_obj(obj) -> Loaded:
    """Decode a parsed JSON object (raises MatrixFormatError or a validation error)."""
    if not isinstance(obj, dict):
        raise MatrixFormatError("top level must be a JSON object")
    n = _need(obj, "n", int)
    if n < 1:
        raise MatrixFormatError("'n' must be positive")
    fmt = _need(obj, "format", str)
    if fmt == "dense":
        m = _complex_grid(_need(obj, "entries", list), n, n)
        for i in range(n):
            if m[i, i] != 0:
                raise NonzeroDiagonal(i, complex(m[i, i]))
        return validate(m)
    if fmt == "rou":
        order = _need(obj, "order", int)
        exps = _need(obj, "exponents", list)
        if len(exps) != n or any(not isinstance(r, list) or len(r) != n for r in exps):
            raise MatrixFormatError(f"'exponents' must be {n} x {n}")
        for i, r in enumerate(exps):
            for j, e in enumerate(r):
                if e is None:
                    if i != j:
                        raise MatrixFormatError(f"null exponent off the diagonal at ({i},{j})")
                elif not isinstance(e, int) or isinstance(e, bool):
                    raise MatrixFormatError(f"exponent at ({i},{j}) must be an integer or null")
        if order < 1:
            raise MatrixFormatError("'order' must be positive")
        return RootOfUnityGrid(order, tuple(tuple(r) for r in exps)).to_seidel()
    if fmt == "frame":
        k = _need(obj, "k", int)
        return AnalysisOperator(_complex_grid(_need(obj, "entries", list), n, k))
    raise MatrixFormatError(f"unknown format {fmt!r}")


def parse(text: str) -> Loaded:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return from_obj(obj)


def load(path: Union[str, Path]) -> tuple[Loaded, bytes]:
    """Read a matrix file; returns the decoded object and the raw bytes."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise MatrixFormatError(f"{path} is not UTF-8") from None
    return parse(text), raw


def _pair(z: complex) -> list[float]:
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def dense_obj(q) -> dict:
    m = np.asarray(q, dtype=np.complex128)
    return {"n": int(m.shape[0]), "format": "dense", "entries": [[_pair(z) for z in row] for row in m]}


def rou_obj(grid: RootOfUnityGrid) -> dict:
    return {"n": grid.n, "format": "rou", "order": grid.order,
            "exponents": [list(r) for r in grid.exponents]}


def frame_obj(v: AnalysisOperator) -> dict:
    return {"n": v.n, "k": v.k, "format": "frame",
            "entries": [[_pair(z) for z in row] for row in v.entries]}


def digest(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()
