"""JSON file format for states and channels.

State::

    {"kind": "state", "dim_a": m, "dim_b": n, "matrix": [[[re, im], ...], ...]}

Channel::

    {"kind": "channel", "dim_in": m, "dim_out": n, "kraus": [matrix, ...]}

Matrices are row-major, bipartite rows indexed ``i * n + k``. Every real
number is written with 17 significant digits, so write-then-read is exact.
"""

import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .channels import KrausChannel
from .errors import ParseError
from .states import BipartiteState


def format_number(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    s = f"{x:.17g}"
    # keep a float marker so "-0" stays a float (and keeps its sign) on reload
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _matrix_text(m: np.ndarray, indent: str) -> str:
    rows = []
    for row in np.asarray(m, dtype=complex):
        cells = ", ".join(f"[{format_number(z.real)}, {format_number(z.imag)}]" for z in row)
        rows.append(f"[{cells}]")
    inner = f",\n{indent}  ".join(rows)
    return f"[\n{indent}  {inner}\n{indent}]"


def dumps(obj: Union[BipartiteState, KrausChannel]) -> str:
    if isinstance(obj, BipartiteState):
        return (
            '{\n  "kind": "state",\n'
            f'  "dim_a": {obj.dim_a},\n  "dim_b": {obj.dim_b},\n'
            f'  "matrix": {_matrix_text(obj.rho, "  ")}\n}}\n'
        )
    if isinstance(obj, KrausChannel):
        ops = ",\n    ".join(_matrix_text(op, "    ") for op in obj.kraus)
        return (
            '{\n  "kind": "channel",\n'
            f'  "dim_in": {obj.dim_in},\n  "dim_out": {obj.dim_out},\n'
            f'  "kraus": [\n    {ops}\n  ]\n}}\n'
        )
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _count(doc: dict, key: str) -> int:
    if key not in doc:
        raise ParseError(key, "missing")
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise ParseError(key, f"expected a positive integer, got {val!r}")
    return val


def _number(x, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(field, f"expected a number, got {x!r}")
    return float(x)


def _matrix(raw, rows: int, cols: int, field: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != rows:
        raise ParseError(field, f"expected {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(field, f"row {i} must have {cols} entries")
        for j, cell in enumerate(row):
            if not isinstance(cell, list) or len(cell) != 2:
                raise ParseError(field, f"entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(_number(cell[0], field), _number(cell[1], field))
    return out


def loads(text: str) -> Union[BipartiteState, KrausChannel]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("<document>", f"invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ParseError("<document>", "top level must be an object")
    kind = doc.get("kind")
    if kind == "state":
        m, n = _count(doc, "dim_a"), _count(doc, "dim_b")
        if "matrix" not in doc:
            raise ParseError("matrix", "missing")
        return BipartiteState(_matrix(doc["matrix"], m * n, m * n, "matrix"), m, n)
    if kind == "channel":
        m, n = _count(doc, "dim_in"), _count(doc, "dim_out")
        ops = doc.get("kraus")
        if not isinstance(ops, list) or not ops:
            raise ParseError("kraus", "expected a non-empty list of matrices")
        return KrausChannel(tuple(_matrix(op, n, m, "kraus") for op in ops), m, n)
    raise ParseError("kind", f"expected 'state' or 'channel', got {kind!r}")


def read(path) -> Union[BipartiteState, KrausChannel]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError("<file>", str(exc)) from None
    return loads(text)


def write(path, obj: Union[BipartiteState, KrausChannel]) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def matrix_to_lists(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]
