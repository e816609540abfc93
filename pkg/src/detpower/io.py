"""JSON readers and writers for POVMs, states, candidate sets and strategies.

Matrix encoding: row-major nested lists with each complex entry a [re, im]
pair.  NaN/Inf anywhere in a file is rejected at parse time.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .adaptive import AdaptiveStrategy
from .core import DensityMatrix, Povm
from .errors import ParseError, StructuralError


def _reject_constant(token):
    raise ParseError(f"non-finite number {token!r} in input")


def loads_strict(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads_strict(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def matrix_from_json(obj, dim: int, what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: entries must be [re, im] pairs") from exc
    if arr.shape != (dim, dim, 2):
        raise ParseError(f"{what}: expected shape {dim}x{dim} of [re, im] pairs, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{what}: non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(mat: np.ndarray):
    m = np.asarray(mat, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def povm_from_json(obj) -> Povm:
    if not isinstance(obj, dict) or "dim" not in obj or "elements" not in obj:
        raise ParseError('POVM file must be an object with "dim" and "elements"')
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError('"dim" must be a positive integer')
    elems = obj["elements"]
    if not isinstance(elems, list) or not elems:
        raise ParseError('"elements" must be a non-empty list')
    mats = [matrix_from_json(e, dim, f"element {k}") for k, e in enumerate(elems)]
    return Povm(tuple(mats))


def povm_to_json(p: Povm):
    return {"dim": p.dim, "elements": [matrix_to_json(e) for e in p.elements]}


def state_from_json(obj) -> DensityMatrix:
    if not isinstance(obj, dict) or "dim" not in obj or "state" not in obj:
        raise ParseError('state file must be an object with "dim" and "state"')
    return DensityMatrix(matrix_from_json(obj["state"], obj["dim"], "state"))


def candidates_from_json(obj) -> list:
    if not isinstance(obj, dict) or "dim" not in obj or "states" not in obj:
        raise ParseError('candidates file must be an object with "dim" and "states"')
    dim = obj["dim"]
    return [
        DensityMatrix(matrix_from_json(s, dim, f"state {k}"))
        for k, s in enumerate(obj["states"])
    ]


def _history_from_string(text: str) -> tuple:
    # histories are strings of 1-based outcome digits, e.g. "" / "1" / "12"
    try:
        return tuple(int(ch) - 1 for ch in text)
    except ValueError as exc:
        raise ParseError(f"bad history string {text!r}") from exc


def _history_to_string(hist) -> str:
    return "".join(str(k + 1) for k in hist)


def strategy_from_json(obj) -> AdaptiveStrategy:
    for key in ("depth", "dim", "candidates", "choices"):
        if not isinstance(obj, dict) or key not in obj:
            raise ParseError(f'strategy file is missing "{key}"')
    dim = obj["dim"]
    cands = tuple(
        DensityMatrix(matrix_from_json(s, dim, f"candidate {k}"))
        for k, s in enumerate(obj["candidates"])
    )
    choices = {}
    for hist_str, pair in obj["choices"].items():
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"choice at {hist_str!r} must be a pair of candidate indices")
        choices[_history_from_string(hist_str)] = (int(pair[0]), int(pair[1]))
    grouping = None
    if obj.get("grouping") is not None:
        grouping = frozenset(_history_from_string(h) for h in obj["grouping"])
    return AdaptiveStrategy(
        depth=int(obj["depth"]), candidates=cands, choices=choices, grouping=grouping
    )


def strategy_to_json(strat: AdaptiveStrategy, dim: int):
    out = {
        "depth": strat.depth,
        "dim": dim,
        "candidates": [matrix_to_json(c.mat) for c in strat.candidates],
        "choices": {
            _history_to_string(h): list(pair) for h, pair in sorted(strat.choices.items())
        },
    }
    if strat.grouping is not None:
        out["grouping"] = sorted(_history_to_string(h) for h in strat.grouping)
    return out


def finite_or_none(x: float):
    """JSON-safe scalar: infinities become the string 'inf'."""
    if x is None or math.isfinite(x):
        return x
    return "inf" if x > 0 else "-inf"
