"""JSON wire formats.

Floats are rounded to 12 significant digits and complex numbers written as
``[re, im]``, so identical inputs always serialize to identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .classical import CoarseGraining, FinitePhaseSpace
from .compat import CompatibilityReport
from .errors import InvalidInput, QTruthError
from .framework import DecompositionOfIdentity
from .linalg import DEFAULT_TOL, Tolerance, as_matrix
from .nogo import FrameworkCollection, SearchTrace, UTFResult


def fmt_float(x: float) -> float | int:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize {x}")
    r = float(f"{x:.12g}")
    if r == 0.0:
        return 0.0
    return r


def matrix_to_json(m) -> dict:
    m = np.asarray(m)
    return {
        "dim": int(m.shape[0]),
        "entries": [[[fmt_float(z.real), fmt_float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        dim = obj["dim"]
        entries = obj["entries"]
        m = np.array([[complex(re, im) for re, im in row] for row in entries], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed matrix: {exc}") from None
    if m.shape != (dim, dim):
        raise InvalidInput(f"matrix entries have shape {m.shape}, declared dim {dim}")
    try:
        return as_matrix(m)
    except QTruthError as exc:
        raise InvalidInput(str(exc)) from None


def decomposition_to_json(d: DecompositionOfIdentity) -> dict:
    return {"dim": d.dim, "cells": [matrix_to_json(c) for c in d.cells]}


def decomposition_from_json(obj, tol: Tolerance = DEFAULT_TOL) -> DecompositionOfIdentity:
    try:
        cells = [matrix_from_json(c) for c in obj["cells"]]
        dim = obj.get("dim")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput(f"malformed decomposition: {exc}") from None
    if dim is not None and any(c.shape[0] != dim for c in cells):
        raise InvalidInput(f"cell dimensions disagree with declared dim {dim}")
    return DecompositionOfIdentity(tuple(cells), tol)


def observable_from_json(obj) -> np.ndarray:
    try:
        return matrix_from_json(obj["matrix"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed observable: {exc}") from None


def report_to_json(r: CompatibilityReport) -> dict:
    return {
        "compatible": r.compatible,
        "witness": list(r.witness) if r.witness is not None else None,
        "refinement": decomposition_to_json(r.refinement) if r.refinement is not None else None,
    }


def collection_to_json(fc: FrameworkCollection) -> dict:
    return {"dim": fc.dim, "frameworks": [decomposition_to_json(f) for f in fc.frameworks]}


def collection_from_json(obj, tol: Tolerance = DEFAULT_TOL) -> FrameworkCollection:
    try:
        fws = [decomposition_from_json(f, tol) for f in obj["frameworks"]]
        dim = obj.get("dim")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput(f"malformed framework collection: {exc}") from None
    if dim is not None and any(f.dim != dim for f in fws):
        raise InvalidInput(f"framework dimensions disagree with declared dim {dim}")
    return FrameworkCollection(tuple(fws), tol)


def trace_to_json(t: SearchTrace) -> dict:
    return {
        "nodes": t.nodes,
        "conflicts": [
            {"framework": c.framework, "cell": c.cell, "clashing_projector_ids": list(c.clashing_projector_ids)}
            for c in t.conflicts
        ],
    }


def utf_result_to_json(r: UTFResult) -> dict:
    out = {"result": "SAT" if r.sat else "UNSAT", "trace": trace_to_json(r.trace)}
    if r.sat:
        out["solutions"] = [list(s) for s in r.solutions]
    return out


def phase_space_to_json(space: FinitePhaseSpace) -> dict:
    return {"points": [[fmt_float(pt.x), fmt_float(pt.p)] for pt in space.points]}


def phase_space_from_json(obj) -> FinitePhaseSpace:
    try:
        return FinitePhaseSpace(tuple((float(x), float(p)) for x, p in obj["points"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed phase space: {exc}") from None


def partition_to_json(g: CoarseGraining) -> dict:
    return {"cells": [[int(i) for i in np.flatnonzero(c.values)] for c in g.cells]}


def partition_from_json(obj, space: FinitePhaseSpace) -> CoarseGraining:
    try:
        return CoarseGraining.from_partition(space, obj["cells"])
    except (KeyError, TypeError, IndexError) as exc:
        raise InvalidInput(f"malformed partition: {exc}") from None


def _normalize(obj):
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=2)


def load_json(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from None
