"""JSON encoding of spaces, relations, colligations, pairs and parameters.

Complex scalars are ``[re, im]``; plain numbers are accepted on input.
Matrices are row-major lists of rows.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .boundary import BoundaryPair, direct_pair, from_colligation
from .colligation import UnitaryColligation
from .exceptions import SchemaError
from .extensions import ExtensionParameter
from .pspace import PontryaginSpace
from .realize import RationalFunctionData
from .relation import LinearRelation

__all__ = [
    "encode_complex", "decode_complex",
    "encode_matrix", "decode_matrix",
    "encode_space", "decode_space",
    "encode_relation", "decode_relation",
    "encode_colligation", "decode_colligation",
    "encode_pair", "decode_pair",
    "encode_phi", "decode_phi",
    "decode_realize_input",
    "load_json", "dumps",
]


def _clean(x: float) -> float:
    # Normalize -0.0 so reports are byte-stable.
    x = float(x)
    return 0.0 if x == 0 else x


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [_clean(z.real), _clean(z.imag)]


def decode_complex(obj: Any, path: str = "$") -> complex:
    if isinstance(obj, bool):
        raise SchemaError(path, "expected a number or [re, im]")
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, list) and len(obj) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
        return complex(obj[0], obj[1])
    raise SchemaError(path, "expected a number or [re, im]")


def encode_matrix(a) -> list[list[list[float]]]:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return [[encode_complex(v) for v in row] for row in a]


def decode_matrix(obj: Any, path: str = "$", shape: tuple[int | None, int | None] = (None, None)) -> np.ndarray:
    if isinstance(obj, (int, float, list)) and not isinstance(obj, bool) and (
            not isinstance(obj, list) or (len(obj) == 2 and not isinstance(obj[0], list))):
        # A bare scalar stands for a 1x1 matrix.
        a = np.array([[decode_complex(obj, path)]])
    elif isinstance(obj, list):
        rows = []
        for i, row in enumerate(obj):
            if not isinstance(row, list):
                raise SchemaError(f"{path}[{i}]", "expected a row (list)")
            rows.append([decode_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise SchemaError(path, f"ragged rows with widths {sorted(widths)}")
        cols = widths.pop() if widths else (shape[1] or 0)
        a = np.array(rows, dtype=complex).reshape(len(rows), cols)
    else:
        raise SchemaError(path, "expected a matrix (list of rows)")
    r, c = shape
    if (r is not None and a.shape[0] != r) or (c is not None and a.shape[1] != c):
        raise SchemaError(path, f"expected shape {shape}, got {a.shape}")
    return a


def _field(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(path, f"missing field {key!r}")
    return obj[key]


def _int(obj: Any, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int) or obj < 0:
        raise SchemaError(path, "expected a non-negative integer")
    return obj


def encode_space(s: PontryaginSpace) -> dict:
    j = np.asarray(s.J)
    d = np.diag(j)
    if np.array_equal(j, np.diag(d)) and np.all(d[: s.dim - s.kappa] == 1) and np.all(d[s.dim - s.kappa:] == -1):
        return {"dim": s.dim, "kappa": s.kappa}
    return {"dim": s.dim, "J": encode_matrix(j) if s.dim else []}


def decode_space(obj: Any, path: str = "$") -> PontryaginSpace:
    dim = _int(_field(obj, "dim", path), f"{path}.dim")
    if "J" in obj:
        j = decode_matrix(obj["J"], f"{path}.J", (dim, dim))
        if np.abs(j.imag).max(initial=0) == 0:
            j = j.real
        try:
            return PontryaginSpace(j)
        except ValueError as e:
            raise SchemaError(f"{path}.J", str(e)) from None
    kappa = _int(obj.get("kappa", 0), f"{path}.kappa")
    if kappa > dim:
        raise SchemaError(f"{path}.kappa", "kappa exceeds dim")
    return PontryaginSpace.from_signature(dim, kappa)


def encode_relation(t: LinearRelation) -> dict:
    return {"space_in": encode_space(t.space_in), "space_out": encode_space(t.space_out),
            "generators": encode_matrix(t.graph.basis) if t.dim else []}


def decode_relation(obj: Any, path: str = "$") -> LinearRelation:
    sin = decode_space(_field(obj, "space_in", path), f"{path}.space_in")
    sout = decode_space(_field(obj, "space_out", path), f"{path}.space_out")
    g = decode_matrix(_field(obj, "generators", path), f"{path}.generators",
                      (None, None))
    if g.size == 0:
        g = np.zeros((sin.dim + sout.dim, 0))
    if g.shape[0] != sin.dim + sout.dim:
        raise SchemaError(f"{path}.generators",
                          f"expected {sin.dim + sout.dim} rows, got {g.shape[0]}")
    return LinearRelation.from_generators(sin, sout, g)


def encode_colligation(c: UnitaryColligation) -> dict:
    def m(a):
        return encode_matrix(a) if a.size else []
    return {"state": encode_space(c.state), "L1": c.L1_dim, "L2": c.L2_dim,
            "T": m(c.T), "F": m(c.F), "G": m(c.G), "H": m(c.H)}


def decode_colligation(obj: Any, path: str = "$") -> UnitaryColligation:
    state = decode_space(_field(obj, "state", path), f"{path}.state")
    n = state.dim
    h = decode_matrix(_field(obj, "H", path), f"{path}.H")
    l2, l1 = h.shape
    t = decode_matrix(_field(obj, "T", path), f"{path}.T", (n, n)) if n else np.zeros((0, 0))
    f = decode_matrix(_field(obj, "F", path), f"{path}.F", (n, l1)) if n else np.zeros((0, l1))
    g = decode_matrix(_field(obj, "G", path), f"{path}.G", (l2, n)) if n else np.zeros((l2, 0))
    return UnitaryColligation(state, t, f, g, h)


def encode_pair(bp: BoundaryPair) -> dict:
    out = {"H": encode_space(bp.H), "L1": bp.L1_dim, "L2": bp.L2_dim, "backing": bp.backing}
    if bp.colligation is not None:
        out["colligation"] = encode_colligation(bp.colligation)
    else:
        out["gamma"] = encode_relation(bp.gamma)
    return out


def decode_pair(obj: Any, path: str = "$") -> BoundaryPair:
    backing = _field(obj, "backing", path)
    if backing == "colligation":
        return from_colligation(decode_colligation(_field(obj, "colligation", path),
                                                   f"{path}.colligation"))
    if backing != "direct":
        raise SchemaError(f"{path}.backing", "expected 'direct' or 'colligation'")
    h = decode_space(_field(obj, "H", path), f"{path}.H")
    l1 = _int(_field(obj, "L1", path), f"{path}.L1")
    l2 = _int(_field(obj, "L2", path), f"{path}.L2")
    gamma = decode_relation(_field(obj, "gamma", path), f"{path}.gamma")
    if gamma.space_in.dim != 2 * h.dim or gamma.space_out.dim != l1 + l2:
        raise SchemaError(f"{path}.gamma", "spaces do not match H, L1 and L2")
    return direct_pair(h, gamma, l1, l2)


def encode_phi(phi: ExtensionParameter) -> dict:
    return {"param_dim": phi.param_dim, "Phi1": encode_matrix(phi.Phi1),
            "Phi2": encode_matrix(phi.Phi2)}


def decode_phi(obj: Any, path: str = "$") -> ExtensionParameter:
    m = _int(_field(obj, "param_dim", path), f"{path}.param_dim")
    p1 = decode_matrix(_field(obj, "Phi1", path), f"{path}.Phi1", (None, m))
    p2 = decode_matrix(_field(obj, "Phi2", path), f"{path}.Phi2", (None, m))
    return ExtensionParameter(p1, p2)


def decode_realize_input(obj: Any, path: str = "$") -> tuple[RationalFunctionData, complex]:
    taylor = _field(obj, "taylor", path)
    if not isinstance(taylor, list) or not taylor:
        raise SchemaError(f"{path}.taylor", "expected a non-empty list of matrices")
    coeffs = [decode_matrix(c, f"{path}.taylor[{k}]") for k, c in enumerate(taylor)]
    center = decode_complex(obj.get("center", 0), f"{path}.center")
    alpha = decode_complex(obj.get("alpha", 0), f"{path}.alpha")
    hint = obj.get("degree_hint")
    if hint is not None:
        hint = _int(hint, f"{path}.degree_hint")
    try:
        return RationalFunctionData(coeffs, center, hint), alpha
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def load_json(path: str | Path) -> Any:
    """Parse a JSON file; syntax errors become :class:`SchemaError` with location."""
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}:{e.lineno}:{e.colno}", e.msg) from None


def _default(o):
    if isinstance(o, np.ndarray):
        return encode_matrix(o) if o.ndim == 2 else [_default(v) for v in o]
    if isinstance(o, (complex, np.complexfloating)):
        return encode_complex(o)
    if isinstance(o, np.floating):
        return _clean(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def _normalize(obj: Any) -> Any:
    if isinstance(obj, float):
        return _clean(obj)
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed float repr, no ``-0.0``)."""
    return json.dumps(_normalize(obj), default=_default, sort_keys=True, indent=2)
