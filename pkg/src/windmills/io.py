"""JSON reading and writing with exact rationals.

Rationals are written as ``"p/q"`` strings and read back from ``"p/q"``,
``"p"`` or integers.  Floats are rejected on input and never produced.
"""

import dataclasses
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputError
from .metric import DistanceSystem
from .trees import AxisBundle, Tree, tree_distance_system

__all__ = [
    "rational",
    "jsonable",
    "dumps",
    "read_json",
    "load_distance_system",
    "load_tree",
    "load_axes",
]


def rational(value):
    if isinstance(value, bool):
        raise InputError(f"expected a rational, got {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            if "." in value or "e" in value.lower():
                raise ValueError
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read {value!r} as p/q") from None
    raise InputError(f"expected an integer or a 'p/q' string, got {value!r}")


def jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, str) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def read_json(source):
    """Load a JSON document from a path or return an already-parsed object."""
    if isinstance(source, (dict, list)):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _no_float(text):
    raise InputError(f"floating-point literal {text} is not allowed; use 'p/q'")


def load_tree(data):
    """``{"edges": [[u, v], ...], "vertices": [...]?, "radius": r?}``."""
    data = read_json(data)
    if "tree" in data:
        data = data["tree"]
    edges = data.get("edges")
    if edges is None:
        raise InputError("tree needs an 'edges' list")
    verts = data.get("vertices")
    if verts is None:
        seen = {}
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} must have two endpoints")
            for v in e:
                seen.setdefault(v, None)
        verts = sorted(seen, key=lambda v: (str(type(v)), v))
    return Tree(verts, [tuple(e) for e in edges], data.get("radius"))


def load_distance_system(data):
    """Entry-list form or ``{"tree": {...}}`` for the indicator system."""
    data = read_json(data)
    if "tree" in data:
        return tree_distance_system(load_tree(data["tree"]), rational(data.get("theta", 0)))
    for key in ("vertices", "entries"):
        if key not in data:
            raise InputError(f"distance system needs '{key}'")
    n = data["vertices"]
    labels = None
    if isinstance(n, list):
        labels, n = n, len(n)
    if not isinstance(n, int) or n < 0:
        raise InputError("'vertices' must be a count or a list of labels")
    entries = []
    for rec in data["entries"]:
        if len(rec) != 4:
            raise InputError(f"entry {rec!r} must be [y, x, z, value]")
        y, x, z, v = rec
        entries.append((y, x, z, rational(v)))
    default = 0 if data.get("default", 0) == 0 else None
    return DistanceSystem.from_entries(n, entries, rational(data.get("theta", 0)), default, labels)


def load_axes(data, tree):
    """``{"axes": [{"owner": word, "vertices": [...]}, ...]}``."""
    data = read_json(data)
    out = []
    for ax in data.get("axes", []):
        for v in ax["vertices"]:
            if v not in tree:
                raise InputError(f"axis vertex {v!r} is not in the tree")
        out.append(AxisBundle(ax["vertices"], ax.get("owner", "")))
    return out
