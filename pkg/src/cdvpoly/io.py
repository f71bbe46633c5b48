"""JSON readers and a deterministic writer (17 significant digits, sorted keys)."""

import json
import math

import numpy as np

from .errors import BadParams, SizeMismatch
from .graph import Graph
from .polytope import build_polytope, polar_from_points


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return _Float(float(obj))
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


class _Float(float):
    def __repr__(self):
        if math.isnan(self) or math.isinf(self):
            return "null"
        if self == 0:
            return "0"
        return format(float(self), ".17g")


class _Encoder(json.JSONEncoder):
    def iterencode(self, o, _one_shot=False):
        # the C encoder ignores float subclasses' repr; force the python path
        return json.encoder._make_iterencode(
            {}, self.default, json.encoder.py_encode_basestring_ascii, self.indent,
            repr, self.key_separator, self.item_separator, self.sort_keys,
            self.skipkeys, _one_shot,
        )(o, 0)


def to_plain(obj):
    """Nested builtins only; floats become a subclass that prints 17 digits."""
    return _plain(obj)


def dumps(obj):
    return json.dumps(_plain(obj), cls=_Encoder, sort_keys=True, indent=2) + "\n"


def write_json(obj, path=None):
    text = dumps(obj)
    if path is None or path == "-":
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise BadParams(f"cannot read {path}: {e}") from None


def polytope_from_json(data):
    """Polytope JSON: H-representation, or {"points": ...} read as the polar of a point set."""
    if "points" in data:
        return polar_from_points(np.asarray(data["points"], dtype=float))
    try:
        normals = np.asarray(data["normals"], dtype=float)
        support = np.asarray(data["support"], dtype=float)
    except KeyError as e:
        raise BadParams(f"polytope JSON is missing {e}") from None
    if "dimension" in data and normals.ndim == 2 and normals.shape[1] != int(data["dimension"]):
        raise BadParams(f"dimension {data['dimension']} disagrees with normals of width {normals.shape[1]}")
    return build_polytope(normals, support)


def points_from_json(data):
    if "points" not in data:
        raise BadParams('expected a point-set JSON {"points": ...}')
    return np.asarray(data["points"], dtype=float)


def matrix_to_json(M):
    M = np.asarray(M, dtype=float)
    return {"n": int(M.shape[0]), "rows": M.tolist()}


def matrix_from_json(data):
    try:
        M = np.asarray(data["rows"], dtype=float)
        n = int(data["n"])
    except (KeyError, ValueError, TypeError) as e:
        raise BadParams(f"bad matrix JSON: {e}") from None
    if M.shape != (n, n):
        raise SizeMismatch(f"matrix JSON declares n={n} but rows have shape {M.shape}")
    return M


def graph_from_json(data):
    try:
        return Graph.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])
    except (KeyError, ValueError, TypeError) as e:
        raise BadParams(f"bad graph JSON: {e}") from None
