"""JSON frame files and report serialization.

A frame file looks like::

    {
      "dim": 3,
      "subspaces": [{"basis": [[1, 0, 0], [0, 1, 0]], "weight": 1.0, "label": "V1"}, ...],
      "decomposition": {
        "riesz": ["V1", {"label": "V2", "basis": [[0, 1, 0]]}, "W3"],
        "excess": [
          {"vector": [0, 1, 0], "host": "V1"},
          {"vector": [1, 0, 0], "host": null, "item": "V4",
           "components": [{"riesz": "V1", "vector": [1, 0, 0]}]}
        ]
      }
    }

Basis rows are orthonormalized on load; dependent rows are rejected.
Floats are written with 17 significant digits.
"""

import json
import math

import numpy as np

from .decomposition import ExcessDecomposition, ExcessSpec
from .errors import BadDecomposition, MalformedDecomposition, NonpositiveWeight, ParseError, RankDeficientBasis
from .fusion import FusionFrame
from .numerics import DEFAULT_RANK_TOL, numerical_rank
from .subspace import Subspace

# -- emitting --------------------------------------------------------------------------


def _format_float(x):
    if not math.isfinite(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return f"{int(x)}.0" if x != 0 or math.copysign(1.0, x) > 0 else "-0.0"
    return format(x, ".17g")


def _encode(obj, indent, level):
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return json.dumps(bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        items = [(json.dumps(str(k), ensure_ascii=False), v) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {_encode(v, None, 0)}" for k, v in items) + "}"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{k}: {_encode(v, indent, level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + " " * (indent * level) + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if indent is None or flat:
            return "[" + ", ".join(_encode(v, None, 0) for v in obj) + "]"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(pad + _encode(v, indent, level + 1) for v in obj)
        return "[\n" + body + "\n" + " " * (indent * level) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, pretty=False):
    """JSON text with 17-significant-digit floats; NaN and infinities become null."""
    return _encode(obj, 2 if pretty else None, 0)


def frame_to_document(F, dec=None, note=None):
    """Plain-data form of a frame (and decomposition) ready for :func:`dumps`."""
    labels = [lab if lab is not None else f"item{i}" for i, lab in enumerate(F.labels)]
    if len(set(labels)) != len(labels):
        labels = [f"{lab} #{i}" for i, lab in enumerate(labels)]
    doc = {
        "dim": F.ambient_dim,
        "subspaces": [
            {"basis": S.basis.T.tolist(), "weight": float(w), "label": lab}
            for (S, w), lab in zip(F, labels)
        ],
    }
    if dec is not None:
        doc["decomposition"] = _decomposition_document(dec, labels)
    if note:
        doc["note"] = note
    return doc


def _decomposition_document(dec, labels):
    F = dec.frame
    riesz = []
    for i, W in zip(dec.riesz_indices, dec.riesz_subspaces):
        hosted = dec.hosted_by(i)
        default = not hosted or all(np.linalg.norm(W.basis.T @ e.vector) <= 1e-12 for e in hosted)
        if default and W.dim == F.subspaces[i].dim - len(hosted):
            riesz.append(labels[i])
        else:
            riesz.append({"label": labels[i], "basis": W.basis.T.tolist()})
    excess = []
    for e in dec.elements:
        entry = {"vector": e.vector.tolist(), "host": labels[e.host] if e.hosted else None}
        if not e.hosted:
            entry["item"] = labels[e.item]
        entry["components"] = [
            {"riesz": labels[dec.riesz_indices[p]], "vector": e.components[p].tolist()}
            for p in e.support()
        ]
        excess.append(entry)
    return {"riesz": riesz, "excess": excess}


def write_frame_file(path, F, dec=None, note=None, pretty=True):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(frame_to_document(F, dec, note), pretty) + "\n")


# -- parsing -----------------------------------------------------------------------------


def _expect(cond, msg):
    if not cond:
        raise ParseError(msg)


def _number(v, where):
    _expect(isinstance(v, (int, float)) and not isinstance(v, bool), f"{where}: expected a number")
    v = float(v)
    _expect(math.isfinite(v), f"{where}: numbers must be finite")
    return v


def _vector(v, n, where):
    _expect(isinstance(v, list), f"{where}: expected an array of numbers")
    _expect(len(v) == n, f"{where}: expected {n} entries, got {len(v)}")
    return np.array([_number(x, where) for x in v])


def parse_document(doc, rank_tol=DEFAULT_RANK_TOL):
    """Validate a decoded JSON document; return ``(frame, decomposition or None)``.

    Raises
    ------
    ParseError
    RankDeficientBasis
    NonpositiveWeight
    BadDecomposition
    """
    _expect(isinstance(doc, dict), "top level must be a JSON object")
    n = doc.get("dim")
    _expect(isinstance(n, int) and not isinstance(n, bool) and n > 0, "'dim' must be a positive integer")
    subs = doc.get("subspaces")
    _expect(isinstance(subs, list) and subs, "'subspaces' must be a non-empty array")

    spaces, weights, labels = [], [], []
    for idx, entry in enumerate(subs):
        where = f"subspaces[{idx}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        rows = entry.get("basis")
        _expect(isinstance(rows, list) and rows, f"{where}.basis: expected a non-empty array of rows")
        M = np.array([_vector(r, n, f"{where}.basis[{j}]") for j, r in enumerate(rows)])
        if numerical_rank(M, rank_tol) < len(rows):
            raise RankDeficientBasis(f"{where}: basis rows are linearly dependent")
        weight = _number(entry.get("weight", 1.0), f"{where}.weight")
        if weight <= 0:
            raise NonpositiveWeight(f"{where}: weight must be positive, got {weight}")
        label = entry.get("label")
        _expect(label is None or isinstance(label, str), f"{where}.label: expected a string")
        spaces.append(Subspace.span(list(M), rank_tol))
        weights.append(weight)
        labels.append(label)

    named = [lab for lab in labels if lab is not None]
    _expect(len(set(named)) == len(named), "subspace labels must be unique")
    F = FusionFrame(spaces, weights, labels)

    raw = doc.get("decomposition")
    if raw is None:
        return F, None
    return F, _parse_decomposition(raw, F, n, rank_tol)


def _parse_decomposition(raw, F, n, rank_tol):
    index = {lab: i for i, lab in enumerate(F.labels) if lab is not None}

    def resolve(lab, where):
        if lab not in index:
            raise BadDecomposition(f"{where}: unknown label {lab!r}")
        return index[lab]

    if not isinstance(raw, dict) or not isinstance(raw.get("riesz"), list) or not isinstance(raw.get("excess"), list):
        raise BadDecomposition("'decomposition' needs 'riesz' and 'excess' arrays")
    riesz, bases = [], {}
    for j, r in enumerate(raw["riesz"]):
        where = f"decomposition.riesz[{j}]"
        if isinstance(r, dict):
            i = resolve(r.get("label"), where)
            try:
                bases[i] = list(np.array([_vector(v, n, where + ".basis") for v in r.get("basis") or []]))
            except ParseError as exc:
                raise BadDecomposition(str(exc)) from None
        else:
            i = resolve(r, where)
        riesz.append(i)
    specs = []
    for j, x in enumerate(raw["excess"]):
        where = f"decomposition.excess[{j}]"
        if not isinstance(x, dict):
            raise BadDecomposition(f"{where}: expected an object")
        try:
            vec = _vector(x.get("vector"), n, where + ".vector")
            comps = None
            if x.get("components") is not None:
                comps = {}
                for c in x["components"]:
                    if not isinstance(c, dict):
                        raise BadDecomposition(f"{where}.components: expected objects")
                    comps[resolve(c.get("riesz"), where)] = _vector(c.get("vector"), n, where + ".components")
        except ParseError as exc:
            raise BadDecomposition(str(exc)) from None
        host = None if x.get("host") is None else resolve(x["host"], where + ".host")
        item = None if x.get("item") is None else resolve(x["item"], where + ".item")
        specs.append(ExcessSpec(vec, host=host, item=item, components=comps))
    try:
        return ExcessDecomposition.declare(F, riesz, specs, bases, rank_tol)
    except MalformedDecomposition as exc:
        raise BadDecomposition(str(exc)) from None


def parse_frame_text(text, rank_tol=DEFAULT_RANK_TOL):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_document(doc, rank_tol)


def parse_frame_file(path, rank_tol=DEFAULT_RANK_TOL):
    """Read a UTF-8 JSON frame file. See the module docstring for the format."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not UTF-8 text (byte {exc.start})") from None
    return parse_frame_text(text, rank_tol)
