"""JSON interchange: loading with validation, and canonical serialization.

Formats::

    graph     {"num_vertices": 2m, "matching": [[a, b], ...]}
              (+ "orientation": [[h1, h2, h3], ...] for oriented graphs)
    form      {"n": N, "q": [[...], ...]}
    model     {"n": N, "q": [[...], ...], "entries": [[i, j, k, value], ...]}
    curve     {"points": [[x, y, z], ...]}
    lie data  {"dim": D, "b": [[...], ...], "c": [[i, j, k, value], ...]}

Cubic entries are summed and symmetrized on load, structure-constant entries
antisymmetrized.  Serialization writes the canonical form of each object, so
``dumps(load(text)) == text`` for canonical inputs.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

import numpy as np

from .config import DEFAULT
from .errors import DimensionError, InvariantError, ParseError
from .graphs import OrientedGraph, TrivalentGraph
from .lie import LieData, antisymmetrize3, su2_data, sun_data
from .links import PolyCurve
from .weights import CubicModel, CubicTensor
from .wick import QuadraticForm

log = logging.getLogger(__name__)


def dumps(data) -> str:
    return json.dumps(data) + "\n"


def read_json(source):
    """Parse a path, a JSON string, or pass a dict through."""
    if isinstance(source, dict):
        return source
    try:
        path = Path(source)
        text = path.read_text() if path.exists() else None
    except (OSError, ValueError):
        text = None
    if text is None:
        if isinstance(source, str) and source.lstrip().startswith("{"):
            text = source
        else:
            raise ParseError(f"no such file: {source}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {source}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    return data


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _require(data, *keys):
    missing = [k for k in keys if k not in data]
    if missing:
        raise ParseError(f"missing field(s) {missing}")


def _matrix(data, key, n):
    try:
        mat = np.array(data[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{key} must be a numeric matrix") from exc
    if mat.shape != (n, n):
        raise DimensionError(f"{key} has shape {mat.shape}, expected ({n}, {n})")
    return mat


# -- graphs -------------------------------------------------------------------

def load_graph(source) -> TrivalentGraph:
    data = read_json(source)
    _require(data, "num_vertices", "matching")
    nv = data["num_vertices"]
    if not isinstance(nv, int) or nv <= 0:
        raise InvariantError("num_vertices", "positive even integer", f"got {nv!r}")
    try:
        pairs = [tuple(int(x) for x in p) for p in data["matching"]]
    except (TypeError, ValueError) as exc:
        raise ParseError("matching must be a list of integer pairs") from exc
    if any(len(p) != 2 for p in pairs):
        raise ParseError("matching entries must be pairs")
    g = TrivalentGraph(nv, tuple(pairs))
    if list(g.matching) != pairs:
        log.info("graph matching was not in canonical storage order; reordered")
    return g


def load_oriented_graph(source) -> OrientedGraph:
    data = read_json(source)
    g = load_graph(data)
    if "orientation" not in data:
        return OrientedGraph.standard(g)
    return OrientedGraph(g, tuple(tuple(o) for o in data["orientation"]))


def serialize_graph(g) -> dict:
    return g.to_json()


# -- quadratic forms and models ------------------------------------------------

def load_form(source, config=DEFAULT) -> QuadraticForm:
    data = read_json(source)
    _require(data, "n", "q")
    n = data["n"]
    if not isinstance(n, int) or n <= 0:
        raise InvariantError("n", "positive integer", f"got {n!r}")
    return QuadraticForm(_matrix(data, "q", n), det_floor=config.det_floor,
                         symmetry_tol=config.symmetry_tol)


def load_model(source, config=DEFAULT) -> CubicModel:
    data = read_json(source)
    _require(data, "n", "q", "entries")
    form = load_form(data, config)
    n = form.n
    entries = data["entries"]
    if not isinstance(entries, list) or any(not isinstance(e, list) or len(e) != 4 for e in entries):
        raise ParseError("entries must be a list of [i, j, k, value]")
    tensor, was_symmetric = CubicTensor.from_entries(n, entries)
    if not was_symmetric:
        log.warning("cubic entries were not totally symmetric; symmetrized (cubic form unchanged)")
    return CubicModel(form, tensor)


def serialize_form(form: QuadraticForm) -> dict:
    return form.to_json()


def serialize_model(model: CubicModel) -> dict:
    return {"n": model.n, "q": model.quadratic.q.tolist(), "entries": model.cubic.entries()}


# -- curves -------------------------------------------------------------------

def load_curve(source) -> PolyCurve:
    data = read_json(source)
    _require(data, "points")
    try:
        return PolyCurve(data["points"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvariantError):
            raise
        raise ParseError(f"points must be a list of numeric triples: {exc}") from exc


def serialize_curve(c: PolyCurve) -> dict:
    return c.to_json()


# -- Lie data -----------------------------------------------------------------

def load_lie(spec) -> LieData:
    """``su2``, ``sun:<n>``, ``file:<path>``, a path, or a decoded dict."""
    if isinstance(spec, str):
        if spec == "su2":
            return su2_data()
        if spec.startswith("sun:"):
            try:
                n = int(spec[4:])
            except ValueError as exc:
                raise ParseError(f"bad algebra spec {spec!r}") from exc
            return sun_data(n)
        if spec.startswith("file:"):
            spec = spec[5:]
    data = read_json(spec)
    _require(data, "dim", "b", "c")
    d = data["dim"]
    if not isinstance(d, int) or d <= 0:
        raise InvariantError("dim", "positive integer")
    b = _matrix(data, "b", d)
    raw = np.zeros((d, d, d))
    for entry in data["c"]:
        if len(entry) != 4:
            raise ParseError("c entries must be [i, j, k, value]")
        i, j, k = (int(x) for x in entry[:3])
        if not all(0 <= x < d for x in (i, j, k)):
            raise DimensionError(f"c index {(i, j, k)} out of range for dim {d}")
        raw[i, j, k] += float(entry[3])
    c = antisymmetrize3(raw)
    if not np.array_equal(c, raw):
        log.warning("structure constants were not totally antisymmetric; antisymmetrized")
    return LieData(b, c, check_jacobi=bool(data.get("check_jacobi", True)))


def serialize_lie(data: LieData) -> dict:
    return data.to_json()
