"""JSON serialization for graphs, double covers, and trigonal towers.

Graph files look like::

    {"vertices": [{"id": "u", "genus": 0}, ...],
     "edges": [{"id": "e", "ends": ["u", "v"], "length": "3/2"}, ...]}

where a length is any linear form over named variables ("3/2", "x1",
"2*x1 + 1/3*x2").  A cover file adds ``"sign": 1 | -1 | "dilated"`` to each
edge and optionally ``"dilated": true`` to a vertex (required only for
dilated vertices that no dilated edge touches).  A tower file extends the
cover of the trigonal source with the fields ``"tree"``, ``"vertex_map"``,
``"half_edge_map"`` and ``"local_degrees"`` describing the degree-3 map.
Serialization is deterministic: entries are sorted by id.
"""
from __future__ import annotations

from typing import Mapping

from .graph import Graph, GraphError, idkey
from .morphism import DoubleCover, HarmonicMorphism, Tower
from .poly import LinearForm, parse_linear_form

__all__ = [
    "graph_to_json",
    "graph_from_json",
    "cover_to_json",
    "cover_from_json",
    "tower_to_json",
    "tower_from_json",
]

DILATED = "dilated"


def _length_str(form: LinearForm) -> str:
    return str(form)


def _sorted_vertices(g: Graph) -> list:
    return sorted(g.vertices, key=idkey)


def _sorted_edges(g: Graph) -> list:
    return sorted(g.edge_ends, key=idkey)


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": [
            {"id": str(v), "genus": g.vertices[v]} for v in _sorted_vertices(g)
        ],
        "edges": [
            {
                "id": str(e),
                "ends": [str(g.edge_ends[e][0]), str(g.edge_ends[e][1])],
                "length": _length_str(g.lengths[e]),
            }
            for e in _sorted_edges(g)
        ],
    }


def _expect(data, key: str, kind, where: str):
    if not isinstance(data, Mapping):
        raise ValueError(f"{where}: expected an object, got {type(data).__name__}")
    if key not in data:
        raise ValueError(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise ValueError(f"{where}: field {key!r} has wrong type")
    return value


def _parse_vertex_entries(data) -> dict:
    entries = _expect(data, "vertices", list, "graph")
    vertices: dict = {}
    for i, entry in enumerate(entries):
        where = f"vertices[{i}]"
        vid = _expect(entry, "id", str, where)
        genus = entry.get("genus", 0)
        if not isinstance(genus, int) or isinstance(genus, bool) or genus < 0:
            raise ValueError(f"{where}: invalid genus {genus!r}")
        if vid in vertices:
            raise ValueError(f"{where}: duplicate vertex id {vid!r}")
        vertices[vid] = genus
    return vertices


def _parse_edge_entries(data) -> tuple[dict, dict]:
    entries = _expect(data, "edges", list, "graph")
    edge_ends: dict = {}
    lengths: dict = {}
    for i, entry in enumerate(entries):
        where = f"edges[{i}]"
        eid = _expect(entry, "id", str, where)
        ends = _expect(entry, "ends", list, where)
        if len(ends) != 2 or not all(isinstance(x, str) for x in ends):
            raise ValueError(f"{where}: 'ends' must be a pair of vertex ids")
        if eid in edge_ends:
            raise ValueError(f"{where}: duplicate edge id {eid!r}")
        edge_ends[eid] = (ends[0], ends[1])
        raw = entry.get("length")
        if raw is not None:
            if not isinstance(raw, str):
                raise ValueError(f"{where}: 'length' must be a string")
            try:
                lengths[eid] = parse_linear_form(raw)
            except ValueError as err:
                raise ValueError(f"{where}: {err}") from err
    return edge_ends, lengths


def graph_from_json(data) -> Graph:
    vertices = _parse_vertex_entries(data)
    edge_ends, lengths = _parse_edge_entries(data)
    try:
        return Graph(vertices, edge_ends, lengths)
    except GraphError as err:
        raise ValueError(f"graph: {err}") from err


def cover_to_json(c: DoubleCover) -> dict:
    out = graph_to_json(c.base)
    for entry in out["edges"]:
        entry["sign"] = c.signs[entry["id"]]
    implied = set()
    for e, s in c.signs.items():
        if s == DILATED:
            implied.update(c.base.edge_ends[e])
    for entry in out["vertices"]:
        if entry["id"] in c.dilated_vertices and entry["id"] not in implied:
            entry["dilated"] = True
    return out


def cover_from_json(data) -> DoubleCover:
    base = graph_from_json(data)
    signs: dict = {}
    for i, entry in enumerate(data["edges"]):
        where = f"edges[{i}]"
        if "sign" not in entry:
            raise ValueError(f"{where}: missing field 'sign'")
        sign = entry["sign"]
        if sign not in (1, -1, DILATED):
            raise ValueError(f"{where}: invalid sign {sign!r}")
        signs[entry["id"]] = sign
    dilated = [
        entry["id"]
        for entry in data["vertices"]
        if entry.get("dilated") is True
    ]
    return DoubleCover(base, signs, dilated)


def _half_edge_str(h: tuple) -> str:
    return f"{h[0]}:{h[1]}"


def _half_edge_from_str(text: str, known_edges, where: str) -> tuple:
    if not isinstance(text, str) or ":" not in text:
        raise ValueError(f"{where}: malformed half-edge {text!r}")
    eid, _, slot = text.rpartition(":")
    if slot not in ("0", "1") or eid not in known_edges:
        raise ValueError(f"{where}: malformed half-edge {text!r}")
    return (eid, int(slot))


def tower_to_json(t: Tower) -> dict:
    trig = t.trig
    out = cover_to_json(t.cover)
    out["tree"] = graph_to_json(trig.target)
    out["vertex_map"] = {
        str(v): str(trig.vertex_map[v])
        for v in sorted(trig.vertex_map, key=idkey)
    }
    out["half_edge_map"] = {
        _half_edge_str(h): _half_edge_str(trig.half_edge_map[h])
        for h in sorted(trig.half_edge_map, key=lambda h: (idkey(h[0]), h[1]))
    }
    out["local_degrees"] = {
        "vertices": {
            str(v): trig.vertex_degree[v]
            for v in sorted(trig.vertex_degree, key=idkey)
        },
        "edges": {
            str(e): trig.edge_degree[e]
            for e in sorted(trig.edge_degree, key=idkey)
        },
    }
    return out


def tower_from_json(data) -> Tower:
    cover = cover_from_json(data)
    tree = graph_from_json(_expect(data, "tree", None, "tower"))
    vmap_raw = _expect(data, "vertex_map", Mapping, "tower")
    vertex_map = {}
    for v, image in vmap_raw.items():
        if v not in cover.base.vertices or image not in tree.vertices:
            raise ValueError(f"vertex_map: unknown vertex in {v!r} -> {image!r}")
        vertex_map[v] = image
    hmap_raw = _expect(data, "half_edge_map", Mapping, "tower")
    half_edge_map = {}
    for h, image in hmap_raw.items():
        src = _half_edge_from_str(h, cover.base.edge_ends, "half_edge_map")
        dst = _half_edge_from_str(image, tree.edge_ends, "half_edge_map")
        half_edge_map[src] = dst
    degrees = _expect(data, "local_degrees", Mapping, "tower")
    vdeg_raw = _expect(degrees, "vertices", Mapping, "local_degrees")
    edeg_raw = _expect(degrees, "edges", Mapping, "local_degrees")

    def _degrees(raw: Mapping, known, what: str) -> dict:
        out = {}
        for key, d in raw.items():
            if key not in known:
                raise ValueError(f"local_degrees: unknown {what} {key!r}")
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise ValueError(f"local_degrees: invalid degree for {key!r}")
            out[key] = d
        return out

    trig = HarmonicMorphism(
        cover.base,
        tree,
        vertex_map,
        half_edge_map,
        _degrees(vdeg_raw, cover.base.vertices, "vertex"),
        _degrees(edeg_raw, cover.base.edge_ends, "edge"),
    )
    return Tower(cover, trig)
