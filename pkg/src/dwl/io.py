"""Graph text files and decomposition JSON files."""
from __future__ import annotations

import json
from typing import Any

import jsonschema

from .decomposition import (
    ArborealDecomposition,
    DagDecomposition,
    Decomposition,
    DirectedPathDecomposition,
    KellyDecomposition,
    Skeleton,
    kind_of,
)
from .digraph import Digraph
from .errors import InvalidInputError


class GraphFormatError(InvalidInputError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _ints(line: str, lineno: int, what: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphFormatError(lineno, f"expected two integers for the {what}, got {line.strip()!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(lineno, f"non-integer {what} {line.strip()!r}") from None
    return a, b


def parse_digraph(text: str) -> Digraph:
    """Parse ``"n m"`` followed by m arc lines ``"u v"``; ``#`` lines are comments."""
    header = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            n, m = _ints(stripped, lineno, "header")
            if n < 0 or m < 0:
                raise GraphFormatError(lineno, "negative vertex or arc count")
            header = (n, m)
            continue
        u, v = _ints(stripped, lineno, "arc")
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"endpoint out of range in arc ({u}, {v}) for n={n}")
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at vertex {u}")
        if (u, v) in seen:
            raise GraphFormatError(lineno, f"duplicate arc ({u}, {v})")
        seen.add((u, v))
        arcs.append((u, v))
    if header is None:
        raise GraphFormatError(1, "missing header line 'n m'")
    if len(arcs) != header[1]:
        raise GraphFormatError(len(text.splitlines()), f"header announces {header[1]} arcs, found {len(arcs)}")
    return Digraph.from_arcs(header[0], arcs)


def serialize_digraph(g: Digraph) -> str:
    if g.vertices != frozenset(range(g.n)):
        raise InvalidInputError("graph files need vertices 0..n-1")
    lines = [f"{g.n} {len(g.arcs)}"] + [f"{u} {v}" for u, v in g.sorted_arcs]
    return "\n".join(lines) + "\n"


def read_digraph(path: str) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


def write_digraph(g: Digraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_digraph(g))


# -- decompositions ----------------------------------------------------------

_INTS = {"type": "array", "items": {"type": "integer", "minimum": 0}}


def _schema(kind: str) -> dict:
    node = {"id": {"type": "integer", "minimum": 0}, "bag": _INTS}
    node_required = ["id", "bag"]
    if kind == "kelly":
        node["guard"] = _INTS
        node_required.append("guard")
    arc = {"from": {"type": "integer", "minimum": 0}, "to": {"type": "integer", "minimum": 0}}
    arc_required = ["from", "to"]
    if kind == "arboreal":
        arc["bag"] = _INTS
        arc_required.append("bag")
    return {
        "type": "object",
        "properties": {
            "kind": {"const": kind},
            "universe": _INTS,
            "nodes": {"type": "array", "items": {
                "type": "object", "properties": node, "required": node_required,
                "additionalProperties": False}},
            "arcs": {"type": "array", "items": {
                "type": "object", "properties": arc, "required": arc_required,
                "additionalProperties": False}},
        },
        "required": ["kind", "universe", "nodes", "arcs"],
        "additionalProperties": False,
    }


SCHEMAS = {kind: _schema(kind) for kind in ("dpd", "dag", "kelly", "arboreal")}


class SchemaError(InvalidInputError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _sorted(bag) -> list[int]:
    return sorted(bag)


def decomposition_to_dict(d: Decomposition) -> dict[str, Any]:
    kind = kind_of(d)
    if kind == "dpd":
        nodes = [{"id": i, "bag": _sorted(b)} for i, b in enumerate(d.bags)]
        arcs = [{"from": i, "to": i + 1} for i in range(len(d.bags) - 1)]
        universe = frozenset().union(*d.bags)
    elif kind == "dag":
        nodes = [{"id": i, "bag": _sorted(d.bags[i])} for i in sorted(d.skeleton.nodes)]
        arcs = [{"from": i, "to": j} for i, j in sorted(d.skeleton.arcs)]
        universe = frozenset().union(*d.bags.values())
    elif kind == "kelly":
        nodes = [{"id": i, "bag": _sorted(d.bags[i]), "guard": _sorted(d.guards[i])}
                 for i in sorted(d.skeleton.nodes)]
        arcs = [{"from": i, "to": j} for i, j in sorted(d.skeleton.arcs)]
        universe = frozenset().union(*d.bags.values())
    else:
        nodes = [{"id": i, "bag": _sorted(d.bags[i])} for i in sorted(d.skeleton.nodes)]
        arcs = [{"from": i, "to": j, "bag": _sorted(d.arc_bags[(i, j)])} for i, j in sorted(d.skeleton.arcs)]
        universe = d.universe
    return {"kind": kind, "universe": _sorted(universe), "nodes": nodes, "arcs": arcs}


def dumps_decomposition(d: Decomposition) -> str:
    return json.dumps(decomposition_to_dict(d), indent=2) + "\n"


def _check_schema(data: Any) -> str:
    if not isinstance(data, dict):
        raise SchemaError("$", "decomposition must be a JSON object")
    kind = data.get("kind")
    if kind not in SCHEMAS:
        raise SchemaError("$.kind", f"unknown kind {kind!r}")
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(err.json_path, err.message)
    for key in ("universe",):
        if data[key] != sorted(set(data[key])):
            raise SchemaError(f"$.{key}", "array must be sorted ascending without repeats")
    for i, node in enumerate(data["nodes"]):
        for key in ("bag", "guard"):
            if key in node and node[key] != sorted(set(node[key])):
                raise SchemaError(f"$.nodes[{i}].{key}", "array must be sorted ascending without repeats")
    for i, arc in enumerate(data["arcs"]):
        if "bag" in arc and arc["bag"] != sorted(set(arc["bag"])):
            raise SchemaError(f"$.arcs[{i}].bag", "array must be sorted ascending without repeats")
    ids = [node["id"] for node in data["nodes"]]
    if len(set(ids)) != len(ids):
        raise SchemaError("$.nodes", "node ids must be unique")
    known = set(ids)
    for i, arc in enumerate(data["arcs"]):
        if arc["from"] not in known or arc["to"] not in known:
            raise SchemaError(f"$.arcs[{i}]", "arc references an unknown node id")
    return kind


def _skeleton(data: dict, kind: str) -> Skeleton:
    nodes = tuple(sorted(node["id"] for node in data["nodes"]))
    arcs = tuple(sorted((a["from"], a["to"]) for a in data["arcs"]))
    skel = Skeleton(nodes, arcs, kind)
    try:
        skel.check()
    except InvalidInputError as exc:
        raise SchemaError("$.arcs", str(exc)) from None
    return skel


def decomposition_from_dict(data: Any) -> Decomposition:
    kind = _check_schema(data)
    bags = {node["id"]: frozenset(node["bag"]) for node in data["nodes"]}
    if kind == "dpd":
        skel = _skeleton(data, "path")
        if skel.nodes != tuple(range(len(skel.nodes))) or skel.topological != skel.nodes:
            raise SchemaError("$.arcs", "a dpd must be the path 0 -> 1 -> ... in id order")
        return DirectedPathDecomposition(tuple(bags[i] for i in skel.nodes))
    if kind == "dag":
        return DagDecomposition(_skeleton(data, "dag"), bags)
    if kind == "kelly":
        guards = {node["id"]: frozenset(node["guard"]) for node in data["nodes"]}
        skel = _skeleton(data, "dag")
        chain = tuple(range(len(skel.nodes)))
        if skel.nodes == chain and skel.arcs == tuple((i, i + 1) for i in chain[:-1]):
            skel = Skeleton.path(len(chain))
        for i, node in enumerate(data["nodes"]):
            if bags[node["id"]] & guards[node["id"]]:
                raise SchemaError(f"$.nodes[{i}]", "bag and guard of a Kelly node must be disjoint")
        return KellyDecomposition(skel, bags, guards)
    skel = _skeleton(data, "arborescence")
    arc_bags = {(a["from"], a["to"]): frozenset(a["bag"]) for a in data["arcs"]}
    universe = frozenset(data["universe"])
    seen: set[int] = set()
    for i, node in enumerate(data["nodes"]):
        bag = bags[node["id"]]
        if bag & seen or not bag <= universe:
            raise SchemaError(f"$.nodes[{i}].bag", "arboreal node bags must partition the universe")
        seen |= bag
    if seen != universe:
        raise SchemaError("$.universe", "arboreal node bags must cover the universe")
    return ArborealDecomposition(skel, bags, arc_bags, universe)


def loads_decomposition(text: str) -> Decomposition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return decomposition_from_dict(data)


def read_decomposition(path: str) -> Decomposition:
    with open(path) as fh:
        return loads_decomposition(fh.read())


def write_decomposition(d: Decomposition, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_decomposition(d))
