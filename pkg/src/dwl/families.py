"""Named digraph families used by the oracles, tests and the ``gen`` command."""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

import networkx as nx

from .digraph import Digraph
from .errors import InvalidInputError

FAMILIES = (
    "biorient-clique", "biorient-path", "biorient-ternary-tree", "directed-cycle",
    "random-dag", "random-digraph",
)


def biorient(h: nx.Graph | Iterable[tuple[int, int]], n: int | None = None) -> Digraph:
    """Replace every undirected edge {u, v} by the arcs (u, v) and (v, u).

    ``h`` is a networkx graph on 0..n-1 or a plain edge list (then ``n`` is
    required).
    """
    if isinstance(h, nx.Graph):
        if h.is_directed():
            raise InvalidInputError("biorient expects an undirected graph")
        n = h.number_of_nodes()
        if set(h.nodes) != set(range(n)):
            raise InvalidInputError("biorient expects nodes 0..n-1")
        edges = list(h.edges)
    else:
        if n is None:
            raise InvalidInputError("biorient of an edge list needs n")
        edges = list(h)
    arcs = set()
    for u, v in edges:
        if u == v:
            raise InvalidInputError(f"self-loop at {u}")
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph.from_arcs(n, arcs)


def ternary_tree_edges(height: int) -> list[tuple[int, int]]:
    """Complete ternary tree, breadth-first numbering: children of i are 3i+1..3i+3."""
    size = (3 ** (height + 1) - 1) // 2
    return [(i, c) for i in range(size) for c in (3 * i + 1, 3 * i + 2, 3 * i + 3) if c < size]


def _need(params: Sequence[float], count: int, name: str) -> None:
    if len(params) != count:
        raise InvalidInputError(f"{name} takes {count} parameter(s), got {len(params)}")


def _size(value: float, name: str, least: int = 0) -> int:
    if value != int(value) or int(value) < least:
        raise InvalidInputError(f"{name} needs an integer size >= {least}, got {value}")
    return int(value)


def _prob(value: float) -> float:
    if not 0 <= value <= 1:
        raise InvalidInputError(f"arc probability must lie in [0, 1], got {value}")
    return float(value)


def gen_family(name: str, params: Sequence[float], seed: int = 0) -> Digraph:
    if name == "biorient-clique":
        _need(params, 1, name)
        k = _size(params[0], name)
        return biorient(list(itertools.combinations(range(k), 2)), k)
    if name == "biorient-path":
        _need(params, 1, name)
        k = _size(params[0], name)
        return biorient([(i, i + 1) for i in range(k - 1)], k)
    if name == "biorient-ternary-tree":
        _need(params, 1, name)
        height = _size(params[0], name)
        return biorient(ternary_tree_edges(height), (3 ** (height + 1) - 1) // 2)
    if name == "directed-cycle":
        _need(params, 1, name)
        n = _size(params[0], name, 2)
        return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])
    if name in ("random-dag", "random-digraph"):
        _need(params, 2, name)
        n = _size(params[0], name)
        p = _prob(params[1])
        rng = random.Random(seed)
        if name == "random-dag":
            pairs = itertools.combinations(range(n), 2)
        else:
            pairs = itertools.permutations(range(n), 2)
        return Digraph.from_arcs(n, [pair for pair in pairs if rng.random() < p])
    raise InvalidInputError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)} or biorient")
