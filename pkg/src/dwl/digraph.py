"""Simple digraphs and the reachability predicates the decompositions are built on."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InvalidInputError

Arc = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    """A finite simple digraph.

    Vertices are arbitrary integers so that induced subgraphs keep the
    identities of their parent graph. Graphs built with ``from_arcs`` use
    ``0..n-1``.
    """

    vertices: frozenset[int]
    arcs: frozenset[Arc]

    def __post_init__(self):
        for u, v in self.arcs:
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if u not in self.vertices or v not in self.vertices:
                raise InvalidInputError(f"arc ({u}, {v}) has an endpoint outside the vertex set")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc] = ()) -> Digraph:
        return cls(frozenset(range(n)), frozenset((int(u), int(v)) for u, v in arcs))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def order(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))

    @cached_property
    def sorted_arcs(self) -> tuple[Arc, ...]:
        return tuple(sorted(self.arcs))

    @cached_property
    def _succ(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.sorted_arcs:
            out[u].append(v)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def _pred(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.sorted_arcs:
            inc[v].append(u)
        return {v: tuple(us) for v, us in inc.items()}

    def succ(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def pred(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    def induced(self, keep: Iterable[int]) -> Digraph:
        """G[keep], with the original vertex identities."""
        keep = frozenset(keep)
        if not keep <= self.vertices:
            raise InvalidInputError("induced subgraph on vertices outside the graph")
        return Digraph(keep, frozenset((u, v) for u, v in self.arcs if u in keep and v in keep))

    def remove(self, drop: Iterable[int]) -> Digraph:
        """G minus the given vertices."""
        return self.induced(self.vertices - frozenset(drop))

    def reverse(self) -> Digraph:
        return Digraph(self.vertices, frozenset((v, u) for u, v in self.arcs))

    def index(self) -> dict[int, int]:
        """Position of each vertex in ``order``; used by the bitmask solvers."""
        return {v: i for i, v in enumerate(self.order)}

    def succ_masks(self) -> list[int]:
        idx = self.index()
        return [sum(1 << idx[w] for w in self._succ[v]) for v in self.order]

    def pred_masks(self) -> list[int]:
        idx = self.index()
        return [sum(1 << idx[u] for u in self._pred[v]) for v in self.order]


@dataclass(frozen=True)
class SccCondensation:
    """Strongly connected components listed in a topological order."""

    components: tuple[frozenset[int], ...]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def position(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}


def _tarjan(g: Digraph) -> list[list[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in g.order:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(g.succ(root)))]
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.succ(w))))
                    pushed = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def scc_condensation(g: Digraph) -> SccCondensation:
    """SCCs in topological order; ties go to the component with the smallest vertex."""
    comps = [frozenset(c) for c in _tarjan(g)]
    where = {v: i for i, c in enumerate(comps) for v in c}
    succ: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for u, v in g.arcs:
        a, b = where[u], where[v]
        if a != b and b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    key = [min(c) for c in comps]
    heap = [(key[i], i) for i in range(len(comps)) if indeg[i] == 0]
    heapq.heapify(heap)
    ordered = []
    while heap:
        _, i = heapq.heappop(heap)
        ordered.append(comps[i])
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (key[j], j))
    return SccCondensation(tuple(ordered))


def reachable_set(g: Digraph, sources: Iterable[int], blocked: Iterable[int] = ()) -> frozenset[int]:
    """Vertices reachable from ``sources`` along paths that avoid ``blocked``."""
    sources = frozenset(sources)
    blocked = frozenset(blocked)
    if sources & blocked:
        raise InvalidInputError("sources and blocked vertices must be disjoint")
    seen = set(sources)
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in g.succ(u):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def coreachable_set(g: Digraph, targets: Iterable[int], blocked: Iterable[int] = ()) -> frozenset[int]:
    """Vertices that can reach ``targets`` along paths avoiding ``blocked``."""
    targets = frozenset(targets)
    blocked = frozenset(blocked)
    seen = set(targets - blocked)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for w in g.pred(u):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def is_guarding(g: Digraph, w: Iterable[int], x: Iterable[int]) -> bool:
    """True iff ``x`` guards ``w``: disjoint, and every arc leaving ``w`` lands in ``x``."""
    w = frozenset(w)
    x = frozenset(x)
    if w & x:
        return False
    return all(v in w or v in x for u in w for v in g.succ(u))


def guard_violation(g: Digraph, w: Iterable[int], x: Iterable[int]) -> Arc | None:
    """Smallest arc escaping ``w`` past ``x``, or None when ``x`` guards ``w``."""
    w = frozenset(w)
    x = frozenset(x)
    for u in sorted(w):
        for v in g.succ(u):
            if v not in w and v not in x:
                return (u, v)
    return None


def is_normal(g: Digraph, w: Iterable[int], x: Iterable[int]) -> bool:
    """True iff ``w`` is ``x``-normal.

    No walk in G - x may start in ``w``, visit a vertex outside ``w`` and come
    back into ``w``. Closed walks count, so a vertex set that is a proper
    part of a strongly connected component is never normal.
    """
    w = frozenset(w)
    x = frozenset(x)
    if w & x:
        return False
    if not w:
        return True
    out = reachable_set(g, w, x) - w
    if not out:
        return True
    back = coreachable_set(g, w, x)
    return not (out & back)
