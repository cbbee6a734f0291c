"""DAG, directed path, Kelly and arboreal decompositions with their validity checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

from .digraph import Arc, Digraph, guard_violation, is_normal
from .errors import InvalidInputError

Bag = frozenset[int]
KINDS = ("dpd", "dag", "kelly", "arboreal")


@dataclass(frozen=True)
class Skeleton:
    """The DAG underlying a decomposition.

    ``kind`` is ``"dag"``, ``"path"`` or ``"arborescence"``; ``check`` enforces
    the corresponding shape.
    """

    nodes: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    kind: str = "dag"

    @classmethod
    def path(cls, length: int) -> Skeleton:
        return cls(tuple(range(length)), tuple((i, i + 1) for i in range(length - 1)), "path")

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {i: [] for i in self.nodes}
        for i, j in self.arcs:
            out[i].append(j)
        return {i: tuple(sorted(js)) for i, js in out.items()}

    @cached_property
    def parents(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {i: [] for i in self.nodes}
        for i, j in self.arcs:
            inc[j].append(i)
        return {j: tuple(sorted(is_)) for j, is_ in inc.items()}

    @cached_property
    def roots(self) -> tuple[int, ...]:
        return tuple(i for i in sorted(self.nodes) if not self.parents[i])

    @cached_property
    def topological(self) -> tuple[int, ...]:
        indeg = {i: len(self.parents[i]) for i in self.nodes}
        ready = sorted(i for i in self.nodes if indeg[i] == 0)
        out = []
        while ready:
            i = ready.pop(0)
            out.append(i)
            for j in self.children[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
            ready.sort()
        return tuple(out)

    @cached_property
    def below(self) -> dict[int, frozenset[int]]:
        """For each node i, the set {j : i ⪯ j}."""
        out: dict[int, frozenset[int]] = {}
        for i in reversed(self.topological):
            acc = {i}
            for j in self.children[i]:
                acc |= out[j]
            out[i] = frozenset(acc)
        return out

    def check(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidInputError("duplicate skeleton node ids")
        known = set(self.nodes)
        if len(set(self.arcs)) != len(self.arcs):
            raise InvalidInputError("duplicate skeleton arcs")
        for i, j in self.arcs:
            if i not in known or j not in known:
                raise InvalidInputError(f"skeleton arc ({i}, {j}) references an unknown node")
            if i == j:
                raise InvalidInputError(f"skeleton self-loop at node {i}")
        if len(self.topological) != len(self.nodes):
            raise InvalidInputError("skeleton is not acyclic")
        if self.kind == "dag" or not self.nodes:
            return
        if self.kind not in ("path", "arborescence"):
            raise InvalidInputError(f"unknown skeleton kind {self.kind!r}")
        if len(self.roots) != 1 or any(len(p) > 1 for p in self.parents.values()):
            raise InvalidInputError(f"skeleton is not an {self.kind}")
        if self.kind == "path" and any(len(c) > 1 for c in self.children.values()):
            raise InvalidInputError("skeleton is not a directed path")


@dataclass(frozen=True)
class DagDecomposition:
    skeleton: Skeleton
    bags: dict[int, Bag]


@dataclass(frozen=True)
class DirectedPathDecomposition:
    """Bags along a directed path; bag ``i`` sits on path node ``i``."""

    bags: tuple[Bag, ...]

    @classmethod
    def of(cls, bags: Iterable[Iterable[int]]) -> DirectedPathDecomposition:
        return cls(tuple(frozenset(b) for b in bags))

    @property
    def skeleton(self) -> Skeleton:
        return Skeleton.path(len(self.bags))

    def as_dag(self) -> DagDecomposition:
        return DagDecomposition(Skeleton(self.skeleton.nodes, self.skeleton.arcs, "dag"),
                                dict(enumerate(self.bags)))


@dataclass(frozen=True)
class KellyDecomposition:
    skeleton: Skeleton
    bags: dict[int, Bag]
    guards: dict[int, Bag]

    @classmethod
    def path(cls, bags: Iterable[Iterable[int]], guards: Iterable[Iterable[int]]) -> KellyDecomposition:
        bags = [frozenset(b) for b in bags]
        guards = [frozenset(x) for x in guards]
        if len(bags) != len(guards):
            raise InvalidInputError("a Kelly path needs one guard set per bag")
        return cls(Skeleton.path(len(bags)), dict(enumerate(bags)), dict(enumerate(guards)))

    @property
    def is_path(self) -> bool:
        return self.skeleton.kind == "path"


@dataclass(frozen=True)
class ArborealDecomposition:
    """Arborescence with partitioning node bags and arc bags.

    ``universe`` is the vertex set partitioned by the node bags; it equals
    V(G) for a decomposition of the whole graph.
    """

    skeleton: Skeleton
    bags: dict[int, Bag]
    arc_bags: dict[tuple[int, int], Bag]
    universe: Bag

    def incident(self, i: int) -> Bag:
        acc: set[int] = set()
        for p in self.skeleton.parents[i]:
            acc |= self.arc_bags[(p, i)]
        for c in self.skeleton.children[i]:
            acc |= self.arc_bags[(i, c)]
        return frozenset(acc)

    def below(self, i: int) -> Bag:
        return frozenset().union(*(self.bags[j] for j in self.skeleton.below[i]))


Decomposition = Union[DagDecomposition, DirectedPathDecomposition, KellyDecomposition, ArborealDecomposition]


@dataclass(frozen=True)
class Verdict:
    label: str
    passed: bool
    witness: object = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    verdicts: tuple[Verdict, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, label: str) -> Verdict:
        for v in self.verdicts:
            if v.label == label:
                return v
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [v.label for v in self.verdicts]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "verdicts": [
                {"condition": v.label, "passed": v.passed,
                 "witness": list(v.witness) if isinstance(v.witness, tuple) else v.witness,
                 "detail": v.detail}
                for v in self.verdicts
            ],
        }


def _check_bags_in_graph(g: Digraph, *families: Iterable[Bag]) -> None:
    for family in families:
        for bag in family:
            if not bag <= g.vertices:
                extra = min(bag - g.vertices)
                raise InvalidInputError(f"bag references vertex {extra} which is not in the graph")


def _union(bags: Iterable[Bag]) -> Bag:
    return frozenset().union(*bags)


def _below_union(skel: Skeleton, bags: dict[int, Bag], i: int) -> Bag:
    return _union(bags[j] for j in skel.below[i])


def _cover_verdict(label: str, g: Digraph, bags: Iterable[Bag]) -> Verdict:
    missing = g.vertices - _union(bags)
    if missing:
        v = min(missing)
        return Verdict(label, False, v, f"vertex {v} is in no bag")
    return Verdict(label, True)


def _partition_verdict(label: str, universe: Bag, bags: dict[int, Bag]) -> Verdict:
    owner: dict[int, int] = {}
    clashes = []
    for i in sorted(bags):
        for v in bags[i]:
            if v in owner:
                clashes.append(v)
            owner.setdefault(v, i)
    if clashes:
        v = min(clashes)
        return Verdict(label, False, v, f"vertex {v} lies in more than one bag")
    outside = set(owner) - universe
    if outside:
        v = min(outside)
        return Verdict(label, False, v, f"vertex {v} lies outside the partitioned set")
    missing = universe - set(owner)
    if missing:
        v = min(missing)
        return Verdict(label, False, v, f"vertex {v} is in no bag")
    return Verdict(label, True)


def _dgw2(skel: Skeleton, bags: dict[int, Bag]) -> Verdict:
    for i in sorted(skel.nodes):
        for k in sorted(skel.below[i] - {i}):
            common = bags[i] & bags[k]
            if not common:
                continue
            for j in sorted(skel.below[i] - {i, k}):
                if k in skel.below[j] and not common <= bags[j]:
                    return Verdict("DGW-2", False, (i, j, k),
                                   f"vertex {min(common - bags[j])} skips node {j}")
    return Verdict("DGW-2", True)


def _dgw3(g: Digraph, skel: Skeleton, bags: dict[int, Bag]) -> Verdict:
    failures = []
    for i, j in sorted(skel.arcs):
        bad = guard_violation(g, _below_union(skel, bags, j) - bags[i], bags[i] & bags[j])
        if bad is not None:
            failures.append((bad, f"skeleton arc ({i}, {j})"))
    for r in skel.roots:
        bad = guard_violation(g, _below_union(skel, bags, r), ())
        if bad is not None:
            failures.append((bad, f"root {r}"))
    if failures:
        arc, where = min(failures)
        return Verdict("DGW-3", False, arc, f"arc {arc} escapes at {where}")
    return Verdict("DGW-3", True)


def validate_dag_decomposition(g: Digraph, d: DagDecomposition) -> ValidationReport:
    d.skeleton.check()
    if set(d.bags) != set(d.skeleton.nodes):
        raise InvalidInputError("bags must be given for exactly the skeleton nodes")
    _check_bags_in_graph(g, d.bags.values())
    return ValidationReport((
        _cover_verdict("DGW-1", g, d.bags.values()),
        _dgw2(d.skeleton, d.bags),
        _dgw3(g, d.skeleton, d.bags),
    ))


def _dpw(g: Digraph, bags: tuple[Bag, ...]) -> Verdict:
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for i, bag in enumerate(bags):
        for v in bag:
            first.setdefault(v, i)
            last[v] = i
    for u, v in g.sorted_arcs:
        if u in first and v in last and first[u] > last[v]:
            return Verdict("DPW", False, (u, v), f"{u} first appears after {v} last appears")
    return Verdict("DPW", True)


def validate_dpd(g: Digraph, d: DirectedPathDecomposition) -> ValidationReport:
    if not isinstance(d, DirectedPathDecomposition):
        raise InvalidInputError("validate_dpd needs a path-shaped decomposition")
    _check_bags_in_graph(g, d.bags)
    return ValidationReport((
        _cover_verdict("DGW-1", g, d.bags),
        _dgw2(d.skeleton, dict(enumerate(d.bags))),
        _dpw(g, d.bags),
    ))


def _kw3_node(skel: Skeleton, bags: dict[int, Bag], guards: dict[int, Bag],
              base: Bag, items: tuple[int, ...]) -> int | None:
    """Greedy saturation; returns the smallest item that can never be placed."""
    placed = set(base)
    todo = list(items)
    progress = True
    while todo and progress:
        progress = False
        for j in todo:
            if guards[j] <= placed:
                placed |= _below_union(skel, bags, j)
                todo.remove(j)
                progress = True
                break
    return min(todo) if todo else None


def validate_kelly(g: Digraph, d: KellyDecomposition) -> ValidationReport:
    skel = d.skeleton
    skel.check()
    if set(d.bags) != set(skel.nodes) or set(d.guards) != set(skel.nodes):
        raise InvalidInputError("bags and guards must be given for exactly the skeleton nodes")
    _check_bags_in_graph(g, d.bags.values(), d.guards.values())
    verdicts = [_partition_verdict("KW-1", g.vertices, d.bags)]

    kw2 = Verdict("KW-2", True)
    for i in sorted(skel.nodes):
        below = _below_union(skel, d.bags, i)
        if below & d.guards[i]:
            kw2 = Verdict("KW-2", False, i, f"guard of node {i} meets the bags below it")
            break
        bad = guard_violation(g, below, d.guards[i])
        if bad is not None:
            kw2 = Verdict("KW-2", False, bad, f"arc {bad} escapes the guard of node {i}")
            break
    verdicts.append(kw2)

    kw3 = Verdict("KW-3", True)
    stuck = _kw3_node(skel, d.bags, d.guards, frozenset(), skel.roots)
    if stuck is not None:
        kw3 = Verdict("KW-3", False, stuck, f"roots cannot be ordered; root {stuck} is never admissible")
    else:
        for i in sorted(skel.nodes):
            stuck = _kw3_node(skel, d.bags, d.guards, d.bags[i] | d.guards[i], skel.children[i])
            if stuck is not None:
                kw3 = Verdict("KW-3", False, i, f"children of node {i} cannot be ordered (child {stuck})")
                break
    verdicts.append(kw3)

    if d.is_path:
        kpw = Verdict("KPW", True)
        for i, j in sorted(skel.arcs):
            if not d.guards[j] <= d.bags[i] | d.guards[i]:
                kpw = Verdict("KPW", False, (i, j), f"guard of node {j} not covered by node {i}")
                break
        verdicts.append(kpw)
    return ValidationReport(tuple(verdicts))


def validate_arboreal(g: Digraph, d: ArborealDecomposition) -> ValidationReport:
    skel = d.skeleton
    if skel.nodes:
        skel = Skeleton(skel.nodes, skel.arcs, "arborescence")
        skel.check()
    if set(d.bags) != set(skel.nodes) or set(d.arc_bags) != set(skel.arcs):
        raise InvalidInputError("bags must be given for exactly the skeleton nodes and arcs")
    if not d.universe <= g.vertices:
        raise InvalidInputError("universe is not a subset of the graph's vertices")
    _check_bags_in_graph(g, d.bags.values(), d.arc_bags.values())
    verdicts = [_partition_verdict("DTW-1", d.universe, d.bags)]
    dtw2 = Verdict("DTW-2", True)
    for e in sorted(skel.arcs):
        if not is_normal(g, _below_union(skel, d.bags, e[1]), d.arc_bags[e]):
            dtw2 = Verdict("DTW-2", False, e, f"subtree below arc {e} is not normal for its arc bag")
            break
    verdicts.append(dtw2)
    return ValidationReport(tuple(verdicts))


def validate(g: Digraph, d: Decomposition) -> ValidationReport:
    if isinstance(d, DirectedPathDecomposition):
        return validate_dpd(g, d)
    if isinstance(d, DagDecomposition):
        return validate_dag_decomposition(g, d)
    if isinstance(d, KellyDecomposition):
        return validate_kelly(g, d)
    if isinstance(d, ArborealDecomposition):
        return validate_arboreal(g, d)
    raise TypeError(f"not a decomposition: {type(d).__name__}")


def width(d: Decomposition) -> int:
    if isinstance(d, DirectedPathDecomposition):
        return max((len(b) for b in d.bags), default=0)
    if isinstance(d, DagDecomposition):
        return max((len(b) for b in d.bags.values()), default=0)
    if isinstance(d, KellyDecomposition):
        return max((len(d.bags[i] | d.guards[i]) for i in d.skeleton.nodes), default=0)
    if isinstance(d, ArborealDecomposition):
        return max((len(d.bags[i] | d.incident(i)) for i in d.skeleton.nodes), default=0) - 1
    raise TypeError(f"not a decomposition: {type(d).__name__}")


def _check_intervals(bags: tuple[Bag, ...]) -> None:
    verdict = _dgw2(Skeleton.path(len(bags)), dict(enumerate(bags)))
    if not verdict.passed:
        raise InvalidInputError(f"not a directed path decomposition: DGW-2 fails at {verdict.witness}")


def _require_valid(g: Digraph | None, report_fn, d) -> None:
    if g is None:
        return
    report = report_fn(g, d)
    if not report.passed:
        bad = next(v for v in report.verdicts if not v.passed)
        raise InvalidInputError(f"invalid decomposition: {bad.label} fails ({bad.detail})")


def normalize_dpd(d: DirectedPathDecomposition, graph: Digraph | None = None) -> DirectedPathDecomposition:
    """Drop bags contained in a neighbouring bag until none is.

    Removing a bag that is a subset of an adjacent bag keeps every vertex
    interval contiguous and keeps (DPW), so validity is preserved and the
    width cannot grow.
    """
    _check_intervals(d.bags)
    _require_valid(graph, validate_dpd, d)
    bags = list(d.bags)
    i = 0
    while i + 1 < len(bags):
        if bags[i + 1] <= bags[i]:
            del bags[i + 1]
        elif bags[i] <= bags[i + 1]:
            del bags[i]
            i = max(i - 1, 0)
        else:
            i += 1
    return DirectedPathDecomposition(tuple(bags))


def dpd_to_kelly_path(d: DirectedPathDecomposition, graph: Digraph | None = None) -> KellyDecomposition:
    """Kelly path decomposition of the same width: new vertices become the part, overlap the guard."""
    _check_intervals(d.bags)
    _require_valid(graph, validate_dpd, d)
    parts, guards = [], []
    prev: Bag = frozenset()
    for bag in d.bags:
        parts.append(bag - prev)
        guards.append(bag & prev)
        prev = bag
    return KellyDecomposition.path(parts, guards)


def kelly_path_to_dpd(d: KellyDecomposition, graph: Digraph | None = None) -> DirectedPathDecomposition:
    if not d.is_path:
        raise InvalidInputError("kelly_path_to_dpd needs a path skeleton")
    d.skeleton.check()
    _require_valid(graph, validate_kelly, d)
    order = d.skeleton.topological
    return DirectedPathDecomposition(tuple(d.bags[i] | d.guards[i] for i in order))


def trivial_decomposition(g: Digraph, universe: Iterable[int] | None = None, kind: str = "dpd") -> Decomposition:
    """The single-node decomposition whose only bag is ``universe`` (default V(G))."""
    u = g.vertices if universe is None else frozenset(universe)
    if not u <= g.vertices:
        raise InvalidInputError("universe is not a subset of the graph's vertices")
    if kind != "arboreal" and u != g.vertices:
        raise InvalidInputError(f"a trivial {kind} decomposition must cover V(G)")
    if kind == "dpd":
        return DirectedPathDecomposition((u,))
    if kind == "dag":
        return DagDecomposition(Skeleton((0,), (), "dag"), {0: u})
    if kind == "kelly":
        return KellyDecomposition(Skeleton.path(1), {0: u}, {0: frozenset()})
    if kind == "arboreal":
        return ArborealDecomposition(Skeleton((0,), (), "arborescence"), {0: u}, {}, u)
    raise InvalidInputError(f"unknown decomposition kind {kind!r}")


def kind_of(d: Decomposition) -> str:
    if isinstance(d, DirectedPathDecomposition):
        return "dpd"
    if isinstance(d, DagDecomposition):
        return "dag"
    if isinstance(d, KellyDecomposition):
        return "kelly"
    if isinstance(d, ArborealDecomposition):
        return "arboreal"
    raise TypeError(f"not a decomposition: {type(d).__name__}")


__all__ = [
    "Arc", "ArborealDecomposition", "Bag", "DagDecomposition", "Decomposition",
    "DirectedPathDecomposition", "KINDS", "KellyDecomposition", "Skeleton",
    "ValidationReport", "Verdict", "dpd_to_kelly_path", "kelly_path_to_dpd",
    "kind_of", "normalize_dpd", "trivial_decomposition", "validate",
    "validate_arboreal", "validate_dag_decomposition", "validate_dpd",
    "validate_kelly", "width",
]
