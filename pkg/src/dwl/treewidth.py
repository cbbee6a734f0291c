"""Arboreal decompositions by recursive separation of the guard set (refine / glue)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .decomposition import ArborealDecomposition, Skeleton, trivial_decomposition, validate_arboreal
from .digraph import Digraph, is_normal, scc_condensation
from .errors import InvalidInputError
from .pathwidth import RunTelemetry
from .separators import SeparatorStrategy, find_sep

ARB_ALPHA = Fraction(7, 8)


@dataclass(frozen=True)
class RefinementPart:
    w: frozenset[int]
    parent: frozenset[int]


@dataclass(frozen=True)
class Refinement:
    parts: tuple[RefinementPart, ...]
    w: frozenset[int]
    y: frozenset[int]
    s: frozenset[int]


def refine(g: Digraph, w: Iterable[int], y: Iterable[int], s: Iterable[int]) -> Refinement:
    """Split W by the SCCs of each SCC of G - S once Y is removed.

    Parts come in the topological order of their parent components, then by
    smallest vertex.
    """
    w, y, s = frozenset(w), frozenset(y), frozenset(s)
    if not is_normal(g, w, y):
        raise InvalidInputError("refinement needs W to be Y-normal")
    if w and not (s & w):
        raise InvalidInputError("refinement needs S to meet W")
    parts = []
    for comp in scc_condensation(g.remove(s)):
        inner = scc_condensation(g.induced(comp - y)).components
        for piece in sorted(inner, key=min):
            if piece <= w:
                parts.append(RefinementPart(piece, comp))
            elif piece & w:
                raise AssertionError("an SCC of C - Y straddles W although W is Y-normal")
    return Refinement(tuple(parts), w, y, s)


def glue(children: Sequence[ArborealDecomposition], r: Refinement) -> ArborealDecomposition:
    """New root with bag S ∩ W; child i hangs below it through arc bag S ∪ (Y ∩ parent_i)."""
    if len(children) != len(r.parts):
        raise InvalidInputError("glue needs exactly one child decomposition per refinement part")
    nodes = [0]
    arcs = []
    bags = {0: r.s & r.w}
    arc_bags = {}
    nxt = 1
    for child, part in zip(children, r.parts):
        if child.universe != part.w:
            raise InvalidInputError("child decomposition does not cover its refinement part")
        relabel = {}
        for old in child.skeleton.topological:
            relabel[old] = nxt
            nxt += 1
        for old, new in relabel.items():
            nodes.append(new)
            bags[new] = child.bags[old]
        for a, b in child.skeleton.arcs:
            arcs.append((relabel[a], relabel[b]))
            arc_bags[(relabel[a], relabel[b])] = child.arc_bags[(a, b)]
        top = relabel[child.skeleton.roots[0]]
        arcs.append((0, top))
        arc_bags[(0, top)] = r.s | (r.y & part.parent)
    skel = Skeleton(tuple(sorted(nodes)), tuple(sorted(arcs)), "arborescence")
    return ArborealDecomposition(skel, bags, arc_bags, r.w)


def make_arbdec(g: Digraph, w: Iterable[int] | None = None, y: Iterable[int] = (),
                strategy: SeparatorStrategy | None = None,
                check: bool = False, alpha=ARB_ALPHA) -> tuple[ArborealDecomposition, RunTelemetry]:
    """Arboreal decomposition of G with respect to ``w`` (default V(G)), ``w`` being ``y``-normal.

    FindSep always runs on the whole graph with Y as the balance set and
    ``alpha`` (7/8 unless overridden); when the separator misses W, the
    smallest vertex of W is added so that every recursive call works on a
    strictly smaller set.
    """
    strategy = strategy or SeparatorStrategy()
    w = g.vertices if w is None else frozenset(w)
    y = frozenset(y)
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise InvalidInputError("alpha must lie in (0, 1)")
    if not is_normal(g, w, y):
        raise InvalidInputError("make_arbdec needs W to be Y-normal")
    tele = RunTelemetry()

    def rec(w: frozenset[int], y: frozenset[int], depth: int) -> ArborealDecomposition:
        tele.max_balance_set_size = max(tele.max_balance_set_size, len(y))
        tele.recursion_depth = max(tele.recursion_depth, depth)
        if len(w) <= len(y):
            tele.width_bound = max(tele.width_bound, len(w) + len(y) - 1)
            return trivial_decomposition(g, w, "arboreal")
        raw = find_sep(g, y, strategy, alpha=alpha).s
        s = raw if raw & w else raw | {min(w)}
        tele.max_raw_separator_size = max(tele.max_raw_separator_size, len(raw))
        tele.record_separator(len(s))
        tele.width_bound = max(tele.width_bound, len(s) + len(y) - 1)
        ref = refine(g, w, y, s)
        children = []
        for part in ref.parts:
            yj = s | (y & part.parent)
            if check and not is_normal(g, part.w, yj):
                raise AssertionError(f"part {sorted(part.w)} is not normal for its guard set")
            children.append(rec(part.w, yj, depth + 1))
        out = glue(children, ref)
        if check and not validate_arboreal(g, out).passed:
            raise AssertionError(f"glue produced an invalid decomposition for W={sorted(w)}")
        return out

    return rec(w, y, 0), tele
