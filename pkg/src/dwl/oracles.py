"""Exact width oracles for small digraphs.

All solvers work on bitmasks over ``g.order`` and translate back to vertex
identities at the end. Size caps default to ``DEFAULT_CAPS`` and can be
overridden with the environment variable ``DWL_EXACT_CAPS``, e.g.
``DWL_EXACT_CAPS="dtw=5,games=8,orderings=12"``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable

from .decomposition import ArborealDecomposition, DirectedPathDecomposition, Skeleton
from .digraph import Digraph, reachable_set
from .errors import CapabilityError, InvalidInputError

DEFAULT_CAPS = {"dtw": 5, "games": 8, "orderings": 12, "elimination": 9, "dsn": 12, "separator": 16}


def exact_caps() -> dict[str, int]:
    caps = dict(DEFAULT_CAPS)
    raw = os.environ.get("DWL_EXACT_CAPS", "").strip()
    if not raw:
        return caps
    for item in raw.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in caps:
            raise InvalidInputError(f"bad DWL_EXACT_CAPS entry {item!r}")
        caps[key] = int(value)
    return caps


def _cap(name: str, g: Digraph, override: int | None, what: str) -> None:
    cap = exact_caps()[name] if override is None else override
    if g.n > cap:
        raise CapabilityError(what, g.n, cap)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _submasks(mask: int):
    """All submasks of ``mask``, from ``mask`` down to 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _masks_of_size(mask: int, k: int):
    for combo in itertools.combinations(list(_bits(mask)), k):
        yield sum(1 << i for i in combo)


def _reach(succ: list[int], start: int, allowed: int) -> int:
    """Vertices reachable from ``start`` inside ``allowed`` (start included)."""
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= succ[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _out(succ: list[int], mask: int) -> int:
    out = 0
    for v in _bits(mask):
        out |= succ[v]
    return out & ~mask


# -- game states -------------------------------------------------------------

@dataclass(frozen=True)
class GameState:
    cops: frozenset[int]
    territory: frozenset[int]


def inert_move(g: Digraph, state: GameState, new_cops: Iterable[int]) -> GameState:
    """One cop move in the invisible-inert game.

    Robbers only move when a cop is about to land on them; they run along
    paths avoiding the cops that stay put.
    """
    new_cops = frozenset(new_cops)
    flushed = state.territory & new_cops
    staying = state.cops & new_cops
    ran = reachable_set(g, flushed, staying) if flushed else frozenset()
    return GameState(new_cops, (state.territory - new_cops) | (ran - new_cops))


def visible_regions(g: Digraph, state: GameState, new_cops: Iterable[int]) -> list[frozenset[int]]:
    """Regions the visible robber can end up in after the cops move to ``new_cops``.

    While the helicopters are in the air he runs along paths avoiding the
    cops that stay put, then settles in a strongly reachable region of
    G - new_cops.
    """
    new_cops = frozenset(new_cops)
    if not state.territory:
        return []
    runway = reachable_set(g, state.territory - (state.cops & new_cops), state.cops & new_cops)
    regions = []
    for v in sorted(runway - new_cops):
        region = reachable_set(g, [v], new_cops)
        if region not in regions:
            regions.append(region)
    return regions


# -- visible, dynamic robber (DAG-width) ------------------------------------

def dagwidth_by_game(g: Digraph, n_cap: int | None = None) -> int:
    """Least k such that k cops win the monotone visible-dynamic game.

    In a monotone play the cops on the out-boundary of the robber's region R
    can never leave, and no other cop matters, so a position is just R. The
    cops add a nonempty set Z inside R; the robber then picks any vertex of
    R - Z and his new region is what it reaches inside R - Z. He chooses his
    start, and with it his first region, before any cop is placed.
    """
    _cap("games", g, n_cap, "dagwidth_by_game")
    if g.n == 0:
        return 0
    succ = g.succ_masks()
    full = (1 << g.n) - 1
    starts = {_reach(succ, 1 << v, full) for v in range(g.n)}
    k = 1
    while True:
        win = _visible_solver(succ, k)
        if all(win(r) for r in starts):
            return k
        k += 1


def _visible_solver(succ: list[int], k: int):
    memo: dict[int, bool] = {}

    def win(region: int) -> bool:
        if region == 0:
            return True
        if region in memo:
            return memo[region]
        free = k - _popcount(_out(succ, region))
        result = False
        for size in range(1, min(free, _popcount(region)) + 1):
            for z in _masks_of_size(region, size):
                rest = region & ~z
                if all(win(_reach(succ, 1 << v, rest)) for v in _bits(rest)):
                    result = True
                    break
            if result:
                break
        memo[region] = result
        return result

    return win


# -- invisible, inert robber (Kelly-width) ----------------------------------

def kellywidth_by_game(g: Digraph, n_cap: int | None = None) -> int:
    """Least k such that k cops win the monotone invisible-inert game.

    Cops standing outside the contaminated set R can be parked anywhere
    before a landing, so a position is just R. A landing on L ⊆ R flushes
    robbers through R; the move is monotone iff every exit of that flight
    from R is blocked, which costs |L| plus the exits. Weakly connected
    pieces of R never interact and are cleared one after another.
    """
    _cap("games", g, n_cap, "kellywidth_by_game")
    if g.n == 0:
        return 0
    succ = g.succ_masks()
    pred = g.pred_masks()
    full = (1 << g.n) - 1
    k = 1
    while not _inert_solver(succ, pred, k)(full):
        k += 1
    return k


def _weak_pieces(succ: list[int], pred: list[int], mask: int):
    rest = mask
    while rest:
        low = rest & -rest
        seen = low
        frontier = low
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= succ[v] | pred[v]
            nxt &= rest & ~seen
            seen |= nxt
            frontier = nxt
        yield seen
        rest &= ~seen


def _inert_solver(succ: list[int], pred: list[int], k: int):
    memo: dict[int, bool] = {}

    def piece(region: int) -> bool:
        if region in memo:
            return memo[region]
        result = False
        for size in range(1, min(k, _popcount(region)) + 1):
            for land in _masks_of_size(region, size):
                flight = _reach(succ, land, region)
                exits = _out(succ, flight) & ~region
                if size + _popcount(exits) <= k and win(region & ~land):
                    result = True
                    break
            if result:
                break
        memo[region] = result
        return result

    def win(region: int) -> bool:
        return all(piece(p) for p in _weak_pieces(succ, pred, region))

    return win


# -- directed elimination orderings -----------------------------------------

@dataclass(frozen=True)
class EliminationOrdering:
    order: tuple[int, ...]
    supports: tuple[int, ...]

    @property
    def width(self) -> int:
        return max(self.supports, default=0)

    @property
    def kelly_width(self) -> int:
        return self.width + 1 if self.order else 0


def _support(succ: list[int], v: int, eliminated: int) -> int:
    """Out-neighbours of v in the fill graph once ``eliminated`` is gone.

    Eliminating a vertex joins each in-neighbour to each out-neighbour, so
    w is a fill out-neighbour of v exactly when some path v -> w has all its
    inner vertices eliminated.
    """
    seen = 1 << v
    frontier = 1 << v
    found = 0
    while frontier:
        nxt = 0
        for x in _bits(frontier):
            nxt |= succ[x]
        nxt &= ~seen
        seen |= nxt
        found |= nxt & ~eliminated
        frontier = nxt & eliminated
    return found & ~(1 << v)


def kellywidth_by_elimination(g: Digraph, n_cap: int | None = None) -> tuple[int, EliminationOrdering]:
    """Kelly-width as 1 + least width of a directed elimination ordering.

    The width of an ordering is the largest number of remaining fill
    out-neighbours a vertex has when it is eliminated. The search is a
    depth-first walk over eliminated sets with failed sets memoised, trying
    vertices in increasing order, so the ordering returned is the
    lexicographically least optimal one.
    """
    _cap("elimination", g, n_cap, "kellywidth_by_elimination")
    if g.n == 0:
        return 0, EliminationOrdering((), ())
    succ = g.succ_masks()
    full = (1 << g.n) - 1
    bound = 0
    while True:
        found = _eliminate(succ, full, bound)
        if found is not None:
            order = tuple(g.order[i] for i in found)
            supports = []
            done = 0
            for i in found:
                supports.append(_popcount(_support(succ, i, done)))
                done |= 1 << i
            return bound + 1, EliminationOrdering(order, tuple(supports))
        bound += 1


def _eliminate(succ: list[int], full: int, bound: int) -> list[int] | None:
    failed: set[int] = set()
    n = len(succ)

    def rec(done: int) -> list[int] | None:
        if done == full:
            return []
        if done in failed:
            return None
        for v in range(n):
            if done >> v & 1:
                continue
            if _popcount(_support(succ, v, done)) <= bound:
                tail = rec(done | 1 << v)
                if tail is not None:
                    return [v] + tail
        failed.add(done)
        return None

    return rec(0)


# -- directed pathwidth by vertex layouts -----------------------------------

def dpw_by_ordering(g: Digraph, n_cap: int | None = None) -> tuple[int, DirectedPathDecomposition]:
    """Exact directed pathwidth (largest-bag convention) with a certificate.

    For a layout v_1..v_n the i-th bag is v_i together with the earlier
    vertices that still have an in-neighbour among v_i..v_n. Its size is
    1 + |boundary of the prefix v_1..v_{i-1}|, so the search only tracks
    prefix sets. Failed prefixes are memoised; vertices are tried in
    increasing order, giving the lexicographically least optimal layout.
    """
    _cap("orderings", g, n_cap, "dpw_by_ordering")
    if g.n == 0:
        return 0, DirectedPathDecomposition(())
    succ = g.succ_masks()
    pred = g.pred_masks()
    full = (1 << g.n) - 1
    bound = 1
    while True:
        layout = _layout(succ, pred, full, bound - 1)
        if layout is not None:
            break
        bound += 1
    bags = []
    prefix = 0
    boundary = 0
    for v in layout:
        bags.append(frozenset(g.order[i] for i in _bits(boundary | 1 << v)))
        prefix |= 1 << v
        boundary = _grow_boundary(succ, pred, prefix, boundary, v)
    return bound, DirectedPathDecomposition(tuple(bags))


def _grow_boundary(succ: list[int], pred: list[int], prefix: int, boundary: int, v: int) -> int:
    """Boundary of ``prefix`` (which just gained v) given the boundary before v joined."""
    for x in _bits(boundary & succ[v]):
        if not pred[x] & ~prefix:
            boundary &= ~(1 << x)
    if pred[v] & ~prefix:
        boundary |= 1 << v
    return boundary


def _layout(succ: list[int], pred: list[int], full: int, limit: int) -> list[int] | None:
    failed: set[int] = set()
    n = len(succ)

    def rec(prefix: int, boundary: int) -> list[int] | None:
        if prefix == full:
            return []
        if prefix in failed:
            return None
        for v in range(n):
            if prefix >> v & 1:
                continue
            nxt = prefix | 1 << v
            nb = _grow_boundary(succ, pred, nxt, boundary, v)
            if nxt != full and _popcount(nb) > limit:
                continue
            tail = rec(nxt, nb)
            if tail is not None:
                return [v] + tail
        failed.add(prefix)
        return None

    return rec(0, 0)


# -- directed treewidth by exhaustive arboreal search ------------------------

def dtw_exact_small(g: Digraph, n_cap: int | None = None) -> tuple[int, ArborealDecomposition]:
    """Exact directed treewidth with an optimal arboreal decomposition.

    Iterative deepening on the width k. ``solve(P, X)`` decides whether P has
    an arboreal decomposition whose root, entered through an arc bag X,
    keeps |W_root ∪ X ∪ outgoing arc bags| <= k + 1 while every node below
    stays within the same bound. A root bag is chosen, the rest of P is
    split into child parts, and each part gets an arc bag that makes it
    normal. Because normality only gets easier and the child's budget only
    gets harder as its arc bag grows, it suffices to let all arc bags draw
    from one maximal pool of size k + 1 around the root.
    """
    _cap("dtw", g, n_cap, "dtw_exact_small")
    if g.n == 0:
        return -1, ArborealDecomposition(Skeleton((0,), (), "arborescence"), {0: frozenset()}, {}, frozenset())
    succ = g.succ_masks()
    pred = g.pred_masks()
    full = (1 << g.n) - 1
    k = 0
    while True:
        plan = _ArborealSearch(succ, pred, full, k).solve(full, 0)
        if plan is not None:
            return k, _build_arboreal(g, plan, full)
        k += 1


class _ArborealSearch:
    def __init__(self, succ: list[int], pred: list[int], full: int, k: int):
        self.succ = succ
        self.pred = pred
        self.full = full
        self.limit = k + 1
        self.memo: dict[tuple[int, int], tuple | None] = {}
        self.ok_memo: dict[tuple[int, int], tuple | None] = {}
        self.part_memo: dict[tuple[int, int, int], tuple | None] = {}
        self.normal_memo: dict[tuple[int, int], bool] = {}

    def normal(self, w: int, x: int) -> bool:
        key = (w, x)
        if key not in self.normal_memo:
            allowed = self.full & ~x
            out = _reach(self.succ, w, allowed) & ~w
            back = _reach(self.pred, w, allowed)
            self.normal_memo[key] = not (out & back)
        return self.normal_memo[key]

    def solve(self, part: int, entry: int):
        key = (part, entry)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None
        result = None
        for root in _submasks(part):
            base = root | entry
            used = _popcount(base)
            if used > self.limit:
                continue
            rest = part & ~root
            if rest == 0:
                result = (root, ())
                break
            pool = self.full & ~base
            extra = min(self.limit - used, _popcount(pool))
            for more in _masks_of_size(pool, extra):
                blocks = self.partition(rest, base | more, part if root == 0 else 0)
                if blocks is not None:
                    result = (root, blocks)
                    break
            if result is not None:
                break
        self.memo[key] = result
        return result

    def partition(self, rest: int, allowed: int, forbid: int):
        """Split ``rest`` into parts that each admit an arc bag inside ``allowed``."""
        if rest == 0:
            return ()
        key = (rest, allowed, forbid)
        if key in self.part_memo:
            return self.part_memo[key]
        low = rest & -rest
        result = None
        for block in _submasks(rest & ~low):
            block |= low
            if block == forbid:
                continue
            child = self.admissible(block, allowed)
            if child is None:
                continue
            tail = self.partition(rest & ~block, allowed, 0)
            if tail is not None:
                result = ((block,) + child,) + tail
                break
        self.part_memo[key] = result
        return result

    def admissible(self, block: int, allowed: int):
        key = (block, allowed)
        if key in self.ok_memo:
            return self.ok_memo[key]
        result = None
        for guard in _submasks(allowed & ~block):
            if self.normal(block, guard):
                plan = self.solve(block, guard)
                if plan is not None:
                    result = (guard, plan)
                    break
        self.ok_memo[key] = result
        return result


def _build_arboreal(g: Digraph, plan, full: int) -> ArborealDecomposition:
    order = g.order

    def vs(mask: int) -> frozenset[int]:
        return frozenset(order[i] for i in _bits(mask))

    nodes: list[int] = []
    bags: dict[int, frozenset[int]] = {}
    arcs: list[tuple[int, int]] = []
    arc_bags: dict[tuple[int, int], frozenset[int]] = {}

    def emit(p) -> int:
        me = len(nodes)
        nodes.append(me)
        root, blocks = p
        bags[me] = vs(root)
        for _block, guard, child in blocks:
            c = emit(child)
            arcs.append((me, c))
            arc_bags[(me, c)] = vs(guard)
        return me

    emit(plan)
    return ArborealDecomposition(Skeleton(tuple(nodes), tuple(arcs), "arborescence"), bags, arc_bags, vs(full))
