"""Balanced directed vertex separators.

A triple (S; U1, U2) partitions V(G); S must guard U2 and each side may hold
at most ``alpha * |U|`` vertices of the balance set U. All balance checks run
on exact fractions.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import networkx as nx

from .decomposition import ArborealDecomposition, validate_arboreal, width
from .digraph import Digraph, is_guarding, reachable_set, scc_condensation
from .errors import CapabilityError, InvalidInputError

EXACT_SEPARATOR_CAP = 16
DSN_CAP = 12


@dataclass(frozen=True)
class SeparatorResult:
    s: frozenset[int]
    u1: frozenset[int]
    u2: frozenset[int]

    def to_dict(self) -> dict:
        return {"S": sorted(self.s), "U1": sorted(self.u1), "U2": sorted(self.u2)}


@dataclass(frozen=True)
class SeparatorStrategy:
    """How FindSep is realised.

    ``beta`` is carried for reporting only; no code path reads it.
    """

    mode: str = "exact"
    alpha: Fraction = Fraction(7, 8)
    size_cap: int | None = None
    beta: Fraction = Fraction(1)
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "heuristic", "trivial"):
            raise InvalidInputError(f"unknown separator mode {self.mode!r}")
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if not 0 < self.alpha < 1:
            raise InvalidInputError("alpha must lie strictly between 0 and 1")

    def with_alpha(self, alpha) -> SeparatorStrategy:
        return SeparatorStrategy(self.mode, Fraction(alpha), self.size_cap, self.beta, self.seed)


def _fits(count: int, alpha: Fraction, total: int) -> bool:
    # count <= alpha * total, without floats
    return count * alpha.denominator <= alpha.numerator * total


def validate_separator(g: Digraph, u: Iterable[int], alpha, r: SeparatorResult) -> bool:
    u = frozenset(u)
    alpha = Fraction(alpha)
    if not u <= g.vertices:
        raise InvalidInputError("balance set is not a subset of the graph's vertices")
    if r.s & r.u1 or r.s & r.u2 or r.u1 & r.u2:
        return False
    if r.s | r.u1 | r.u2 != g.vertices:
        return False
    if len(u) <= 1:
        # a single balance vertex cannot be split; the bounds are taken as vacuous
        return is_guarding(g, r.u2, r.s)
    if not (_fits(len(r.u1 & u), alpha, len(u)) and _fits(len(r.u2 & u), alpha, len(u))):
        return False
    return is_guarding(g, r.u2, r.s)


def _mask_sccs(succ: list[int], alive: int) -> list[int]:
    """SCCs of the subgraph induced by ``alive`` as bitmasks, in topological order.

    Ties between independent components go to the smallest vertex index.
    """
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    comps: list[int] = []
    counter = 0
    for root in range(n):
        if not alive >> root & 1 or index[root] >= 0:
            continue
        work = [(root, succ[root] & alive)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, rest = work[-1]
            if rest:
                w = (rest & -rest).bit_length() - 1
                work[-1] = (v, rest & (rest - 1))
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, succ[w] & alive))
                elif on[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[v])
            if low[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
    # Kahn with smallest-member tie-break, matching scc_condensation
    m = len(comps)
    where = {}
    for ci, c in enumerate(comps):
        x = c
        while x:
            b = x & -x
            where[b.bit_length() - 1] = ci
            x ^= b
    csucc = [0] * m
    indeg = [0] * m
    for ci, c in enumerate(comps):
        out = 0
        x = c
        while x:
            b = x & -x
            out |= succ[b.bit_length() - 1]
            x ^= b
        out &= alive & ~c
        targets = 0
        while out:
            b = out & -out
            targets |= 1 << where[b.bit_length() - 1]
            out &= ~comps[where[b.bit_length() - 1]]
        csucc[ci] = targets
    for ci in range(m):
        t = csucc[ci]
        while t:
            b = t & -t
            indeg[b.bit_length() - 1] += 1
            t ^= b
    key = [(c & -c).bit_length() for c in comps]
    ready = sorted((key[i], i) for i in range(m) if indeg[i] == 0)
    ordered = []
    while ready:
        _, i = ready.pop(0)
        ordered.append(comps[i])
        t = csucc[i]
        while t:
            b = t & -t
            j = b.bit_length() - 1
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append((key[j], j))
            t ^= b
        ready.sort()
    return ordered


def _mask_to_set(mask: int, order: tuple[int, ...]) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(order[i])
        mask >>= 1
        i += 1
    return frozenset(out)


def _best_split(succ: list[int], alive: int, umask: int, alpha: Fraction, usize: int,
                order: tuple[int, ...]) -> int | None:
    """Out-closed U2 inside ``alive`` meeting the balance bounds.

    Prefers the most even split of the balance set, then the
    lexicographically smallest U2.
    """
    comps = _mask_sccs(succ, alive)
    ucount = [bin(c & umask).count("1") for c in comps]
    total = sum(ucount)
    outs = []
    for c in comps:
        out = 0
        x = c
        while x:
            b = x & -x
            out |= succ[b.bit_length() - 1]
            x ^= b
        outs.append(out & alive & ~c)
    best_key = None
    best = None
    m = len(comps)

    def rec(i: int, chosen: int, cnt: int):
        nonlocal best, best_key
        if i < 0:
            if _fits(cnt, alpha, usize) and _fits(total - cnt, alpha, usize):
                key = (max(cnt, total - cnt), tuple(sorted(_mask_to_set(chosen, order))))
                if best_key is None or key < best_key:
                    best_key, best = key, chosen
            return
        rec(i - 1, chosen, cnt)
        # components after i are decided, so closure of component i can be checked now
        if outs[i] & ~chosen == 0 and _fits(cnt + ucount[i], alpha, usize):
            rec(i - 1, chosen | comps[i], cnt + ucount[i])

    rec(m - 1, 0, 0)
    return best


def _result(g: Digraph, s_mask: int, u2_mask: int, full: int) -> SeparatorResult:
    order = g.order
    return SeparatorResult(_mask_to_set(s_mask, order), _mask_to_set(full & ~s_mask & ~u2_mask, order),
                           _mask_to_set(u2_mask, order))


def find_sep_exact(g: Digraph, u: Iterable[int], alpha, cap: int | None = None) -> SeparatorResult:
    """A minimum-size alpha-balanced directed vertex separator of ``u``.

    Candidate separators are tried by increasing size and, within a size, in
    lexicographic order; for the first one admitting a valid split, the most
    even guarded side U2 is returned, ties going to the lexicographically
    smallest. A balance set of at most one vertex needs no separator.
    """
    cap = EXACT_SEPARATOR_CAP if cap is None else cap
    if g.n > cap:
        raise CapabilityError("find_sep_exact", g.n, cap)
    u = frozenset(u)
    if not u <= g.vertices:
        raise InvalidInputError("balance set is not a subset of the graph's vertices")
    alpha = Fraction(alpha)
    idx = g.index()
    succ = g.succ_masks()
    full = (1 << g.n) - 1
    if len(u) <= 1:
        return SeparatorResult(frozenset(), g.vertices, frozenset())
    umask = sum(1 << idx[v] for v in u)
    usize = len(u)
    for k in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), k):
            s_mask = sum(1 << i for i in combo)
            rest_u = bin(umask & ~s_mask).count("1")
            # both sides together hold rest_u vertices of U
            if rest_u * alpha.denominator > 2 * alpha.numerator * usize:
                continue
            u2 = _best_split(succ, full & ~s_mask, umask, alpha, usize, g.order)
            if u2 is not None:
                return _result(g, s_mask, u2, full)
    raise AssertionError("S = V(G) always admits a split")  # pragma: no cover


def _greedy_complete(g: Digraph, u: frozenset[int], alpha: Fraction, start: frozenset[int]) -> SeparatorResult:
    """Grow ``start`` until some suffix of the SCC order of G - S is a balanced guarded side."""
    s = set(start)
    usize = len(u)
    while True:
        comps = scc_condensation(g.remove(s)).components
        counts = [len(c & u) for c in comps]
        total = sum(counts)
        tail = 0
        for t in range(len(comps), -1, -1):
            if t < len(comps):
                tail += counts[t]
            if _fits(tail, alpha, usize) and _fits(total - tail, alpha, usize):
                u2 = frozenset().union(*comps[t:])
                s_f = frozenset(s)
                return SeparatorResult(s_f, g.vertices - s_f - u2, u2)
        heavy = max(range(len(comps)), key=lambda i: (counts[i], -min(comps[i])))
        pool = comps[heavy] & u
        inner = g.induced(comps[heavy])
        v = max(sorted(pool), key=lambda x: (len(inner.succ(x)) + len(inner.pred(x)), -x))
        s.add(v)


def find_sep_heuristic(g: Digraph, u: Iterable[int], alpha, seed: int = 0, samples: int = 12) -> SeparatorResult:
    """A valid (not necessarily minimum) alpha-balanced separator of ``u``.

    Candidates come from a greedy degree-based completion and from minimum
    vertex cuts between sampled pairs of U-vertices; the smallest valid one
    wins. ``S = U`` is the fallback.
    """
    u = frozenset(u)
    alpha = Fraction(alpha)
    if not u <= g.vertices:
        raise InvalidInputError("balance set is not a subset of the graph's vertices")
    if len(u) <= 1:
        return SeparatorResult(frozenset(), g.vertices, frozenset())
    candidates = [SeparatorResult(u, g.vertices - u, frozenset())]
    candidates.append(_greedy_complete(g, u, alpha, frozenset()))
    pairs = [(s, t) for s in sorted(u) for t in sorted(u) if s != t and (s, t) not in g.arcs]
    rng = random.Random(seed)
    if len(pairs) > samples:
        pairs = rng.sample(pairs, samples)
    if pairs:
        nxg = nx.DiGraph()
        nxg.add_nodes_from(g.order)
        nxg.add_edges_from(g.sorted_arcs)
        for s, t in pairs:
            if t not in reachable_set(g, [s]):
                continue
            cut = frozenset(nx.minimum_node_cut(nxg, s, t))
            reach = reachable_set(g, [s], cut)
            if _fits(len(reach & u), alpha, len(u)) and _fits(len((g.vertices - cut - reach) & u), alpha, len(u)):
                candidates.append(SeparatorResult(cut, g.vertices - cut - reach, reach))
            candidates.append(_greedy_complete(g, u, alpha, cut))
    valid = [r for r in candidates if validate_separator(g, u, alpha, r)]
    return min(valid, key=lambda r: (len(r.s), sorted(r.s), sorted(r.u2)))


def find_sep_trivial(g: Digraph, u: Iterable[int], alpha=None) -> SeparatorResult:
    u = frozenset(u)
    return SeparatorResult(u, g.vertices - u, frozenset())


def find_sep(g: Digraph, u: Iterable[int], strategy: SeparatorStrategy, alpha=None) -> SeparatorResult:
    alpha = strategy.alpha if alpha is None else Fraction(alpha)
    if strategy.mode == "exact":
        return find_sep_exact(g, u, alpha, strategy.size_cap)
    if strategy.mode == "heuristic":
        return find_sep_heuristic(g, u, alpha, seed=strategy.seed)
    return find_sep_trivial(g, u)


def dsn(g: Digraph, alpha=Fraction(3, 4), cap: int | None = None) -> int:
    """Directed separator number: the worst minimum separator size over all balance sets."""
    cap = DSN_CAP if cap is None else cap
    if g.n > cap:
        raise CapabilityError("dsn", g.n, cap)
    best = 0
    order = g.order
    for k in range(g.n + 1):
        for combo in itertools.combinations(order, k):
            best = max(best, len(find_sep_exact(g, combo, alpha, cap=max(cap, EXACT_SEPARATOR_CAP)).s))
    return best


def separator_from_arboreal(g: Digraph, d: ArborealDecomposition, u: Iterable[int]) -> SeparatorResult:
    """A 3/4-balanced separator of ``u`` of size at most width(d) + 1.

    Takes S = W_q ∪ X~q at the deepest node q whose subtree holds at least
    half of ``u``, then groups the SCCs of G - S into two sides following
    three cases: everything fits on one side; one heavy component; or only
    light components, split at the first prefix reaching a quarter.
    """
    u = frozenset(u)
    if d.universe != g.vertices:
        raise InvalidInputError("separator extraction needs a decomposition of the whole graph")
    report = validate_arboreal(g, d)
    if not report.passed:
        raise InvalidInputError("separator extraction needs a valid arboreal decomposition")
    if not u <= g.vertices:
        raise InvalidInputError("balance set is not a subset of the graph's vertices")
    skel = d.skeleton
    depth = {skel.roots[0]: 0}
    for i in skel.topological:
        for c in skel.children[i]:
            depth[c] = depth[i] + 1
    total = len(u)
    heavy = [i for i in skel.nodes if 2 * len(d.below(i) & u) >= total]
    q = min(heavy, key=lambda i: (-depth[i], i))
    s = d.bags[q] | d.incident(q)
    assert len(s) <= width(d) + 1

    comps = scc_condensation(g.remove(s)).components
    sizes = [len(c & u) for c in comps]
    quarter = Fraction(total, 4)
    rest = g.vertices - s
    if len(rest & u) <= Fraction(3, 4) * total:
        u1, u2 = rest, frozenset()
    else:
        big = next((i for i, c in enumerate(sizes) if c >= quarter), None)
        if big is not None:
            theta = Fraction(sizes[big], total) - Fraction(1, 4)
            before = frozenset().union(*comps[:big])
            after = frozenset().union(*comps[big + 1:])
            if len(before & u) <= (Fraction(3, 8) - theta / 2) * total:
                u1, u2 = before | comps[big], after
            else:
                u1, u2 = before, comps[big] | after
        else:
            acc = 0
            j = 0
            while acc < quarter:
                acc += sizes[j]
                j += 1
            u1 = frozenset().union(*comps[:j])
            u2 = frozenset().union(*comps[j:])
    return SeparatorResult(frozenset(s), u1, u2)
