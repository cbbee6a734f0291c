import itertools
import random

import networkx as nx
import pytest
from hypothesis import strategies as st

from dwl.digraph import Digraph
from dwl.families import biorient

# vertex names used in the small worked examples
a, b, c, d = 0, 1, 2, 3


def make(n, arcs=()):
    return Digraph.from_arcs(n, arcs)


C3 = make(3, [(a, b), (b, c), (c, a)])
DAG2 = make(2, [(a, b)])
K2 = make(2, [(a, b), (b, a)])
P3 = make(3, [(a, b), (b, a), (b, c), (c, b)])
K4 = biorient(list(itertools.combinations(range(4), 2)), 4)


@st.composite
def digraphs(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return make(n, chosen)


def random_digraph(rng, n, p):
    return make(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])


def digraph_corpus(count, max_n, seed, min_n=1):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(min_n, max_n)
        out.append(random_digraph(rng, n, rng.choice([0.15, 0.3, 0.5, 0.7])))
    return out


def undirected_corpus(count, max_n, seed, min_n=1):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        out.append(nx.gnp_random_graph(n, rng.choice([0.2, 0.4, 0.6, 0.9]), seed=seed * 1000 + i))
    return out


def treewidth_brute(h: nx.Graph) -> int:
    """Undirected treewidth by trying every elimination ordering."""
    n = h.number_of_nodes()
    if n == 0:
        return -1
    best = n - 1
    for perm in itertools.permutations(range(n)):
        adj = {v: set(h[v]) for v in h}
        worst = 0
        for v in perm:
            nb = adj.pop(v)
            worst = max(worst, len(nb))
            if worst >= best:
                break
            for x in nb:
                adj[x].discard(v)
                adj[x] |= nb - {x}
        best = min(best, worst)
    return best


def min_separator_brute(g: Digraph, u, alpha) -> int:
    """Smallest |S| over all (S, U2) with U2 guarded by S and both sides balanced."""
    u = set(u)
    if len(u) <= 1:
        return 0
    verts = sorted(g.vertices)
    for k in range(len(verts) + 1):
        for s in itertools.combinations(verts, k):
            rest = [v for v in verts if v not in s]
            for r in range(len(rest) + 1):
                for u2 in itertools.combinations(rest, r):
                    u2s = set(u2)
                    u1s = set(rest) - u2s
                    if any(x in u2s and y not in u2s and y not in s for x, y in g.arcs):
                        continue
                    if len(u1s & u) <= alpha * len(u) and len(u2s & u) <= alpha * len(u):
                        return k
    raise AssertionError("S = V(G) always works")


def dpw_brute(g: Digraph) -> int:
    """Least max bag over all interval layouts.

    Every valid path decomposition can be squeezed onto the n start
    positions of its vertices, so intervals [start, end] inside 0..n-1 are
    enough; arc (u, v) needs start(u) <= end(v).
    """
    n = g.n
    if n == 0:
        return 0
    spans = [(s, e) for s in range(n) for e in range(s, n)]
    best = n
    for choice in itertools.product(spans, repeat=n):
        if any(choice[u][0] > choice[v][1] for u, v in g.arcs):
            continue
        load = max(sum(1 for s, e in choice if s <= i <= e) for i in range(n))
        best = min(best, load)
    return best


@pytest.fixture
def rng():
    return random.Random(12345)
