import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from dwl.decomposition import trivial_decomposition, validate_arboreal, width
from dwl.digraph import is_normal
from dwl.errors import InvalidInputError
from dwl.oracles import dtw_exact_small
from dwl.separators import SeparatorStrategy
from dwl.treewidth import Refinement, RefinementPart, glue, make_arbdec, refine

from conftest import C3, DAG2, a, b, c, digraph_corpus, digraphs, make, random_digraph


def test_refine_examples():
    r = refine(C3, {b, c}, {a}, {b})
    assert r.parts == (RefinementPart(frozenset({c}), frozenset({c})),)
    assert refine(C3, {b}, {a}, {b}).parts == ()
    r = refine(DAG2, {a, b}, (), {a})
    assert r.parts == (RefinementPart(frozenset({b}), frozenset({b})),)


def test_refine_preconditions():
    with pytest.raises(InvalidInputError):
        refine(C3, {a, b}, (), {a})  # {a, b} is not normal in C3
    with pytest.raises(InvalidInputError):
        refine(DAG2, {a, b}, (), ())


@given(digraphs(max_n=7, min_n=1))
@settings(max_examples=150, deadline=None)
def test_refinement_invariants(g):
    rng = random.Random(g.n * 31 + len(g.arcs))
    for _ in range(5):
        y = frozenset(v for v in g.vertices if rng.random() < 0.3)
        w = g.vertices - y
        if not is_normal(g, w, y) or not w:
            continue
        s = frozenset(v for v in g.vertices if rng.random() < 0.4) | {min(w)}
        r = refine(g, w, y, s)
        parts = [p.w for p in r.parts]
        assert frozenset().union(*parts) == w - s
        assert sum(len(p) for p in parts) == len(w - s)
        for p in r.parts:
            assert p.w <= p.parent and not p.parent & s
            assert is_normal(g, p.w, s | (y & p.parent))


def test_glue_examples():
    r = Refinement((), frozenset({a}), frozenset(), frozenset({a}))
    out = glue([], r)
    assert out.bags == {0: frozenset({a})} and out.skeleton.arcs == ()

    # refine would split {b, c} into {b} and {c}; glue itself accepts the coarser part
    r = Refinement((RefinementPart(frozenset({b, c}), frozenset({b, c})),),
                   frozenset({a, b, c}), frozenset(), frozenset({a}))
    child = trivial_decomposition(C3, {b, c}, "arboreal")
    out = glue([child], r)
    assert out.bags == {0: frozenset({a}), 1: frozenset({b, c})}
    assert out.arc_bags == {(0, 1): frozenset({a})}
    assert validate_arboreal(C3, out).passed and width(out) == 2

    r = refine(DAG2, {a, b}, (), {a})
    out = glue([trivial_decomposition(DAG2, {b}, "arboreal")], r)
    assert validate_arboreal(DAG2, out).passed and width(out) <= 1

    r = refine(C3, {a, b, c}, (), {a})
    assert [p.w for p in r.parts] == [{b}, {c}]
    out = glue([trivial_decomposition(C3, p.w, "arboreal") for p in r.parts], r)
    assert validate_arboreal(C3, out).passed and width(out) == 1


def test_glue_rejects_mismatched_children():
    r = refine(C3, {a, b, c}, (), {a})
    with pytest.raises(InvalidInputError):
        glue([], r)
    with pytest.raises(InvalidInputError):
        glue([trivial_decomposition(C3, {b}, "arboreal")] * 2, r)


def test_make_arbdec_examples():
    d, tele = make_arbdec(C3)
    assert validate_arboreal(C3, d).passed and width(d) <= 2
    assert dtw_exact_small(C3)[0] == 1
    path = make(3, [(a, b), (b, c)])
    d, _ = make_arbdec(path)
    assert validate_arboreal(path, d).passed and width(d) <= 1
    # |W| <= |Y| stops at once
    d, _ = make_arbdec(C3, {b}, {a})
    assert d == trivial_decomposition(C3, {b}, "arboreal")


def test_make_arbdec_needs_normal_input():
    with pytest.raises(InvalidInputError):
        make_arbdec(C3, {a, b}, ())


@pytest.mark.parametrize("mode", ["exact", "heuristic", "trivial"])
def test_outputs_valid_with_bounds(mode):
    strategy = SeparatorStrategy(mode)
    for g in digraph_corpus(120, 8, seed={"exact": 1, "heuristic": 2, "trivial": 3}[mode]):
        d, tele = make_arbdec(g, strategy=strategy, check=True)
        assert validate_arboreal(g, d).passed
        assert d.universe == g.vertices
        assert width(d) <= tele.width_bound
        assert tele.max_balance_set_size <= 8 * tele.max_separator_size


def test_width_bound_per_node():
    # every node of the glued tree sits inside one invocation: root bag S ∩ W
    # with the incoming arc bag Y and outgoing arc bags S ∪ (Y ∩ parent)
    rng = random.Random(17)
    for _ in range(100):
        g = random_digraph(rng, rng.randint(1, 8), 0.35)
        d, tele = make_arbdec(g)
        for i in d.skeleton.nodes:
            assert len(d.bags[i] | d.incident(i)) - 1 <= tele.width_bound


def test_alpha_override():
    for g in digraph_corpus(40, 7, seed=5):
        d, _ = make_arbdec(g, alpha=Fraction(3, 4))
        assert validate_arboreal(g, d).passed
    with pytest.raises(InvalidInputError):
        make_arbdec(C3, alpha=1)


def test_deterministic():
    for g in digraph_corpus(20, 8, seed=6):
        assert make_arbdec(g) == make_arbdec(g)
