import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwl.decomposition import (
    ArborealDecomposition,
    DagDecomposition,
    DirectedPathDecomposition,
    KellyDecomposition,
    Skeleton,
    dpd_to_kelly_path,
    kelly_path_to_dpd,
    normalize_dpd,
    trivial_decomposition,
    validate,
    validate_arboreal,
    validate_dag_decomposition,
    validate_dpd,
    validate_kelly,
    width,
)
from dwl.errors import InvalidInputError

from conftest import C3, DAG2, K2, K4, P3, a, b, c, digraphs, make, random_digraph

dpd = DirectedPathDecomposition.of


# -- validators on the worked examples ----------------------------------------

@pytest.mark.parametrize("g", [C3, DAG2, K2, K4, make(0), make(3)])
@pytest.mark.parametrize("kind", ["dpd", "dag", "kelly", "arboreal"])
def test_trivial_decomposition_passes(g, kind):
    assert validate(g, trivial_decomposition(g, kind=kind)).passed


def test_trivial_decomposition_shapes():
    assert trivial_decomposition(C3).bags == (frozenset({a, b, c}),)
    arb = trivial_decomposition(C3, {a, b}, "arboreal")
    assert arb.bags == {0: frozenset({a, b})} and arb.universe == {a, b}
    kel = trivial_decomposition(DAG2, kind="kelly")
    assert kel.bags == {0: frozenset({a, b})} and kel.guards == {0: frozenset()}
    with pytest.raises(InvalidInputError):
        trivial_decomposition(C3, {a}, "dpd")


def test_dag_decomposition_dgw3_witness():
    d = dpd([{b}, {a}]).as_dag()
    report = validate_dag_decomposition(DAG2, d)
    assert report["DGW-1"].passed and report["DGW-2"].passed
    assert not report["DGW-3"].passed
    assert report["DGW-3"].witness == (a, b)


def test_dag_decomposition_dgw1_missing_vertex():
    report = validate_dag_decomposition(DAG2, dpd([{a}]).as_dag())
    assert not report["DGW-1"].passed and report["DGW-1"].witness == b


def test_dag_decomposition_dgw2_gap():
    report = validate_dag_decomposition(DAG2, dpd([{a}, {b}, {a}]).as_dag())
    assert not report["DGW-2"].passed


def test_dpd_examples():
    assert validate_dpd(C3, dpd([{a}, {a, b}, {a, c}])).passed
    report = validate_dpd(C3, dpd([{a, b}, {b, c}]))
    assert report["DGW-1"].passed and report["DGW-2"].passed
    assert not report["DPW"].passed and report["DPW"].witness == (c, a)
    edgeless = make(4)
    for perm in itertools.permutations(range(4)):
        assert validate_dpd(edgeless, dpd([{v} for v in perm])).passed


def test_dpd_rejects_non_path():
    with pytest.raises(InvalidInputError):
        validate_dpd(C3, trivial_decomposition(C3, kind="dag"))


def test_kelly_examples():
    assert validate_kelly(C3, trivial_decomposition(C3, kind="kelly")).passed
    k = KellyDecomposition.path([{a}, {b}], [set(), {a}])
    report = validate_kelly(K2, k)
    assert report.passed and "KPW" in report.labels()
    assert width(k) == 2
    overlap = KellyDecomposition.path([{a, b}, {b}], [set(), set()])
    assert not validate_kelly(K2, overlap)["KW-1"].passed


def test_kelly_kw3_order_matters_only_through_guards():
    # root r with W={a}; children x (W={b}, X={a}) and y (W={c}, X={b}); y must follow x
    g = make(3, [(b, a), (c, b)])
    skel = Skeleton((0, 1, 2), ((0, 1), (0, 2)), "dag")
    ok = KellyDecomposition(skel, {0: frozenset({a}), 1: frozenset({b}), 2: frozenset({c})},
                            {0: frozenset(), 1: frozenset({a}), 2: frozenset({b})})
    assert validate_kelly(g, ok).passed
    bad = KellyDecomposition(skel, ok.bags, {0: frozenset(), 1: frozenset({c}), 2: frozenset({b})})
    report = validate_kelly(g, bad)
    assert not report["KW-3"].passed


def test_arboreal_examples():
    assert validate_arboreal(C3, trivial_decomposition(C3, {b, c}, "arboreal")).passed
    skel = Skeleton((0, 1), ((0, 1),), "arborescence")
    good = ArborealDecomposition(skel, {0: frozenset({a}), 1: frozenset({b})}, {(0, 1): frozenset()}, frozenset({a, b}))
    assert validate_arboreal(DAG2, good).passed and width(good) == 0
    bad = ArborealDecomposition(skel, {0: frozenset({a}), 1: frozenset({b, c})}, {(0, 1): frozenset()},
                                frozenset({a, b, c}))
    report = validate_arboreal(C3, bad)
    assert not report["DTW-2"].passed and report["DTW-2"].witness == (0, 1)
    fixed = ArborealDecomposition(skel, bad.bags, {(0, 1): frozenset({a})}, bad.universe)
    assert validate_arboreal(C3, fixed).passed and width(fixed) == 2


def test_width_examples():
    assert width(trivial_decomposition(K4, kind="arboreal")) == 3
    assert width(dpd([{a}, {a, b}, {a, c}])) == 2
    assert width(trivial_decomposition(make(0), kind="arboreal")) == -1


# -- normalisation and the path/Kelly conversions ------------------------------

def test_normalize_examples():
    g = make(2, [(a, b)])
    assert normalize_dpd(dpd([{a, b}, {b}])).bags == (frozenset({a, b}),)
    assert normalize_dpd(dpd([{a}, {b}])).bags == (frozenset({a}), frozenset({b}))
    assert normalize_dpd(dpd([{a}, {a}])).bags == (frozenset({a}),)
    with pytest.raises(InvalidInputError):
        normalize_dpd(dpd([{b}, {a}]), g)


def test_conversion_examples():
    k = dpd_to_kelly_path(dpd([{a, b}]))
    assert k.bags == {0: frozenset({a, b})} and k.guards == {0: frozenset()} and width(k) == 2
    k = dpd_to_kelly_path(dpd([{a}, {b}]), DAG2)
    assert list(k.bags.values()) == [{a}, {b}] and list(k.guards.values()) == [set(), set()]
    k = dpd_to_kelly_path(dpd([{a, b}, {b, c}]), P3)
    assert list(k.bags.values()) == [{a, b}, {c}] and list(k.guards.values()) == [set(), {b}]
    assert width(k) == 2 and validate_kelly(P3, k).passed

    back = kelly_path_to_dpd(KellyDecomposition.path([{a}, {b}], [set(), {a}]), K2)
    assert back.bags == (frozenset({a}), frozenset({a, b})) and width(back) == 2
    assert kelly_path_to_dpd(KellyDecomposition.path([{a, b}], [set()])).bags == (frozenset({a, b}),)
    assert kelly_path_to_dpd(k, P3).bags == (frozenset({a, b}), frozenset({b, c}))


def test_kelly_to_dpd_needs_a_path():
    skel = Skeleton((0, 1, 2), ((0, 1), (0, 2)), "dag")
    d = KellyDecomposition(skel, {0: frozenset({a}), 1: frozenset({b}), 2: frozenset({c})},
                           {i: frozenset() for i in range(3)})
    with pytest.raises(InvalidInputError):
        kelly_path_to_dpd(d)


def random_valid_dpd(rng, g):
    """Lay vertices out in a random order and take interval bags, widened at random."""
    order = list(g.vertices)
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    # v must stay until its last in-neighbour has appeared
    end = {v: max([pos[v]] + [pos[u] for u in g.pred(v)]) for v in order}
    end = {v: min(len(order) - 1, e + rng.choice([0, 0, 1])) for v, e in end.items()}
    return dpd([{v for v in order if pos[v] <= i <= end[v]} for i in range(len(order))])


def all_path_decompositions(g, max_len=3):
    """Every sequence of nonempty bags of length <= max_len (small n only)."""
    subsets = [frozenset(s) for k in range(1, g.n + 1) for s in itertools.combinations(range(g.n), k)]
    for length in range(1, max_len + 1):
        for bags in itertools.product(subsets, repeat=length):
            yield DirectedPathDecomposition(bags)


def test_dgw3_equals_dpw_on_paths():
    rng = random.Random(5)
    seen = 0
    for n in range(1, 4):
        for _ in range(8):
            g = random_digraph(rng, n, 0.5)
            for d in all_path_decompositions(g, max_len=3 if n < 3 else 2):
                r = validate_dpd(g, d)
                if r["DGW-1"].passed and r["DGW-2"].passed:
                    dag = validate_dag_decomposition(g, d.as_dag())
                    assert dag["DGW-3"].passed == r["DPW"].passed
                    seen += 1
    assert seen > 400


def test_dgw3_equals_dpw_on_random_layouts():
    rng = random.Random(6)
    for _ in range(300):
        g = random_digraph(rng, rng.randint(1, 5), 0.4)
        order = list(range(g.n))
        rng.shuffle(order)
        bags = [frozenset(order[i:i + rng.randint(1, 3)]) for i in range(g.n)]
        d = DirectedPathDecomposition(tuple(bags))
        r = validate_dpd(g, d)
        if r["DGW-1"].passed and r["DGW-2"].passed:
            assert validate_dag_decomposition(g, d.as_dag())["DGW-3"].passed == r["DPW"].passed


@given(digraphs(max_n=7), st.randoms(use_true_random=False))
@settings(max_examples=200)
def test_round_trip_preserves_width(g, rnd):
    d = random_valid_dpd(rnd, g)
    assert validate_dpd(g, d).passed
    assert validate_dag_decomposition(g, d.as_dag()).passed
    norm = normalize_dpd(d, g)
    assert validate_dpd(g, norm).passed
    assert width(norm) <= width(d)
    assert normalize_dpd(norm) == norm
    k = dpd_to_kelly_path(norm, g)
    assert validate_kelly(g, k).passed and width(k) == width(norm)
    back = kelly_path_to_dpd(k, g)
    assert validate_dpd(g, back).passed and width(back) == width(norm)
    assert back == norm


@given(digraphs(max_n=6), st.randoms(use_true_random=False))
@settings(max_examples=100)
def test_kelly_paths_pass_general_kw3(g, rnd):
    k = dpd_to_kelly_path(normalize_dpd(random_valid_dpd(rnd, g)))
    as_dag = KellyDecomposition(Skeleton(k.skeleton.nodes, k.skeleton.arcs, "dag"), k.bags, k.guards)
    report = validate_kelly(g, as_dag)
    assert report.passed and "KPW" not in report.labels()


def test_skeleton_shape_checks():
    with pytest.raises(InvalidInputError):
        Skeleton((0, 1), ((0, 1), (1, 0))).check()
    with pytest.raises(InvalidInputError):
        Skeleton((0, 1, 2), ((0, 2), (1, 2)), "arborescence").check()
    with pytest.raises(InvalidInputError):
        Skeleton((0, 1, 2), ((0, 1), (0, 2)), "path").check()
    Skeleton((0, 1, 2), ((0, 1), (0, 2)), "arborescence").check()


def test_bags_outside_graph_rejected():
    with pytest.raises(InvalidInputError):
        validate_dpd(DAG2, dpd([{a, 5}]))
    with pytest.raises(InvalidInputError):
        validate(DAG2, DagDecomposition(Skeleton((0,), ()), {}))
