import numpy as np
import pytest
from scipy import stats

from forestq import Digraph, ForestRng, enumerate_forests, sample_forest, sample_forest_list
from helpers import random_small_digraph, three_cycle, two_node


def test_sampled_forests_are_valid():
    gen = np.random.default_rng(21)
    rng = ForestRng(21)
    for _ in range(25):
        g = random_small_digraph(gen, max_n=8)
        for _ in range(20):
            f = sample_forest(g, rng)
            assert f.invariant_errors(g) == []
            assert f.multiplicity == 1


def test_same_seed_same_forests():
    g = three_cycle()
    a = [f.as_tuple() for f in sample_forest_list(g, 200, ForestRng(99))]
    b = [f.as_tuple() for f in sample_forest_list(g, 200, ForestRng(99))]
    assert a == b


def test_different_seeds_differ():
    g = three_cycle()
    a = [f.as_tuple() for f in sample_forest_list(g, 200, ForestRng(1))]
    b = [f.as_tuple() for f in sample_forest_list(g, 200, ForestRng(2))]
    assert a != b


def test_worker_split_is_deterministic():
    g = three_cycle()
    a = [f.as_tuple() for f in sample_forest_list(g, 101, ForestRng(5), workers=3)]
    b = [f.as_tuple() for f in sample_forest_list(g, 101, ForestRng(5), workers=3)]
    assert a == b
    assert len(a) == 101


def test_single_forest_stream_reproducible():
    g = two_node()
    rng1, rng2 = ForestRng(3), ForestRng(3)
    seq1 = [sample_forest(g, rng1).as_tuple() for _ in range(50)]
    seq2 = [sample_forest(g, rng2).as_tuple() for _ in range(50)]
    assert seq1 == seq2
    assert len(set(seq1)) == 2  # both forests of the two-node graph appear


def test_uniform_over_three_cycle_forests():
    g = three_cycle()
    fs = enumerate_forests(g)
    counts = dict.fromkeys(fs.forests, 0)
    for f in sample_forest_list(g, 35000, ForestRng(17)):
        counts[f.as_tuple()] += 1
    assert stats.chisquare(list(counts.values())).pvalue >= 0.001


def test_root_marginal_two_node():
    g = two_node()
    hits = sum(f.resolve_root(0) == 0 for f in sample_forest_list(g, 20000, ForestRng(4)))
    assert hits / 20000 == pytest.approx(0.5, abs=0.02)


def test_edgeless_graph_always_all_roots():
    g = Digraph(5)
    for f in sample_forest_list(g, 10, ForestRng(0)):
        assert f.as_tuple() == (-1,) * 5


def test_tiny_graphs():
    assert sample_forest(Digraph(0), ForestRng(0)).as_tuple() == ()
    assert sample_forest(Digraph(1), ForestRng(0)).as_tuple() == (-1,)


def test_count_zero_and_validation():
    g = two_node()
    assert len(sample_forest_list(g, 0, ForestRng(0))) == 0
    with pytest.raises(ValueError, match="count"):
        sample_forest_list(g, -1, ForestRng(0))
    with pytest.raises(ValueError, match="workers"):
        sample_forest_list(g, 5, ForestRng(0), workers=0)


def test_sampling_does_not_mutate_graph():
    g = three_cycle()
    before = sorted(g.edges())
    sample_forest_list(g, 100, ForestRng(8))
    assert sorted(g.edges()) == before
    assert g.m == 3


def test_rng_uniform_and_spawn():
    rng = ForestRng(42)
    xs = [rng.uniform() for _ in range(10)]
    assert all(0.0 <= x < 1.0 for x in xs)
    kids = rng.spawn(3)
    assert len(kids) == 3
    vals = {k.uniform() for k in kids}
    assert len(vals) == 3  # distinct streams


def test_large_graph_forest_is_lazy_but_valid():
    gen = np.random.default_rng(30)
    n = 500
    g = Digraph(n)
    while g.m < 2 * n:
        u, v = int(gen.integers(n)), int(gen.integers(n))
        if u != v and not g.has_edge(u, v):
            g.insert_edge(u, v)
    f = sample_forest(g, ForestRng(30))
    assert f.dirty  # large samples defer root computation
    r = f.resolve_root(0)
    assert f.successor[r] == -1
    f.rebuild_roots()
    assert not f.dirty
    assert f.resolve_root(0) == r
