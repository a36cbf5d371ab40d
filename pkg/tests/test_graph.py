"""Graph container, svc evaluation, subset tables, and the text format."""

import math

import numpy as np
import pytest

from minsumvc import (
    GRAPH_MAGIC,
    GraphFormatError,
    Ordering,
    WeightedGraph,
    complete_bipartite,
    complete_graph,
    cover_times,
    cycle_graph,
    disjoint_union,
    inside_weight_table,
    load_graph,
    min_subset_density,
    path_graph,
    random_regular_graph,
    random_weighted_graph,
    read_graph,
    save_graph,
    star_graph,
    svc_value,
    svc_value_suffix,
    write_graph,
)

TRIANGLE = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


def test_triangle_every_ordering_scores_four():
    # step 1 covers two unit edges, step 2 covers the last one
    from itertools import permutations

    for perm in permutations(range(3)):
        assert svc_value(TRIANGLE, Ordering(perm)) == 4.0


def test_star_center_first_is_leaf_count():
    g = star_graph(5)
    assert svc_value(g, Ordering((0, 1, 2, 3, 4, 5))) == 5.0
    # center last: leaf visited at step t covers its own edge at t
    assert svc_value(g, Ordering((1, 2, 3, 4, 5, 0))) == 1 + 2 + 3 + 4 + 5


def test_path_middle_first():
    g = path_graph(3)
    assert svc_value(g, Ordering((1, 0, 2))) == 2.0
    assert svc_value(g, Ordering((0, 1, 2))) == 1.0 + 2.0


def test_weighted_cover_times():
    g = WeightedGraph(4, [(0, 1, 2.5), (2, 3, 0.5)])
    sigma = Ordering((2, 0, 1, 3))
    assert list(cover_times(g, sigma)) == [2, 1]
    assert svc_value(g, sigma) == 2.5 * 2 + 0.5 * 1


def test_suffix_identity_matches_direct_value():
    # dual route: per-edge cover times vs uncovered weight per prefix
    rng = np.random.default_rng(7)
    for trial in range(40):
        n = int(rng.integers(2, 10))
        g = random_weighted_graph(n, 0.5, int(rng.integers(1 << 30)))
        sigma = Ordering(tuple(int(x) for x in rng.permutation(n)))
        direct = svc_value(g, sigma)
        suffix = svc_value_suffix(g, sigma)
        assert direct == pytest.approx(suffix, rel=1e-12)


def test_svc_relabel_invariance():
    rng = np.random.default_rng(11)
    for trial in range(20):
        n = int(rng.integers(2, 9))
        g = random_weighted_graph(n, 0.6, int(rng.integers(1 << 30)))
        perm = [int(x) for x in rng.permutation(n)]
        sigma = tuple(int(x) for x in rng.permutation(n))
        relabeled_sigma = Ordering(tuple(perm[v] for v in sigma))
        assert svc_value(g, Ordering(sigma)) == pytest.approx(
            svc_value(g.relabel(perm), relabeled_sigma), rel=1e-12
        )


def test_svc_scales_linearly_in_weights():
    g = random_weighted_graph(7, 0.5, 3)
    scaled = WeightedGraph(7, [(u, v, 3.25 * w) for u, v, w in g.edges])
    sigma = Ordering((3, 1, 0, 6, 2, 5, 4))
    assert svc_value(scaled, sigma) == pytest.approx(3.25 * svc_value(g, sigma), rel=1e-12)


def test_parallel_edges_kept_and_counted():
    g = WeightedGraph(2, [(0, 1, 1.0), (0, 1, 2.0), (1, 0, 0.5)])
    assert g.m == 3
    assert g.total_weight() == 3.5
    assert svc_value(g, Ordering((0, 1))) == 3.5
    merged = g.aggregate_parallel()
    assert merged.m == 1
    assert merged.edges == [(0, 1, 3.5)]


def test_constructor_validation():
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 0, 1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 3, 1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(-1, 2, 1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 1, 0.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 1, -2.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 1, math.inf)])
    with pytest.raises(ValueError):
        WeightedGraph(-1, [])


def test_degree_accessors():
    g = WeightedGraph(3, [(0, 1, 2.0), (1, 2, 3.0)])
    assert list(g.degrees()) == [1, 2, 1]
    assert list(g.weighted_degrees()) == [2.0, 5.0, 3.0]
    assert not g.is_unit_weighted()
    assert cycle_graph(4).is_unit_weighted()


def test_ordering_validation_and_positions():
    with pytest.raises(ValueError):
        Ordering((0, 0, 1))
    with pytest.raises(ValueError):
        Ordering((1, 2, 3))
    sigma = Ordering((2, 0, 1))
    assert len(sigma) == 3
    assert list(sigma.positions()) == [1, 2, 0]
    with pytest.raises(ValueError):
        svc_value(TRIANGLE, Ordering((0, 1)))


def test_inside_weight_table_against_direct_sum():
    rng = np.random.default_rng(5)
    for trial in range(10):
        n = int(rng.integers(2, 8))
        g = random_weighted_graph(n, 0.6, int(rng.integers(1 << 30)))
        table = inside_weight_table(g)
        for mask in range(1 << n):
            inside = [v for v in range(n) if mask >> v & 1]
            direct = sum(w for u, v, w in g.edges if u in inside and v in inside)
            assert table[mask] == pytest.approx(direct, abs=1e-12)


def test_min_subset_density_exhaustive_and_witness():
    from itertools import combinations

    g = disjoint_union([complete_graph(4), path_graph(4)])
    rep = min_subset_density(g, 4, mode="exhaustive")
    assert rep.exact and rep.mode == "exhaustive"
    assert len(rep.witness) == 4
    inside = set(rep.witness)
    direct = sum(w for u, v, w in g.edges if u in inside and v in inside)
    assert rep.min_density == pytest.approx(direct / g.total_weight(), rel=1e-12)
    brute = min(
        sum(w for u, v, w in g.edges if u in c and v in c)
        for c in map(set, combinations(range(g.n), 4))
    )
    assert rep.min_density == pytest.approx(brute / g.total_weight(), rel=1e-12)
    # one K4 edge is forced: only three pairwise-disconnected vertices exist
    assert rep.min_density == pytest.approx(1.0 / 9.0, rel=1e-12)


def test_min_subset_density_sampled_upper_bounds_exact():
    rng = np.random.default_rng(13)
    for trial in range(5):
        g = random_weighted_graph(9, 0.5, int(rng.integers(1 << 30)))
        exact = min_subset_density(g, 4, mode="exhaustive")
        sampled = min_subset_density(g, 4, mode="sampled", trials=3000, seed=trial)
        assert not sampled.exact
        assert sampled.min_density >= exact.min_density - 1e-12
    with pytest.raises(ValueError):
        min_subset_density(g, 20)
    with pytest.raises(ValueError):
        min_subset_density(g, 4, mode="nope")


def test_graph_io_round_trip(tmp_path):
    g = WeightedGraph(5, [(0, 4, 1.0), (1, 2, 0.125), (1, 2, 2.0)])
    text = write_graph(g)
    assert text.startswith(GRAPH_MAGIC + "\n5 3\n")
    assert read_graph(text) == g
    path = tmp_path / "g.graph"
    save_graph(g, path)
    assert load_graph(path) == g


def test_graph_io_weight_formatting():
    g = WeightedGraph(2, [(0, 1, 2.0)])
    assert "0 1 2\n" in write_graph(g)
    g2 = WeightedGraph(2, [(0, 1, 1.0 / 3.0)])
    assert read_graph(write_graph(g2)) == g2


def test_graph_format_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="line 1"):
        read_graph("not-a-graph\n1 0\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        read_graph(GRAPH_MAGIC + "\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        read_graph(GRAPH_MAGIC + "\nx y\n")
    with pytest.raises(GraphFormatError, match="line 3"):
        read_graph(GRAPH_MAGIC + "\n2 1\n0 1\n")
    with pytest.raises(GraphFormatError, match="line 3"):
        read_graph(GRAPH_MAGIC + "\n2 1\n0 2 1.0\n")
    with pytest.raises(GraphFormatError, match="line 3"):
        read_graph(GRAPH_MAGIC + "\n2 1\n0 0 1.0\n")
    with pytest.raises(GraphFormatError, match="line 3"):
        read_graph(GRAPH_MAGIC + "\n2 1\n0 1 -1.0\n")
    with pytest.raises(GraphFormatError):
        read_graph(GRAPH_MAGIC + "\n2 2\n0 1 1.0\n")


def test_factories_shapes():
    assert complete_graph(5).m == 10
    assert star_graph(4).m == 4
    assert path_graph(6).m == 5
    assert cycle_graph(6).m == 6
    kb = complete_bipartite(2, 3)
    assert kb.n == 5 and kb.m == 6
    assert all(u < 2 <= v for u, v, _ in kb.edges)


def test_random_regular_graph_is_regular_and_simple():
    for seed in range(5):
        g = random_regular_graph(10, 3, seed)
        assert list(g.degrees()) == [3] * 10
        pairs = {(min(u, v), max(u, v)) for u, v, _ in g.edges}
        assert len(pairs) == g.m
    with pytest.raises(ValueError):
        random_regular_graph(5, 3, 0)
    with pytest.raises(ValueError):
        random_regular_graph(4, 4, 0)
