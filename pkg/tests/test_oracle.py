import random

import pytest

from sandwichlab.graphs import (
    SimpleGraph,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    gnp_graph,
)
from sandwichlab.oracle import (
    CapacityError,
    OracleCache,
    count_extensions,
    count_extensions_with_edge,
    count_regular_spanning_subgraphs,
    count_with_edge,
    enumerate_extensions,
    enumerate_regular,
    extension_profile,
    spanning_profile,
)

from _reference import brute_force_regular_count


def test_complete_host_top_degree():
    for n in (3, 4, 5, 6):
        assert count_regular_spanning_subgraphs(complete_graph(n), n - 1) == 1


def test_known_small_counts():
    assert count_regular_spanning_subgraphs(complete_graph(5), 2) == 12
    assert count_regular_spanning_subgraphs(complete_graph(6), 3) == 70


def test_counts_match_brute_force_random_hosts():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(4, 6)
        host = gnp_graph(n, rng.uniform(0.3, 0.9), rng)
        d = rng.randint(1, n - 1)
        assert count_regular_spanning_subgraphs(host, d) == \
            brute_force_regular_count(n, d, host)


def test_isolated_vertex_gives_zero():
    host = SimpleGraph(5, [(1, 2), (2, 3), (1, 3), (4, 5)])
    host = host.without_edge(4, 5)  # vertices 4, 5 isolated
    assert count_regular_spanning_subgraphs(host, 1) == 0


def test_odd_dn_returns_zero():
    assert count_regular_spanning_subgraphs(complete_graph(5), 3) == 0


def test_count_with_edge_examples():
    k5 = complete_graph(5)
    for e in k5.edges():
        assert count_with_edge(k5, 2, e) == 6
    for n in (4, 5):
        kn = complete_graph(n)
        assert count_with_edge(kn, n - 1, (1, 2)) == 1
    c5 = cycle_graph(5)
    for e in c5.edges():
        assert count_with_edge(c5, 2, e) == 1


def test_count_with_edge_requires_host_edge():
    with pytest.raises(ValueError):
        count_with_edge(cycle_graph(5), 2, (1, 3))


def test_extensions_trivia():
    n, d = 6, 3
    assert count_extensions(empty_graph(n), d) == \
        count_regular_spanning_subgraphs(complete_graph(n), d)
    assert count_extensions(complete_graph(5), 2) == 0  # max degree too high


def test_extension_with_edge_requires_non_edge():
    with pytest.raises(ValueError):
        count_extensions_with_edge(cycle_graph(5), 2, (1, 2))


def test_complement_duality_random():
    rng = random.Random(12)
    for _ in range(30):
        f = gnp_graph(6, rng.uniform(0.2, 0.8), rng)
        d = rng.randint(1, 4)
        assert count_extensions(f, d) == \
            count_regular_spanning_subgraphs(complement(f), 6 - 1 - d)


def test_double_count_identity_random():
    rng = random.Random(13)
    for _ in range(30):
        n = rng.randint(4, 7)
        f = gnp_graph(n, rng.uniform(0.4, 0.9), rng)
        d = rng.randint(1, n - 1)
        total = count_regular_spanning_subgraphs(f, d)
        if total == 0:
            continue
        assert sum(count_with_edge(f, d, e) for e in f.edges()) == \
            (d * n // 2) * total


def test_edge_decomposition_identity_random():
    rng = random.Random(14)
    for _ in range(30):
        n = rng.randint(4, 7)
        f = gnp_graph(n, rng.uniform(0.4, 0.9), rng)
        d = rng.randint(1, n - 1)
        for e in f.edges()[:4]:
            assert count_regular_spanning_subgraphs(f, d) == \
                count_with_edge(f, d, e) + \
                count_regular_spanning_subgraphs(f.without_edge(*e), d)


def test_enumeration_matches_count_and_order():
    k5 = complete_graph(5)
    members = list(enumerate_regular(k5, 2))
    assert len(members) == 12
    keys = [(g.n, g.edge_mask()) for g in members]
    assert keys == sorted(keys)
    assert list(enumerate_regular(cycle_graph(5), 2)) == [cycle_graph(5)]
    assert list(enumerate_regular(complete_graph(4), 3)) == [complete_graph(4)]


def test_enumerate_extensions_contains_base():
    rng = random.Random(15)
    f = gnp_graph(6, 0.3, rng)
    exts = list(enumerate_extensions(f, 3))
    assert len(exts) == count_extensions(f, 3)
    for k in exts:
        assert f.is_subgraph_of(k)


def test_profiles_match_pointwise_counts():
    rng = random.Random(16)
    f = gnp_graph(6, 0.7, rng)
    d = 3
    total, tally = spanning_profile(f, d)
    assert total == count_regular_spanning_subgraphs(f, d)
    for e in f.edges():
        assert tally.get(e, 0) == count_with_edge(f, d, e)
    ext_total, ext_tally = extension_profile(f, d)
    assert ext_total == count_extensions(f, d)
    for e in complement(f).edges():
        assert ext_tally.get(e, 0) == count_extensions_with_edge(f, d, e)


def test_cache_hits_and_bound():
    cache = OracleCache(maxsize=4)
    g = complete_graph(5)
    count_regular_spanning_subgraphs(g, 2, cache=cache)
    assert cache.misses == 1 and cache.hits == 0
    count_regular_spanning_subgraphs(g, 2, cache=cache)
    assert cache.hits == 1
    for d in (0, 1, 2, 3, 4):
        count_regular_spanning_subgraphs(complete_graph(6), d, cache=cache)
    assert len(cache) <= 4


def test_capacity_error():
    with pytest.raises(CapacityError):
        count_regular_spanning_subgraphs(complete_graph(30), 3)
