import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pebblelp.graph import cycle, path, petersen, r15, random_graph
from pebblelp.pebbling import ScaleGuardError
from pebblelp.strategy import (Strategy, StrategyError, basic_on_tree, best_layered,
                               count_multi_branch, layered_count, layered_strategy,
                               decompose_nonbasic, dump_strategies, enumerate_basic,
                               load_strategies, sample_strategies, uniform_cover_check,
                               validate_strategy)

from conftest import random_nonbasic

F = Fraction


def test_validate_examples():
    g = path(4)
    s = validate_strategy(g, "v1", [0, 4, 2, 1])
    assert s.basic and s.rhs == 7 and s.depth == 3
    assert not validate_strategy(g, "v1", [0, 5, 2, 1]).basic
    with pytest.raises(StrategyError) as e:
        validate_strategy(g, "v1", [0, 3, 2, 1])
    assert e.value.vertex == 2
    with pytest.raises(StrategyError):
        validate_strategy(g, "v1", [1, 2, 1, 0])
    with pytest.raises(StrategyError):
        validate_strategy(g, "v1", [0, 0, 0, 0])
    with pytest.raises(StrategyError):
        validate_strategy(g, "v1", [0, -1, 0, 0])


def test_validate_mapping_weights():
    g = petersen()
    s = validate_strategy(g, "v1", {"v2": 2, "v3": 1})
    assert s.support == {1, 2}


def test_enumerate_small():
    ws = sorted(tuple(s.weights) for s in enumerate_basic(path(3), "v1", 2))
    assert ws == [(0, 1, 0), (0, 2, 1)]
    assert len(enumerate_basic(cycle(4), "v1", 2)) == 4


def test_enumerate_r15_v9_count():
    assert len(enumerate_basic(r15(), "v9", 3)) == 20422


def test_enumerated_are_valid_basic():
    g = random_graph(7, 0.5, 11)
    for s in enumerate_basic(g, 0, 3, single_branch=False):
        t = validate_strategy(g, 0, s.weights)
        assert t.basic and s.depth <= 3


def test_tree_dedupe_at_least_weights():
    g = petersen()
    a = enumerate_basic(g, 0, 2, dedupe="weights")
    b = enumerate_basic(g, 0, 2, dedupe="tree")
    assert len(b) >= len(a) > 0


def test_enumerate_guard():
    with pytest.raises(ScaleGuardError):
        enumerate_basic(petersen(), 0, 3, max_count=10)
    with pytest.raises(StrategyError):
        enumerate_basic(petersen(), 0, 0)


def _trees_depth2(g, r):
    # brute force: choose for each vertex a parent among root, depth-1 vertices or none
    kids = g.sorted_adj[r]
    others = [x for x in range(g.n) if x != r]
    count = 0
    for mask in range(1, 1 << len(kids)):
        s1 = {kids[i] for i in range(len(kids)) if mask >> i & 1}
        prod = 1
        for x in others:
            if x not in s1:
                prod *= 1 + len(g.adj[x] & s1)
        count += prod
    return count


def test_count_multi_branch_matches_enumeration():
    for seed in range(5):
        g = random_graph(6, 0.5, seed)
        trees = enumerate_basic(g, 0, 2, single_branch=False, dedupe="tree")
        assert count_multi_branch(g, 0) == len(trees)


def test_sample_deterministic():
    g = r15()
    a = sample_strategies(g, "v9", 50, max_depth=3, seed=4)
    b = sample_strategies(g, "v9", 50, max_depth=3, seed=4)
    assert [s.weights for s in a] == [s.weights for s in b]
    assert all(validate_strategy(g, "v9", s.weights).basic for s in a)
    assert all(len(s.branches) == 1 and s.depth <= 3 for s in a)


def test_decompose_example():
    g = path(4)
    parts = decompose_nonbasic(g, validate_strategy(g, "v1", [0, 5, 2, 1]))
    assert [(c, s.weights) for c, s in parts] == [(1, (0, 4, 2, 1)), (1, (0, 1, 0, 0))]
    s = validate_strategy(g, "v1", [0, 4, 2, 1])
    assert [(c, t.weights) for c, t in decompose_nonbasic(g, s)] == [(1, s.weights)]


@settings(max_examples=150, deadline=None)
@given(st.integers(3, 8), st.floats(0.3, 0.8), st.integers(0, 10**6), st.integers(0, 10**6))
def test_decompose_reconstructs(n, p, gseed, wseed):
    g = random_graph(n, p, gseed)
    w = random_nonbasic(g, 0, random.Random(wseed))
    s = validate_strategy(g, 0, w)
    parts = decompose_nonbasic(g, s)
    total = [F(0)] * n
    for c, b in parts:
        assert c > 0 and b.basic
        validate_strategy(g, 0, b.weights)
        total = [x + c * y for x, y in zip(total, b.weights)]
    assert total == list(s.weights)


def test_basic_on_tree_keeps_support():
    g = path(4)
    s = validate_strategy(g, "v1", [0, 9, 3, 1])
    assert basic_on_tree(s).weights == (0, 4, 2, 1)


def test_uniform_cover_check():
    g = cycle(4)
    a = validate_strategy(g, 0, [0, 2, 1, 0])
    b = validate_strategy(g, 0, [0, 0, 1, 2])
    assert uniform_cover_check([a, b]) == 2
    c = validate_strategy(g, 0, [0, 1, 0, 0])
    d = validate_strategy(g, 0, [0, 0, 0, 1])
    assert uniform_cover_check([c, d]) is None
    assert uniform_cover_check([]) is None
    with pytest.raises(StrategyError):
        uniform_cover_check([a, validate_strategy(g, 1, [1, 0, 0, 0])])


def test_json_roundtrip():
    g = petersen()
    ss = enumerate_basic(g, 0, 2)[:10]
    back = load_strategies(g, dump_strategies(g, ss))
    assert [s.weights for s in back] == [s.weights for s in ss]


def test_scaled():
    s = validate_strategy(path(3), 0, [0, 2, 1])
    assert s.scaled(F(1, 2)).weights == (0, 1, F(1, 2))
    assert s.integer_row() == ([0, 2, 1], 3)
    with pytest.raises(StrategyError):
        s.scaled(0)


@pytest.mark.parametrize("seed", range(8))
def test_layered_count_matches_enumeration(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(4, 9), rng.uniform(0.3, 0.7), seed)
    for d in (1, 2, 3, 4):
        assert layered_count(g, 0, d) == len(enumerate_basic(g, 0, d))


def test_layered_count_r15():
    assert layered_count(r15(), "v9", 3) == 20422


@settings(max_examples=80, deadline=None)
@given(st.integers(4, 8), st.floats(0.3, 0.8), st.integers(0, 10**6), st.integers(1, 4),
       st.lists(st.integers(-6, 6), min_size=8, max_size=8))
def test_best_layered_is_exact(n, p, seed, d, gain):
    g = random_graph(n, p, seed)
    gain = gain[:n]
    brute = max([sum(int(w) * x for w, x in zip(s.weights, gain))
                 for s in enumerate_basic(g, 0, d)] + [0])
    top = best_layered(g, 0, d, gain, top=3)
    assert (top[0][0] if top else 0) == brute
    for value, layers in top:
        s = layered_strategy(g, 0, layers)
        assert validate_strategy(g, 0, s.weights).basic
        assert sum(int(w) * x for w, x in zip(s.weights, gain)) == value
