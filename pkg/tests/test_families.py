from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pebblelp import families as fam
from pebblelp.certificate import verify_certificate
from pebblelp.graph import cycle, graph_power, lemke, path, petersen, random_tree, star
from pebblelp.pebbling import ScaleGuardError, pebbling_number_exact
from pebblelp.strategy import validate_strategy


def test_tree_examples():
    assert fam.tree_pebbling_number(path(5), "v1")[0] == 16
    pi, part = fam.tree_pebbling_number(star(3), "v2")
    assert pi == 5 and sorted(part.lengths, reverse=True) == [2, 1]
    pi, part = fam.tree_pebbling_number(star(3), "v1")
    assert pi == 4 and part.lengths == (1, 1, 1)


def test_partition_covers_edges_once():
    t = random_tree(12, 5)
    part = fam.path_partition(t, 0)
    edges = [frozenset(e) for p in part.paths for e in zip(p, p[1:])]
    assert len(edges) == len(set(edges)) == len(t.edges)
    assert list(part.lengths) == sorted(part.lengths, reverse=True)
    assert part.to_json(t)["lengths"] == list(part.lengths)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_tree_formula_random(n, seed):
    t = random_tree(n, seed)
    for r in range(n):
        assert fam.tree_pebbling_number(t, r)[0] == \
            pebbling_number_exact(t, r, max_config_size=128)[0]


def test_tree_rejects_cycles():
    with pytest.raises(fam.FamilyError):
        fam.tree_pebbling_number(cycle(4), 0)


def test_spanning_tree_bound_is_upper():
    g = petersen()
    assert fam.spanning_tree_bound(g, 0) >= 10


@pytest.mark.parametrize("n", range(3, 12))
def test_cycle_strategies(n):
    _, bound = fam.family_certificate(cycle(n), fam.cycle_strategies(n))
    assert bound == fam.cycle_pebbling_number(n)


@pytest.mark.parametrize("n", range(3, 10))
def test_cycle_formula_oracle(n):
    assert fam.cycle_pebbling_number(n) == pebbling_number_exact(cycle(n), 0)[0]


@pytest.mark.parametrize("m", range(4, 10))
def test_pm2(m):
    n = 3 * m + 1
    g, ss = fam.pm2_strategies(m, "u")
    assert fam.uniform_cover(ss) == 4 and len(ss) == m
    assert fam.family_certificate(g, ss)[1] == n
    assert fam.family_certificate(*fam.pm2_strategies(m, "v"))[1] == n + 5
    assert fam.family_certificate(*fam.pm2_strategies(m, "w"))[1] == n + 17


def test_pm2_bad_args():
    with pytest.raises(fam.FamilyError):
        fam.pm2_strategies(4, "x")


@pytest.mark.parametrize("k,n", [(1, 9), (2, 23), (3, 59)])
def test_cycle_power(k, n):
    size, g, ss = fam.cycle_power_strategies(k)
    assert size == n == fam.cycle_power_size(k)
    assert g.n == n and all(g.degree(v) == 2 ** (k + 1) for v in range(n))
    assert fam.uniform_cover(ss) == 2 ** (k + 1)
    assert fam.family_certificate(g, ss)[1] == n


def test_cycle_power_guard():
    with pytest.raises(ScaleGuardError):
        fam.cycle_power_strategies(4)


def test_c9_square_oracle():
    g = graph_power(cycle(9), 2)
    assert pebbling_number_exact(g, 0)[0] == 9


@pytest.mark.parametrize("n,lower,upper", [(3, 1, 1), (5, 1, 1), (6, 2, 2), (9, 2, 2)])
def test_exponent_bounds(n, lower, upper):
    assert fam.pebbling_exponent_bounds(n) == (lower, upper)


def test_exponent_asymptotic_positive():
    assert 0 < fam.pebbling_exponent_upper_asymptotic(64) < 32


def test_cube_bound():
    assert [fam.cube_bound(d) for d in (1, 2, 3)] == [2, 4, 9]
    assert all(fam.cube_bound(d) < 2 ** (d + 1) for d in range(1, 21))


def test_fixtures():
    assert verify_certificate(petersen(), fam.petersen_certificate()).bound == 10
    bounds = {r: verify_certificate(lemke(), c).bound for r, c in fam.lemke_certificates().items()}
    assert bounds["v1"] == 10
    assert all(bounds[f"v{i}"] == 8 for i in range(2, 9))


def test_petersen_uniform():
    cert = fam.petersen_certificate()
    g = petersen()
    ss = [validate_strategy(g, cert.root, r.coeffs) for r in cert.rows]
    assert fam.uniform_cover(ss) is not None
