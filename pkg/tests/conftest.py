import itertools
import random
from functools import lru_cache

import networkx as nx
import pytest

from pebblelp.graph import Graph


def brute_reachable(g: Graph, counts, root: int) -> bool:
    """Plain exhaustive search over pebbling moves, no pruning of any kind."""
    seen = set()
    stack = [tuple(counts)]
    while stack:
        c = stack.pop()
        if c[root]:
            return True
        if c in seen:
            continue
        seen.add(c)
        for u in range(g.n):
            if c[u] >= 2:
                for v in g.adj[u]:
                    d = list(c)
                    d[u] -= 2
                    d[v] += 1
                    stack.append(tuple(d))
    return False


def brute_pi(g: Graph, root: int, limit: int = 40) -> int:
    """Smallest t such that every size-t configuration reaches the root."""
    others = [v for v in range(g.n) if v != root]
    for t in range(1, limit + 1):
        ok = True
        for combo in itertools.combinations_with_replacement(others, t):
            c = [0] * g.n
            for v in combo:
                c[v] += 1
            if not brute_reachable(g, c, root):
                ok = False
                break
        if ok:
            return t
    raise AssertionError("limit too small")


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def from_nx(h: nx.Graph) -> Graph:
    nodes = sorted(h.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(idx[a], idx[b]) for a, b in h.edges()])


@lru_cache(maxsize=None)
def connected_small_graphs(max_n: int = 6) -> tuple[Graph, ...]:
    out = []
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= max_n and nx.is_connected(h):
            out.append(from_nx(h))
    return tuple(out)


@lru_cache(maxsize=None)
def random_pool(count: int = 100, seed: int = 2024) -> tuple[Graph, ...]:
    from pebblelp.graph import random_graph
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(3, 8)
        p = rng.uniform(0.3, 0.8)
        out.append(random_graph(n, p, seed=rng.randrange(10**9)))
    return tuple(out)


@pytest.fixture
def tiny_graphs():
    return connected_small_graphs(4)


def random_nonbasic(g: Graph, root: int, rng: random.Random):
    """Random weights on a random rooted subtree with parent >= 2 x child,
    forced strictly above doubling somewhere.  Returns the weight list."""
    from fractions import Fraction
    n = g.n
    w = [Fraction(0)] * n
    in_tree = {root}
    frontier = [(root, v) for v in g.sorted_adj[root]]
    while frontier:
        u, v = frontier.pop(rng.randrange(len(frontier)))
        if v in in_tree or rng.random() < 0.3:
            continue
        in_tree.add(v)
        if u == root:
            w[v] = Fraction(rng.randint(1, 64), rng.choice([1, 2, 3]))
        else:
            w[v] = w[u] / (2 + Fraction(rng.randint(0, 3), rng.randint(1, 4)))
        frontier.extend((v, x) for x in g.sorted_adj[v])
    if not any(w):
        v = g.sorted_adj[root][0]
        w[v] = Fraction(1)
    return w
