"""Closed forms and explicit strategy families: trees, cycles, P_{m,2}, cycle
powers and the hypercube bound, plus frozen certificates for small named graphs."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import ceil, comb, log2
from typing import Sequence

from .certificate import Certificate, certificate_from_json, from_strategies, verify_certificate
from .graph import Graph, cycle, generalized_petersen, graph_power, is_tree
from .pebbling import ScaleGuardError
from .strategy import Strategy, uniform_cover_check, validate_strategy


class FamilyError(ValueError):
    pass


# ------------------------------------------------------------------- trees

@dataclass(frozen=True)
class PathPartition:
    """Edge-disjoint root-directed paths covering a rooted tree.

    Each path is listed from its far end to the vertex where it meets the
    part already covered (the root for the first path).
    """
    paths: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(p) - 1 for p in self.paths)

    def to_json(self, g: Graph) -> dict:
        return {"paths": [[g.labels[v] for v in p] for p in self.paths],
                "lengths": list(self.lengths)}


def _rooted(g: Graph, r: int) -> tuple[list[int | None], list[int]]:
    parent: list[int | None] = [None] * g.n
    depth = [0] * g.n
    order = [r]
    seen = {r}
    for u in order:
        for v in g.sorted_adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v], depth[v] = u, depth[u] + 1
                order.append(v)
    return parent, depth


def path_partition(tree: Graph, root: int | str) -> PathPartition:
    """Maximum path partition by repeatedly peeling the longest uncovered
    root-directed path; ties go to the far end with the smallest index."""
    if not is_tree(tree):
        raise FamilyError("path partitions need a tree")
    r = tree.vertex(root)
    parent, _ = _rooted(tree, r)
    covered = {r}
    paths = []
    while len(covered) < tree.n:
        best = None
        for v in range(tree.n):
            if v in covered:
                continue
            walk = [v]
            while walk[-1] not in covered:
                walk.append(parent[walk[-1]])
            if best is None or len(walk) > len(best):
                best = walk
        paths.append(tuple(best))
        covered.update(best)
    return PathPartition(tuple(paths))


def tree_pebbling_number(tree: Graph, root: int | str) -> tuple[int, PathPartition]:
    """pi(T, r) = sum over a maximum path partition of 2^len - #paths + 1."""
    part = path_partition(tree, root)
    value = sum(2 ** e for e in part.lengths) - len(part.paths) + 1
    return value, part


def spanning_tree_bound(g: Graph, root: int | str, samples: int = 20, seed: int = 0) -> int:
    """Smallest pi(T, r) over breadth-first spanning trees T of g.

    The BFS tree with neighbours in index order is always included, plus
    ``samples`` trees from shuffled neighbour orders.  Any spanning tree gives a
    valid upper bound on pi(g, r).
    """
    r = g.vertex(root)
    rng = random.Random(seed)
    best = None
    for t in range(samples + 1):
        parent = [None] * g.n
        seen = {r}
        order = [r]
        for u in order:
            nbrs = list(g.sorted_adj[u])
            if t:
                rng.shuffle(nbrs)
            for v in nbrs:
                if v not in seen:
                    seen.add(v)
                    parent[v] = u
                    order.append(v)
        tree = Graph.from_edges(g.n, [(v, p) for v, p in enumerate(parent) if p is not None],
                                g.labels)
        value, _ = tree_pebbling_number(tree, r)
        best = value if best is None else min(best, value)
    return best


# ------------------------------------------------------------------ cycles

def cycle_pebbling_number(n: int) -> int:
    if n < 3:
        raise FamilyError("cycles need n >= 3")
    k = n // 2
    if n % 2 == 0:
        return 2 ** k
    value = 2 * (2 ** (k + 1) // 3) + 1
    assert value == -(-(2 ** (k + 2) - 1) // 3)
    return value


def _path_strategy(g: Graph, root: int, verts: Sequence[int]) -> Strategy:
    L = len(verts)
    return validate_strategy(g, root, {v: 2 ** (L - 1 - i) for i, v in enumerate(verts)})


def cycle_strategies(n: int, root: int | str = 0) -> list[Strategy]:
    """Two basic path strategies on C_n, one in each direction from the root.

    Even n = 2k: both paths have length k and meet at the antipode.  Odd
    n = 2k+1: length k+1, so the two paths overlap on two vertices.  (Length
    k+3 also works for odd k but overshoots by one when k is even.)
    """
    g = cycle(n)
    r = g.vertex(root)
    k = n // 2
    L = k if n % 2 == 0 else k + 1
    cw = [(r + i) % n for i in range(1, L + 1)]
    ccw = [(r - i) % n for i in range(1, L + 1)]
    return [_path_strategy(g, r, cw), _path_strategy(g, r, ccw)]


# ----------------------------------------------------------------- P_{m,2}

def _pm2_block(g: Graph, i: int, skip: set[int]) -> dict[int, int]:
    """Weights of the rotation T_i: 4 on v_i, 2 on its two leaves, 1 on their
    ring neighbours (vertices in ``skip`` are left out)."""
    hub = g.vertex(f"v{i}")
    w = {hub: 4}
    for x in "01":
        leaf = g.vertex(f"v{i},{x}")
        w[leaf] = 2
        for y in g.adj[leaf]:
            if y != hub and y not in skip:
                w.setdefault(y, 1)
    return w


def pm2_strategies(m: int, root_class: str) -> tuple[Graph, list[Strategy]]:
    """The strategies for P_{m,2} at the hub ``u``, a spoke ``v`` = v0, or a
    ring vertex ``w`` = v0,0.  Unit multipliers give bounds n, n+5 and n+17."""
    if m < 4:
        raise FamilyError("P_{m,2} constructions need m >= 4")
    if root_class not in ("u", "v", "w"):
        raise FamilyError("root_class must be u, v or w")
    g = generalized_petersen(m, 2)
    V = g.vertex
    if root_class == "u":
        return g, [validate_strategy(g, "u", _pm2_block(g, i, set())) for i in range(m)]

    root = V("v0") if root_class == "v" else V("v0,0")
    out = []
    if root_class == "v":
        # nonbasic: 3 on both leaves of v0, 1 on each of their ring neighbours
        s = {}
        for x in "01":
            leaf = V(f"v0,{x}")
            s[leaf] = 3
            for y in g.adj[leaf]:
                if y != root:
                    s[y] = 1
    else:
        s = {V("v0"): 6, V("v0,1"): 3, V("v1,0"): 1, V("v1,1"): 1,
             V(f"v{m - 1},0"): 1, V(f"v{m - 1},1"): 1}
    out.append(validate_strategy(g, root, s))
    for j in range(3):
        w = {V("u"): 8}
        if root_class == "w":
            w[V("v0")] = 16
        for i in range(1, m):
            if i % 3 != j:
                continue
            for y, c in _pm2_block(g, i, {root}).items():
                w.setdefault(y, c)
        out.append(validate_strategy(g, root, w))
    return g, out


# ----------------------------------------------------------- cycle powers

def cycle_power_size(k: int) -> int:
    return (2 * k + 1) * 2 ** k + 3


def _cycle_power_layout(k: int) -> tuple[int, dict[tuple[int, str], int]]:
    """Positions on C_n (root at 0, clockwise) of the half-cycle vertices [i, word]."""
    n = cycle_power_size(k)
    sizes = [1, 2 ** k] + [2 ** k - 2 ** (k - i + 1) for i in range(2, k + 2)] + [2 ** k]
    pos = {(0, "0" * k): 0}
    start = 1
    for i in range(1, k + 3):
        for j in range(sizes[i]):
            pos[(i, format(j, f"0{k}b") if k else "")] = start + j
        start += sizes[i]
    return n, pos


def _children(k: int, i: int, word: str, layout) -> list[tuple[int, str]]:
    """Elements covered by [i, word] in the downset poset."""
    if i == 0:
        return [(1, format(j, f"0{k}b")) for j in range(2 ** k)]
    if i == 1:
        return [(2, "0" + word[:k - 1])]
    out = []
    if i <= k:
        a, c = word[:i - 1], word[i - 1:k - 1]
        if a != "1" * (i - 1):
            out += [(i + 1, a + b + c) for b in "01"]
        if a == "1" * (i - 2) + "0":
            out.append((i + 1, "1" * (i - 1) + "0" + c))
    elif i == k + 1:
        if word != "1" * k:
            out.append((k + 2, word))
        if word == "1" * (k - 1) + "0":
            out.append((k + 2, "1" * k))
    return [z for z in out if z in layout]


def cycle_power_strategies(k: int) -> tuple[int, Graph, list[Strategy]]:
    """Uniformly covering strategies on C_n^(2^k) with n = (2k+1) 2^k + 3.

    One tree per word of length k is read off the downset of [1, word] in the
    covering poset; the mirror images cover the other half of the cycle.  The
    returned strategies sum to 2^(k+1) on every non-root vertex.
    """
    if not 1 <= k <= 3:
        raise ScaleGuardError("cycle_power_strategies supports 1 <= k <= 3")
    n, layout = _cycle_power_layout(k)
    g = graph_power(cycle(n), 2 ** k)
    top = k + 2
    strategies = []
    for j in range(2 ** k):
        start = (1, format(j, f"0{k}b"))
        parent = {start: (0, "0" * k)}
        stack = [start]
        while stack:
            z = stack.pop()
            for y in _children(k, z[0], z[1], layout):
                if y in parent:
                    raise FamilyError(f"downset of {start} is not a tree at {y}")
                parent[y] = z
                stack.append(y)
        for mirror in (False, True):
            w = {}
            for z in parent:
                p = layout[z]
                w[(-p) % n if mirror else p] = 2 ** (top - z[0])
            strategies.append(validate_strategy(g, 0, w))
    return n, g, strategies


def pebbling_exponent_bounds(n: int, sample: int = 3000, seed: int = 0) -> tuple[int, int]:
    """(lower, upper) for the pebbling exponent of C_n.

    lower: least e with n >= 2^diam(C_n^(e)), where diam = ceil(floor(n/2) / e).  upper: least e for which the
    strategy LP on C_n^(e) proves pi <= n, using full enumeration when it fits
    and seeded sampling otherwise.
    """
    if n < 3:
        raise FamilyError("cycles need n >= 3")
    if n > 40:
        raise ScaleGuardError("pebbling_exponent_bounds supports n <= 40")
    lower = next(e for e in range(1, n) if n >= 2 ** ceil((n // 2) / e))
    for e in range(lower, n):
        g = graph_power(cycle(n), e)
        ecc = g.eccentricity(0)
        # trees may need to wander past the eccentricity; try a little deeper
        for depth in range(max(ecc - 1, 0), ecc + 2):
            rep = _exponent_lp(g, depth, sample, seed)
            if rep is not None and rep.bound <= n:
                return lower, e
    return lower, n - 1


def _exponent_lp(g: Graph, depth: int, sample: int, seed: int):
    from .optimize import UncoveredError, bound_pipeline
    try:
        return bound_pipeline(g, 0, depth=depth, max_strategies=20000)
    except ScaleGuardError:
        pass
    try:
        return bound_pipeline(g, 0, depth=depth, sample=sample, seed=seed)
    except UncoveredError:
        return None

    return lower, n - 1


def pebbling_exponent_upper_asymptotic(n: int) -> float:
    """The closed-form upper estimate (n/2) / (lg n - lg lg n)."""
    return (n / 2) / (log2(n) - log2(log2(n)))


# -------------------------------------------------------------------- cubes

def cube_bound(d: int) -> int:
    """1 + sum_{k<d} max(C(d,k), 2^k): the averaged single-strategy bound for Q^d."""
    if d < 1:
        raise FamilyError("cube_bound needs d >= 1")
    value = 1 + sum(max(comb(d, k), 2 ** k) for k in range(d))
    assert value < 2 ** (d + 1)
    return value


# ------------------------------------------------- frozen named certificates

def _load_fixture(name: str) -> dict:
    text = resources.files("pebblelp").joinpath("data", name).read_text()
    return json.loads(text)


def petersen_certificate() -> Certificate:
    """Uniformly covering Petersen certificate (bound 10), frozen from the LP."""
    return certificate_from_json(_load_fixture("petersen.json"))


def lemke_certificates() -> dict[str, Certificate]:
    """One LP-derived certificate per Lemke root, keyed by root label."""
    data = _load_fixture("lemke.json")
    return {root: certificate_from_json(c) for root, c in data.items()}


def family_certificate(g: Graph, strategies: Sequence[Strategy],
                       claim: int | None = None) -> tuple[Certificate, int]:
    """Unit-multiplier certificate over ``strategies`` and its verified bound."""
    cert = from_strategies(g, strategies, claimed_bound=claim)
    return cert, verify_certificate(g, cert).bound


def uniform_cover(strategies: Sequence[Strategy]) -> Fraction | None:
    return uniform_cover_check(strategies)
