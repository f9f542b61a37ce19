"""Tree strategies: validation, enumeration, sampling and nonbasic decomposition."""

from __future__ import annotations

import heapq
import json
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .graph import Graph
from .pebbling import ScaleGuardError

DEFAULT_MAX_STRATEGIES = 10**6


class StrategyError(ValueError):
    """Weights that do not form a strategy; ``vertex`` names the first offender."""

    def __init__(self, msg: str, vertex: int | None = None):
        super().__init__(msg)
        self.vertex = vertex


@dataclass(frozen=True)
class Strategy:
    root: int
    weights: tuple[Fraction, ...]
    parent: tuple[int | None, ...]
    basic: bool

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def rhs(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @cached_property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, w in enumerate(self.weights) if w)

    @cached_property
    def depth(self) -> int:
        best = 0
        for v in self.support:
            d, u = 0, v
            while u != self.root:
                u = self.parent[u]
                d += 1
            best = max(best, d)
        return best

    @cached_property
    def branches(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.support if self.parent[v] == self.root))

    def scaled(self, k) -> "Strategy":
        k = Fraction(k)
        if k <= 0:
            raise StrategyError("scale factor must be positive")
        return Strategy(self.root, tuple(w * k for w in self.weights), self.parent, self.basic)

    def integer_row(self) -> tuple[list[int], int]:
        """Weights scaled to coprime integers, plus the matching right-hand side."""
        from math import gcd, lcm
        den = lcm(*(w.denominator for w in self.weights))
        row = [w.numerator * (den // w.denominator) for w in self.weights]
        g = 0
        for x in row:
            g = gcd(g, x)
        row = [x // g for x in row]
        return row, sum(row)


def _as_weights(g: Graph, weights) -> list[Fraction]:
    if isinstance(weights, Mapping):
        out = [Fraction(0)] * g.n
        for k, w in weights.items():
            out[g.vertex(k)] = Fraction(w)
        return out
    out = [Fraction(w) for w in weights]
    if len(out) != g.n:
        raise StrategyError(f"{len(out)} weights for a graph on {g.n} vertices")
    return out


def _reach(g: Graph, root: int, w: Sequence[Fraction], exact: bool) -> list[int | None]:
    parent: list[int | None] = [None] * g.n
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in g.sorted_adj[u]:
            if v in seen or not w[v]:
                continue
            if u == root or (w[u] == 2 * w[v] if exact else w[u] >= 2 * w[v]):
                parent[v] = u
                seen.add(v)
                queue.append(v)
    return parent


def validate_strategy(g: Graph, root: int | str, weights) -> Strategy:
    """Build the witnessing tree for ``weights`` or raise :class:`StrategyError`.

    An edge u -> v may be used when u is the root or w(u) >= 2 w(v); the weights
    form a strategy exactly when every weighted vertex is reachable this way.
    The strategy is basic when exact doubling alone reaches every weighted vertex.
    """
    r = g.vertex(root)
    w = _as_weights(g, weights)
    for v, x in enumerate(w):
        if x < 0:
            raise StrategyError(f"negative weight on {g.labels[v]}", v)
    if w[r]:
        raise StrategyError(f"root {g.labels[r]} has nonzero weight", r)
    if not any(w):
        raise StrategyError("all weights are zero")
    parent = _reach(g, r, w, exact=True)
    basic = all(parent[v] is not None for v in range(g.n) if w[v])
    if not basic:
        parent = _reach(g, r, w, exact=False)
        for v in range(g.n):
            if w[v] and parent[v] is None:
                raise StrategyError(
                    f"{g.labels[v]} (weight {w[v]}) has no neighbour with at least twice "
                    f"its weight on a path from the root", v)
    return Strategy(r, tuple(w), tuple(parent), basic)


def _tree_weights(n: int, root: int, parent: Sequence[int | None],
                  depth: Sequence[int]) -> list[Fraction]:
    # each branch normalised so its deepest vertex gets weight 1
    branch = [None] * n
    deepest: dict[int, int] = {}
    for v in range(n):
        if v == root or parent[v] is None:
            continue
        u = v
        while parent[u] != root:
            u = parent[u]
        branch[v] = u
        deepest[u] = max(deepest.get(u, 0), depth[v])
    w = [Fraction(0)] * n
    for v in range(n):
        if branch[v] is not None:
            w[v] = Fraction(2 ** (deepest[branch[v]] - depth[v]))
    return w


def enumerate_basic(g: Graph, root: int | str, max_depth: int, single_branch: bool = True,
                    max_count: int = DEFAULT_MAX_STRATEGIES,
                    dedupe: str = "weights") -> list[Strategy]:
    """All basic strategies with tree depth at most ``max_depth``.

    Each rooted subtree is generated once by include/exclude branching on the
    first available extension edge.  With ``single_branch`` the root gets a
    single child.  ``dedupe="weights"`` merges trees that induce the same weight
    vector; ``dedupe="tree"`` keeps one strategy per distinct parent map.
    """
    if max_depth < 1:
        raise StrategyError("max_depth must be at least 1")
    r = g.vertex(root)
    n = g.n
    out: list[Strategy] = []
    seen: set = set()
    shapes: set = set()
    branch: list[int | None] = [None] * n

    def emit(parent, depth):
        if not any(p is not None for p in parent):
            return
        if dedupe == "tree":
            key = tuple(parent)
        else:
            # the weights depend only on (depth, branch), which is cheap to hash
            shape = (tuple(depth), tuple(branch))
            if shape in shapes:
                return
            shapes.add(shape)
            key = None
        w = _tree_weights(n, r, parent, depth)
        if key is None:
            key = tuple(w)
        if key in seen:
            return
        seen.add(key)
        if len(out) >= max_count:
            raise ScaleGuardError(f"more than {max_count} strategies; raise max_count")
        out.append(Strategy(r, tuple(w), tuple(parent), True))

    def grow(parent, depth, in_tree, frontier):
        # frontier: extension edges (u, v) in discovery order; an excluded edge
        # is simply dropped and can never return
        while frontier and frontier[0][1] in in_tree:
            frontier = frontier[1:]
        if not frontier:
            emit(parent, depth)
            return
        (u, v), rest = frontier[0], frontier[1:]
        # include u -> v
        parent[v] = u
        depth[v] = depth[u] + 1
        branch[v] = v if u == r else branch[u]
        in_tree.add(v)
        ext = [(v, x) for x in g.sorted_adj[v]
               if x not in in_tree and depth[v] < max_depth]
        grow(parent, depth, in_tree, rest + ext)
        in_tree.discard(v)
        parent[v] = None
        depth[v] = 0
        branch[v] = None
        # exclude u -> v
        grow(parent, depth, in_tree, rest)

    parent: list[int | None] = [None] * n
    depth = [0] * n
    if single_branch:
        for c in g.sorted_adj[r]:
            parent[c], depth[c], branch[c] = r, 1, c
            ext = [(c, x) for x in g.sorted_adj[c] if x != r and max_depth > 1]
            grow(parent, depth, {r, c}, ext)
            parent[c], depth[c], branch[c] = None, 0, None
    else:
        grow(parent, depth, {r}, [(r, x) for x in g.sorted_adj[r]])
    return out


def _masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.adj[v]) for v in range(g.n)]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _submasks(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def layered_count(g: Graph, root: int | str, max_depth: int, limit: int = 10**6) -> int:
    """len(enumerate_basic(g, root, max_depth)) without building the strategies.

    A single-branch basic strategy is fixed by its layers S_1 = {c}, S_2, ...
    with S_{d+1} a nonempty subset of the unused neighbours of S_d, so the
    count sums over the intermediate layers and closes the last one as
    2^|E| - 1.  More than ``limit`` intermediate layer choices raise
    :class:`ScaleGuardError`.
    """
    if max_depth < 1:
        raise StrategyError("max_depth must be at least 1")
    r = g.vertex(root)
    adj = _masks(g)
    nodes = 0

    def count(layer: int, used: int, d: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise ScaleGuardError(f"more than {limit} layer choices")
        if d == max_depth:
            return 1
        ext = 0
        for v in _bits(layer):
            ext |= adj[v]
        ext &= ~used
        if d + 1 == max_depth:
            return 1 << bin(ext).count("1")
        return 1 + sum(count(sub, used | sub, d + 1) for sub in _submasks(ext))

    return sum(count(1 << c, (1 << r) | (1 << c), 1) for c in g.sorted_adj[r])


def layered_strategy(g: Graph, root: int, layers: Sequence[int]) -> Strategy:
    """The basic single-branch strategy whose d-th layer is the bitmask layers[d-1]."""
    n, depth_max = g.n, len(layers)
    w = [Fraction(0)] * n
    parent: list[int | None] = [None] * n
    prev = [root]
    for d, mask in enumerate(layers, start=1):
        cur = list(_bits(mask))
        for v in cur:
            w[v] = Fraction(1 << (depth_max - d))
            parent[v] = next(u for u in prev if v in g.adj[u] or u == root)
        prev = cur
    return Strategy(root, tuple(w), tuple(parent), True)


def best_layered(g: Graph, root: int | str, max_depth: int, gain: Sequence[int],
                 top: int = 200, limit: int = 10**6) -> list[tuple[int, tuple[int, ...]]]:
    """The ``top`` single-branch strategies of depth <= max_depth with the
    largest positive  sum_v T(v) gain(v), as (value, layer bitmasks).

    This is exact pricing over the whole enumeration: intermediate layers are
    searched exhaustively, while the last layer is chosen greedily (every
    neighbour with positive gain, or the single best one), which is optimal
    once the earlier layers are fixed.
    """
    r = g.vertex(root)
    adj = _masks(g)
    heap: list[tuple[int, int, tuple[int, ...]]] = []
    tick = 0
    nodes = 0

    def offer(value: int, layers: tuple[int, ...]):
        nonlocal tick
        if value <= 0:
            return
        tick += 1
        item = (value, -tick, layers)
        if len(heap) < top:
            heapq.heappush(heap, item)
        elif item > heap[0]:
            heapq.heapreplace(heap, item)

    def value_of(sums: list[int]) -> int:
        D = len(sums)
        return sum(x << (D - 1 - i) for i, x in enumerate(sums))

    def walk(layers: tuple[int, ...], sums: list[int], used: int):
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise ScaleGuardError(f"more than {limit} layer choices while pricing")
        offer(value_of(sums), layers)
        d = len(layers)
        if d == max_depth:
            return
        ext = 0
        for v in _bits(layers[-1]):
            ext |= adj[v]
        ext &= ~used
        if not ext:
            return
        if d + 1 == max_depth:
            pos = [v for v in _bits(ext) if gain[v] > 0]
            if pos:
                last = sum(1 << v for v in pos)
                tot = sum(gain[v] for v in pos)
            else:
                v = max(_bits(ext), key=lambda u: (gain[u], -u))
                last, tot = 1 << v, gain[v]
            offer(value_of(sums + [tot]), layers + (last,))
            return
        for sub in _submasks(ext):
            walk(layers + (sub,), sums + [sum(gain[v] for v in _bits(sub))], used | sub)

    for c in g.sorted_adj[r]:
        walk((1 << c,), [gain[c]], (1 << r) | (1 << c))
    return [(v, layers) for v, _, layers in sorted(heap, reverse=True)]


def count_multi_branch(g: Graph, root: int | str) -> int:
    """Closed-form count of depth <= 2 rooted subtrees with at least one edge."""
    r = g.vertex(root)
    kids = g.sorted_adj[r]
    others = [x for x in range(g.n) if x != r]
    total = 0
    for mask in range(1, 1 << len(kids)):
        s1 = {kids[i] for i in range(len(kids)) if mask >> i & 1}
        prod = 1
        for x in others:
            if x not in s1:
                prod *= 1 + len(g.adj[x] & s1)
        total += prod
    return total


def sample_strategies(g: Graph, root: int | str, count: int, max_depth: int | None = None,
                      seed: int = 0, max_attempts: int | None = None) -> list[Strategy]:
    """Seeded random single-branch basic strategies grown by randomised BFS.

    Distinct weight vectors only; stops early if ``max_attempts`` draws fail to
    produce ``count`` distinct ones.
    """
    if count < 1:
        raise StrategyError("count must be positive")
    r = g.vertex(root)
    n = g.n
    max_depth = max_depth or n
    rng = random.Random(seed)
    kids = g.sorted_adj[r]
    attempts = max_attempts or 20 * count + 100
    out: list[Strategy] = []
    seen: set = set()
    for _ in range(attempts):
        if len(out) >= count:
            break
        keep = rng.uniform(0.2, 1.0)
        c = rng.choice(kids)
        parent: list[int | None] = [None] * n
        depth = [0] * n
        parent[c], depth[c] = r, 1
        in_tree = {r, c}
        queue = deque([c])
        while queue:
            u = queue.popleft()
            if depth[u] >= max_depth:
                continue
            nbrs = list(g.sorted_adj[u])
            rng.shuffle(nbrs)
            for v in nbrs:
                if v not in in_tree and rng.random() < keep:
                    parent[v], depth[v] = u, depth[u] + 1
                    in_tree.add(v)
                    queue.append(v)
        # one branch, so the depth vector fixes the weights
        key = tuple(depth)
        if key in seen:
            continue
        seen.add(key)
        w = tuple(_tree_weights(n, r, parent, depth))
        out.append(Strategy(r, w, tuple(parent), True))
    return out


def basic_on_tree(s: Strategy) -> Strategy:
    """The basic strategy with the same tree as ``s``."""
    n = s.n
    depth = [0] * n
    for v in s.support:
        d, u = 0, v
        while u != s.root:
            u = s.parent[u]
            d += 1
        depth[v] = d
    parent = [s.parent[v] if v in s.support else None for v in range(n)]
    return Strategy(s.root, tuple(_tree_weights(n, s.root, parent, depth)), tuple(parent), True)


def decompose_nonbasic(g: Graph, s: Strategy) -> list[tuple[Fraction, Strategy]]:
    """Write ``s`` as a nonnegative combination of basic strategies.

    Take the basic strategy B on the tree of the current remainder T, subtract
    the largest multiple c with cB <= T and repeat.  The remainder keeps the
    doubling inequalities on its (shrinking) tree, and every step zeroes at
    least one vertex.
    """
    parts: list[tuple[Fraction, Strategy]] = []
    weights = list(s.weights)
    while any(weights):
        cur = validate_strategy(g, s.root, weights)
        b = basic_on_tree(cur)
        c = min(weights[v] / b.weights[v] for v in b.support)
        parts.append((c, b))
        weights = [x - c * y for x, y in zip(weights, b.weights)]
    return parts


def uniform_cover_check(strategies: Sequence[Strategy]) -> Fraction | None:
    """The common column sum m if every non-root vertex is covered equally."""
    if not strategies:
        return None
    roots = {s.root for s in strategies}
    if len(roots) != 1:
        raise StrategyError("strategies have different roots")
    r = roots.pop()
    n = strategies[0].n
    sums = [sum((s.weights[v] for s in strategies), Fraction(0)) for v in range(n) if v != r]
    if sums and sums[0] > 0 and all(x == sums[0] for x in sums):
        return sums[0]
    return None


def _fmt(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def strategy_to_json(g: Graph, s: Strategy) -> dict:
    return {
        "root": g.labels[s.root],
        "weights": {g.labels[v]: _fmt(w) for v, w in enumerate(s.weights) if w},
        "basic": s.basic,
    }


def strategy_from_json(g: Graph, data: dict | str) -> Strategy:
    if isinstance(data, str):
        data = json.loads(data)
    return validate_strategy(g, data["root"],
                             {k: Fraction(str(v)) for k, v in data["weights"].items()})


def dump_strategies(g: Graph, strategies: Iterable[Strategy]) -> str:
    return json.dumps([strategy_to_json(g, s) for s in strategies], indent=1)


def load_strategies(g: Graph, text: str) -> list[Strategy]:
    return [strategy_from_json(g, d) for d in json.loads(text)]
