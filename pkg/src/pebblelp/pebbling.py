"""Exact pebbling semantics: configurations, moves, solvability and pebbling numbers.

Everything here is brute force and independent of the linear-programming side of
the package, so it can serve as ground truth for the bounds computed there.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph

DEFAULT_MAX_N = 12
DEFAULT_MAX_CONFIG = 64

Move = tuple[int, int]


class PebblingError(ValueError):
    """Illegal move or malformed configuration."""


class ScaleGuardError(RuntimeError):
    """Raised instead of silently truncating a search that exceeds a size guard."""


@dataclass(frozen=True)
class Configuration:
    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise PebblingError("pebble counts must be nonnegative")

    @classmethod
    def of(cls, counts: Iterable[int]) -> "Configuration":
        return cls(tuple(int(c) for c in counts))

    @classmethod
    def zeros(cls, n: int) -> "Configuration":
        return cls((0,) * n)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, v: int) -> int:
        return self.counts[v]

    def to_json(self) -> dict:
        return {"counts": list(self.counts)}

    @classmethod
    def from_json(cls, data: dict | str) -> "Configuration":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.of(data["counts"])


def _counts(g: Graph, c) -> list[int]:
    counts = list(c.counts if isinstance(c, Configuration) else c)
    if len(counts) != g.n:
        raise PebblingError(f"configuration has {len(counts)} entries, graph has {g.n}")
    if any(x < 0 for x in counts):
        raise PebblingError("pebble counts must be nonnegative")
    return counts


def apply_moves(g: Graph, c, moves: Sequence[Move]) -> Configuration:
    """Replay pebbling moves ``u -> v``; each takes two pebbles from u and adds one to v."""
    counts = _counts(g, c)
    for step, (u, v) in enumerate(moves):
        u, v = g.vertex(u), g.vertex(v)
        if not g.has_edge(u, v):
            raise PebblingError(f"move {step}: {g.labels[u]}-{g.labels[v]} is not an edge")
        if counts[u] < 2:
            raise PebblingError(f"move {step}: only {counts[u]} pebble(s) on {g.labels[u]}")
        counts[u] -= 2
        counts[v] += 1
    return Configuration(tuple(counts))


def moves_to_json(g: Graph, moves: Sequence[Move]) -> str:
    return json.dumps([[g.labels[u], g.labels[v]] for u, v in moves])


def moves_from_json(g: Graph, text: str) -> list[Move]:
    return [(g.vertex(u), g.vertex(v)) for u, v in json.loads(text)]


class Solver:
    """Solvability search for one (graph, root) pair with shared memo tables.

    Two cheap tests settle most queries: a configuration whose potential
    sum C(v) / 2^dist(v, r) is below 1 cannot reach r (a move never raises the
    potential), and a greedy push along a BFS tree toward r finds a solution
    quickly when there is slack.  The rest goes to a depth-first search over
    moves, memoised on the configuration vector.
    """

    def __init__(self, g: Graph, root: int | str, max_config_size: int = DEFAULT_MAX_CONFIG):
        self.g = g
        self.root = g.vertex(root)
        self.max_config_size = max_config_size
        self.dist = g.distances(self.root)
        self.scale = 1 << max(self.dist)
        self.weight = [self.scale >> d for d in self.dist]
        # moves toward the root first, then sideways, then away
        self.moves_from = [
            sorted(g.adj[u], key=lambda v: (self.dist[v] - self.dist[u], v))
            for u in range(g.n)
        ]
        self.parent = [None] * g.n
        for v in range(g.n):
            if v != self.root:
                self.parent[v] = self.moves_from[v][0]
        self.order = sorted((v for v in range(g.n) if v != self.root),
                            key=lambda v: (-self.dist[v], v))
        self.bad: set[tuple[int, ...]] = set()
        self.good: set[tuple[int, ...]] = set()
        self.searches = 0

    def potential_ok(self, counts: Sequence[int]) -> bool:
        return sum(c * w for c, w in zip(counts, self.weight)) >= self.scale

    def _greedy(self, counts: Sequence[int]) -> list[Move] | None:
        cur = list(counts)
        moves: list[Move] = []
        for v in self.order:
            k = cur[v] // 2
            if k:
                p = self.parent[v]
                cur[v] -= 2 * k
                cur[p] += k
                moves.extend([(v, p)] * k)
        return moves if cur[self.root] >= 1 else None

    def solvable(self, c, witness: bool = False):
        counts = tuple(_counts(self.g, c))
        if sum(counts) > self.max_config_size:
            raise ScaleGuardError(
                f"configuration size {sum(counts)} exceeds guard {self.max_config_size}")
        self.searches += 1
        if counts[self.root] >= 1:
            return (True, []) if witness else True
        if not self.potential_ok(counts):
            return (False, None) if witness else False
        if not witness:
            if counts in self.good:
                return True
            if counts in self.bad:
                return False
        moves = self._greedy(counts)
        if moves is None:
            moves = self._dfs(counts, witness)
        ok = moves is not None
        (self.good if ok else self.bad).add(counts)
        if witness:
            return ok, moves
        return ok

    def _dfs(self, start: tuple[int, ...], witness: bool) -> list[Move] | None:
        # Iterative DFS keeping the move path.  A witness search cannot shortcut
        # through the solvable memo because it needs the actual moves.
        root, bad, good = self.root, self.bad, self.good
        stack = [(start, self._successors(start))]
        path: list[Move] = []
        while stack:
            state, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                bad.add(state)
                stack.pop()
                if path:
                    path.pop()
                continue
            move, child = nxt
            if child[root] >= 1:
                tail: list[Move] | None = []
            elif child in bad or not self.potential_ok(child):
                continue
            elif child in good and not witness:
                tail = []
            else:
                tail = self._greedy(child)
                if tail is None:
                    path.append(move)
                    stack.append((child, self._successors(child)))
                    continue
            for s, _ in stack:
                good.add(s)
            return path + [move] + tail
        return None

    def _successors(self, state: tuple[int, ...]):
        for u in self.order:
            if state[u] >= 2:
                for v in self.moves_from[u]:
                    child = list(state)
                    child[u] -= 2
                    child[v] += 1
                    yield (u, v), tuple(child)


def is_solvable(g: Graph, c, root: int | str, witness: bool = False,
                max_config_size: int = DEFAULT_MAX_CONFIG):
    """Whether some sequence of pebbling moves puts a pebble on ``root``.

    With ``witness=True`` returns ``(flag, moves)`` where ``moves`` replays via
    :func:`apply_moves` when the flag is true.
    """
    return Solver(g, root, max_config_size).solvable(c, witness=witness)


def lower_bound(g: Graph) -> int:
    return max(g.n, 2 ** g.diameter())


class _MaxSearch:
    """Branch and bound for the largest r-unsolvable configuration.

    The unsolvable configurations form a down-set, so once a partial
    assignment is fixed every free vertex has a cap: the most pebbles it can
    take on top of the partial assignment while staying unsolvable.  Caps only
    shrink as the assignment grows, and the partial sum plus the free caps
    bounds every completion.
    """

    def __init__(self, solver: Solver):
        self.s = solver
        self.g = solver.g
        self.nodes = 0

    def cap(self, partial: list[int], v: int, hi: int) -> int:
        lo = 0
        while lo < hi:
            mid = (lo + hi + 1) // 2
            partial[v] += mid
            bad = not self.s.solvable(partial)
            partial[v] -= mid
            if bad:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def initial_caps(self, verts: list[int]) -> dict[int, int]:
        # an unsolvable pile on v has fewer than 2^dist(v, r) pebbles
        zero = [0] * self.g.n
        return {v: self.cap(zero, v, (1 << self.s.dist[v]) - 1) for v in verts}

    def maximum(self, verts: list[int], floor: int) -> int:
        """Size of the largest unsolvable configuration, at least ``floor``."""
        self.best = floor
        caps = self.initial_caps(verts)
        self._down([0] * self.g.n, 0, verts, caps)
        return self.best

    def _down(self, partial, i, verts, caps):
        self.nodes += 1
        base = sum(partial)
        if base > self.best:
            self.best = base
        if i == len(verts):
            return
        free = verts[i:]
        if base + sum(caps[v] for v in free) <= self.best:
            return
        v = verts[i]
        for t in range(caps[v], -1, -1):
            partial[v] = t
            new_caps = {}
            total = base + t
            for w in verts[i + 1:]:
                new_caps[w] = self.cap(partial, w, caps[w]) if t else caps[w]
                total += new_caps[w]
            if total > self.best:
                self._down(partial, i + 1, verts, new_caps)
            partial[v] = 0
            if base + t + sum(caps[w] for w in verts[i + 1:]) <= self.best:
                break

    def lex_smallest(self, verts: list[int], target: int) -> tuple[int, ...]:
        """Lexicographically smallest unsolvable configuration of size ``target``."""
        order = sorted(verts)
        caps = self.initial_caps(order)
        found = self._up([0] * self.g.n, 0, order, caps, target)
        if found is None:
            raise RuntimeError("no unsolvable configuration of the requested size")
        return found

    def _up(self, partial, i, verts, caps, target):
        self.nodes += 1
        base = sum(partial)
        if base == target:
            return tuple(partial)
        if i == len(verts) or base + sum(caps[v] for v in verts[i:]) < target:
            return None
        v = verts[i]
        for t in range(0, min(caps[v], target - base) + 1):
            partial[v] = t
            new_caps = {w: (self.cap(partial, w, caps[w]) if t else caps[w])
                        for w in verts[i + 1:]}
            found = self._up(partial, i + 1, verts, new_caps, target)
            if found is not None:
                return found
        partial[v] = 0
        return None


def pebbling_number_exact(g: Graph, root: int | str, max_n: int = DEFAULT_MAX_N,
                          max_config_size: int = DEFAULT_MAX_CONFIG
                          ) -> tuple[int, Configuration]:
    """pi(G, r) and the lexicographically smallest unsolvable witness of size pi - 1."""
    if g.n > max_n:
        raise ScaleGuardError(f"graph has {g.n} vertices, guard is {max_n}")
    r = g.vertex(root)
    solver = Solver(g, r, max_config_size)
    verts = sorted((v for v in range(g.n) if v != r), key=lambda v: (-solver.dist[v], v))
    search = _MaxSearch(solver)
    far = (1 << max(solver.dist)) - 1
    best = search.maximum(verts, max(g.n - 1, far))
    witness = search.lex_smallest(verts, best)
    return best + 1, Configuration(witness)


def pebbling_number(g: Graph, max_n: int = DEFAULT_MAX_N,
                    max_config_size: int = DEFAULT_MAX_CONFIG) -> int:
    return max(pebbling_number_exact(g, r, max_n, max_config_size)[0] for r in range(g.n))


def random_unsolvable(g: Graph, root: int | str, rng, solver: Solver | None = None,
                      max_config_size: int = DEFAULT_MAX_CONFIG) -> Configuration:
    """A random maximal r-unsolvable configuration grown one pebble at a time."""
    solver = solver or Solver(g, root, max_config_size)
    r = solver.root
    counts = [0] * g.n
    open_ = [v for v in range(g.n) if v != r]
    while open_:
        v = rng.choice(open_)
        counts[v] += 1
        if sum(counts) > max_config_size or solver.solvable(counts):
            counts[v] -= 1
            open_.remove(v)
    return Configuration(tuple(counts))
