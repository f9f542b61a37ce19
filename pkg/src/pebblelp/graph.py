"""Immutable simple connected graphs, named generators, products, powers and I/O."""

from __future__ import annotations

import itertools
import json
import random
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs or invalid generator parameters."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple connected graph on vertices ``0..n-1`` with string labels."""

    labels: tuple[str, ...]
    adj: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise GraphError("graph must have at least one vertex")
        if len(self.adj) != n:
            raise GraphError("adjacency length does not match label count")
        if len(set(self.labels)) != n:
            raise GraphError("vertex labels must be distinct")
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if not 0 <= v < n:
                    raise GraphError(f"vertex index {v} out of range")
                if v == u:
                    raise GraphError(f"self-loop at {self.labels[u]}")
                if u not in self.adj[v]:
                    raise GraphError(
                        f"asymmetric adjacency: {self.labels[u]}->{self.labels[v]}")
        if any(d < 0 for d in self.distances(0)):
            raise GraphError("graph is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at index {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is None:
            labels = [f"v{i + 1}" for i in range(n)]
        return cls(tuple(labels), tuple(frozenset(s) for s in nbrs))

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def vertex(self, v: int | str) -> int:
        """Resolve a label or an index to an index."""
        if isinstance(v, str):
            try:
                return self.index[v]
            except KeyError:
                raise GraphError(f"unknown vertex {v!r}") from None
        if not 0 <= v < self.n:
            raise GraphError(f"vertex index {v} out of range")
        return v

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v)

    @cached_property
    def sorted_adj(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(a)) for a in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def distances(self, src: int) -> list[int]:
        """BFS distances from ``src``; -1 marks unreachable vertices."""
        dist = [-1] * len(self.adj)
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.distances(v)) for v in range(self.n))

    def eccentricity(self, v: int | str) -> int:
        return max(self.distance_matrix[self.vertex(v)])

    def diameter(self) -> int:
        return max(max(row) for row in self.distance_matrix)

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(tuple(labels), self.adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


def diameter(g: Graph) -> int:
    return g.diameter()


def eccentricity(g: Graph, v: int | str) -> int:
    return g.eccentricity(v)


# ---------------------------------------------------------------- generators

def path(n: int) -> Graph:
    _need(n >= 1, "path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    _need(n >= 3, "cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(k: int) -> Graph:
    """K_{1,k}; the center is ``v1``."""
    _need(k >= 1, "star needs k >= 1")
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def complete(n: int) -> Graph:
    _need(n >= 1, "complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def cube(d: int) -> Graph:
    """Hypercube Q^d; vertex ``i`` is the subset with characteristic bits of ``i``."""
    _need(d >= 0, "cube needs d >= 0")
    n = 1 << d
    edges = [(x, x ^ (1 << b)) for x in range(n) for b in range(d) if x < x ^ (1 << b)]
    labels = [format(x, f"0{d}b")[::-1] if d else "e" for x in range(n)]
    return Graph.from_edges(n, edges, labels)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# Standard 8-vertex, 13-edge Lemke graph.  v1 has degree 2 and sits at distance 3
# from v8; v5, v6, v7 are interchangeable; dropping v4v8 makes v3 and v4 swap.
LEMKE_EDGES = [
    (1, 2), (1, 3),
    (2, 4),
    (3, 5), (3, 6), (3, 7),
    (4, 5), (4, 6), (4, 7), (4, 8),
    (5, 8), (6, 8), (7, 8),
]


def lemke() -> Graph:
    return Graph.from_edges(8, [(u - 1, v - 1) for u, v in LEMKE_EDGES])


def generalized_petersen(m: int, d: int) -> Graph:
    """P_{m,d}: hub ``u`` joined to m binary trees of depth d-1 whose leaf layers
    are chained into one twisted ring.

    Labels: ``u``, ``v{i}`` for the tree roots and ``v{i},{X}`` for nonempty words X.
    """
    _need(m >= 3 and d >= 2, "P_{m,d} needs m >= 3 and d >= 2")
    words = [""] + ["".join(w) for k in range(1, d) for w in itertools.product("01", repeat=k)]
    labels = ["u"] + [f"v{i}" if not x else f"v{i},{x}" for i in range(m) for x in words]
    idx = {lab: j for j, lab in enumerate(labels)}

    def name(i, x):
        return f"v{i}" if not x else f"v{i},{x}"

    edges = []
    for i in range(m):
        edges.append((0, idx[name(i, "")]))
        for x in words[1:]:
            edges.append((idx[name(i, x)], idx[name(i, x[:-1])]))
    width = d - 1
    for i in range(m):
        for x in (w for w in words if len(w) == width):
            if i < m - 1:
                other = name(i + 1, x)
            else:
                nxt = (int(x, 2) + 1) % (1 << width)
                other = name(0, format(nxt, f"0{width}b"))
            edges.append((idx[name(i, x)], idx[other]))
    return Graph.from_edges(len(labels), edges, labels)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def coxeter(p: int) -> Graph:
    """Generalized Coxeter graph C(p) for an odd prime p = 2q+1.

    Vertices ``(i,j)`` with 0 <= i <= q, 0 <= j < p; edges (i,j)(i,j+1) and (0,j)(i,j)
    for 1 <= i <= q, with the step in layer i taken as i (mod p).
    """
    _need(_is_prime(p) and p % 2 == 1, "coxeter needs an odd prime p")
    q = (p - 1) // 2
    labels = [f"({i},{j})" for i in range(q + 1) for j in range(p)]

    def at(i, j):
        return i * p + j % p

    edges = []
    for i in range(1, q + 1):
        for j in range(p):
            edges.append((at(i, j * i), at(i, (j + 1) * i)))
            edges.append((at(0, j), at(i, j)))
    return Graph.from_edges(len(labels), edges, labels)


def bruhat(m: int = 4) -> Graph:
    """Cayley graph of S_m under adjacent transpositions; labels are one-line words."""
    _need(m >= 2, "bruhat needs m >= 2")
    perms = list(itertools.permutations(range(1, m + 1)))
    idx = {p: i for i, p in enumerate(perms)}
    edges = []
    for p in perms:
        for k in range(m - 1):
            s = list(p)
            s[k], s[k + 1] = s[k + 1], s[k]
            j = idx[tuple(s)]
            if idx[p] < j:
                edges.append((idx[p], j))
    return Graph.from_edges(len(perms), edges, ["".join(map(str, p)) for p in perms])


R15_ADJ = [
    [2, 4, 5, 6, 12, 13], [1, 3, 4, 8, 11, 12, 14], [2, 4, 6, 7], [1, 2, 3, 5, 7, 9, 14],
    [1, 4, 6, 8, 11, 15], [1, 3, 5, 9, 13, 14], [3, 4, 11, 15], [2, 5, 10, 13, 14, 15],
    [4, 6, 10, 11], [8, 9, 11], [2, 5, 7, 9, 10, 12, 15], [1, 2, 11, 13], [1, 6, 8, 12],
    [2, 4, 6, 8], [5, 7, 8, 11],
]

R20_ADJ = [
    [6, 8, 11, 12, 14, 15, 16, 17], [4, 5, 6, 7, 8, 10, 15, 16, 17, 18, 19, 20],
    [4, 6, 8, 12, 14, 20], [2, 3, 5, 6, 8, 9, 12, 15, 18, 19], [2, 4, 7, 12, 14, 15, 16, 18, 20],
    [1, 2, 3, 4, 7, 8, 14, 15, 19], [2, 5, 6, 8, 11, 12, 13, 14, 15, 17, 18],
    [1, 2, 3, 4, 6, 7, 10, 11, 14, 15, 17], [4, 10, 11, 13, 14, 17, 19, 20],
    [2, 8, 9, 16, 18, 19, 20], [1, 7, 8, 9, 13, 14, 16, 18, 20], [1, 3, 4, 5, 7, 13, 16],
    [7, 9, 11, 12, 19, 20], [1, 3, 5, 6, 7, 8, 9, 11, 18], [1, 2, 4, 5, 6, 7, 8, 19],
    [1, 2, 5, 10, 11, 12, 18, 20], [1, 2, 7, 8, 9, 19], [2, 4, 5, 7, 10, 11, 14, 16, 20],
    [2, 4, 6, 9, 10, 13, 15, 17, 20], [2, 3, 5, 9, 10, 11, 13, 16, 18, 19],
]


def from_adjacency_lists(lists: Sequence[Sequence[int]], one_based: bool = True) -> Graph:
    off = 1 if one_based else 0
    n = len(lists)
    nbrs = [frozenset(v - off for v in row) for row in lists]
    return Graph(tuple(f"v{i + 1}" for i in range(n)), tuple(nbrs))


def r15() -> Graph:
    return from_adjacency_lists(R15_ADJ)


def r20() -> Graph:
    return from_adjacency_lists(R20_ADJ)


def random_graph(n: int, p: float, seed: int, max_tries: int = 1000) -> Graph:
    """Connected G(n, p) sample; resamples with the same stream until connected."""
    _need(n >= 1 and 0 <= p <= 1, "random graph needs n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        try:
            return Graph.from_edges(n, edges)
        except GraphError:
            continue
    raise GraphError(f"no connected G({n},{p}) sample in {max_tries} tries")


def random_tree(n: int, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [(i, rng.randrange(i)) for i in range(1, n)])


# --------------------------------------------------------------- operations

def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G x H with vertex ``(a,b)`` at index ``a * n(H) + b``."""
    nh = h.n
    edges = []
    for a in range(g.n):
        for b in range(nh):
            for b2 in h.adj[b]:
                if b < b2:
                    edges.append((a * nh + b, a * nh + b2))
            for a2 in g.adj[a]:
                if a < a2:
                    edges.append((a * nh + b, a2 * nh + b))
    labels = [f"({x},{y})" for x in g.labels for y in h.labels]
    return Graph.from_edges(g.n * nh, edges, labels)


def graph_power(g: Graph, k: int) -> Graph:
    """Same vertices; uv is an edge iff 1 <= dist_G(u, v) <= k."""
    _need(k >= 1, "graph power needs k >= 1")
    dm = g.distance_matrix
    edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if dm[u][v] <= k]
    return Graph.from_edges(g.n, edges, g.labels)


def is_tree(g: Graph) -> bool:
    return len(g.edges) == g.n - 1


# ------------------------------------------------------------------ registry

_SIMPLE = {
    "petersen": petersen,
    "lemke": lemke,
    "lemke2": lambda: cartesian_product(lemke(), lemke()),
    "r15": r15,
    "r20": r20,
}

_PARAM = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "complete": complete,
    "cube": cube,
    "pm": generalized_petersen,
    "coxeter": coxeter,
    "bruhat": bruhat,
    "random": None,  # handled below: needs float p
}


def gen(name: str, *params) -> Graph:
    """Build a named graph, e.g. ``gen("cycle", 7)`` or ``gen("pm", 5, 2)``."""
    key = name.lower()
    if key in _SIMPLE:
        _need(not params, f"{name} takes no parameters")
        return _SIMPLE[key]()
    if key == "random":
        _need(len(params) == 3, "random needs n, p, seed")
        return random_graph(int(params[0]), float(params[1]), int(params[2]))
    if key == "power":
        _need(len(params) >= 2, "power needs a base spec and k")
        return graph_power(from_spec(str(params[0])), int(params[1]))
    if key in _PARAM:
        try:
            return _PARAM[key](*(int(p) for p in params))
        except TypeError as exc:
            raise GraphError(f"bad parameters for {name}: {exc}") from None
    raise GraphError(f"unknown graph family {name!r}")


def from_spec(spec: str) -> Graph:
    """Parse a command-line graph spec: ``petersen``, ``cycle:7``, ``pm:5,2``,
    ``random:10,0.4,7``, ``cycle:9^2`` (distance power) or ``file:g.txt``."""
    if spec.startswith("file:"):
        return load_graph(spec[5:])
    base, _, power = spec.partition("^")
    name, _, args = base.partition(":")
    params = [a for a in args.split(",") if a] if args else []
    g = gen(name, *params)
    return graph_power(g, int(power)) if power else g


# ------------------------------------------------------------------------ I/O

_LINE = re.compile(r"^\s*([^:#\s][^:#]*?)\s*:\s*(.*?)\s*$")


def parse_graph(text: str) -> Graph:
    """Parse the adjacency-list text format or the JSON format.

    Text: one ``label: nbr,nbr,...`` line per vertex; ``#`` starts a comment.
    Bare integer labels ``1..n`` are read as ``v1..vn``.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        try:
            verts = [str(v) for v in data["vertices"]]
            edges = [(int(a), int(b)) for a, b in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed JSON graph: {exc}") from None
        nbrs = [set() for _ in verts]
        for a, b in edges:
            if not (0 <= a < len(verts) and 0 <= b < len(verts)):
                raise GraphError(f"edge [{a},{b}] out of range")
            if a == b:
                raise GraphError(f"self-loop at {verts[a]}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        return Graph(tuple(verts), tuple(frozenset(s) for s in nbrs))

    rows: list[tuple[str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise GraphError(f"line {lineno}: expected 'label: neighbors'")
        nbrs = [t.strip() for t in re.split(r"[,\s]+", m.group(2)) if t.strip()]
        rows.append((m.group(1), nbrs))
    if not rows:
        raise GraphError("empty graph text")

    def norm(tok):
        return f"v{tok}" if tok.isdigit() else tok

    labels = [norm(lab) for lab, _ in rows]
    idx = {lab: i for i, lab in enumerate(labels)}
    if len(idx) != len(labels):
        raise GraphError("duplicate vertex label")
    adj = []
    for lab, nbrs in rows:
        s = set()
        for t in nbrs:
            t = norm(t)
            if t not in idx:
                raise GraphError(f"vertex {lab}: unknown neighbor {t}")
            s.add(idx[t])
        adj.append(frozenset(s))
    return Graph(tuple(labels), tuple(adj))


def emit_graph(g: Graph, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"vertices": list(g.labels), "edges": [list(e) for e in g.edges]})
    lines = [f"{g.labels[u]}: " + ",".join(g.labels[v] for v in g.sorted_adj[u])
             for u in range(g.n)]
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)
