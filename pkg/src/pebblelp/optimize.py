"""The strategy linear program: every r-unsolvable C satisfies w(C) <= w(T) for each
strategy T, so  max sum_v C(v)  subject to those rows bounds pi(G, r) - 1.

The fractional optimum comes from the exact simplex in :mod:`pebblelp.simplex`
applied to the dual covering problem; its positive multipliers form a
certificate that is re-verified before the report is returned.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Callable, Sequence

import numpy as np

from .certificate import (Certificate, CertificateRow, certificate_to_json,
                          verify_certificate)
from .graph import Graph
from .simplex import CoveringLP, Infeasible
from .pebbling import ScaleGuardError
from .strategy import (DEFAULT_MAX_STRATEGIES, Strategy, StrategyError, best_layered,
                       enumerate_basic, layered_count, layered_strategy, sample_strategies)


class UncoveredError(RuntimeError):
    """The LP is unbounded because some vertices carry no strategy weight."""

    def __init__(self, labels: list[str]):
        super().__init__("LP unbounded; no strategy covers " + ", ".join(labels))
        self.labels = labels


@dataclass(frozen=True)
class LinearProgram:
    graph: Graph
    root: int
    strategies: tuple[Strategy, ...]
    variables: tuple[int, ...]          # non-root vertices, in index order
    rows: tuple[tuple[int, ...], ...]   # integer-scaled strategy weights on variables
    rhs: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.variables)


@dataclass
class BoundReport:
    root: str
    z_frac: Fraction
    bound: int
    primal_witness: tuple[Fraction, ...]
    certificate: Certificate
    strategies_used: list[int]
    multipliers: list[Fraction]
    stats: dict = field(default_factory=dict)
    z_int: int | None = None
    exact: bool = True

    def to_json(self, include_certificate: bool = False) -> dict:
        out = {
            "root": self.root,
            "z_frac": _fmt(self.z_frac),
            "bound": self.bound,
            "strategies_used": self.strategies_used,
            "multipliers": [_fmt(m) for m in self.multipliers],
            "primal_witness": [_fmt(x) for x in self.primal_witness],
            "stats": self.stats,
        }
        if self.z_int is not None:
            out["z_int"] = self.z_int
            out["exact"] = self.exact
        if include_certificate:
            out["certificate"] = certificate_to_json(self.certificate)
        return out

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(**kw), indent=1)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def build_lp(g: Graph, root: int | str, strategies: Sequence[Strategy]) -> LinearProgram:
    if not strategies:
        raise StrategyError("no strategies to build an LP from")
    r = g.vertex(root)
    if any(s.root != r for s in strategies):
        raise StrategyError("all strategies must share the LP root")
    variables = tuple(v for v in range(g.n) if v != r)
    rows, rhs = [], []
    for s in strategies:
        row, b = s.integer_row()
        rows.append(tuple(row[v] for v in variables))
        rhs.append(b)
    return LinearProgram(g, r, tuple(strategies), variables, tuple(rows), tuple(rhs))


def _certificate(lp: LinearProgram, y: dict[int, Fraction], claim: int) -> Certificate:
    g = lp.graph
    rows = []
    for j in sorted(y):
        coeffs = [Fraction(0)] * g.n
        for v, c in zip(lp.variables, lp.rows[j]):
            coeffs[v] = Fraction(c)
        rows.append(CertificateRow("strategy", tuple(coeffs), Fraction(lp.rhs[j]), y[j]))
    return Certificate(g.labels[lp.root], g.labels, tuple(rows), claim)


def _uncovered(lp: LinearProgram, idx: list[int]) -> UncoveredError:
    return UncoveredError([lp.graph.labels[lp.variables[i]] for i in idx])


RESTRICT = 300      # pools larger than this are solved by column generation
BATCH = 200


def solve_fractional(lp: LinearProgram,
                     pricer: Callable[[list[Fraction]], tuple[list, list]] | None = None,
                     restrict: int | None = RESTRICT) -> BoundReport:
    """Exact fractional optimum and its verified dual certificate.

    Large pools are not handed to the simplex whole: a restricted master
    holding the best column for each variable is solved first, then the
    most violated pool rows are added until none is violated, which is
    optimal for the full pool.  ``pricer`` supplies rows from outside the
    pool instead: it receives the current packing solution and returns
    extra (rows, rhs), or empty lists to stop.
    """
    t0 = time.perf_counter()
    pool = _Pool(lp)
    missing = pool.uncovered()
    if missing:
        raise _uncovered(lp, missing)
    if pricer is None and restrict is not None and len(lp.rows) > restrict:
        active = pool.initial()
        solver = CoveringLP([lp.rows[j] for j in active], [lp.rhs[j] for j in active])
        res = solver.solve(pool.pricer(active))
        y = {active[j]: v for j, v in res.y.items()}
    else:
        solver = CoveringLP(lp.rows, lp.rhs)
        try:
            res = solver.solve(pricer)
        except Infeasible as e:
            raise _uncovered(lp, e.uncovered) from None
        if solver.m > len(lp.rows):
            extra = solver._rows[len(lp.rows):]
            lp = _extend(lp, extra, solver._costs[len(lp.rows):])
        y = res.y
    z = res.objective
    bound = floor(z) + 1
    cert = _certificate(lp, y, bound)
    verified = verify_certificate(lp.graph, cert)
    witness = [Fraction(0)] * lp.graph.n
    for v, x in zip(lp.variables, res.x):
        witness[v] = x
    stats = dict(res.stats)
    stats.update(strategies=len(lp.rows), verified_bound=verified.bound,
                 seconds=round(time.perf_counter() - t0, 6))
    used = sorted(y)
    return BoundReport(lp.graph.labels[lp.root], z, bound, tuple(witness), cert,
                       used, [y[j] for j in used], stats)


def _extend(lp: LinearProgram, rows, rhs) -> LinearProgram:
    # rows added by a pricer come without Strategy objects
    return LinearProgram(lp.graph, lp.root, lp.strategies, lp.variables,
                         lp.rows + tuple(tuple(r) for r in rows), lp.rhs + tuple(rhs))


class _Pool:
    """Vectorised access to all rows of an LP for restricted-master pricing."""

    def __init__(self, lp: LinearProgram, batch: int = BATCH):
        self.lp = lp
        self.batch = batch
        big = max((max(r) for r in lp.rows), default=0) >= 1 << 40
        kind = object if big else np.int64
        self.A = np.array(lp.rows, dtype=kind).reshape(len(lp.rows), len(lp.variables))
        self.b = np.array(lp.rhs, dtype=kind)

    def uncovered(self) -> list[int]:
        if len(self.lp.rows) == 0:
            return list(range(len(self.lp.variables)))
        return np.nonzero(self.A.max(axis=0) == 0)[0].tolist()

    def initial(self) -> list[int]:
        # for each variable the row with the largest coefficient per unit of rhs
        ratio = self.A.astype(float) / np.maximum(self.b.astype(float), 1.0)[:, None]
        return sorted(set(np.argmax(ratio, axis=0).tolist()))

    def pricer(self, active: list[int]):
        taken = set(active)

        def price(x: list[Fraction]):
            den = 1
            for f in x:
                den = den * f.denominator // gcd(den, f.denominator)
            px = [int(f * den) for f in x]
            top = max(max(px, default=0), 1)
            if self.A.dtype == object or top * int(self.A.max()) * len(px) >= 1 << 62:
                viol = self.A.astype(object).dot(np.array(px, dtype=object)) \
                    - self.b.astype(object) * den
            else:
                viol = self.A @ np.array(px, dtype=np.int64) - self.b * den
            cand = np.nonzero(viol > 0)[0]
            cand = [j for j in cand[np.argsort(-viol[cand].astype(float), kind="stable")].tolist()
                    if j not in taken][:self.batch]
            taken.update(cand)
            active.extend(cand)
            return [self.lp.rows[j] for j in cand], [self.lp.rhs[j] for j in cand]

        return price


def pool_pricer(pool: LinearProgram, batch: int = BATCH):
    """Column generation from a separate pool: add its most violated rows."""
    return _Pool(pool, batch).pricer([])


def solve_integer(lp: LinearProgram, node_limit: int = 10000) -> BoundReport:
    """Integer optimum z by depth-first branch and bound; bound z + 1.

    Variable bounds are handled without touching the basis code: a lower bound
    l shifts the right-hand sides by A l, an upper bound u becomes an extra
    unit row x_v <= u.  If the node limit is hit the report carries the best
    proven upper bound and ``exact=False``.
    """
    root_rep = solve_fractional(lp)
    k = len(lp.variables)
    A = [list(r) for r in lp.rows]
    best_val = sum(floor(x) for x in (root_rep.primal_witness[v] for v in lp.variables))
    best_x = [floor(root_rep.primal_witness[v]) for v in lp.variables]
    nodes = 0
    exact = True
    stack = [({}, {})]
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > node_limit:
            exact = False
            break
        rhs = []
        for row, b in zip(A, lp.rhs):
            rhs.append(b - sum(row[i] * l for i, l in lo.items()))
        if any(b < 0 for b in rhs):
            continue
        rows = [r for r in A]
        costs = list(rhs)
        bad = False
        for i, u in hi.items():
            cap = u - lo.get(i, 0)
            if cap < 0:
                bad = True
                break
            e = [0] * k
            e[i] = 1
            rows.append(e)
            costs.append(cap)
        if bad:
            continue
        res = CoveringLP(rows, costs).solve()
        z = res.objective + sum(lo.values())
        if floor(z) <= best_val:
            continue
        x = [xi + lo.get(i, 0) for i, xi in enumerate(res.x)]
        frac = [(x[i] - floor(x[i]), -i) for i in range(k) if x[i].denominator != 1]
        if not frac:
            best_val, best_x = int(z), [int(v) for v in x]
            continue
        _, neg_i = max(frac)
        i = -neg_i
        down_hi = dict(hi)
        down_hi[i] = floor(x[i])
        up_lo = dict(lo)
        up_lo[i] = floor(x[i]) + 1
        stack.append((lo, down_hi))
        stack.append((up_lo, hi))
    z_int = best_val if exact else floor(root_rep.z_frac)
    rep = root_rep
    rep.z_int = z_int
    rep.exact = exact
    rep.bound = z_int + 1
    rep.stats = dict(rep.stats, bb_nodes=nodes, integer_incumbent=best_val,
                     integer_witness=[int(v) for v in best_x])
    return rep


def layered_pricer(g: Graph, root: int, max_depth: int, variables: Sequence[int],
                   batch: int = BATCH, limit: int = 10**6):
    """Exact column generation over every single-branch basic strategy of
    depth <= max_depth, without listing them."""
    def price(x: list[Fraction]):
        den = 1
        for f in x:
            den = den * f.denominator // gcd(den, f.denominator)
        gain = [0] * g.n
        for v, f in zip(variables, x):
            gain[v] = int(f * den) - den
        rows, rhs = [], []
        for _, layers in best_layered(g, root, max_depth, gain, top=batch, limit=limit):
            row, b = layered_strategy(g, root, layers).integer_row()
            rows.append([row[v] for v in variables])
            rhs.append(b)
        return rows, rhs

    return price


def path_strategies(g: Graph, root: int | str, max_depth: int) -> list[Strategy]:
    """One shortest-path strategy to every vertex within ``max_depth`` of the root."""
    r = g.vertex(root)
    dist = g.distances(r)
    out = []
    for v in range(g.n):
        if 1 <= dist[v] <= max_depth:
            layers = []
            u = v
            while u != r:
                layers.append(1 << u)
                u = next(p for p in g.sorted_adj[u] if dist[p] == dist[u] - 1)
            out.append(layered_strategy(g, r, layers[::-1]))
    return out


ENUMERATE_UP_TO = 100_000   # "auto" switches to pricing above this pool size


def bound_pipeline(g: Graph, root: int | str, depth: int = 2, sample: int | None = None,
                   seed: int = 0, single_branch: bool = True,
                   max_strategies: int = DEFAULT_MAX_STRATEGIES, ilp: bool = False,
                   node_limit: int = 10000, method: str = "auto") -> BoundReport:
    """Enumerate, sample or price strategies, solve the LP, verify the certificate.

    ``depth`` counts tree levels below the root's neighbour, so depth 2 admits
    trees reaching distance 3 from the root (``max_depth = depth + 1`` in
    :func:`enumerate_basic`).  ``method="price"`` reaches the same optimum as
    full single-branch enumeration by column generation with an exact pricing
    oracle; ``"auto"`` uses it when the pool would exceed ENUMERATE_UP_TO.
    """
    if depth < 0:
        raise StrategyError("depth must be nonnegative")
    if method not in ("auto", "enumerate", "price"):
        raise StrategyError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    r = g.vertex(root)
    max_depth = depth + 1
    pool = None
    if sample or not single_branch:
        method = "sample" if sample else "enumerate"
    elif method != "enumerate":
        try:
            pool = layered_count(g, r, max_depth)
        except ScaleGuardError:
            if method == "auto":
                raise
        if method == "auto":
            method = "price" if pool > ENUMERATE_UP_TO else "enumerate"
    if method == "sample":
        strategies = sample_strategies(g, r, sample, max_depth=max_depth, seed=seed)
    elif method == "enumerate":
        strategies = enumerate_basic(g, r, max_depth, single_branch=single_branch,
                                     max_count=max_strategies)
    else:
        strategies = path_strategies(g, r, max_depth)
    t_enum = time.perf_counter() - t0
    lp = build_lp(g, r, strategies)
    if method == "price":
        rep = solve_fractional(lp, pricer=layered_pricer(g, r, max_depth, lp.variables))
        if ilp:
            raise StrategyError("--ilp needs an explicit strategy pool; use enumerate")
    else:
        rep = solve_integer(lp, node_limit) if ilp else solve_fractional(lp)
    rep.stats.update(enumeration_seconds=round(t_enum, 6), depth=depth, method=method,
                     pool=pool if pool is not None else len(strategies),
                     sampled=bool(sample), seed=seed if sample else None)
    return rep
