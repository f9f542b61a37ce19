"""Exact revised simplex for  min c.y  s.t.  A^T y >= 1, y >= 0  with c >= 0.

Rows of ``A`` are nonnegative integer vectors (one per column of the problem,
i.e. one per strategy) and ``c`` their nonnegative integer costs.  The basis has
one entry per covering constraint, which stays small while the column count can
be large, so the basis inverse is kept densely in Fractions and pricing runs as
integer matrix products over all columns at once.

The surplus basis is dual feasible because c >= 0, so the dual simplex method
starts there without a phase one.  A primal simplex phase handles columns added
later (column generation).  The simplex multipliers at the optimum solve the
packing problem  max 1.x  s.t.  A x <= c, x >= 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

INT64_SAFE = 1 << 62


class SimplexError(RuntimeError):
    pass


class Infeasible(SimplexError):
    """The covering problem has no solution: some row of A^T is all zero."""

    def __init__(self, uncovered: list[int]):
        super().__init__(f"uncovered coordinates {uncovered}")
        self.uncovered = uncovered


@dataclass
class SimplexResult:
    objective: Fraction
    y: dict[int, Fraction]          # column index -> positive value
    x: list[Fraction]               # packing solution (simplex multipliers)
    stats: dict = field(default_factory=dict)


def _scale(vec: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(f.denominator for f in vec)) if vec else 1
    return [int(f * den) for f in vec], den


def _min_ratio(num: np.ndarray, den: np.ndarray, idx: list[int]) -> int:
    """Index in ``idx`` minimising num/den (den > 0), ties to the smallest index.

    Floats pick a short list of near-minimal candidates; the final choice is
    made exactly by integer cross-multiplication.
    """
    approx = num.astype(float) / den.astype(float)
    lo = approx.min()
    near = np.nonzero(approx <= lo + abs(lo) * 1e-9 + 1e-300)[0].tolist()
    best = near[0]
    for i in near[1:]:
        a = int(num[i]) * int(den[best])
        b = int(num[best]) * int(den[i])
        if a < b or (a == b and idx[i] < idx[best]):
            best = i
    return idx[best]


class CoveringLP:
    def __init__(self, rows: Sequence[Sequence[int]], costs: Sequence[int],
                 bland_after: int = 50):
        self.k = len(rows[0]) if rows else 0
        self._rows: list[list[int]] = []
        self._costs: list[int] = []
        self._A = np.zeros((0, self.k), dtype=np.int64)
        self._A_obj = None
        self._maxabs = 0
        self.bland_after = bland_after
        self.pivots = 0
        self.degenerate = 0
        self.bland_used = False
        self.add_columns(rows, costs)
        self.basis = [-(i + 1) for i in range(self.k)]   # -(i+1): surplus on row i
        self.binv = [[Fraction(-1) if i == j else Fraction(0) for j in range(self.k)]
                     for i in range(self.k)]

    # ----------------------------------------------------------- columns
    @property
    def m(self) -> int:
        return len(self._rows)

    def add_columns(self, rows: Sequence[Sequence[int]], costs: Sequence[int]) -> None:
        rows = [list(map(int, r)) for r in rows]
        for r, c in zip(rows, costs):
            if len(r) != self.k:
                raise SimplexError("column length mismatch")
            if c < 0 or any(x < 0 for x in r):
                raise SimplexError("columns and costs must be nonnegative")
        if not rows:
            return
        self._rows.extend(rows)
        self._costs.extend(int(c) for c in costs)
        self._maxabs = max(self._maxabs, max(max(r) for r in rows))
        big = self._maxabs >= INT64_SAFE
        new = np.array(rows, dtype=object if big else np.int64).reshape(len(rows), self.k)
        if big or self._A.dtype == object:
            self._A = np.vstack([self._A.astype(object), new.astype(object)])
        else:
            self._A = np.vstack([self._A, new])
        self._A_obj = None
        self._c = np.array(self._costs, dtype=object)

    def _dot(self, p: list[int]) -> np.ndarray:
        """Exact A @ p for an integer vector p."""
        pmax = max((abs(v) for v in p), default=0)
        if self._A.dtype != object and pmax * max(self._maxabs, 1) * max(self.k, 1) < INT64_SAFE:
            return (self._A @ np.array(p, dtype=np.int64)).astype(object)
        if self._A_obj is None:
            self._A_obj = self._A.astype(object)
        return self._A_obj.dot(np.array(p, dtype=object))

    def column(self, j: int) -> list[int]:
        if j < 0:
            e = [0] * self.k
            e[-j - 1] = -1
            return e
        return self._rows[j]

    def cost(self, j: int) -> int:
        return 0 if j < 0 else self._costs[j]

    # ----------------------------------------------------------- linear algebra
    def xb(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.binv]

    def multipliers(self) -> list[Fraction]:
        y = [Fraction(0)] * self.k
        for i, j in enumerate(self.basis):
            c = self.cost(j)
            if c:
                row = self.binv[i]
                for t in range(self.k):
                    if row[t]:
                        y[t] += c * row[t]
        return y

    def _ftran(self, col: list[int]) -> list[Fraction]:
        return [sum((row[t] * col[t] for t in range(self.k) if col[t]), Fraction(0))
                for row in self.binv]

    def _pivot(self, r: int, q: int, u: list[Fraction]) -> None:
        piv = u[r]
        row_r = [x / piv for x in self.binv[r]]
        self.binv[r] = row_r
        for i in range(self.k):
            if i != r and u[i]:
                f = u[i]
                self.binv[i] = [a - f * b for a, b in zip(self.binv[i], row_r)]
        self.basis[r] = q
        self.pivots += 1

    def reduced_costs(self, y: list[Fraction]) -> tuple[np.ndarray, int]:
        """Reduced costs of the structural columns, scaled by a positive integer."""
        py, den = _scale(y)
        return self._c * den - self._dot(py), den

    # ----------------------------------------------------------- dual simplex
    def dual_simplex(self, max_pivots: int = 10**6) -> None:
        degenerate_run = 0
        bland = False
        while True:
            xb = self.xb()
            neg = [i for i, v in enumerate(xb) if v < 0]
            if not neg:
                return
            if bland:
                r = min(neg, key=lambda i: (self.basis[i] if self.basis[i] >= 0
                                            else self.m - self.basis[i]))
            else:
                r = min(neg, key=lambda i: (xb[i], i))
            p, pden = _scale(self.binv[r])
            alpha = self._dot(p)                    # times pden
            y = self.multipliers()
            d, dden = self.reduced_costs(y)         # times dden
            basic = set(self.basis)
            best = None
            cand = [j for j in np.nonzero(alpha < 0)[0].tolist() if j not in basic]
            if cand:
                j = _min_ratio(d[cand], -alpha[cand], cand)
                ratio = Fraction(int(d[j]) * pden, -int(alpha[j]) * dden)
                best = ((ratio, j), j)
            for i in range(self.k):
                # surplus column -e_i: alpha = -rho_i, reduced cost = y_i
                q = -(i + 1)
                if q in basic or not p[i] > 0:
                    continue
                ratio = y[i] / (Fraction(p[i], pden))
                key = (ratio, self.m + i)
                if best is None or key < best[0]:
                    best = (key, q)
            if best is None:
                raise Infeasible(self.uncovered())
            q = best[1]
            if best[0][0] == 0:
                degenerate_run += 1
                self.degenerate += 1
            else:
                degenerate_run = 0
            if degenerate_run > self.bland_after and not bland:
                bland = self.bland_used = True
            u = self._ftran(self.column(q))
            self._pivot(r, q, u)
            if self.pivots > max_pivots:
                raise SimplexError("pivot limit exceeded")

    # ----------------------------------------------------------- primal simplex
    def primal_simplex(self, max_pivots: int = 10**6) -> None:
        degenerate_run = 0
        bland = False
        while True:
            y = self.multipliers()
            d, _ = self.reduced_costs(y)
            basic = set(self.basis)
            entering = None
            neg = np.nonzero(d < 0)[0].tolist()
            neg = [j for j in neg if j not in basic]
            sneg = [-(i + 1) for i in range(self.k) if y[i] < 0 and -(i + 1) not in basic]
            if not neg and not sneg:
                return
            if bland:
                entering = neg[0] if neg else sneg[0]
            else:
                _, den = _scale(y)
                best_val, entering = None, None
                if neg:
                    i = int(np.argmin(d[neg]))
                    best_val, entering = d[neg[i]], neg[i]
                for q in sneg:
                    val = y[-q - 1] * den
                    if best_val is None or val < best_val:
                        best_val, entering = val, q
            u = self._ftran(self.column(entering))
            xb = self.xb()
            best = None
            for i in range(self.k):
                if u[i] > 0:
                    # Bland breaks ties by variable index, surplus after structural
                    j = self.basis[i]
                    tie = (j if j >= 0 else self.m - j) if bland else i
                    key = (xb[i] / u[i], tie, i)
                    if best is None or key < best:
                        best = key
            if best is None:
                raise SimplexError("covering problem unbounded below")
            if best[0] == 0:
                degenerate_run += 1
                self.degenerate += 1
            else:
                degenerate_run = 0
            if degenerate_run > self.bland_after:
                bland = self.bland_used = True
            self._pivot(best[2], entering, u)
            if self.pivots > max_pivots:
                raise SimplexError("pivot limit exceeded")

    def uncovered(self) -> list[int]:
        if self.m == 0:
            return list(range(self.k))
        col_max = self._A.max(axis=0)
        return [i for i in range(self.k) if col_max[i] == 0]

    # ----------------------------------------------------------- driver
    def solve(self, pricer: Callable[[list[Fraction]], tuple[list, list]] | None = None,
              max_rounds: int = 1000) -> SimplexResult:
        t0 = time.perf_counter()
        missing = self.uncovered()
        if missing:
            raise Infeasible(missing)
        self.dual_simplex()
        rounds = 0
        while pricer is not None and rounds < max_rounds:
            rows, costs = pricer(self.multipliers())
            if not rows:
                break
            self.add_columns(rows, costs)
            self.primal_simplex()
            rounds += 1
        return self._result(time.perf_counter() - t0, rounds)

    def _result(self, seconds: float, rounds: int) -> SimplexResult:
        xb = self.xb()
        y = {j: v for j, v in zip(self.basis, xb) if j >= 0 and v}
        obj = sum((self._costs[j] * v for j, v in y.items()), Fraction(0))
        x = self.multipliers()
        # optimality and strong duality, checked exactly
        if any(v < 0 for v in xb) or any(v < 0 for v in x):
            raise SimplexError("final basis is not optimal")
        d, _ = self.reduced_costs(x)
        if (d < 0).any():
            raise SimplexError("final basis is not dual feasible")
        if sum(x, Fraction(0)) != obj:
            raise SimplexError("strong duality check failed")
        stats = {"columns": self.m, "pivots": self.pivots, "degenerate_pivots": self.degenerate,
                 "bland": self.bland_used, "pricing_rounds": rounds,
                 "seconds": round(seconds, 6)}
        return SimplexResult(obj, y, x, stats)


def solve_covering(rows, costs, pricer=None) -> SimplexResult:
    return CoveringLP(rows, costs).solve(pricer)
