"""Certificates: multipliers on strategy inequalities, verified in exact arithmetic.

A certificate for root r lists rows  sum_v a(v) C(v) <= b  with nonnegative
multipliers.  Strategy rows are checked against the graph; assumption rows are
case hypotheses taken on trust.  With m_v the combined coefficient of v and M
the combined right-hand side, every r-unsolvable C has
min_v m_v * |C| <= sum_v m_v C(v) <= M, so pi(G, r) <= floor(M / m) + 1.

Text formats
------------
Matrix layout, one row per line (``#`` starts a comment)::

    root v9
    claim 15
    labels v1 v2 ... v15
    20 | 2 2 2 4 ... | 20
    assume 333 | 0 0 -1 ... | -1   # x8 + x9 + x11 >= 1
    sum | 4 4 4 ... | 56

The multiplier column may be omitted (all multipliers 1).  Grid layout, for
product graphs, gives each strategy as a table indexed by factor labels::

    root (v1,v1)
    claim 108
    grid 1 transpose
         v1 v2 ... v8
    v1   0  .  32 ...
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor
from typing import Sequence

from .graph import Graph
from .strategy import Strategy, StrategyError, validate_strategy

DISCLAIMER = "case exhaustiveness not checked: assumption rows are trusted hypotheses"


class CertificateError(ValueError):
    """Malformed certificate text."""


class InvalidStrategyRow(CertificateError):
    def __init__(self, msg: str, row: int, vertex: str | None = None):
        super().__init__(msg)
        self.row = row
        self.vertex = vertex


class ArithmeticFailure(CertificateError):
    """Uncovered vertex, or a bound larger than the claim."""


@dataclass(frozen=True)
class CertificateRow:
    kind: str                       # "strategy" or "assumption"
    coeffs: tuple[Fraction, ...]    # ordered like Certificate.labels
    rhs: Fraction
    multiplier: Fraction = Fraction(1)
    tag: str = ""


@dataclass(frozen=True)
class Certificate:
    root: str
    labels: tuple[str, ...]
    rows: tuple[CertificateRow, ...]
    claimed_bound: int | None = None
    sum_row: tuple[tuple[Fraction, ...], Fraction] | None = None
    notes: tuple[str, ...] = ()

    def strategy_rows(self):
        return [r for r in self.rows if r.kind == "strategy"]


@dataclass
class VerifiedBound:
    bound: int
    M: Fraction
    m: Fraction
    column_sums: dict[str, Fraction]
    assumptions: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    claimed_bound: int | None = None

    @property
    def disclaimer(self) -> str | None:
        return DISCLAIMER if self.assumptions else None

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "M": _fmt(self.M),
            "m": _fmt(self.m),
            "claimed_bound": self.claimed_bound,
            "assumptions": self.assumptions,
            "warnings": self.warnings,
            "disclaimer": self.disclaimer,
            "column_sums": {k: _fmt(v) for k, v in self.column_sums.items()},
        }


def _fmt(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _num(tok: str) -> Fraction:
    tok = tok.strip().replace("−", "-")
    if tok in ("", "."):
        return Fraction(0)
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise CertificateError(f"non-numeric cell {tok!r}") from None


# ------------------------------------------------------------------ building

def from_strategies(g: Graph, strategies: Sequence[Strategy],
                    multipliers: Sequence[Fraction] | None = None,
                    claimed_bound: int | None = None) -> Certificate:
    if not strategies:
        raise CertificateError("no strategies")
    root = strategies[0].root
    multipliers = multipliers or [Fraction(1)] * len(strategies)
    rows = tuple(CertificateRow("strategy", tuple(s.weights), s.rhs, Fraction(mu))
                 for s, mu in zip(strategies, multipliers))
    return Certificate(g.labels[root], g.labels, rows, claimed_bound)


def _coeff_vector(g: Graph, cert: Certificate, row: CertificateRow) -> list[Fraction]:
    out = [Fraction(0)] * g.n
    for lab, c in zip(cert.labels, row.coeffs):
        if c:
            out[g.vertex(lab)] = c
    return out


def row_strategy(g: Graph, cert: Certificate, i: int) -> Strategy:
    row = cert.rows[i]
    coeffs = _coeff_vector(g, cert, row)
    try:
        s = validate_strategy(g, cert.root, coeffs)
    except StrategyError as e:
        lab = g.labels[e.vertex] if e.vertex is not None else None
        raise InvalidStrategyRow(f"row {i + 1}: {e}", i, lab) from None
    if s.rhs != row.rhs:
        raise InvalidStrategyRow(
            f"row {i + 1}: right-hand side {row.rhs} differs from weight total {s.rhs}", i)
    return s


# ------------------------------------------------------------------ verification

def verify_certificate(g: Graph, cert: Certificate) -> VerifiedBound:
    """Exact verification; raises InvalidStrategyRow or ArithmeticFailure."""
    for lab in cert.labels:
        g.vertex(lab)
    r = g.vertex(cert.root)
    if not any(row.kind == "strategy" for row in cert.rows):
        raise CertificateError("certificate has no strategy rows")
    sums = [Fraction(0)] * g.n
    M = Fraction(0)
    assumptions = []
    for i, row in enumerate(cert.rows):
        if row.multiplier < 0:
            raise ArithmeticFailure(f"row {i + 1}: negative multiplier")
        if row.kind == "strategy":
            row_strategy(g, cert, i)
        elif row.kind == "assumption":
            assumptions.append(_describe(cert, row))
        else:
            raise CertificateError(f"row {i + 1}: unknown kind {row.kind!r}")
        coeffs = _coeff_vector(g, cert, row)
        if row.kind == "assumption" and coeffs[r]:
            raise CertificateError(f"row {i + 1}: assumption involves the root")
        for v, c in enumerate(coeffs):
            sums[v] += row.multiplier * c
        M += row.multiplier * row.rhs
    others = [v for v in range(g.n) if v != r]
    m = min(sums[v] for v in others) if others else Fraction(1)
    if m <= 0:
        low = [g.labels[v] for v in others if sums[v] <= 0]
        raise ArithmeticFailure(f"vertices not covered: {', '.join(low)}")
    bound = floor(M / m) + 1
    warnings = []
    if cert.sum_row is not None:
        col, total = cert.sum_row
        stated = {lab: c for lab, c in zip(cert.labels, col)}
        bad = [lab for lab in cert.labels if stated[lab] != sums[g.vertex(lab)]]
        if bad:
            warnings.append("sum row differs from recomputed column sums at " + ", ".join(bad))
        if total != M:
            warnings.append(f"sum row total {total} differs from recomputed {M}")
    out = VerifiedBound(bound, M, m, {g.labels[v]: sums[v] for v in others},
                        assumptions, warnings, cert.claimed_bound)
    if cert.claimed_bound is not None and bound > cert.claimed_bound:
        raise ArithmeticFailure(f"verified bound {bound} exceeds claim {cert.claimed_bound}")
    return out


def _describe(cert: Certificate, row: CertificateRow) -> str:
    terms = []
    for lab, c in zip(cert.labels, row.coeffs):
        if c:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            terms.append(f"{sign} {'' if mag == 1 else _fmt(mag)}{lab}")
    lhs = " ".join(terms).lstrip("+ ") or "0"
    text = f"{lhs} <= {_fmt(row.rhs)}"
    return f"{text}  ({row.tag})" if row.tag else text


@dataclass
class CaseReport:
    bound: int
    cases: list[VerifiedBound]
    disclaimer: str | None

    def to_json(self) -> dict:
        return {"bound": self.bound, "cases": [c.to_json() for c in self.cases],
                "disclaimer": self.disclaimer}


def verify_case_analysis(g: Graph, root: int | str, cases: Sequence[Certificate]) -> CaseReport:
    """Verify each case and return the largest per-case bound."""
    lab = g.labels[g.vertex(root)]
    results = []
    for k, cert in enumerate(cases):
        if cert.root != lab:
            raise CertificateError(f"case {k + 1} is rooted at {cert.root}, expected {lab}")
        try:
            results.append(verify_certificate(g, cert))
        except CertificateError as e:
            raise type(e)(f"case {k + 1}: {e}") if not isinstance(e, InvalidStrategyRow) \
                else InvalidStrategyRow(f"case {k + 1}: {e}", e.row, e.vertex) from None
    disclaimer = DISCLAIMER if any(r.assumptions for r in results) else None
    return CaseReport(max(r.bound for r in results), results, disclaimer)


# ------------------------------------------------------------------ simplification

def simplify_certificate(g: Graph, cert: Certificate) -> Certificate:
    """Merge strategy rows into as few combined strategies as first-fit finds.

    Rows are taken grouped by the root neighbours they leave through, heaviest
    first, and each is added to the first merged row whose sum still passes
    strategy validation.  A merged row is the multiplier-weighted sum of its
    parts with multiplier 1, so column sums and the total are unchanged.
    """
    before = verify_certificate(g, cert)
    keep: list[CertificateRow] = []
    items = []
    for i, row in enumerate(cert.rows):
        if row.kind != "strategy":
            keep.append(row)
        elif row.multiplier:
            s = row_strategy(g, cert, i)
            items.append((s.branches, -row.multiplier * row.rhs, i))
    items.sort()
    merged: list[list[Fraction]] = []
    for _, _, i in items:
        row = cert.rows[i]
        scaled = [row.multiplier * c for c in row.coeffs]
        for k, acc in enumerate(merged):
            trial = [a + b for a, b in zip(acc, scaled)]
            if _valid(g, cert, trial):
                merged[k] = trial
                break
        else:
            merged.append(scaled)
    out = replace(cert, rows=tuple([_row_from(c) for c in merged] + keep))
    after = verify_certificate(g, out)
    return out if after.bound <= before.bound else cert


def _valid(g, cert, coeffs) -> bool:
    probe = Certificate(cert.root, cert.labels, (_row_from(coeffs),))
    try:
        row_strategy(g, probe, 0)
        return True
    except InvalidStrategyRow:
        return False


def _row_from(coeffs: Sequence[Fraction]) -> CertificateRow:
    return CertificateRow("strategy", tuple(coeffs), sum(coeffs, Fraction(0)))


# ------------------------------------------------------------------ parsing

_SPLIT = re.compile(r"[\s,&]+")


def _cells(text: str) -> list[str]:
    return [t for t in _SPLIT.split(text.strip()) if t]


def parse_certificate(text: str, auto_assumptions: bool = False) -> Certificate:
    """Parse the matrix or grid layout, or JSON (detected by a leading brace).

    Unmarked rows are strategy rows.  With ``auto_assumptions`` an unmarked
    row with a negative entry or a right-hand side different from its
    coefficient total becomes an assumption row, and a note records this.
    """
    if text.lstrip().startswith("{"):
        return certificate_from_json(text)
    lines = []
    for raw in text.splitlines():
        line, _, comment = raw.partition("#")
        lines.append((line.strip(), comment.strip()))
    if any(l.split()[:1] == ["grid"] for l, _ in lines if l):
        return _parse_grid(lines)
    root = None
    claim = None
    labels: list[str] | None = None
    rows: list[CertificateRow] = []
    sum_row = None
    notes: list[str] = []
    width = None
    for lineno, (line, comment) in enumerate(lines, 1):
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "root":
            root = rest.strip()
            continue
        if head == "claim":
            claim = int(rest)
            continue
        if head == "labels":
            labels = _cells(rest)
            continue
        kind = "strategy"
        marked = False
        if head in ("assume", "sum"):
            kind = "assumption" if head == "assume" else "sum"
            marked = True
            line = rest
        parts = line.split("|")
        if len(parts) == 3:
            mult_s, body, rhs_s = parts
        elif len(parts) == 2:
            mult_s, (body, rhs_s) = "", parts
            if kind == "sum" and not body.strip():
                body, rhs_s = parts[1], ""
        else:
            cells = _cells(line)
            mult_s, body, rhs_s = "", " ".join(cells[:-1]), cells[-1]
        coeffs = [_num(c) for c in _cells(body)]
        if width is None:
            width = len(coeffs)
        elif len(coeffs) != width:
            raise CertificateError(f"line {lineno}: ragged row ({len(coeffs)} cells, expected {width})")
        rhs = _num(rhs_s)
        mult = _num(mult_s) if mult_s.strip() else Fraction(1)
        if kind == "sum":
            sum_row = (tuple(coeffs), rhs)
            continue
        if not marked and auto_assumptions and (any(c < 0 for c in coeffs) or rhs != sum(coeffs)):
            kind = "assumption"
            notes.append(f"row {len(rows) + 1} read as an assumption (negative entry or "
                         f"right-hand side {rhs} != coefficient total {sum(coeffs)})")
        rows.append(CertificateRow(kind, tuple(coeffs), rhs, mult, comment))
    if width is None:
        raise CertificateError("no rows")
    if labels is None:
        labels = [f"v{i + 1}" for i in range(width)]
    if len(labels) != width:
        raise CertificateError(f"{len(labels)} labels for {width} columns")
    if root is None:
        zero = [j for j in range(width)
                if all(r.coeffs[j] == 0 for r in rows if r.kind == "strategy")]
        if len(zero) != 1:
            raise CertificateError("missing root: no unique all-zero column")
        root = labels[zero[0]]
    elif root not in labels:
        raise CertificateError(f"root {root} is not a column label")
    return Certificate(root, tuple(labels), tuple(rows), claim, sum_row, tuple(notes))


def _parse_grid(lines) -> Certificate:
    root = None
    claim = None
    blocks: list[tuple[Fraction, bool, list[str], list[tuple[str, list[Fraction]]], str]] = []
    cur = None
    for lineno, (line, comment) in enumerate(lines, 1):
        if not line:
            continue
        toks = line.split()
        if toks[0] == "root":
            root = toks[1]
        elif toks[0] == "claim":
            claim = int(toks[1])
        elif toks[0] == "grid":
            mult = Fraction(1)
            transpose = False
            for t in toks[1:]:
                if t == "transpose":
                    transpose = True
                else:
                    mult = _num(t)
            cur = [mult, transpose, None, [], comment]
            blocks.append(cur)
        elif cur is None:
            raise CertificateError(f"line {lineno}: cells before any grid header")
        elif cur[2] is None:
            cur[2] = toks
        else:
            if len(toks) != len(cur[2]) + 1:
                raise CertificateError(f"line {lineno}: ragged grid row")
            cur[3].append((toks[0], [_num(t) for t in toks[1:]]))
    if root is None:
        raise CertificateError("grid certificate needs a root line")
    labels: list[str] = []
    index: dict[str, int] = {}
    cells = []
    for mult, transpose, cols, body, tag in blocks:
        entry = {}
        for a, vals in body:
            for b, x in zip(cols, vals):
                key = f"({b},{a})" if transpose else f"({a},{b})"
                if key not in index:
                    index[key] = len(labels)
                    labels.append(key)
                entry[key] = x
        cells.append((mult, entry, tag))
    labels_sorted = sorted(labels, key=_grid_order)
    rows = []
    for mult, entry, tag in cells:
        coeffs = tuple(entry.get(lab, Fraction(0)) for lab in labels_sorted)
        rows.append(CertificateRow("strategy", coeffs, sum(coeffs, Fraction(0)), mult, tag))
    return Certificate(root, tuple(labels_sorted), tuple(rows), claim)


def _grid_order(lab: str):
    return tuple(int(x) if x.isdigit() else x for x in re.findall(r"\d+|\D+", lab))


# ------------------------------------------------------------------ emitting

def emit_certificate(cert: Certificate, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(certificate_to_json(cert), indent=1)
    out = [f"root {cert.root}"]
    if cert.claimed_bound is not None:
        out.append(f"claim {cert.claimed_bound}")
    out.append("labels " + " ".join(cert.labels))
    for row in cert.rows:
        prefix = "assume " if row.kind == "assumption" else ""
        body = " ".join(str(_fmt(c)) for c in row.coeffs)
        line = f"{prefix}{_fmt(row.multiplier)} | {body} | {_fmt(row.rhs)}"
        if row.tag:
            line += f"  # {row.tag}"
        out.append(line)
    if cert.sum_row is not None:
        col, total = cert.sum_row
        out.append(f"sum | {' '.join(str(_fmt(c)) for c in col)} | {_fmt(total)}")
    return "\n".join(out) + "\n"


def certificate_to_json(cert: Certificate) -> dict:
    data = {
        "root": cert.root,
        "claimed_bound": cert.claimed_bound,
        "labels": list(cert.labels),
        "rows": [
            {"kind": r.kind, "multiplier": _fmt(r.multiplier),
             "coeffs": {lab: _fmt(c) for lab, c in zip(cert.labels, r.coeffs) if c},
             "rhs": _fmt(r.rhs), **({"tag": r.tag} if r.tag else {})}
            for r in cert.rows
        ],
    }
    if cert.sum_row is not None:
        data["sum"] = {"coeffs": [_fmt(c) for c in cert.sum_row[0]], "total": _fmt(cert.sum_row[1])}
    return data


def certificate_from_json(data: dict | str) -> Certificate:
    if isinstance(data, str):
        data = json.loads(data)
    labels = tuple(data.get("labels") or
                   sorted({k for r in data["rows"] for k in r["coeffs"]}, key=_grid_order))
    rows = []
    for r in data["rows"]:
        coeffs = {k: _num(str(v)) for k, v in r["coeffs"].items()}
        unknown = set(coeffs) - set(labels)
        if unknown:
            raise CertificateError(f"coefficients on unknown vertices {sorted(unknown)}")
        rows.append(CertificateRow(r.get("kind", "strategy"),
                                   tuple(coeffs.get(lab, Fraction(0)) for lab in labels),
                                   _num(str(r["rhs"])), _num(str(r.get("multiplier", 1))),
                                   r.get("tag", "")))
    sum_row = None
    if "sum" in data:
        sum_row = (tuple(_num(str(c)) for c in data["sum"]["coeffs"]), _num(str(data["sum"]["total"])))
    return Certificate(data["root"], labels, tuple(rows), data.get("claimed_bound"), sum_row)


def load_certificate(path: str, auto_assumptions: bool = False) -> Certificate:
    with open(path) as fh:
        return parse_certificate(fh.read(), auto_assumptions)
