"""Command-line front end: ``pebblelp {bound,exact,verify,family} ...``.

Exit codes: 0 success, 1 usage, 2 arithmetic or solver failure, 3 invalid
certificate row or malformed certificate, 4 scale guard.  Timings go to stderr so JSON on stdout is
byte-identical across identical runs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .certificate import (ArithmeticFailure, CertificateError, InvalidStrategyRow,
                          emit_certificate, load_certificate, verify_case_analysis,
                          verify_certificate)
from .graph import GraphError, from_spec, load_graph
from .optimize import UncoveredError, bound_pipeline
from .pebbling import DEFAULT_MAX_CONFIG, DEFAULT_MAX_N, ScaleGuardError, pebbling_number_exact
from .simplex import SimplexError
from .strategy import DEFAULT_MAX_STRATEGIES, StrategyError

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY, EXIT_GUARD = 0, 1, 2, 3, 4

log = logging.getLogger("pebblelp")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    root: str = "all"
    depth: int = 2
    sample: int | None = None
    seed: int | None = None
    json: bool = False
    out: str | None = None
    max_strategies: int = DEFAULT_MAX_STRATEGIES
    max_config_size: int = DEFAULT_MAX_CONFIG
    max_n: int = DEFAULT_MAX_N
    ilp: bool = False
    method: str = "auto"
    certs: list[str] = field(default_factory=list)
    family: str | None = None
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command in ("bound", "exact", "verify") and not self.graph:
            raise UsageError("--graph is required")
        if self.sample is not None:
            if self.sample < 1:
                raise UsageError("--sample must be positive")
            if self.seed is None:
                raise UsageError("--seed is mandatory with --sample")
        if self.depth < 0:
            raise UsageError("--depth must be nonnegative")


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _threads() -> int:
    try:
        cap = int(os.environ.get("PEBBLE_THREADS", "0"))
    except ValueError:
        cap = 0
    return max(1, cap or os.cpu_count() or 1)


def _roots(g, spec: str) -> list[int]:
    if spec == "all":
        return list(range(g.n))
    return [g.vertex(r) for r in spec.split(",")]


def _split_timing(stats: dict) -> tuple[dict, dict]:
    keep = {k: v for k, v in stats.items() if "seconds" not in k}
    timing = {k: v for k, v in stats.items() if "seconds" in k}
    return keep, timing


def _bound_one(args) -> dict:
    cfg, r = args
    g = from_spec(cfg.graph)
    rep = bound_pipeline(g, r, depth=cfg.depth, sample=cfg.sample, seed=cfg.seed or 0,
                         max_strategies=cfg.max_strategies, ilp=cfg.ilp,
                         method=cfg.method)
    data = rep.to_json()
    data["stats"], timing = _split_timing(data["stats"])
    data["certificate"] = emit_certificate(rep.certificate, "json")
    return {"report": data, "timing": timing}


def cmd_bound(cfg: RunConfig) -> tuple[int, object]:
    g = from_spec(cfg.graph)
    roots = _roots(g, cfg.root)
    jobs = [(cfg, r) for r in roots]
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bound_one, jobs))
    else:
        results = [_bound_one(j) for j in jobs]
    reports = []
    for r, res in zip(roots, results):
        log.info("root %s timing %s", g.labels[r], res["timing"])
        reports.append(res["report"])
    if cfg.json:
        return EXIT_OK, {"graph": cfg.graph, "depth": cfg.depth, "sample": cfg.sample,
                         "seed": cfg.seed, "reports": reports}
    lines = [f"{'root':>8} {'z':>14} {'bound':>6} {'pool':>10} {'columns':>8} {'used':>5}"]
    for rep in reports:
        st = rep["stats"]
        lines.append(f"{rep['root']:>8} {rep['z_frac']:>14} {rep['bound']:>6} "
                     f"{st['pool']:>10} {st['strategies']:>8} {len(rep['strategies_used']):>5}")
    lines.append(f"max bound {max(r['bound'] for r in reports)}")
    return EXIT_OK, "\n".join(lines)


def cmd_exact(cfg: RunConfig) -> tuple[int, object]:
    g = from_spec(cfg.graph)
    rows = []
    for r in _roots(g, cfg.root):
        pi, wit = pebbling_number_exact(g, r, max_n=cfg.max_n,
                                        max_config_size=cfg.max_config_size)
        rows.append({"root": g.labels[r], "pi": pi,
                     "witness": {g.labels[v]: c for v, c in enumerate(wit.counts) if c}})
    best = max(row["pi"] for row in rows)
    if cfg.json:
        return EXIT_OK, {"graph": cfg.graph, "pi": best, "roots": rows}
    lines = [f"{row['root']:>8} pi={row['pi']:<6} witness={row['witness']}" for row in rows]
    lines.append(f"pi = {best}")
    return EXIT_OK, "\n".join(lines)


def cmd_verify(cfg: RunConfig) -> tuple[int, object]:
    g = from_spec(cfg.graph)
    if not cfg.certs:
        raise UsageError("--cert is required")
    certs = [load_certificate(p) for p in cfg.certs]
    if len(certs) > 1:
        rep = verify_case_analysis(g, certs[0].root, certs)
        data = rep.to_json()
        text = f"OK, bound {rep.bound} over {len(certs)} cases"
    else:
        vb = verify_certificate(g, certs[0])
        data = vb.to_json()
        text = f"OK, bound {vb.bound}"
        for w in vb.warnings:
            text += f"\nwarning: {w}"
        if vb.disclaimer:
            text += f"\nnote: {vb.disclaimer}"
    if cfg.json:
        return EXIT_OK, dict(data, status="OK")
    return EXIT_OK, text


def _family(cfg: RunConfig):
    from . import families as fam
    from .certificate import certificate_to_json

    p = cfg.params
    name = cfg.family
    if name == "tree":
        if not p.get("file"):
            raise UsageError("family tree needs --file")
        g = load_graph(p["file"])
        root = cfg.root if cfg.root != "all" else g.labels[0]
        pi, part = fam.tree_pebbling_number(g, root)
        return {"pi": pi, "partition": part.to_json(g)}
    if name == "cycle":
        n = _need_int(p, "n")
        g = fam.cycle(n)
        _, bound = fam.family_certificate(g, fam.cycle_strategies(n))
        return {"n": n, "pi": fam.cycle_pebbling_number(n), "strategy_bound": bound}
    if name == "pm2":
        m = _need_int(p, "m")
        rc = p.get("root_class") or "u"
        g, strategies = fam.pm2_strategies(m, rc)
        _, bound = fam.family_certificate(g, strategies)
        cover = fam.uniform_cover(strategies)
        return {"m": m, "n": g.n, "root_class": rc, "bound": bound,
                "uniform_cover": None if cover is None else _fmt(cover)}
    if name == "cycle-power":
        k = _need_int(p, "k")
        n, g, strategies = fam.cycle_power_strategies(k)
        cover = fam.uniform_cover(strategies)
        _, bound = fam.family_certificate(g, strategies)
        return {"k": k, "n": n, "power": 2 ** k, "strategies": len(strategies),
                "uniform_cover": None if cover is None else _fmt(cover), "bound": bound}
    if name == "cube-bound":
        d = _need_int(p, "d")
        value = fam.cube_bound(d)
        return {"d": d, "value": value, "limit": 2 ** (d + 1), "below_limit": value < 2 ** (d + 1)}
    if name == "exponent":
        n = _need_int(p, "n")
        lo, hi = fam.pebbling_exponent_bounds(n, seed=cfg.seed or 0)
        return {"n": n, "lower": lo, "upper": hi}
    if name == "petersen":
        cert = fam.petersen_certificate()
        g = from_spec("petersen")
        return {"bound": verify_certificate(g, cert).bound,
                "certificate": certificate_to_json(cert)}
    if name == "lemke":
        g = from_spec("lemke")
        out = {}
        for root, cert in fam.lemke_certificates().items():
            out[root] = verify_certificate(g, cert).bound
        return {"bounds": out}
    raise UsageError(f"unknown family {name!r}")


def _need_int(p: dict, key: str) -> int:
    if p.get(key) is None:
        raise UsageError(f"--{key} is required")
    return int(p[key])


def cmd_family(cfg: RunConfig) -> tuple[int, object]:
    data = _family(cfg)
    if cfg.json:
        return EXIT_OK, dict(data, family=cfg.family)
    return EXIT_OK, "\n".join(f"{k}: {v}" for k, v in data.items())


COMMANDS = {"bound": cmd_bound, "exact": cmd_exact, "verify": cmd_verify, "family": cmd_family}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pebblelp", description="Pebbling bounds via tree strategies")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", help="petersen, lemke, cycle:7, pm:5,2, cycle:9^2, file:g.txt ...")
        p.add_argument("--root", default="all", help="vertex label, comma list, or 'all'")
        p.add_argument("--json", action="store_true")
        p.add_argument("--out")
        p.add_argument("-v", "--verbose", action="store_true")

    b = sub.add_parser("bound", help="strategy LP upper bound")
    common(b)
    b.add_argument("--depth", type=int, default=2,
                   help="tree levels below the root's neighbour (default 2)")
    b.add_argument("--sample", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--max-strategies", type=int, default=DEFAULT_MAX_STRATEGIES)
    b.add_argument("--ilp", action="store_true")
    b.add_argument("--method", choices=["auto", "enumerate", "price"], default="auto",
                   help="explicit enumeration or exact column generation (default: by pool size)")

    e = sub.add_parser("exact", help="exact pebbling number by search")
    common(e)
    e.add_argument("--max-config-size", type=int, default=DEFAULT_MAX_CONFIG)
    e.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)

    v = sub.add_parser("verify", help="verify a certificate (several files: case analysis)")
    common(v)
    v.add_argument("--cert", action="append", default=[], dest="certs")

    f = sub.add_parser("family", help="closed forms and constructions")
    f.add_argument("family", choices=["tree", "cycle", "pm2", "cycle-power", "cube-bound",
                                      "exponent", "petersen", "lemke"])
    common(f, graph=False)
    f.add_argument("--file")
    f.add_argument("--n", type=int)
    f.add_argument("--m", type=int)
    f.add_argument("--k", type=int)
    f.add_argument("--d", type=int)
    f.add_argument("--root-class", choices=["u", "v", "w"])
    f.add_argument("--seed", type=int)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, graph=getattr(ns, "graph", None), root=ns.root,
                    json=ns.json, out=ns.out)
    for name in ("depth", "sample", "seed", "max_strategies", "max_config_size", "max_n",
                 "ilp", "method", "certs"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if ns.command == "family":
        cfg.family = ns.family
        cfg.params = {k: getattr(ns, k) for k in ("file", "n", "m", "k", "d", "root_class")}
    cfg.validate()
    return cfg


def _emit(cfg: RunConfig, payload) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True) if cfg.json else str(payload)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(ns)
        code, payload = COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, FileNotFoundError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ScaleGuardError as e:
        print(f"scale guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except InvalidStrategyRow as e:
        print(f"verification failed: {e}", file=sys.stderr)
        if e.vertex is not None:
            print(f"  row {e.row + 1}, vertex {e.vertex}", file=sys.stderr)
        return EXIT_VERIFY
    except ArithmeticFailure as e:
        # the certificate's rows are fine but its arithmetic does not give the claim
        print(f"arithmetic failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except CertificateError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (UncoveredError, SimplexError, StrategyError, ArithmeticError) as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(cfg, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
