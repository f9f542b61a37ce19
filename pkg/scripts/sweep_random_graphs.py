"""Strategy-LP bound at every root of R15 and R20, with per-root timings.

Writes one JSON object per root (bound, z, pool size, columns, method) and
prints a table.  Defaults reproduce the depth used for the published tables.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from pebblelp.graph import from_spec
from pebblelp.optimize import bound_pipeline


@dataclass
class Config:
    graphs: list[str] = field(default_factory=lambda: ["r15", "r20"])
    depth: int = 2
    method: str = "auto"
    out: Path | None = None


def sweep(cfg: Config) -> list[dict]:
    rows = []
    for spec in cfg.graphs:
        g = from_spec(spec)
        for v in g.labels:
            t0 = time.perf_counter()
            rep = bound_pipeline(g, v, depth=cfg.depth, method=cfg.method)
            rows.append({"graph": spec, "root": v, "bound": rep.bound, "z": str(rep.z_frac),
                         "pool": rep.stats["pool"], "columns": rep.stats["strategies"],
                         "method": rep.stats["method"],
                         "seconds": round(time.perf_counter() - t0, 2)})
            r = rows[-1]
            print(f"{spec:>4} {v:>4}  bound {r['bound']:>3}  z {r['z']:>6}  pool {r['pool']:>9}"
                  f"  columns {r['columns']:>5}  {r['method']:<9} {r['seconds']:>6}s", flush=True)
        print(f"{spec}: max bound {max(r['bound'] for r in rows if r['graph'] == spec)}")
    if cfg.out:
        cfg.out.write_text(json.dumps(rows, indent=1) + "\n")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", nargs="+", default=Config().graphs)
    ap.add_argument("--depth", type=int, default=Config.depth)
    ap.add_argument("--method", choices=["auto", "enumerate", "price"], default=Config.method)
    ap.add_argument("--out", type=Path)
    ns = ap.parse_args()
    sweep(Config(ns.graphs, ns.depth, ns.method, ns.out))


if __name__ == "__main__":
    main()
