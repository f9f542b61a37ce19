"""Regenerate the frozen Petersen and Lemke certificates shipped in pebblelp/data."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from pebblelp.certificate import certificate_to_json, verify_certificate
from pebblelp.graph import lemke, petersen
from pebblelp.optimize import bound_pipeline

DATA = Path(__file__).resolve().parent.parent / "src" / "pebblelp" / "data"


@dataclass
class Config:
    petersen_depth: int = 2
    lemke_depth: int = 3
    out_dir: Path = DATA


def freeze(cfg: Config) -> None:
    g = petersen()
    rep = bound_pipeline(g, "v1", depth=cfg.petersen_depth)
    verify_certificate(g, rep.certificate)
    (cfg.out_dir / "petersen.json").write_text(
        json.dumps(certificate_to_json(rep.certificate), indent=1) + "\n")
    print(f"petersen v1: bound {rep.bound} from {len(rep.strategies_used)} strategies")

    g = lemke()
    out = {}
    for v in g.labels:
        rep = bound_pipeline(g, v, depth=cfg.lemke_depth)
        verify_certificate(g, rep.certificate)
        out[v] = certificate_to_json(rep.certificate)
        print(f"lemke {v}: bound {rep.bound} (z = {rep.z_frac}) "
              f"from {len(rep.strategies_used)} strategies")
    (cfg.out_dir / "lemke.json").write_text(json.dumps(out, indent=1) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--petersen-depth", type=int, default=Config.petersen_depth)
    ap.add_argument("--lemke-depth", type=int, default=Config.lemke_depth)
    ap.add_argument("--out-dir", type=Path, default=DATA)
    ns = ap.parse_args()
    freeze(Config(ns.petersen_depth, ns.lemke_depth, ns.out_dir))


if __name__ == "__main__":
    main()
