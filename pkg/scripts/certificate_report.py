"""Verify every certificate listed in certs/MANIFEST.json and tabulate the outcome.

For each file: recomputed bound, claimed bound, warnings from the sum-row
checksum, and the first failing row when a strategy row is invalid.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass, replace
from pathlib import Path

from pebblelp.certificate import CertificateError, InvalidStrategyRow, load_certificate, \
    verify_certificate
from pebblelp.graph import from_spec

CERTS = Path(__file__).resolve().parent.parent / "certs"


@dataclass
class Config:
    certs_dir: Path = CERTS
    only: str | None = None     # substring filter on file names
    as_json: bool = False


def report(cfg: Config) -> list[dict]:
    manifest = json.loads((cfg.certs_dir / "MANIFEST.json").read_text())["certificates"]
    graphs: dict = {}
    rows = []
    for e in manifest:
        if cfg.only and cfg.only not in e["file"]:
            continue
        g = graphs.setdefault(e["graph"], from_spec(e["graph"]))
        row = {"file": e["file"], "claim": e["claim"], "bound": None, "note": ""}
        try:
            cert = replace(load_certificate(str(cfg.certs_dir / e["file"])), claimed_bound=None)
            vb = verify_certificate(g, cert)
            row["bound"] = vb.bound
            row["note"] = "; ".join(vb.warnings + ([vb.disclaimer] if vb.disclaimer else []))
        except InvalidStrategyRow as exc:
            row["note"] = f"invalid row {exc.row + 1} at {exc.vertex}"
        except CertificateError as exc:
            row["note"] = str(exc)
        rows.append(row)
    if cfg.as_json:
        print(json.dumps(rows, indent=1))
    else:
        for r in rows:
            mark = "ok" if r["bound"] is not None and r["bound"] <= r["claim"] else "FAIL"
            print(f"{r['file']:<22} claim {r['claim']:>4}  got {str(r['bound']):>4}  {mark:<4} "
                  f"{r['note']}")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--certs-dir", type=Path, default=CERTS)
    ap.add_argument("--only")
    ap.add_argument("--json", action="store_true", dest="as_json")
    ns = ap.parse_args()
    report(Config(ns.certs_dir, ns.only, ns.as_json))


if __name__ == "__main__":
    main()
