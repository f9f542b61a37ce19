"""Lower and LP upper bounds on the pebbling exponent of C_n for a range of n."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from pebblelp.families import pebbling_exponent_bounds, pebbling_exponent_upper_asymptotic


@dataclass
class Config:
    n_min: int = 3
    n_max: int = 16
    sample: int = 3000
    seed: int = 0


def table(cfg: Config) -> list[tuple[int, int, int]]:
    out = []
    print(f"{'n':>3} {'lower':>5} {'upper':>5} {'asymptotic':>10}")
    for n in range(cfg.n_min, cfg.n_max + 1):
        lo, hi = pebbling_exponent_bounds(n, sample=cfg.sample, seed=cfg.seed)
        out.append((n, lo, hi))
        print(f"{n:>3} {lo:>5} {hi:>5} {pebbling_exponent_upper_asymptotic(n):>10.2f}",
              flush=True)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=Config.n_min)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--sample", type=int, default=Config.sample)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ns = ap.parse_args()
    table(Config(ns.n_min, ns.n_max, ns.sample, ns.seed))


if __name__ == "__main__":
    main()
