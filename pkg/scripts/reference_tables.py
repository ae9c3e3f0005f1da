"""Regenerate the closed-form tables (heights of projective spaces, Veronese
curves, Hirzebruch surfaces, entropy averages, monomial integrals) and print
them with the reference value next to each computed one."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from toricheight.cli import _show, reference_table_rows


@dataclass(frozen=True)
class Config:
    seed: int = 0
    tol: float = 1e-10
    csv_path: str | None = None


def main(cfg: Config) -> int:
    rows = reference_table_rows(cfg.seed, cfg.tol)
    width = max(len(r[0]) for r in rows)
    for item, got, want, ok in rows:
        print(f"{item:<{width}}  {_show(got):>16}  {_show(want):>16}  {'ok' if ok else 'MISMATCH'}")
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["item", "computed", "expected", "ok"])
            w.writerows([it, _show(g), _show(e), ok] for it, g, e, ok in rows)
    bad = sum(not r[3] for r in rows)
    print(f"{len(rows) - bad}/{len(rows)} rows match")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--tol", type=float, default=Config.tol)
    ap.add_argument("--csv", dest="csv_path")
    sys.exit(main(Config(**vars(ap.parse_args()))))
