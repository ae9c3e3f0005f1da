"""Growth of the height of the degree-r rational normal curve.

Prints h(C_r), h(C_r)/r - log r and the successive differences of the latter,
which should shrink in magnitude if h(C_r) = r log r + O(r) with a settling
O(r) term. Small degrees are also recomputed from the polynomial roots.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from toricheight.heights import curve_global_height, veronese_height


@dataclass(frozen=True)
class Config:
    degrees: tuple = (25, 50, 100, 200)
    roots_check_max: int = 30


def trend(degrees):
    out, prev = [], None
    for r in degrees:
        h = veronese_height(r, symbolic=False)["float"]
        d = h / r - math.log(r)
        out.append((r, h, d, None if prev is None else d - prev))
        prev = d
    return out


def main(cfg: Config) -> int:
    rows = trend(cfg.degrees)
    print(f"{'r':>6} {'h(C_r)':>16} {'h/r - log r':>14} {'difference':>12}")
    for r, h, d, diff in rows:
        print(f"{r:>6} {h:>16.8f} {d:>14.8f} {'' if diff is None else f'{diff:12.8f}':>12}")
    diffs = [abs(x[3]) for x in rows if x[3] is not None]
    shrinking = all(b < a for a, b in zip(diffs, diffs[1:]))
    print("differences shrink:", shrinking)
    worst = 0.0
    for r in range(1, cfg.roots_check_max + 1):
        a = curve_global_height(list(range(1, r + 1)), [1] * r)
        worst = max(worst, abs(a - veronese_height(r, symbolic=False)["float"]))
    print(f"roots route vs closed form, r <= {cfg.roots_check_max}: max deviation {worst:.2e}")
    return 0 if shrinking and worst < 1e-9 else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", type=lambda s: tuple(int(x) for x in s.split(",")), default=Config.degrees)
    ap.add_argument("--roots-check-max", type=int, default=Config.roots_check_max)
    sys.exit(main(Config(**vars(ap.parse_args()))))
