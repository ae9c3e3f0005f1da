"""Randomised consistency run over piecewise affine concave functions.

For each sample: biduality, the Monge-Ampere total mass, the boundary
identity residual and the two local-height routes. Prints a per-dimension
summary; any failure makes the exit status nonzero.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass

from toricheight import concave as C
from toricheight import heights as H
from toricheight import measures as M
from toricheight.sampling import random_pa_function


@dataclass(frozen=True)
class Config:
    trials: int = 60
    max_dim: int = 3
    max_pieces: int = 6
    seed: int = 1


def run_one(rng, n, max_pieces):
    f = random_pa_function(rng, n, pieces=rng.randint(n + 1, max_pieces))
    stab = C.stability_set(f)
    checks = {
        "biduality": C.functions_equal(C.dual(C.dual(f)), f),
        "total mass": M.monge_ampere(f).total_mass() == stab.volume(),
        "boundary identity": M.boundary_identity_residual(f) == 0,
        "two-path height": math.factorial(n + 1) * C.integrate_pa(C.dual(f), stab)
        == math.factorial(n + 1) * H.local_height_by_cells(f),
    }
    return checks


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    passed, total = Counter(), Counter()
    start = time.perf_counter()
    for _ in range(cfg.trials):
        n = rng.randint(1, cfg.max_dim)
        for name, ok in run_one(rng, n, cfg.max_pieces).items():
            total[(n, name)] += 1
            passed[(n, name)] += ok
    for key in sorted(total):
        n, name = key
        print(f"dim {n}  {name:<18} {passed[key]:>4}/{total[key]}")
    print(f"elapsed {time.perf_counter() - start:.1f}s")
    return 0 if passed == total else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=default)
    sys.exit(main(Config(**vars(ap.parse_args()))))
