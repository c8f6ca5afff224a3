#!/usr/bin/env python3
"""Profile the lazy tree embedding as n grows: trees embedded, reveal
budget consumed, and the worst per-vertex reveal counters against their
thresholds (1000 eps n for rev, 500 eps n for the active side).
"""

import argparse
import math
import time

from taulab import rng as rngmod
from taulab.bounds import dense_tree_order
from taulab.catalog import iter_distinct_maxdeg3_trees
from taulab.embed import LazyRandomGraph, diagnostics_check, greedy_embed


def one(n: int, seed: int, epsilon: float) -> None:
    p = 40 * math.log(n) / n
    t = dense_tree_order(n)
    lazy = LazyRandomGraph(n, p, seed)
    trees = iter_distinct_maxdeg3_trees(t, rngmod.stream(seed, 2))
    start = time.perf_counter()
    result = greedy_embed(lazy, trees, int(epsilon * n * n), rngmod.stream(seed, 1))
    elapsed = time.perf_counter() - start
    diag = diagnostics_check(result.trace, epsilon, n)
    print(f"{n:>7} {t:>3} {len(result.embedded):>6} {result.trace.steps:>9} "
          f"{diag.max_rev:>8} {diag.rev_limit:>10.0f} "
          f"{diag.max_rev_active:>8} {diag.rev_active_limit:>10.0f} "
          f"{str(diag.total_ok).lower():>5} {elapsed:>7.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[500, 1000, 2000, 4000])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--epsilon", type=float, default=0.01)
    args = ap.parse_args()

    print(f"{'n':>7} {'t':>3} {'trees':>6} {'steps':>9} "
          f"{'maxrev':>8} {'limit':>10} {'maxrev+':>8} {'limit+':>10} "
          f"{'ok':>5} {'time':>8}")
    for n in args.sizes:
        one(n, args.seed, args.epsilon)


if __name__ == "__main__":
    main()
