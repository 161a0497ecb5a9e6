"""Solve every k=3 cell for a range of n, cache the results and print the table per n.

    python3 scripts/reproduce_table.py --n-min 3 --n-max 10 --cache runs/table.jsonl
"""

import argparse
import itertools
import sys

from towns.cache import ResultCache
from towns.search import Budget, extremal_search
from towns.setcore import TownSpec
from towns.table import build_table, render_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--cache", default="towns-cache.jsonl")
    ap.add_argument("--max-seconds", type=float, default=300)
    args = ap.parse_args(argv)

    cache = ResultCache(args.cache)
    budget = Budget(max_seconds=args.max_seconds)
    for n in range(args.n_min, args.n_max + 1):
        for a, b in itertools.product(range(3), repeat=2):
            if cache.get(a, b, 3, n) is None:
                res = extremal_search(TownSpec(n, 3, a, b), budget)
                cache.put(res)
        print(f"## n = {n}\n")
        sys.stdout.write(render_table(build_table(3, n, cache.load()), n, evaluate=True))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
