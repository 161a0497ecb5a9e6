"""Run the conjecture probes for one modulus and print the findings as JSON."""

import argparse
import json
import sys

from towns.search import Budget, probe_conjectures


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("k", type=int)
    ap.add_argument("n_max", type=int)
    ap.add_argument("--max-seconds", type=float, default=60)
    args = ap.parse_args(argv)
    report = probe_conjectures(args.k, args.n_max, Budget(max_seconds=args.max_seconds))
    print(json.dumps(report.to_dict(), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
