"""Prove that 24 is the largest (0,0)-town mod 3 on 12 points, and check the Hadamard witness."""

import argparse
import json
import sys
import time

from towns.constructions import frankl_odlyzko
from towns.search import OPTIMAL, Budget, extremal_search
from towns.setcore import TownSpec, check_town


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--no-symmetry", action="store_true", help="search every root (slow)")
    args = ap.parse_args(argv)

    fo = frankl_odlyzko(3, 12)
    t0 = time.perf_counter()
    res = extremal_search(
        TownSpec(12, 3, 0, 0),
        Budget(max_nodes=10**9, max_seconds=1800),
        seed=fo,
        threads=args.threads,
        symmetry=not args.no_symmetry,
    )
    out = {
        "size": res.size,
        "status": res.status,
        "nodes": res.nodes_explored,
        "seconds": round(time.perf_counter() - t0, 2),
        "fo_size": len(fo),
        "fo_valid": check_town(fo).passed,
    }
    print(json.dumps(out))
    return 0 if res.status == OPTIMAL and res.size == 24 and out["fo_valid"] else 1


if __name__ == "__main__":
    sys.exit(main())
