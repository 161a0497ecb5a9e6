"""Command line: construct, check, bound, search, certify, table, probe-conjectures.

Exit codes: 0 success or pass, 1 property violation, 2 usage or parse error,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import constructions
from .algebra import certify, is_prime
from .bounds import bound_oracle
from .cache import DEFAULT_CACHE, ResultCache
from .search import Budget, BudgetExceeded, extremal_search, probe_conjectures
from .setcore import FamilyFormatError, TownSpec, check_town, read_family, render_family
from .table import build_table, render_table

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

GENERATORS = {
    "block": (("m", "k", "n"), lambda m, k, n: constructions.block_construction(m, k, n)),
    "star": (("a", "b", "k", "n"), constructions.star),
    "co-star": (("a", "b", "k", "n"), constructions.co_star),
    "fo": (("k", "n"), constructions.frankl_odlyzko),
    "augment": (("k", "n", "m"), lambda k, n, m: constructions.augment(constructions.frankl_odlyzko(k, n - m), m)),
    "best": (("a", "b", "k", "n"), constructions.best_lower_bound),
}


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def cmd_construct(args) -> int:
    names, fn = GENERATORS[args.generator]
    if len(args.params) != len(names):
        raise UsageError(f"{args.generator} takes {len(names)} parameters: {' '.join(names)}")
    try:
        family = fn(*args.params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = check_town(family)
    text = render_family(family)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = {"generator": args.generator, "size": len(family), "pass": report.passed, "out": args.out}
    line = f"{args.generator}: {len(family)} sets, {family.spec}, check {'pass' if report.passed else 'FAIL'}"
    print(json.dumps(summary) if args.json else line, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_check(args) -> int:
    family = read_family(args.file)
    report = check_town(family)
    payload = {
        "pass": report.passed,
        "size": len(family),
        "spec": [family.spec.n, family.spec.k, family.spec.a, family.spec.b],
        "violations": [
            {"kind": v.kind, "sets": [i + 1 for i in v.indices], "observed": v.observed, "residue": v.residue}
            for v in report.violations
        ],
    }
    lines = [f"{family.spec}: {len(family)} sets, {'pass' if report.passed else 'FAIL'}"]
    lines += ["  " + v.describe(family) for v in report.violations]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_bound(args) -> int:
    spec = TownSpec(args.n, args.k, args.a, args.b)
    res = bound_oracle(spec.a, spec.b, spec.k, spec.n)
    lines = [f"{spec}: |F| <= {res.value} ({res.expression}){' tight' if res.tight else ''}"]
    lines += [f"  [{r.id}] p={r.p}: {r.bound.value}  ({r.anchor})" for r in res.rules]
    _emit(args, res.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_search(args) -> int:
    spec = TownSpec(args.n, args.k, args.a, args.b)
    cache = ResultCache(args.cache) if not args.no_cache else None
    if cache is not None and not args.force:
        hit = cache.get(spec.a, spec.b, spec.k, spec.n)
        if hit is not None and hit["status"] == "optimal":
            _emit(args, dict(hit, cached=True), f"{spec}: {hit['size']} (optimal, cached)")
            return EXIT_OK
    seed = constructions.best_lower_bound(spec.a, spec.b, spec.k, spec.n) if args.seed_construction else None
    try:
        res = extremal_search(spec, Budget(args.max_nodes, args.max_seconds), seed=seed, threads=args.threads)
    except BudgetExceeded as exc:
        raise UsageError(f"instance too large: {exc}") from None
    rec = cache.put(res) if cache is not None else {}
    payload = dict(res.to_dict(), witness_file=rec.get("witness_file"))
    text = f"{spec}: {res.size} ({res.status}{', ' + res.tripped + ' budget' if res.tripped else ''}), {res.nodes_explored} nodes, {res.elapsed:.2f}s"
    if args.show_witness:
        text += "\n" + render_family(res.witness)
    _emit(args, payload, text)
    return EXIT_OK if res.optimal else EXIT_BUDGET


def cmd_certify(args) -> int:
    family = read_family(args.file)
    p = args.p
    if p == 2 or not is_prime(p):
        raise UsageError(f"certificates need an odd prime, got p={p}")
    if family.spec.k % p:
        raise UsageError(f"p={p} does not divide k={family.spec.k}")
    cert = certify(family, p)
    text = (
        f"{cert.kind} certificate over GF({p}^2), x^2={cert.r}, alpha={cert.alpha!r}: "
        f"rank {cert.rank}, |F| = {cert.size}, gram {'ok' if cert.gram_ok else 'BAD'}, "
        f"{'holds' if cert.holds else 'FAILS'}"
    )
    if cert.kind == "isotropy":
        text += f" (dim bound {cert.dim_bound}, |F| <= {cert.bound})"
    print(cert.to_json() if args.json else text)
    return EXIT_OK if cert.holds else EXIT_VIOLATION


def cmd_table(args) -> int:
    entries = ResultCache(args.cache).load()
    rows = build_table(args.k, args.n, entries)
    if args.json:
        payload = [
            {
                "a": r.a,
                "b": r.b,
                "lower": r.computed.lower,
                "upper": r.computed.upper,
                "tight": r.computed.tight,
                "exact": r.exact,
                "reference": None if r.reference is None else {"lower": r.reference.lower, "upper": r.reference.upper, "tight": r.reference.tight},
            }
            for r in rows
        ]
        print(json.dumps(payload, ensure_ascii=False))
    else:
        sys.stdout.write(render_table(rows, args.n, evaluate=args.eval, fmt=args.format))
    return EXIT_OK


def cmd_probe(args) -> int:
    report = probe_conjectures(args.k, args.n_max, Budget(args.max_nodes, args.max_seconds))
    lines = [
        f"probed {len(report.cells)} optimal cells mod {args.k}, n <= {args.n_max}; {len(report.skipped)} skipped",
        f"  monotone-diagonal confirmations: {report.confirmations['monotone-diagonal']}",
        f"  linear-off-diagonal confirmations: {report.confirmations['linear-off-diagonal']}",
        f"  counterexamples: {len(report.counterexamples)}",
    ]
    lines += [f"  FINDING [{f.conjecture}] {f.detail}" for f in report.counterexamples]
    _emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="towns", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--json", action="store_true", help="structured output")
        p.set_defaults(func=fn)
        return p

    p = add("construct", cmd_construct, "generate a family file")
    p.add_argument("generator", choices=sorted(GENERATORS))
    p.add_argument("params", type=int, nargs="*")
    p.add_argument("-o", "--out")

    p = add("check", cmd_check, "check the town property of a family file")
    p.add_argument("file")

    p = add("bound", cmd_bound, "upper bound with rule provenance")
    for x in "abkn":
        p.add_argument(x, type=int)

    p = add("search", cmd_search, "exact extremal size by maximum-clique search")
    for x in "abkn":
        p.add_argument(x, type=int)
    p.add_argument("--cache", default=DEFAULT_CACHE)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--force", action="store_true", help="ignore a cached optimal entry")
    p.add_argument("--max-nodes", type=int, default=Budget.max_nodes)
    p.add_argument("--max-seconds", type=float, default=Budget.max_seconds)
    p.add_argument("--threads", type=int, default=1, help="worker processes for the root branches")
    p.add_argument("--seed-construction", action="store_true", help="start from the best known construction")
    p.add_argument("--show-witness", action="store_true")

    p = add("certify", cmd_certify, "linear-algebra certificate for a family file")
    p.add_argument("file")
    p.add_argument("p", type=int)

    p = add("table", cmd_table, "bounds table for all (a,b) at one n")
    p.add_argument("n", type=int)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--eval", action="store_true", help="numbers instead of expressions")
    p.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    p.add_argument("--cache", default=DEFAULT_CACHE)

    p = add("probe-conjectures", cmd_probe, "test the open conjectures on solved cells")
    p.add_argument("k", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--max-nodes", type=int, default=Budget.max_nodes)
    p.add_argument("--max-seconds", type=float, default=Budget.max_seconds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except FamilyFormatError as exc:
        print(f"error: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
