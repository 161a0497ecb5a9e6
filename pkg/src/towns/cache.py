"""Append-only JSONL cache of search results, keyed by (a, b, k, n).

Witness families are written as family files next to the cache; the JSONL
entry stores their path relative to the cache file.  When a key appears more
than once the last line wins.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .search import ExtremalResult
from .setcore import Family, read_family, write_family

DEFAULT_CACHE = "towns-cache.jsonl"


class ResultCache:
    def __init__(self, path: str | Path = DEFAULT_CACHE):
        self.path = Path(path)
        self.witness_dir = self.path.with_name(self.path.stem + "-witnesses")

    def load(self) -> dict[tuple[int, int, int, int], dict]:
        entries: dict[tuple[int, int, int, int], dict] = {}
        if not self.path.exists():
            return entries
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                entries[(rec["a"], rec["b"], rec["k"], rec["n"])] = rec
        return entries

    def get(self, a: int, b: int, k: int, n: int) -> Optional[dict]:
        return self.load().get((a, b, k, n))

    def witness(self, entry: dict) -> Family:
        return read_family(self.path.parent / entry["witness_file"])

    def put(self, result: ExtremalResult) -> dict:
        spec = result.witness.spec
        self.witness_dir.mkdir(parents=True, exist_ok=True)
        wpath = self.witness_dir / f"town-a{spec.a}-b{spec.b}-k{spec.k}-n{spec.n}.txt"
        write_family(result.witness, wpath)
        rec = {
            "a": spec.a,
            "b": spec.b,
            "k": spec.k,
            "n": spec.n,
            "size": result.size,
            "status": result.status,
            "witness_file": str(wpath.relative_to(self.path.parent)),
            "nodes": result.nodes_explored,
            "elapsed_ms": round(result.elapsed * 1000, 3),
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        return rec
