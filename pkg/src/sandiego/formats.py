"""JSON file formats for strategies, K-sets and query algorithms.

Strategy file::

    {"n": 3, "kind": "table",
     "tables": [{"t": 1, "entries": [{"prefix": [1], "bit": 0}, ...]}, ...]}
    {"n": 3, "kind": "k_halving", "k_hex": "1f"}

K-set file: ``{"n": 2, "k_hex": "7"}``.  Tree and algorithm files are
described in :mod:`sandiego.query`.  All indices are 1-based.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidStrategy
from .game import BobStrategy, table_keys
from .hypercube import KSet, k_halving_strategy
from .query import RandomizedAlgorithm


def _read(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: not valid JSON ({exc})") from None


def kset_to_dict(kset: KSet) -> dict:
    return {"n": kset.n, "k_hex": kset.hex}


def kset_from_dict(d: dict) -> KSet:
    try:
        return KSet.from_hex(int(d["n"]), d["k_hex"])
    except KeyError as exc:
        raise ValueError(f"K-set file is missing {exc}") from None


def load_kset(source) -> KSet:
    return kset_from_dict(_read(source))


def strategy_to_dict(strategy: BobStrategy) -> dict:
    if strategy.kind == "k_halving":
        return {"n": strategy.n, "kind": "k_halving", "k_hex": strategy.kset.hex}
    tables = []
    for t in range(1, strategy.n):
        table = strategy.tables[t - 1]
        keys = [p for s, p in table_keys(strategy.n) if s == t and p in table]
        tables.append({"t": t, "entries": [{"prefix": list(p), "bit": table[p]} for p in keys]})
    return {"n": strategy.n, "kind": "table", "tables": tables}


def strategy_from_dict(d: dict) -> BobStrategy:
    try:
        n, kind = int(d["n"]), d["kind"]
    except KeyError as exc:
        raise InvalidStrategy(f"strategy file is missing {exc}") from None
    if kind == "k_halving":
        kset = kset_from_dict(d)
        if kset.n != n:
            raise InvalidStrategy(f"k_hex describes n={kset.n}, file says n={n}")
        return k_halving_strategy(kset)
    if kind != "table":
        raise InvalidStrategy(f"unknown strategy kind {kind!r}")
    tables: list[dict] = [{} for _ in range(n - 1)]
    for block in d.get("tables", []):
        t = int(block["t"])
        if not 1 <= t <= n - 1:
            raise InvalidStrategy(f"table index t={t} outside 1..{n - 1}")
        for entry in block["entries"]:
            tables[t - 1][tuple(int(c) for c in entry["prefix"])] = int(entry["bit"])
    strategy = BobStrategy(n, "table", tuple(tables))
    strategy.check_complete()
    return strategy


def load_strategy(source) -> BobStrategy:
    return strategy_from_dict(_read(source))


def load_algorithm(source) -> RandomizedAlgorithm:
    """Read an algorithm file, or a bare tree file (taken with probability 1)."""
    return RandomizedAlgorithm.from_dict(_read(source))


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
