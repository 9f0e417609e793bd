"""Exact semantics of the Carmen Sandiego communication game.

Cities, positions and itinerary entries are 1-based everywhere in the public
API.  Bit strings are tuples ``(b_1, ..., b_n)``; internally they are packed
into integers with coordinate ``i`` at bit ``i - 1`` (see :func:`encode_bits`).
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from . import caps
from .errors import CapExceeded, DimensionError, InvalidStrategy

Permutation = tuple[int, ...]
Bits = tuple[int, ...]


# ---------------------------------------------------------------------------
# bit strings and permutations


def encode_bits(bits: Sequence[int]) -> int:
    """Pack ``(b_1, ..., b_n)`` into ``sum b_i * 2**(i-1)``."""
    code = 0
    for i, bit in enumerate(bits):
        if bit not in (0, 1):
            raise ValueError(f"not a bit: {bit!r}")
        code |= bit << i
    return code


def decode_bits(code: int, n: int) -> Bits:
    return tuple((code >> i) & 1 for i in range(n))


def bits_to_str(bits: Sequence[int] | int, n: int | None = None) -> str:
    """Render ``b_1 ... b_n`` left to right; accepts a tuple or a packed code."""
    if isinstance(bits, int):
        if n is None:
            raise ValueError("n is required when rendering a packed code")
        bits = decode_bits(bits, n)
    return "".join(str(b) for b in bits)


def str_to_bits(s: str) -> Bits:
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {s!r}")
    return tuple(int(c) for c in s)


def as_bits(b: Sequence[int] | str) -> Bits:
    return str_to_bits(b) if isinstance(b, str) else tuple(int(x) for x in b)


def check_permutation(pi: Iterable[int], n: int | None = None) -> Permutation:
    pi = tuple(int(c) for c in pi)
    if n is not None and len(pi) != n:
        raise DimensionError(f"permutation {pi} has length {len(pi)}, expected n={n}")
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValueError(f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order."""
    return itertools.permutations(range(1, n + 1))


def _check_n(n: int) -> int:
    if n < 2:
        raise ValueError(f"the game needs n > 1 cities, got n={n}")
    return n


# ---------------------------------------------------------------------------
# partial clue vectors


@dataclass(frozen=True)
class PartialClue:
    """A vector over ``{0, 1, *}``: bit ``i-1`` of ``care`` says cell ``i`` is set."""

    n: int
    care: int = 0
    value: int = 0

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.care & ~full or self.value & ~self.care:
            raise ValueError("value bits must lie inside care bits, inside n coordinates")

    @classmethod
    def empty(cls, n: int) -> "PartialClue":
        return cls(n)

    @classmethod
    def from_string(cls, s: str) -> "PartialClue":
        care = value = 0
        for i, c in enumerate(s):
            if c == "*":
                continue
            if c not in "01":
                raise ValueError(f"bad partial clue cell {c!r}")
            care |= 1 << i
            value |= int(c) << i
        return cls(len(s), care, value)

    def cell(self, i: int) -> int | None:
        bit = 1 << (i - 1)
        if not self.care & bit:
            return None
        return 1 if self.value & bit else 0

    def assign(self, i: int, u: int) -> "PartialClue":
        """``w[i <- u]``; cell ``i`` must still be free."""
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside 1..{self.n}")
        bit = 1 << (i - 1)
        if self.care & bit:
            raise ValueError(f"cell {i} of {self} is already assigned")
        return PartialClue(self.n, self.care | bit, self.value | (bit if u else 0))

    @property
    def assigned(self) -> int:
        return self.care.bit_count()

    def __str__(self) -> str:
        return "".join("*" if c is None else str(c) for c in map(self.cell, range(1, self.n + 1)))


# ---------------------------------------------------------------------------
# strategies

MemorylessRule = Callable[[PartialClue, int], int]


def table_keys(n: int) -> list[tuple[int, tuple[int, ...]]]:
    """Every ``(t, prefix)`` a table strategy must cover, in canonical order.

    Ordered by ``t`` first, then lexicographically by prefix.  This order
    defines the bit-vector enumeration in :func:`exact_game_complexity`.
    """
    cities = range(1, n + 1)
    return [(t, p) for t in range(1, n) for p in itertools.permutations(cities, t)]


@dataclass(frozen=True, eq=False)
class BobStrategy:
    """A family ``F_1 .. F_{n-1}`` of t-restricted clue rules.

    ``kind="table"`` stores one dict per ``t`` mapping prefixes
    ``(pi(1), ..., pi(t))`` to a bit.  ``kind="k_halving"`` carries a K-set and
    a memoryless rule deciding from ``(w^(t-1), pi(t))``; build those with
    :func:`sandiego.hypercube.k_halving_strategy`.
    """

    n: int
    kind: str = "table"
    tables: tuple[dict[tuple[int, ...], int], ...] | None = None
    kset: Any = None
    rule: Any = field(default=None, repr=False)

    def __post_init__(self):
        _check_n(self.n)
        if self.kind == "table":
            if self.tables is None or len(self.tables) != self.n - 1:
                raise InvalidStrategy(f"a table strategy for n={self.n} needs {self.n - 1} tables")
            for t, table in enumerate(self.tables, start=1):
                for prefix, bit in table.items():
                    if len(prefix) != t or len(set(prefix)) != t or not all(1 <= c <= self.n for c in prefix):
                        raise InvalidStrategy(f"bad prefix {prefix} in table t={t}")
                    if bit not in (0, 1):
                        raise InvalidStrategy(f"bad bit {bit!r} for prefix {prefix}")
        elif self.kind == "k_halving":
            if self.kset is None or self.rule is None:
                raise InvalidStrategy("k_halving strategies need a K-set and its rule")
            if self.kset.n != self.n:
                raise DimensionError(f"K-set has n={self.kset.n}, strategy n={self.n}")
        else:
            raise InvalidStrategy(f"unknown strategy kind {self.kind!r}")

    @classmethod
    def from_tables(cls, n: int, tables: Sequence[Mapping[Sequence[int], int]]) -> "BobStrategy":
        return cls(n, "table", tuple({tuple(k): int(v) for k, v in tb.items()} for tb in tables))

    @classmethod
    def from_bits(cls, n: int, bits: Sequence[int]) -> "BobStrategy":
        """Build a table strategy from one bit per key of :func:`table_keys`."""
        keys = table_keys(n)
        if len(bits) != len(keys):
            raise InvalidStrategy(f"need {len(keys)} bits for n={n}, got {len(bits)}")
        tables: list[dict] = [{} for _ in range(n - 1)]
        for (t, prefix), bit in zip(keys, bits):
            tables[t - 1][prefix] = int(bit)
        return cls(n, "table", tuple(tables))

    @classmethod
    def constant(cls, n: int, bit: int = 0) -> "BobStrategy":
        return cls.from_bits(n, [bit] * len(table_keys(n)))

    @classmethod
    def from_memoryless(cls, n: int, rule: MemorylessRule | Mapping) -> "BobStrategy":
        """Convert a rule keyed by ``(w^(t-1), pi(t))`` into table form.

        ``rule`` is a callable ``rule(w, position)`` or a mapping keyed by
        ``(str(w), position)``.
        """
        _check_n(n)
        if isinstance(rule, Mapping):
            lookup = rule
            rule = lambda w, pos: lookup[(str(w), pos)]  # noqa: E731
        tables: list[dict] = [{} for _ in range(n - 1)]

        def walk(prefix, w):
            t = len(prefix) + 1
            if t == n:
                return
            for c in range(1, n + 1):
                if w.care >> (c - 1) & 1:
                    continue
                u = int(rule(w, c))
                tables[t - 1][prefix + (c,)] = u
                walk(prefix + (c,), w.assign(c, u))

        walk((), PartialClue.empty(n))
        return cls(n, "table", tuple(tables))

    def _decide(self, prefix: tuple[int, ...], care: int, value: int) -> int:
        # prefix = (pi(1), ..., pi(t)); (care, value) encode w^(t-1)
        if self.kind == "table":
            try:
                return self.tables[len(prefix) - 1][prefix]
            except KeyError:
                raise InvalidStrategy(f"table t={len(prefix)} has no entry for prefix {list(prefix)}") from None
        return self.rule.choose(care, value, prefix[-1])

    def F(self, t: int, pi: Sequence[int]) -> int:
        """Evaluate ``F_t(pi)`` by replaying the first ``t`` steps of ``pi``."""
        if not 1 <= t <= self.n - 1:
            raise ValueError(f"F_t exists only for 1 <= t <= {self.n - 1}")
        pi = tuple(pi)
        care = value = 0
        for s in range(1, t + 1):
            u = self._decide(pi[:s], care, value)
            bit = 1 << (pi[s - 1] - 1)
            care |= bit
            value |= bit if u else 0
        return u

    def to_table(self) -> "BobStrategy":
        if self.kind == "table":
            return self
        return BobStrategy.from_memoryless(self.n, lambda w, pos: self.rule.choose(w.care, w.value, pos))

    def check_complete(self) -> None:
        """Raise :class:`InvalidStrategy` if a table lacks any prefix key."""
        if self.kind != "table":
            return
        for t, prefix in table_keys(self.n):
            if prefix not in self.tables[t - 1]:
                raise InvalidStrategy(f"table t={t} has no entry for prefix {list(prefix)}")


def random_table_strategy(n: int, rng: random.Random | int | None = None) -> BobStrategy:
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    return BobStrategy.from_bits(n, [rng.getrandbits(1) for _ in table_keys(n)])


def relabel(strategy: BobStrategy, sigma: Sequence[int]) -> BobStrategy:
    """Rename city ``i`` to ``sigma[i-1]`` throughout a strategy's tables."""
    sigma = check_permutation(sigma, strategy.n)
    src = strategy.to_table()
    tables = tuple({tuple(sigma[c - 1] for c in p): bit for p, bit in tb.items()} for tb in src.tables)
    return BobStrategy(strategy.n, "table", tables)


def check_t_restricted(strategy: BobStrategy) -> bool:
    """Exhaustively check that ``F_t`` agrees on permutations sharing a t-prefix."""
    n = strategy.n
    for t in range(1, n):
        seen: dict[tuple[int, ...], int] = {}
        for pi in permutations(n):
            u = strategy.F(t, pi)
            if seen.setdefault(pi[:t], u) != u:
                return False
    return True


# ---------------------------------------------------------------------------
# single games


def clue_string(strategy: BobStrategy, pi: Sequence[int], z: int) -> Bits:
    """The string ``b(pi, z)`` Alice sees."""
    pi = check_permutation(pi, strategy.n)
    if z not in (0, 1):
        raise ValueError(f"z must be a bit, got {z!r}")
    b = [0] * strategy.n
    care = value = 0
    for t in range(1, strategy.n):
        u = strategy._decide(pi[:t], care, value)
        pos = pi[t - 1]
        b[pos - 1] = u
        care |= 1 << (pos - 1)
        value |= u << (pos - 1)
    b[pi[-1] - 1] = z
    return tuple(b)


def suspect_witnesses(strategy: BobStrategy, b: Sequence[int] | str, cap: int | None = None) -> dict[int, tuple[Permutation, int]]:
    """Map each suspect city to the lexicographically first ``(rho, u)`` producing ``b``.

    Brute force over all ``2 * n!`` pairs.
    """
    b = as_bits(b)
    n = strategy.n
    if len(b) != n:
        raise DimensionError(f"clue string has length {len(b)}, strategy n={n}")
    limit = caps.resolve("suspect", cap)
    if n > limit:
        raise CapExceeded("suspect_set", n, limit)
    found: dict[int, tuple[Permutation, int]] = {}
    for rho in permutations(n):
        for u in (0, 1):
            if rho[-1] not in found and clue_string(strategy, rho, u) == b:
                found[rho[-1]] = (rho, u)
    return dict(sorted(found.items()))


def suspect_set(strategy: BobStrategy, b: Sequence[int] | str, cap: int | None = None) -> frozenset[int]:
    return frozenset(suspect_witnesses(strategy, b, cap))


@dataclass(frozen=True)
class GameOutcome:
    pi: Permutation
    z: int
    b: Bits
    suspects: frozenset[int]

    @property
    def cost(self) -> int:
        return len(self.suspects)

    def to_dict(self) -> dict:
        return {
            "pi": list(self.pi),
            "z": self.z,
            "b": bits_to_str(self.b),
            "suspects": sorted(self.suspects),
            "cost": self.cost,
        }


def run_game(strategy: BobStrategy, pi: Sequence[int], z: int, cap: int | None = None) -> GameOutcome:
    b = clue_string(strategy, pi, z)
    return GameOutcome(tuple(pi), z, b, suspect_set(strategy, b, cap))


# ---------------------------------------------------------------------------
# exhaustive enumeration kernel


def iter_outcomes(strategy: BobStrategy, first: int | None = None) -> Iterator[tuple[Permutation, int, int]]:
    """Yield ``(pi, z, code(b(pi, z)))`` for all pairs in lexicographic order.

    Walks the prefix tree once so each ``F_t`` is evaluated once per prefix.
    ``first`` restricts ``pi(1)`` (used to partition work).
    """
    n = strategy.n
    full = (1 << n) - 1
    decide = strategy._decide

    def walk(prefix, care, value):
        if len(prefix) == n - 1:
            last_bit = full & ~care
            pi = prefix + (last_bit.bit_length(),)
            yield pi, 0, value
            yield pi, 1, value | last_bit
            return
        for c in range(1, n + 1):
            bit = 1 << (c - 1)
            if care & bit:
                continue
            p = prefix + (c,)
            u = decide(p, care, value)
            yield from walk(p, care | bit, value | (bit if u else 0))

    if first is None:
        yield from walk((), 0, 0)
    else:
        bit = 1 << (first - 1)
        u = decide((first,), 0, 0)
        yield from walk((first,), bit, bit if u else 0)


@dataclass
class OutcomeTable:
    """All ``2 * n!`` outcomes grouped by the clue string they produce.

    ``counts[code][city]`` is the number of pairs ``(pi, z)`` with
    ``b(pi, z) = code`` and ``pi(n) = city``; ``first[code]`` is the
    lexicographically first such pair.
    """

    n: int
    counts: dict[int, dict[int, int]]
    first: dict[int, tuple[Permutation, int]]

    @property
    def total(self) -> int:
        return 2 * math.factorial(self.n)

    def suspects(self, code: int) -> frozenset[int]:
        return frozenset(self.counts.get(code, ()))

    def merge(self, other: "OutcomeTable") -> None:
        """Fold in a table built from lexicographically later permutations."""
        for code, row in other.counts.items():
            mine = self.counts.setdefault(code, {})
            for city, k in row.items():
                mine[city] = mine.get(city, 0) + k
        for code, pair in other.first.items():
            self.first.setdefault(code, pair)


def _partial_table(strategy: BobStrategy, first: int | None) -> OutcomeTable:
    counts: dict[int, dict[int, int]] = {}
    firsts: dict[int, tuple[Permutation, int]] = {}
    for pi, z, code in iter_outcomes(strategy, first):
        row = counts.get(code)
        if row is None:
            row = counts[code] = {}
            firsts[code] = (pi, z)
        row[pi[-1]] = row.get(pi[-1], 0) + 1
    return OutcomeTable(strategy.n, counts, firsts)


def outcome_table(strategy: BobStrategy, cap: int | None = None, workers: int = 1) -> OutcomeTable:
    """Enumerate every ``(pi, z)``; with ``workers > 1`` partition on ``pi(1)``.

    The merge runs in ``pi(1)`` order, so the result does not depend on the
    worker count.
    """
    n = strategy.n
    limit = caps.resolve("suspect", cap)
    if n > limit:
        raise CapExceeded("outcome enumeration", n, limit)
    if workers <= 1:
        return _partial_table(strategy, None)
    with ProcessPoolExecutor(max_workers=min(workers, n)) as pool:
        parts = list(pool.map(_partial_table, [strategy] * n, range(1, n + 1)))
    table = OutcomeTable(n, {}, {})
    for part in parts:
        table.merge(part)
    return table


class StrategyComplexity(NamedTuple):
    value: int
    pi: Permutation
    z: int


def table_complexity(table: OutcomeTable) -> StrategyComplexity:
    best: tuple[int, tuple[Permutation, int]] | None = None
    for code, row in table.counts.items():
        cand = (-len(row), table.first[code])
        if best is None or cand < best:
            best = cand
    cost, (pi, z) = best
    return StrategyComplexity(-cost, pi, z)


def strategy_complexity(strategy: BobStrategy, cap: int | None = None, workers: int = 1) -> StrategyComplexity:
    """Max cost over all ``(pi, z)`` with the lexicographically first witness."""
    return table_complexity(outcome_table(strategy, cap, workers))


class GameComplexity(NamedTuple):
    value: int
    strategy: BobStrategy


def exact_game_complexity(n: int, cap: int | None = None) -> GameComplexity:
    """Minimise complexity over every table strategy for ``n`` cities.

    Strategies are visited as bit vectors over :func:`table_keys` in
    lexicographic order; the first optimum is returned.
    """
    _check_n(n)
    limit = caps.resolve("exact_min", cap)
    if n > limit:
        raise CapExceeded("exact_game_complexity", n, limit)
    m = len(table_keys(n))
    best: GameComplexity | None = None
    for bits in itertools.product((0, 1), repeat=m):
        strategy = BobStrategy.from_bits(n, bits)
        value = strategy_complexity(strategy).value
        if best is None or value < best.value:
            best = GameComplexity(value, strategy)
            if value == 1:
                break
    return best
