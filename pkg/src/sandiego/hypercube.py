"""Subsets of the Boolean hypercube, induced degrees, and the K-halving strategy."""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import caps
from .errors import CapExceeded, DimensionError, PremiseError
from .game import (
    BobStrategy,
    Bits,
    PartialClue,
    as_bits,
    bits_to_str,
    decode_bits,
    encode_bits,
    iter_outcomes,
    outcome_table,
    table_complexity,
)


@dataclass(frozen=True)
class KSet:
    """``K`` as a ``2**n``-bit mask; string ``y`` sits at bit ``encode_bits(y)``."""

    n: int
    mask: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.mask < 1 << (1 << self.n):
            raise ValueError(f"mask does not fit in 2^{self.n} bits")

    @classmethod
    def from_members(cls, n: int, members: Iterable[Sequence[int] | str | int]) -> "KSet":
        mask = 0
        for y in members:
            code = y if isinstance(y, int) else encode_bits(as_bits(y))
            if isinstance(y, (str, tuple, list)) and len(y) != n:
                raise DimensionError(f"member {y!r} is not an {n}-bit string")
            mask |= 1 << code
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "KSet":
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def parity_class(cls, n: int, parity: int = 0) -> "KSet":
        return cls.from_members(n, (y for y in range(1 << n) if y.bit_count() % 2 == parity))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "KSet":
        n = int(arr.size).bit_length() - 1
        if arr.size != 1 << n:
            raise ValueError("array length must be a power of two")
        return cls.from_members(n, np.flatnonzero(arr).tolist())

    @classmethod
    def from_hex(cls, n: int, k_hex: str) -> "KSet":
        return cls(n, int(k_hex, 16))

    @property
    def hex(self) -> str:
        digits = max(1, math.ceil((1 << self.n) / 4))
        return format(self.mask, f"0{digits}x")

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def majority(self) -> bool:
        """True when ``|K| > 2**(n-1)``."""
        return self.size > 1 << (self.n - 1)

    def members(self) -> list[int]:
        return [y for y in range(1 << self.n) if self.mask >> y & 1]

    def strings(self) -> list[str]:
        return [bits_to_str(y, self.n) for y in self.members()]

    def array(self) -> np.ndarray:
        N = 1 << self.n
        raw = np.frombuffer(self.mask.to_bytes((N + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:N].astype(bool)

    def __contains__(self, y) -> bool:
        if isinstance(y, int):
            return bool(self.mask >> y & 1)
        y = as_bits(y)
        if len(y) != self.n:
            raise DimensionError(f"{y} is not an {self.n}-bit string")
        return bool(self.mask >> encode_bits(y) & 1)

    def __len__(self) -> int:
        return self.size


def _codes(kset: KSet) -> np.ndarray:
    return np.array(kset.members(), dtype=np.int64)


def restriction_count(kset: KSet, w: PartialClue | str) -> int:
    """``|K(w)|``: members agreeing with every assigned cell of ``w``."""
    if isinstance(w, str):
        w = PartialClue.from_string(w)
    if w.n != kset.n:
        raise DimensionError(f"partial clue has n={w.n}, K-set n={kset.n}")
    return int(np.count_nonzero((_codes(kset) & w.care) == w.value))


class Restriction:
    """Incrementally refined ``K(w)``; each refinement filters the survivors only."""

    def __init__(self, kset: KSet, w: PartialClue | None = None, _members: np.ndarray | None = None):
        self.kset = kset
        self.w = w or PartialClue.empty(kset.n)
        if _members is None:
            _members = _codes(kset)
            _members = _members[(_members & self.w.care) == self.w.value]
        self.members = _members

    def __len__(self) -> int:
        return int(self.members.size)

    def refine(self, i: int, u: int) -> "Restriction":
        w = self.w.assign(i, u)
        keep = ((self.members >> (i - 1)) & 1) == u
        return Restriction(self.kset, w, self.members[keep])


class HalvingRule:
    """Pick the clue maximising ``|K(w[pos <- u])|``, ties to 0.

    Counts are memoised per partial clue, so a whole game enumeration touches
    each of the at most ``3**n`` restrictions once.
    """

    def __init__(self, kset: KSet):
        self.kset = kset
        self._members = _codes(kset)
        self._memo: dict[tuple[int, int], int] = {}

    def count(self, care: int, value: int) -> int:
        key = (care, value)
        c = self._memo.get(key)
        if c is None:
            c = self._memo[key] = int(np.count_nonzero((self._members & care) == value))
        return c

    def choose(self, care: int, value: int, position: int) -> int:
        bit = 1 << (position - 1)
        return 0 if self.count(care | bit, value) >= self.count(care | bit, value | bit) else 1

    def __call__(self, w: PartialClue, position: int) -> int:
        return self.choose(w.care, w.value, position)

    def __getstate__(self):
        return {"kset": self.kset}

    def __setstate__(self, state):
        self.__init__(state["kset"])


def k_halving_strategy(kset: KSet) -> BobStrategy:
    if kset.n < 2:
        raise ValueError("the game needs n > 1")
    if not kset.majority:
        raise PremiseError(f"|K| = {kset.size} is not > 2^(n-1) = {1 << (kset.n - 1)}")
    return BobStrategy(kset.n, "k_halving", kset=kset, rule=HalvingRule(kset))


# ---------------------------------------------------------------------------
# induced degrees


def _degree_array(kset: KSet) -> np.ndarray:
    arr = kset.array()
    idx = np.arange(1 << kset.n)
    deg = np.zeros(1 << kset.n, dtype=np.int64)
    for i in range(kset.n):
        deg += arr[idx ^ (1 << i)]
    return np.where(arr, deg, -1)


def induced_degree(kset: KSet, y: Sequence[int] | str | int) -> int:
    """Number of ``i`` with ``y`` flipped at ``i`` still in ``K``; ``y`` must be in ``K``."""
    code = y if isinstance(y, int) else encode_bits(as_bits(y))
    if not isinstance(y, int) and len(as_bits(y)) != kset.n:
        raise DimensionError(f"{y!r} is not an {kset.n}-bit string")
    if code not in kset:
        raise ValueError(f"{bits_to_str(code, kset.n)} is not a member of K")
    return sum(1 for i in range(kset.n) if (code ^ (1 << i)) in kset)


@dataclass(frozen=True)
class DegreeReport:
    kset: KSet
    degrees: dict[int, int] = field(repr=False)
    max_degree: int
    witness: int

    @property
    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees.values()).items()))

    def to_dict(self) -> dict:
        return {
            "n": self.kset.n,
            "size": self.kset.size,
            "max_degree": self.max_degree,
            "witness": bits_to_str(self.witness, self.kset.n),
            "histogram": {str(d): c for d, c in self.histogram.items()},
        }


def max_induced_degree(kset: KSet) -> DegreeReport:
    if kset.size == 0:
        raise ValueError("K is empty")
    deg = _degree_array(kset)
    members = np.flatnonzero(deg >= 0)
    witness = int(members[np.argmax(deg[members])])
    return DegreeReport(kset, {int(y): int(deg[y]) for y in members}, int(deg[witness]), witness)


# ---------------------------------------------------------------------------
# Theorem-1 verification


@dataclass
class Theorem1Report:
    n: int
    size: int
    max_degree: int
    complexity: int
    complexity_witness: tuple[tuple[int, ...], int]
    checks: dict[str, bool]
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        pi, z = self.complexity_witness
        return {
            "n": self.n,
            "size": self.size,
            "max_degree": self.max_degree,
            "complexity": self.complexity,
            "complexity_witness": {"pi": list(pi), "z": z},
            "checks": dict(self.checks),
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def halving_trace(kset: KSet, strategy: BobStrategy, pi: Sequence[int], z: int) -> tuple[list[int], Bits]:
    """Replay one game; return ``[|K(w^0)|, ..., |K(w^n)|]`` and the final ``b``.

    Counts are taken with :func:`restriction_count`, not the rule's memo.
    """
    w = PartialClue.empty(kset.n)
    counts = [restriction_count(kset, w)]
    for t in range(1, kset.n):
        w = w.assign(pi[t - 1], strategy.F(t, pi))
        counts.append(restriction_count(kset, w))
    w = w.assign(pi[-1], z)
    counts.append(restriction_count(kset, w))
    return counts, decode_bits(w.value, kset.n)


def verify_theorem1(kset: KSet, cap: int | None = None, workers: int = 1) -> Theorem1Report:
    """Check the K-halving strategy against every claim of the degree bound.

    Checks, each over every ``(pi, z)``: complexity <= max induced degree D;
    ``|K(w^t)| > 2**(n-1-t)`` and ``|K(w^t)| >= |K(w^(t-1))| / 2`` for
    ``t < n``; ``|K(w^(n-1))| == 2``; ``b in K``; every suspect ``l`` has
    ``b`` flipped at ``l`` in ``K``.  The first failing pair (lexicographic)
    is reported with its trace.
    """
    strategy = k_halving_strategy(kset)
    n = kset.n
    table = outcome_table(strategy, cap, workers)
    degree = max_induced_degree(kset)

    complexity, *witness = table_complexity(table)

    checks = {
        "complexity_le_degree": complexity <= degree.max_degree,
        "halving_invariant": True,
        "endgame_pair": True,
        "final_in_k": True,
        "suspects_are_neighbours": True,
    }
    counterexample = None
    for pi, z, code in iter_outcomes(strategy):
        counts, b = halving_trace(kset, strategy, pi, z)
        suspects = sorted(table.suspects(code))
        failed = []
        if not all(counts[t] > 1 << (n - 1 - t) and 2 * counts[t] >= counts[t - 1] for t in range(1, n)):
            failed.append("halving_invariant")
        if counts[n - 1] != 2:
            failed.append("endgame_pair")
        if b not in kset:
            failed.append("final_in_k")
        if not all((code ^ (1 << (l - 1))) in kset for l in suspects):
            failed.append("suspects_are_neighbours")
        for name in failed:
            checks[name] = False
        if failed and counterexample is None:
            counterexample = {
                "pi": list(pi),
                "z": z,
                "b": bits_to_str(b),
                "restriction_counts": counts,
                "suspects": suspects,
                "failed": failed,
            }
    return Theorem1Report(n, kset.size, degree.max_degree, complexity, tuple(witness), checks, counterexample)


# ---------------------------------------------------------------------------
# min-max induced degree over large subsets


@dataclass(frozen=True)
class MinMaxDegree:
    n: int
    value: int
    witness: KSet
    exact: bool
    examined: int
    size_threshold: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "size_threshold": self.size_threshold,
            "min_max_degree": self.value,
            "exact": self.exact,
            "examined": self.examined,
            "witness_k_hex": self.witness.hex,
            "witness_size": self.witness.size,
        }


def min_max_degree(
    n: int,
    size_threshold: int | None = None,
    mode: str = "exact",
    seed: int | None = None,
    samples: int = 1000,
    cap: int | None = None,
) -> MinMaxDegree:
    """Smallest max induced degree over all ``K`` with ``|K| > size_threshold``.

    Exact mode scans every mask in increasing integer order (first minimiser
    wins).  Sampled mode draws ``samples`` uniform sets of size
    ``size_threshold + 1`` and returns an upper bound.
    """
    threshold = (1 << (n - 1)) if size_threshold is None else size_threshold
    N = 1 << n
    if not 0 <= threshold < N:
        raise ValueError(f"size threshold must lie in [0, {N})")
    if mode == "exact":
        limit = caps.resolve("subset", cap)
        if n > limit:
            raise CapExceeded("min_max_degree (exhaustive)", n, limit)
        masks = np.arange(1 << N, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(N)) & 1).astype(bool)
        masks, bits = masks[bits.sum(axis=1) > threshold], bits[bits.sum(axis=1) > threshold]
        deg = np.zeros(bits.shape, dtype=np.int64)
        idx = np.arange(N)
        for i in range(n):
            deg += bits[:, idx ^ (1 << i)]
        maxdeg = np.where(bits, deg, -1).max(axis=1)
        j = int(np.argmin(maxdeg))
        return MinMaxDegree(n, int(maxdeg[j]), KSet(n, int(masks[j])), True, int(masks.size), threshold)
    if mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        rng = np.random.default_rng(seed)
        best = None
        for _ in range(samples):
            kset = KSet.from_members(n, rng.choice(N, size=threshold + 1, replace=False).tolist())
            d = max_induced_degree(kset).max_degree
            if best is None or d < best[0]:
                best = (d, kset)
        return MinMaxDegree(n, best[0], best[1], False, samples, threshold)
    raise ValueError(f"unknown mode {mode!r}")
