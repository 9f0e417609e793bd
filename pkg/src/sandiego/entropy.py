"""Exact conditional entropy ``H(pi(n) | b)`` under uniform ``(pi, z)``.

Probabilities stay as :class:`fractions.Fraction` until the final logarithm.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import caps
from .errors import CapExceeded
from .game import BobStrategy, bits_to_str, clue_string, encode_bits, outcome_table, permutations


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class PosteriorTable:
    """``rows[code] = (P(b = code), {city: P(pi(n) = city | b = code)})``."""

    n: int
    rows: dict[int, tuple[Fraction, dict[int, Fraction]]]

    def support(self, code: int) -> frozenset[int]:
        return frozenset(self.rows[code][1]) if code in self.rows else frozenset()

    def entropy(self) -> float:
        h = 0.0
        for p_b, posterior in self.rows.values():
            h += float(p_b) * -sum(float(q) * math.log2(q) for q in posterior.values())
        return h + 0.0  # normalise -0.0

    def to_rows(self) -> list[dict]:
        return [
            {
                "b": bits_to_str(code, self.n),
                "p": fraction_str(p_b),
                "posterior": {str(i): fraction_str(q) for i, q in sorted(post.items())},
            }
            for code, (p_b, post) in sorted(self.rows.items(), key=lambda kv: bits_to_str(kv[0], self.n))
        ]


def _check_cap(n: int, cap: int | None) -> None:
    limit = caps.resolve("entropy", cap)
    if n > limit:
        raise CapExceeded("posterior_table", n, limit)


def posterior_table(strategy: BobStrategy, cap: int | None = None, workers: int = 1) -> PosteriorTable:
    _check_cap(strategy.n, cap)
    table = outcome_table(strategy, cap=max(strategy.n, caps.get_caps().suspect), workers=workers)
    total = table.total
    rows = {}
    for code, row in sorted(table.counts.items()):
        mass = sum(row.values())
        rows[code] = (
            Fraction(mass, total),
            {city: Fraction(k, mass) for city, k in sorted(row.items())},
        )
    return PosteriorTable(strategy.n, rows)


def conditional_entropy(strategy: BobStrategy, cap: int | None = None, workers: int = 1) -> float:
    """``H(pi(n) | b)`` in bits, from the exact posterior table."""
    return posterior_table(strategy, cap, workers).entropy()


def conditional_entropy_direct(strategy: BobStrategy, cap: int | None = None) -> float:
    """Same quantity as ``H(pi(n), b) - H(b)`` from raw ``clue_string`` calls.

    Deliberately shares no code with :func:`posterior_table`.
    """
    _check_cap(strategy.n, cap)
    joint: Counter = Counter()
    for pi in permutations(strategy.n):
        for z in (0, 1):
            joint[encode_bits(clue_string(strategy, pi, z)), pi[-1]] += 1
    marginal: Counter = Counter()
    for (code, _), k in joint.items():
        marginal[code] += k
    total = sum(joint.values())

    def h(counts):
        return -sum(k / total * math.log2(k / total) for k in counts.values())

    return max(h(joint) - h(marginal), 0.0)


def entropy_report(strategy: BobStrategy, descriptor: dict | None = None, cap: int | None = None, workers: int = 1) -> dict:
    table = posterior_table(strategy, cap, workers)
    return {
        "n": strategy.n,
        "strategy": descriptor if descriptor is not None else {"kind": strategy.kind, "n": strategy.n},
        "H_bits": table.entropy(),
        "rows": table.to_rows(),
    }
