"""Query-bounded Alice: decision trees, search success, and the parity reduction."""

from __future__ import annotations

import math
import random
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import caps
from .entropy import fraction_str
from .errors import CapExceeded, DimensionError, InvalidTree, PremiseError
from .game import (
    BobStrategy,
    Bits,
    as_bits,
    bits_to_str,
    clue_string,
    encode_bits,
    iter_outcomes,
    outcome_table,
)
from .hypercube import KSet, k_halving_strategy

ONE_THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class Leaf:
    bit: int


@dataclass(frozen=True)
class Query:
    index: int
    if0: "Node"
    if1: "Node"


Node = Union[Leaf, Query]


def node_from_dict(d: dict) -> Node:
    if "leaf" in d:
        if d["leaf"] not in (0, 1):
            raise InvalidTree(f"leaf output must be 0 or 1, got {d['leaf']!r}")
        return Leaf(int(d["leaf"]))
    try:
        return Query(int(d["query"]), node_from_dict(d["if0"]), node_from_dict(d["if1"]))
    except KeyError as exc:
        raise InvalidTree(f"tree node is missing {exc}") from None


def node_to_dict(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": node.bit}
    return {"query": node.index, "if0": node_to_dict(node.if0), "if1": node_to_dict(node.if1)}


@dataclass(frozen=True)
class DecisionTree:
    """An adaptive tree over ``b_1 .. b_n``; paths have at most ``t`` queries, none repeated."""

    n: int
    t: int
    root: Node

    def __post_init__(self):
        if not 0 <= self.t <= self.n:
            raise InvalidTree(f"depth bound t={self.t} must lie in [0, n={self.n}]")
        stack = [(self.root, ())]
        while stack:
            node, path = stack.pop()
            if isinstance(node, Leaf):
                continue
            if not 1 <= node.index <= self.n:
                raise InvalidTree(f"query index {node.index} outside 1..{self.n}")
            if node.index in path:
                raise InvalidTree(f"index {node.index} queried twice on path {list(path)}")
            if len(path) + 1 > self.t:
                raise InvalidTree(f"path {list(path) + [node.index]} exceeds depth bound t={self.t}")
            stack.append((node.if0, path + (node.index,)))
            stack.append((node.if1, path + (node.index,)))

    @property
    def depth(self) -> int:
        def d(node):
            return 0 if isinstance(node, Leaf) else 1 + max(d(node.if0), d(node.if1))

        return d(self.root)

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        return cls(int(d["n"]), int(d["t"]), node_from_dict(d["root"]))

    def to_dict(self) -> dict:
        return {"n": self.n, "t": self.t, "root": node_to_dict(self.root)}


@dataclass(frozen=True)
class ExecutionTrace:
    tree: DecisionTree
    b: Bits
    visits: tuple[int, ...]
    output: int


def run_tree(tree: DecisionTree, b: Sequence[int] | str) -> ExecutionTrace:
    b = as_bits(b)
    if len(b) != tree.n:
        raise DimensionError(f"input has length {len(b)}, tree n={tree.n}")
    visits = []
    node = tree.root
    while isinstance(node, Query):
        visits.append(node.index)
        node = node.if1 if b[node.index - 1] else node.if0
    return ExecutionTrace(tree, b, tuple(visits), node.bit)


def _run_code(root: Node, code: int) -> tuple[tuple[int, ...], int]:
    visits = []
    node = root
    while isinstance(node, Query):
        visits.append(node.index)
        node = node.if1 if code >> (node.index - 1) & 1 else node.if0
    return tuple(visits), node.bit


def constant_tree(n: int, bit: int = 0, t: int = 0) -> DecisionTree:
    return DecisionTree(n, t, Leaf(bit))


def parity_tree(n: int, order: Sequence[int] | None = None) -> DecisionTree:
    """Full-depth tree reading ``order`` (default 1..n) and outputting the parity."""
    order = tuple(order or range(1, n + 1))

    def build(k, acc):
        if k == len(order):
            return Leaf(acc)
        return Query(order[k], build(k + 1, acc), build(k + 1, acc ^ 1))

    return DecisionTree(n, len(order), build(0, 0))


def echo_tree(n: int, index: int) -> DecisionTree:
    """Query one coordinate and output it."""
    return DecisionTree(n, 1, Query(index, Leaf(0), Leaf(1)))


def nonadaptive_tree(n: int, indices: Sequence[int], output: int = 0) -> DecisionTree:
    """Read ``indices`` in order regardless of the answers; output a constant."""
    indices = tuple(indices)

    def build(k):
        if k == len(indices):
            return Leaf(output)
        child = build(k + 1)
        return Query(indices[k], child, child)

    return DecisionTree(n, len(indices), build(0))


def random_tree(
    n: int,
    t: int,
    rng: random.Random,
    stop_prob: float = 0.15,
    flip_prob: float = 0.1,
) -> DecisionTree:
    """A random adaptive tree leaning toward computing parity.

    Each node stops early with ``stop_prob`` (random leaf); paths that read
    all ``n`` bits output the parity, flipped with ``flip_prob``.
    """

    def build(queried, acc):
        if len(queried) == t or (queried and rng.random() < stop_prob):
            if len(queried) == n:
                return Leaf(acc ^ (rng.random() < flip_prob))
            return Leaf(rng.getrandbits(1))
        i = rng.choice([c for c in range(1, n + 1) if c not in queried])
        return Query(i, build(queried | {i}, acc), build(queried | {i}, acc ^ 1))

    return DecisionTree(n, t, build(frozenset(), 0))


# ---------------------------------------------------------------------------
# randomized algorithms


@dataclass(frozen=True)
class RandomizedAlgorithm:
    """A finite mixture of depth-``t`` trees with rational weights summing to 1."""

    n: int
    t: int
    atoms: tuple[tuple[Fraction, DecisionTree], ...]

    def __post_init__(self):
        if not self.atoms:
            raise InvalidTree("an algorithm needs at least one atom")
        for p, tree in self.atoms:
            if not isinstance(p, Fraction) or p <= 0:
                raise InvalidTree(f"atom weight {p!r} must be a positive Fraction")
            if tree.n != self.n:
                raise DimensionError(f"atom tree has n={tree.n}, algorithm n={self.n}")
            if tree.t > self.t:
                raise InvalidTree(f"atom depth bound {tree.t} exceeds t={self.t}")
        total = sum(p for p, _ in self.atoms)
        if total != 1:
            raise InvalidTree(f"atom weights sum to {total}, not 1")

    @classmethod
    def mixture(cls, atoms: Sequence[tuple[Fraction | int | str, DecisionTree]]) -> "RandomizedAlgorithm":
        atoms = tuple((Fraction(p), tree) for p, tree in atoms)
        return cls(atoms[0][1].n, max(tree.t for _, tree in atoms), atoms)

    @classmethod
    def single(cls, tree: DecisionTree) -> "RandomizedAlgorithm":
        return cls(tree.n, tree.t, ((Fraction(1), tree),))

    @classmethod
    def from_dict(cls, d: dict) -> "RandomizedAlgorithm":
        if "atoms" not in d:
            return cls.single(DecisionTree.from_dict(d))
        try:
            return cls.mixture([(Fraction(a["p"]), DecisionTree.from_dict(a["tree"])) for a in d["atoms"]])
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidTree):
                raise
            raise InvalidTree(f"bad algorithm atom: {exc}") from None

    def to_dict(self) -> dict:
        return {"atoms": [{"p": fraction_str(p), "tree": tree.to_dict()} for p, tree in self.atoms]}


def random_algorithm(n: int, rng: random.Random, max_atoms: int = 4, t: int | None = None) -> RandomizedAlgorithm:
    """Random mixture of random trees.

    With ``t=None`` each atom gets depth n or n-1 at random, so the
    mixture often misses the hidden index while still computing parity
    well enough to be interesting."""
    k = rng.randint(1, max_atoms)
    weights = [rng.randint(1, 6) for _ in range(k)]
    total = sum(weights)
    atoms = []
    for w in weights:
        depth = rng.choice((n - 1, n)) if t is None else t
        tree = random_tree(n, depth, rng, stop_prob=rng.uniform(0.0, 0.3), flip_prob=rng.uniform(0.0, 0.2))
        atoms.append((Fraction(w, total), tree))
    return RandomizedAlgorithm.mixture(atoms)


# ---------------------------------------------------------------------------
# search success


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    half_width: float  # 95% normal-approximation half-width
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "half_width_95": self.half_width, "samples": self.samples, "seed": self.seed}


MC_CHUNK = 10_000


def _mc_chunk(alg, strategy, seed_seq, size) -> int:
    rng = np.random.default_rng(seed_seq)
    weights = np.array([float(p) for p, _ in alg.atoms])
    hits = 0
    for _ in range(size):
        pi = tuple(int(c) + 1 for c in rng.permutation(alg.n))
        z = int(rng.integers(2))
        code = encode_bits(clue_string(strategy, pi, z))
        _, tree = alg.atoms[int(rng.choice(len(weights), p=weights))]
        visits, _ = _run_code(tree.root, code)
        hits += pi[-1] in visits
    return hits


def search_success_probability(
    alg: RandomizedAlgorithm,
    strategy: BobStrategy,
    mode: str = "exact",
    seed: int | None = None,
    samples: int = 100_000,
    cap: int | None = None,
    workers: int = 1,
) -> Fraction | MonteCarloEstimate:
    """``Pr[pi(n) in VISITS]`` over uniform ``(pi, z)`` and the algorithm's coins.

    Exact mode returns a Fraction; above the cap, ``mode="sampled"`` with a
    seed gives a Monte Carlo estimate.  Samples are split into fixed chunks
    with seeds spawned from ``seed``, so ``workers`` never changes the result.
    """
    if alg.n != strategy.n:
        raise DimensionError(f"algorithm n={alg.n}, strategy n={strategy.n}")
    if mode == "exact":
        limit = caps.resolve("suspect", cap)
        if alg.n > limit:
            raise CapExceeded("search_success_probability (use mode='sampled')", alg.n, limit)
        table = outcome_table(strategy, cap=limit, workers=workers)
        hits = Fraction(0)
        for p, tree in alg.atoms:
            k = 0
            for code, row in table.counts.items():
                visits, _ = _run_code(tree.root, code)
                k += sum(cnt for city, cnt in row.items() if city in visits)
            hits += p * k
        return hits / table.total
    if mode == "sampled":
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        sizes = [MC_CHUNK] * (samples // MC_CHUNK) + ([samples % MC_CHUNK] if samples % MC_CHUNK else [])
        seqs = np.random.SeedSequence(seed).spawn(len(sizes))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                hits = sum(pool.map(_mc_chunk, [alg] * len(sizes), [strategy] * len(sizes), seqs, sizes))
        else:
            hits = sum(map(_mc_chunk, [alg] * len(sizes), [strategy] * len(sizes), seqs, sizes))
        est = hits / samples
        return MonteCarloEstimate(est, 1.96 * math.sqrt(est * (1 - est) / samples), samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# weak parity


def parity(code_or_bits) -> int:
    if isinstance(code_or_bits, int):
        return code_or_bits.bit_count() & 1
    return sum(code_or_bits) & 1


def parity_success_probabilities(alg: RandomizedAlgorithm, cap: int | None = None) -> list[Fraction]:
    """``Pr[alg(y) = PAR(y)]`` for every ``y``, indexed by ``encode_bits(y)``."""
    limit = caps.resolve("parity", cap)
    if alg.n > limit:
        raise CapExceeded("parity_success_set", alg.n, limit)
    probs = []
    for code in range(1 << alg.n):
        par = parity(code)
        probs.append(sum((p for p, tree in alg.atoms if _run_code(tree.root, code)[1] == par), Fraction(0)))
    return probs


def parity_success_set(alg: RandomizedAlgorithm, cap: int | None = None) -> KSet:
    """``{y : Pr[alg(y) = PAR(y)] >= 2/3}``."""
    probs = parity_success_probabilities(alg, cap)
    return KSet.from_members(alg.n, [y for y, q in enumerate(probs) if q >= TWO_THIRDS])


# ---------------------------------------------------------------------------
# reduction harness


@dataclass
class Theorem2Report:
    n: int
    t: int
    k_size: int
    premise: bool
    search_success: Fraction | None = None
    correct_on_b: Fraction | None = None
    correct_on_flipped: Fraction | None = None
    eq1_ok: bool | None = None
    eq2_ok: bool | None = None
    view_ok: bool | None = None
    support_ok: bool | None = None
    routes_agree: bool | None = None
    bound_ok: bool | None = None
    counterexample: dict | None = None

    @property
    def passed(self) -> bool | None:
        if not self.premise:
            return None
        return all((self.eq1_ok, self.eq2_ok, self.view_ok, self.support_ok, self.routes_agree, self.bound_ok))

    def to_dict(self) -> dict:
        def fs(f):
            return None if f is None else fraction_str(f)

        return {
            "n": self.n,
            "t": self.t,
            "K_size": self.k_size,
            "premise": self.premise,
            "search_success": fs(self.search_success),
            "eq1_ok": self.eq1_ok,
            "eq2_ok": self.eq2_ok,
            "view_ok": self.view_ok,
            "support_ok": self.support_ok,
            "routes_agree": self.routes_agree,
            "bound_ok": self.bound_ok,
            "correct_on_b": fs(self.correct_on_b),
            "correct_on_flipped": fs(self.correct_on_flipped),
            "counterexample": self.counterexample,
        }


def theorem2_harness(alg: RandomizedAlgorithm, cap: int | None = None) -> Theorem2Report:
    """Run the parity-to-search reduction exhaustively for one algorithm.

    With ``K = parity_success_set(alg)`` and Bob playing the K-halving
    strategy, enumerate every (atom, pi, z), pair ``b = b(pi, z)`` with
    ``b' = b(pi, 1 - z)`` and check: equal parity-success probability on
    ``b`` and ``b'``; the pointwise indicator inequality; identical views
    whenever ``pi(n)`` is not queried; ``b in K``; agreement with
    :func:`search_success_probability`; and search success >= 1/3.
    A set with ``|K| <= 2^(n-1)`` yields ``premise=False`` rather than an error.
    """
    kset = parity_success_set(alg)
    report = Theorem2Report(alg.n, alg.t, kset.size, kset.majority)
    if not report.premise:
        return report
    limit = caps.resolve("suspect", cap)
    if alg.n > limit:
        raise CapExceeded("theorem2_harness", alg.n, limit)
    strategy = k_halving_strategy(kset)

    total = 2 * math.factorial(alg.n)
    succ = correct_b = correct_f = Fraction(0)
    eq2_ok = view_ok = support_ok = True
    pending: dict[tuple[int, ...], dict[int, int]] = {}
    for pi, z, code in iter_outcomes(strategy):
        pending.setdefault(pi, {})[z] = code
        if len(pending[pi]) < 2:
            continue
        codes = pending.pop(pi)
        for z in (0, 1):
            b, b_flip = codes[z], codes[1 - z]
            support_ok &= b in kset
            for p, tree in alg.atoms:
                visits, out = _run_code(tree.root, b)
                visits_f, out_f = _run_code(tree.root, b_flip)
                hit = pi[-1] in visits
                ok = out == parity(b)
                ok_f = out_f == parity(b_flip)
                blind = hit != (pi[-1] in visits_f) or (not hit and (visits, out) != (visits_f, out_f))
                excess = ok + ok_f > 1 + hit
                view_ok &= not blind
                eq2_ok &= not excess
                if (blind or excess) and report.counterexample is None:
                    report.counterexample = {
                        "pi": list(pi),
                        "z": z,
                        "b": bits_to_str(b, alg.n),
                        "b_flipped": bits_to_str(b_flip, alg.n),
                        "tree": tree.to_dict(),
                    }
                succ += p * hit
                correct_b += p * ok
                correct_f += p * ok_f
    report.search_success = succ / total
    report.correct_on_b = correct_b / total
    report.correct_on_flipped = correct_f / total
    report.eq1_ok = report.correct_on_b == report.correct_on_flipped
    report.eq2_ok = eq2_ok
    report.view_ok = view_ok
    report.support_ok = support_ok
    report.routes_agree = report.search_success == search_success_probability(alg, strategy, cap=limit)
    report.bound_ok = (
        report.search_success >= ONE_THIRD
        and report.correct_on_b >= TWO_THIRDS
        and report.correct_on_b <= (1 + report.search_success) / 2
    )
    return report


# ---------------------------------------------------------------------------
# the candidate hard distribution


def hard_distribution(kset: KSet, cap: int | None = None) -> dict[int, Fraction]:
    """Exact law of ``b(pi, z)`` under the K-halving strategy, keyed by code."""
    table = outcome_table(k_halving_strategy(kset), cap)
    return {code: Fraction(sum(row.values()), table.total) for code, row in sorted(table.counts.items())}


def hard_distribution_sample(kset: KSet, seed: int, count: int) -> list[Bits]:
    if not kset.majority:
        raise PremiseError(f"|K| = {kset.size} is not > 2^(n-1)")
    strategy = k_halving_strategy(kset)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pi = tuple(int(c) + 1 for c in rng.permutation(kset.n))
        out.append(clue_string(strategy, pi, int(rng.integers(2))))
    return out


def support_report(kset: KSet, cap: int | None = None) -> list[dict]:
    rows = [{"b": bits_to_str(code, kset.n), "p": fraction_str(p)} for code, p in hard_distribution(kset, cap).items()]
    return sorted(rows, key=lambda r: r["b"])

