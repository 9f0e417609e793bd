import math
import random
from fractions import Fraction

import pytest

import oracles
from sandiego.errors import CapExceeded
from sandiego.game import BobStrategy, random_table_strategy, suspect_set, decode_bits
from sandiego.entropy import conditional_entropy, conditional_entropy_direct, entropy_report, posterior_table
from sandiego.hypercube import KSet, k_halving_strategy

K5 = KSet.from_members(3, ["000", "001", "010", "011", "100"])


def test_posterior_table_constant0():
    t = posterior_table(BobStrategy.constant(2))
    assert t.to_rows() == [
        {"b": "00", "p": "1/2", "posterior": {"1": "1/2", "2": "1/2"}},
        {"b": "01", "p": "1/4", "posterior": {"2": "1/1"}},
        {"b": "10", "p": "1/4", "posterior": {"1": "1/1"}},
    ]


def test_conditional_entropy_examples():
    assert conditional_entropy(BobStrategy.constant(2)) == 0.5
    alt = BobStrategy.from_tables(2, [{(1,): 0, (2,): 1}])
    assert conditional_entropy(alt) == 0.5


def test_k_halving_n3():
    s = k_halving_strategy(K5)
    t = posterior_table(s)
    assert sum(p for p, _ in t.rows.values()) == 1
    # frozen from oracles.cond_entropy: b=000 w.p. 1/2, uniform over all three cities
    assert conditional_entropy(s) == pytest.approx(math.log2(3) / 2, abs=1e-12)
    assert oracles.cond_entropy(oracles.halving_F(set(K5.strings()), 3), 3) == pytest.approx(math.log2(3) / 2, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_posterior_invariants(n):
    rng = random.Random(n)
    for _ in range(5):
        s = random_table_strategy(n, rng)
        t = posterior_table(s)
        assert sum(p for p, _ in t.rows.values()) == 1
        for code, (p, post) in t.rows.items():
            assert sum(post.values()) == 1
            assert (2 * math.factorial(n)) % p.denominator == 0
        for code in range(1 << n):
            assert t.support(code) == suspect_set(s, decode_bits(code, n))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_entropy_paths_and_oracle(n):
    rng = random.Random(10 + n)
    for _ in range(5):
        s = random_table_strategy(n, rng)
        h = conditional_entropy(s)
        assert 0 <= h <= math.log2(n)
        assert abs(h - conditional_entropy_direct(s)) <= 1e-12
        assert abs(h - oracles.cond_entropy(oracles.table_F(s.tables), n)) <= 1e-12


def test_entropy_cap():
    with pytest.raises(CapExceeded):
        conditional_entropy(BobStrategy.constant(4), cap=3)
    with pytest.raises(CapExceeded):
        conditional_entropy_direct(BobStrategy.constant(4), cap=3)


def test_entropy_report_shape():
    rep = entropy_report(BobStrategy.constant(2))
    assert rep["n"] == 2 and rep["H_bits"] == 0.5
    assert rep["strategy"] == {"kind": "table", "n": 2}
    assert all(Fraction(r["p"]) > 0 for r in rep["rows"])
