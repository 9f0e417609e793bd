import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sandiego.errors import CapExceeded, DimensionError, PremiseError
from sandiego.game import PartialClue, bits_to_str, clue_string, permutations, strategy_complexity
from sandiego.hypercube import (
    KSet,
    Restriction,
    halving_trace,
    induced_degree,
    k_halving_strategy,
    max_induced_degree,
    min_max_degree,
    restriction_count,
    verify_theorem1,
)

K5_STRINGS = ["000", "001", "010", "011", "100"]
K5 = KSet.from_members(3, K5_STRINGS)

# frozen from exhaustive search, cross-checked against oracles.min_max_degree
MIN_MAX_DEGREE = {2: 2, 3: 2}
MIN_MAX_DEGREE_N3_WITNESS_HEX = "3d"


def test_encoding_conventions():
    k = KSet.from_members(2, ["00", "01", "10"])
    assert k.mask == 0b0111 and k.hex == "7"
    assert "01" in k and (1, 1) not in k
    assert KSet.from_members(3, ["100"]).mask == 1 << 1  # coordinate 1 is the LSB
    assert KSet.full(3).hex == "ff"
    assert KSet(4, 1).hex == "0001"
    assert K5.strings() == ["000", "100", "010", "001", "011"]


@given(st.integers(1, 6), st.data())
def test_hex_roundtrip(n, data):
    mask = data.draw(st.integers(0, (1 << (1 << n)) - 1))
    k = KSet(n, mask)
    assert KSet.from_hex(n, k.hex) == k
    assert KSet.from_members(n, k.strings()) == k
    assert KSet.from_array(k.array()) == k
    assert k.size == len(k.members())


def test_restriction_count_examples():
    assert restriction_count(K5, "0**") == 4
    assert restriction_count(K5, PartialClue.empty(3)) == 5
    for y in oracles.cube(3):
        assert restriction_count(K5, y) == (y in K5_STRINGS)
    with pytest.raises(DimensionError):
        restriction_count(K5, "0*")


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.data())
def test_restriction_count_splits(n, data):
    k = KSet(n, data.draw(st.integers(0, (1 << (1 << n)) - 1)))
    w = "".join(data.draw(st.lists(st.sampled_from("01*"), min_size=n, max_size=n)))
    pc = PartialClue.from_string(w)
    assert restriction_count(k, pc) == sum(oracles.agrees(y, w) for y in k.strings())
    for i in range(1, n + 1):
        if pc.cell(i) is None:
            total = restriction_count(k, pc.assign(i, 0)) + restriction_count(k, pc.assign(i, 1))
            assert total == restriction_count(k, pc)
            assert len(Restriction(k, pc).refine(i, 1)) == restriction_count(k, pc.assign(i, 1))


def test_k_halving_examples():
    s = k_halving_strategy(K5)
    assert s.F(1, (1, 2, 3)) == 0
    assert clue_string(s, (1, 2, 3), 0)[:2] == (0, 0)
    full = k_halving_strategy(KSet.full(4))
    assert all(clue_string(full, pi, 0) == (0,) * 4 for pi in permutations(4))


def test_k_halving_premise():
    with pytest.raises(PremiseError):
        k_halving_strategy(KSet.parity_class(3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_k_halving_matches_string_oracle(n):
    rng = random.Random(n)
    cube = oracles.cube(n)
    for _ in range(8):
        K = set(rng.sample(cube, rng.randint(2 ** (n - 1) + 1, 2**n)))
        s = k_halving_strategy(KSet.from_members(n, K))
        F = oracles.halving_F(K, n)
        for pi in permutations(n):
            for z in (0, 1):
                assert bits_to_str(clue_string(s, pi, z)) == oracles.b_of(F, n, pi, z)


def test_induced_degree_examples():
    assert all(induced_degree(KSet.full(4), y) == 4 for y in range(16))
    assert induced_degree(KSet.parity_class(3), "000") == 0
    assert induced_degree(K5, "000") == 3
    with pytest.raises(ValueError):
        induced_degree(K5, "111")


def test_max_induced_degree_examples():
    assert max_induced_degree(KSet.full(3)).max_degree == 3
    r = max_induced_degree(K5)
    assert (r.max_degree, bits_to_str(r.witness, 3)) == (3, "000")
    assert sorted(r.degrees.values()) == [1, 2, 2, 2, 3]
    r = max_induced_degree(KSet.from_members(2, ["00", "01", "10"]))
    assert (r.max_degree, bits_to_str(r.witness, 2)) == (2, "00")
    assert r.to_dict() == {"n": 2, "size": 3, "max_degree": 2, "witness": "00", "histogram": {"1": 2, "2": 1}}
    with pytest.raises(ValueError):
        max_induced_degree(KSet(3, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_degrees_against_oracle(n, data):
    k = KSet(n, data.draw(st.integers(1, (1 << (1 << n)) - 1)))
    strings = set(k.strings())
    r = max_induced_degree(k)
    assert r.max_degree == oracles.max_degree(strings)
    for code, d in r.degrees.items():
        assert d == oracles.degree(strings, bits_to_str(code, n)) == induced_degree(k, code)


def test_verify_theorem1_examples():
    r = verify_theorem1(K5)
    assert r.passed and r.complexity <= 3 and r.max_degree == 3
    r = verify_theorem1(KSet.full(3))
    assert r.passed and r.max_degree == 3 and r.complexity <= 3
    with pytest.raises(PremiseError):
        verify_theorem1(KSet.from_members(3, ["000", "011", "101", "110"]))


def test_halving_trace_shape():
    s = k_halving_strategy(K5)
    counts, b = halving_trace(K5, s, (1, 2, 3), 1)
    assert counts == [5, 4, 2, 1] and b == (0, 0, 1)


def test_complexity_never_exceeds_degree_exhaustive_n3():
    for size in range(5, 9):
        for members in itertools.combinations(range(8), size):
            k = KSet.from_members(3, members)
            assert strategy_complexity(k_halving_strategy(k)).value <= max_induced_degree(k).max_degree


def test_min_max_degree_frozen():
    for n, value in MIN_MAX_DEGREE.items():
        r = min_max_degree(n)
        assert r.exact and r.value == value
        assert max_induced_degree(r.witness).max_degree == value and r.witness.majority
    assert min_max_degree(3).witness.hex == MIN_MAX_DEGREE_N3_WITNESS_HEX
    assert min_max_degree(2).examined == 5 and min_max_degree(3).examined == 93


@pytest.mark.parametrize("n", [2, 3])
def test_min_max_degree_oracle(n):
    assert oracles.min_max_degree(n) == MIN_MAX_DEGREE[n]


def test_min_max_degree_n4_and_lower_bound():
    r = min_max_degree(4)
    assert r.examined == sum(1 for m in range(1 << 16) if bin(m).count("1") > 8)
    assert 1 <= r.value <= max_induced_degree(r.witness).max_degree


def test_min_max_degree_sampled_is_upper_bound():
    r = min_max_degree(5, mode="sampled", seed=3, samples=200)
    assert not r.exact and r.witness.size == 17
    assert r.value == max_induced_degree(r.witness).max_degree >= 1
    assert min_max_degree(5, mode="sampled", seed=3, samples=200) == r
    with pytest.raises(CapExceeded):
        min_max_degree(5)
    with pytest.raises(ValueError):
        min_max_degree(5, mode="sampled")
