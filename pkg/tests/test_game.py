import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sandiego.errors import CapExceeded, DimensionError, InvalidStrategy
from sandiego.game import (
    BobStrategy,
    PartialClue,
    bits_to_str,
    check_t_restricted,
    clue_string,
    decode_bits,
    encode_bits,
    exact_game_complexity,
    iter_outcomes,
    outcome_table,
    permutations,
    random_table_strategy,
    relabel,
    run_game,
    strategy_complexity,
    suspect_set,
    suspect_witnesses,
    table_keys,
)
from sandiego.hypercube import KSet, k_halving_strategy

K5 = KSet.from_members(3, ["000", "001", "010", "011", "100"])


@pytest.fixture
def const0():
    return BobStrategy.constant(2)


@pytest.fixture
def halving5():
    return k_halving_strategy(K5)


def test_clue_string_examples(const0, halving5):
    assert clue_string(const0, (1, 2), 1) == (0, 1)
    assert clue_string(const0, (2, 1), 1) == (1, 0)
    assert clue_string(halving5, (1, 2, 3), 1) == (0, 0, 1)


def test_clue_string_rejects_bad_input(const0):
    with pytest.raises(DimensionError):
        clue_string(const0, (1, 2, 3), 0)
    with pytest.raises(ValueError):
        clue_string(const0, (1, 1), 0)
    with pytest.raises(ValueError):
        clue_string(const0, (1, 2), 2)


def test_missing_prefix_signals_invalid_strategy():
    s = BobStrategy.from_tables(2, [{(1,): 0}])
    with pytest.raises(InvalidStrategy):
        clue_string(s, (2, 1), 0)
    with pytest.raises(InvalidStrategy):
        s.check_complete()


def test_table_validation():
    with pytest.raises(InvalidStrategy):
        BobStrategy.from_tables(3, [{(1,): 0}])
    with pytest.raises(InvalidStrategy):
        BobStrategy.from_tables(2, [{(1, 2): 0}])
    with pytest.raises(InvalidStrategy):
        BobStrategy.from_tables(2, [{(1,): 2}])
    with pytest.raises(ValueError):
        BobStrategy.constant(1)


def test_suspect_set_examples(const0, halving5):
    assert suspect_set(const0, (0, 0)) == {1, 2}
    assert suspect_set(const0, "11") == frozenset()
    assert suspect_set(halving5, "001") == {3}


def test_suspect_witnesses_reproduce_b(halving5):
    for b in ("000", "001", "010", "100", "111"):
        for city, (rho, u) in suspect_witnesses(halving5, b).items():
            assert rho[-1] == city
            assert bits_to_str(clue_string(halving5, rho, u)) == b


def test_suspect_set_cap(const0):
    with pytest.raises(CapExceeded):
        suspect_set(BobStrategy.constant(4), "0000", cap=3)


def test_strategy_complexity_examples(const0, halving5):
    assert tuple(strategy_complexity(const0)) == (2, (1, 2), 0)
    assert strategy_complexity(halving5).value <= 3


def test_exact_game_complexity_n2():
    result = exact_game_complexity(2)
    assert result.value == 2
    assert strategy_complexity(result.strategy).value == 2


def test_exact_game_complexity_cap():
    with pytest.raises(CapExceeded):
        exact_game_complexity(4)


def test_run_game_examples(const0, halving5):
    out = run_game(const0, (1, 2), 0)
    assert out.to_dict() == {"pi": [1, 2], "z": 0, "b": "00", "suspects": [1, 2], "cost": 2}
    out = run_game(halving5, (1, 2, 3), 1)
    assert (bits_to_str(out.b), out.suspects, out.cost) == ("001", {3}, 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_witness_soundness_and_kernel_against_oracle(n):
    rng = random.Random(100 + n)
    for _ in range(5):
        s = random_table_strategy(n, rng)
        F = oracles.table_F(s.tables)
        stream = list(iter_outcomes(s))
        assert [(pi, z) for pi, z, _ in stream] == [(pi, z) for pi in permutations(n) for z in (0, 1)]
        for pi, z, code in stream:
            assert bits_to_str(code, n) == oracles.b_of(F, n, pi, z)
            assert bits_to_str(clue_string(s, pi, z)) == oracles.b_of(F, n, pi, z)
        table = outcome_table(s)
        for pi, z, code in stream[:: max(1, len(stream) // 12)]:
            assert pi[-1] in table.suspects(code)
            assert pi[-1] in run_game(s, pi, z).suspects


@pytest.mark.parametrize("n", [2, 3, 4])
def test_complexity_against_oracle(n):
    rng = random.Random(n)
    for _ in range(10):
        s = random_table_strategy(n, rng)
        assert strategy_complexity(s).value == oracles.complexity(oracles.table_F(s.tables), n)


def test_unreachable_strings_have_no_suspects():
    s = BobStrategy.constant(3)
    table = outcome_table(s)
    for code in range(8):
        assert (suspect_set(s, decode_bits(code, 3)) == frozenset()) == (code not in table.counts)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_t_restriction(n):
    assert check_t_restricted(random_table_strategy(n, n))
    assert check_t_restricted(k_halving_strategy(KSet.full(n)))


def test_t_restriction_detects_violation():
    class Peeking(BobStrategy):
        def F(self, t, pi):  # looks at the city after the prefix
            return pi[t] % 2 if t < len(pi) else 0

    assert not check_t_restricted(Peeking.constant(3))


@pytest.mark.parametrize("n", [3, 4])
def test_monotonicity_of_knowledge(n):
    s = random_table_strategy(n, 7)
    for pi in permutations(n):
        b = clue_string(s, pi, 0)
        for t in range(1, n):
            for tail in itertools.permutations(pi[t:]):
                other = clue_string(s, pi[:t] + tail, 1)
                assert all(b[c - 1] == other[c - 1] for c in pi[:t])


def test_memoryless_conversion_matches_halving():
    h = k_halving_strategy(K5)
    table = BobStrategy.from_memoryless(3, h.rule)
    assert table.kind == "table"
    table.check_complete()
    for pi in permutations(3):
        for z in (0, 1):
            assert clue_string(table, pi, z) == clue_string(h, pi, z)
    assert h.to_table().tables == table.tables


def test_memoryless_mapping_form():
    # always echo whether the position is even
    rule = {}
    for w in itertools.product("01*", repeat=3):
        for pos in range(1, 4):
            rule[("".join(w), pos)] = pos % 2 == 0
    s = BobStrategy.from_memoryless(3, rule)
    assert clue_string(s, (2, 1, 3), 0) == (0, 1, 0)


def test_relabel_conjugates_clue_strings():
    s = random_table_strategy(4, 11)
    sigma = (3, 1, 4, 2)
    r = relabel(s, sigma)
    for pi in permutations(4):
        for z in (0, 1):
            b = clue_string(s, pi, z)
            rb = clue_string(r, tuple(sigma[c - 1] for c in pi), z)
            assert all(rb[sigma[j] - 1] == b[j] for j in range(4))


def test_partial_clue_basics():
    w = PartialClue.from_string("0*1")
    assert str(w) == "0*1" and w.assigned == 2
    assert w.cell(1) == 0 and w.cell(2) is None and w.cell(3) == 1
    assert str(w.assign(2, 1)) == "011"
    with pytest.raises(ValueError):
        w.assign(1, 1)
    assert str(PartialClue.empty(4)) == "****"


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_bits_roundtrip(bits):
    assert decode_bits(encode_bits(bits), len(bits)) == tuple(bits)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32), st.data())
def test_witness_soundness_property(n, seed, data):
    s = random_table_strategy(n, seed)
    pi = tuple(data.draw(st.permutations(range(1, n + 1))))
    z = data.draw(st.integers(0, 1))
    assert pi[-1] in outcome_table(s).suspects(encode_bits(clue_string(s, pi, z)))


def test_outcome_table_workers_identical():
    s = random_table_strategy(5, 5)
    a, b = outcome_table(s), outcome_table(s, workers=3)
    assert a.counts == b.counts and a.first == b.first
    assert list(a.counts) == list(b.counts)


def test_table_keys_count():
    assert len(table_keys(3)) == 9
    assert len(table_keys(4)) == 4 + 12 + 24
