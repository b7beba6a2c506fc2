import json

import pytest
from hypothesis import given, strategies as st

from diagprod.basegroups import AZMarking, LampMarking, lamp_mul, az_mul
from diagprod.markedgroups import (
    BudgetExceeded,
    MarkedGroup,
    ball,
    ball_isomorphic,
    classical_marking,
    evaluate_word,
    free_reduce,
    inverse_word,
    is_local_embedding,
    local_embedding_radius,
    parse_word,
)
from diagprod.permutations import Perm

from . import oracles

ALT5 = classical_marking("5,7", 1)


def alt5_gens():
    return {"a": oracles.cycle([1, 2, 3, 4, 5], 5), "b": oracles.cycle([1, 2, 3], 5)}


def test_ball_radius_zero():
    B = ball(ALT5, 0)
    assert len(B.elements) == 1 and B.lengths == [0]


def test_alt5_ball_stabilizes_at_60():
    B = ball(ALT5, 12)
    assert len(B.elements) == 60
    assert sum(B.sphere_sizes) == 60


@pytest.mark.parametrize("n", range(0, 5))
def test_alt5_ball_matches_brute_force(n):
    g = alt5_gens()
    gens = {"s": g["a"], "S": oracles.inverse(g["a"]), "t": g["b"], "T": oracles.inverse(g["b"])}
    sizes = oracles.brute_ball_sizes(gens, tuple(range(5)), oracles.compose, lambda p: p, n)
    assert len(ball(ALT5, n).elements) == sizes[-1]


def test_lamplighter_ball_radius_one():
    assert len(ball(LampMarking(), 1).elements) == 5


@pytest.mark.parametrize("n", range(0, 5))
def test_lamplighter_ball_matches_brute_force(n):
    m = LampMarking()
    gens = {c: m.generator(c) for c in m.labels}
    sizes = oracles.brute_ball_sizes(gens, m.identity(), lamp_mul, m.key, n)
    assert [sum(ball(m, n).sphere_sizes[: k + 1]) for k in range(n + 1)] == sizes


@pytest.mark.parametrize("n", range(0, 5))
def test_az_ball_matches_brute_force(n):
    m = AZMarking()
    gens = {c: m.generator(c) for c in m.labels}
    sizes = oracles.brute_ball_sizes(gens, m.identity(), az_mul, m.key, n)
    assert len(ball(m, n).elements) == sizes[-1]


def test_ball_lengths_are_minimal_and_words_evaluate():
    m = LampMarking()
    B = ball(m, 4)
    assert B.lengths == sorted(B.lengths)
    for g, length, w in B.entries:
        assert len(w) == length
        assert m.key(evaluate_word(m, w)) == m.key(g)


def test_ball_determinism():
    a, b = ball(LampMarking(), 4), ball(LampMarking(), 4)
    assert a.words == b.words
    assert a.relation_pattern() == b.relation_pattern()
    assert a.growth_csv() == b.growth_csv()


def test_ball_budget():
    with pytest.raises(BudgetExceeded):
        ball(AZMarking(), 8, budget=100)


def test_growth_csv_and_relations():
    B = ball(ALT5, 3)
    rows = B.growth_csv().strip().splitlines()
    assert rows[0] == "radius,size,new_elements"
    assert rows[1:] == ["0,1,1", "1,5,4", "2,15,10", "3,34,19"]
    data = json.loads(ball(ALT5, 5).relations_json())
    assert data["radius"] == 5 and data["labels"] == ["s", "S", "t", "T"]
    for u, v in data["relations"]:
        assert ALT5.key(evaluate_word(ALT5, u)) == ALT5.key(evaluate_word(ALT5, v))


def test_ball_isomorphic_examples():
    assert ball_isomorphic(ALT5, ALT5, 6)
    assert not ball_isomorphic(ALT5, AZMarking(), 10)
    assert ball_isomorphic(ALT5, AZMarking(), 0)
    # the distinguishing word: s^5 is trivial only in Alt(5)
    assert evaluate_word(ALT5, "sssss").is_identity()
    assert not evaluate_word(AZMarking(), "sssss").is_identity()


def test_local_embedding_radius_examples():
    assert local_embedding_radius(ALT5, ALT5, 7) == 7
    radii = [local_embedding_radius(classical_marking("5,7,9,11,13", m), AZMarking(), 14) for m in range(1, 6)]
    assert radii == sorted(radii)
    assert radii == [2, 3, 4, 5, 6]
    trivial = MarkedGroup({"s": Perm.identity(5), "t": Perm.from_cycles([(1, 2, 3)], 5)})
    assert local_embedding_radius(trivial, ALT5, 5) == 0


def test_ball_isomorphic_is_monotone():
    m = classical_marking("5,7,9,11,13", 3)
    flags = [ball_isomorphic(m, AZMarking(), n) for n in range(8)]
    assert flags == sorted(flags, reverse=True)


def test_is_local_embedding():
    B = ball(ALT5, 2)
    assert is_local_embedding(B, ALT5, ALT5)
    trivial = MarkedGroup({"s": Perm.identity(5), "t": Perm.from_cycles([(1, 2, 3)], 5)})
    assert not is_local_embedding(B, trivial, ALT5)


@given(st.text(alphabet="sStT", max_size=20))
def test_word_helpers(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse_word(w)) == ""
    assert ALT5.key(evaluate_word(ALT5, w)) == ALT5.key(evaluate_word(ALT5, r))
    assert parse_word(list(w)) == w


def test_parse_word_rejects_garbage():
    with pytest.raises(ValueError):
        parse_word("s t 3")
