import csv as csv_module
import io
import json
import random
from fractions import Fraction
from math import factorial, prod

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diagprod.characters.alternating import (
    alt_classes,
    alt_orthogonality_ok,
    alt_table,
    max_nontrivial_value,
    normalized_value,
    restrict_to_alt,
    splits_in_alt,
    standard_normalized_value,
)
from diagprod.characters.partitions import (
    Partition,
    cycle_types,
    dimension,
    partitions,
)
from diagprod.characters.surds import Surd, parse_quadratic
from diagprod.characters.symmetric import mn_value, sym_orthogonality_defect, sym_table
from diagprod.characters.tables import alt_table_csv, sym_table_csv, table_json
from diagprod.characters.traces import (
    UndefinedValue,
    alt_class_function,
    alt_elements,
    constant_function,
    delta_e,
    gram_psd_check,
    thoma_tensor,
    trivial_extension,
)
from diagprod.permutations import CycleType, Perm, cycle_type

from . import oracles

partition_st = st.integers(1, 14).flatmap(lambda n: st.sampled_from(list(partitions(n))))


def test_partition_counts():
    assert [len(list(partitions(n))) for n in range(17)] == oracles.PARTITION_COUNTS


@given(partition_st)
def test_partition_invariants(lam):
    assert lam.conjugate().conjugate() == lam
    if lam.is_self_conjugate():
        h = lam.diagonal_hooks()
        assert len(set(h)) == len(h) and all(x % 2 == 1 for x in h)
        assert sum(h) == lam.n


def test_mn_small_cases():
    for n in range(1, 9):
        for mu in cycle_types(n):
            assert mn_value((n,), mu) == 1
            assert mn_value((1,) * n, mu) == mu.sign()
            if n >= 2:
                # trace of the permutation matrix minus one
                p = mu.representative()
                assert mn_value((n - 1, 1), mu) == oracles.fixed_points(p.key) - 1


def test_mn_size_mismatch():
    with pytest.raises(ValueError):
        mn_value((3, 1), CycleType((3,), 0))


@given(st.integers(2, 8).flatmap(lambda n: st.tuples(st.sampled_from(list(partitions(n))), st.sampled_from(cycle_types(n)))))
def test_mn_against_frobenius(pair):
    lam, mu = pair
    assert mn_value(lam, mu) == oracles.frobenius_character(tuple(lam), mu.partition())


def test_dimension_examples():
    assert dimension((6,)) == 1
    assert dimension((6, 1)) == 6
    assert dimension((2, 2)) == 2


@given(partition_st)
def test_hook_formula_matches_mn(lam):
    n = lam.n
    assert dimension(lam) == factorial(n) // prod(lam.hooks())
    assert mn_value(lam, CycleType((), n)) == dimension(lam)


@pytest.mark.parametrize("n", range(1, 13))
def test_dimension_sums(n):
    dims = [dimension(lam) for lam in partitions(n)]
    assert sum(dims) == oracles.INVOLUTIONS[n]
    assert oracles.sum_of_squares_check(dims, n)


@pytest.mark.parametrize("n", range(1, 13))
def test_sym_row_orthogonality(n):
    assert sym_orthogonality_defect(n) == 0


def test_sym_orthogonality_spot_14():
    lams = [Partition((14,)), Partition((7, 7)), Partition((5, 4, 3, 2))]
    for lam in lams:
        assert mn_value(lam, CycleType((), 14)) == dimension(lam)


def _match_rows(ours, theirs):
    ours = np.array(ours, dtype=complex)
    for row in ours:
        assert min(np.max(np.abs(row - t)) for t in theirs) < 1e-9
    assert len(ours) == len(theirs)


@pytest.mark.parametrize("n", [4, 5])
def test_sym_table_against_class_sums(n):
    classes, ref = oracles.character_table(oracles.sym_elements(n))
    lams, cts, T = sym_table(n)
    col_of = {}
    for j, c in enumerate(classes):
        p = Perm(c[0], zero_based=True)
        col_of[j] = cts.index(cycle_type(p))
    ours = [[row[col_of[j]] for j in range(len(classes))] for row in T]
    _match_rows(ours, ref)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_alt_table_against_class_sums(n):
    classes, ref = oracles.character_table(oracles.alt_elements(n))
    chars, _, _ = alt_table(n)
    ours = []
    for chi in chars:
        ours.append([complex(chi.value(Perm(c[0], zero_based=True))) for c in classes])
    _match_rows(ours, ref)


def test_restrict_examples():
    (triv,) = restrict_to_alt((5,))
    assert triv.is_trivial
    assert len(restrict_to_alt((2, 1, 1))) == 1
    plus, minus = restrict_to_alt((3, 1, 1))
    five_a = next(c for c in alt_classes(5) if c.cycle_type.cycles == (5,) and c.half == 1)
    golden = {plus.value(five_a), minus.value(five_a)}
    assert golden == {parse_quadratic("1+1*sqrt(5)/2"), parse_quadratic("1-1*sqrt(5)/2")}


@pytest.mark.parametrize("n", range(3, 11))
def test_alt_orthogonality(n):
    assert alt_orthogonality_ok(n)


@pytest.mark.parametrize("n", range(4, 10))
def test_split_pairs(n):
    odd = Perm.from_cycles([(1, 2)], n)
    rng = random.Random(n)
    for lam in partitions(n):
        pair = restrict_to_alt(lam)
        if len(pair) != 2:
            continue
        plus, minus = pair
        for cls in alt_classes(n):
            g = cls.representative()
            assert plus.value(cls) + minus.value(cls) == Surd.of(mn_value(lam, cls.cycle_type))
            assert plus.value(g.conjugate(odd)) == minus.value(g)
        for _ in range(5):
            # class of a random conjugate is unchanged under even conjugation
            x = Perm.from_cycles([(1, 2, 3)], n)
            g = alt_classes(n)[rng.randrange(len(alt_classes(n)))].representative()
            assert plus.value(g.conjugate(x)) == plus.value(g)


def test_splitting_rule():
    assert splits_in_alt((5,))
    assert splits_in_alt((5, 3, 1))
    assert not splits_in_alt((3, 3))
    assert not splits_in_alt((2, 2, 1))


@pytest.mark.parametrize("n", range(5, 12))
def test_normalized_values(n):
    three = CycleType((3,), n - 3)
    for chi in [c for lam in partitions(n) for c in restrict_to_alt(lam)]:
        assert normalized_value(chi, CycleType((), n)) == Surd.of(1)
        for cls in alt_classes(n):
            assert normalized_value(chi, cls).abs2() <= Surd.of(1)
    (std,) = restrict_to_alt((n - 1, 1))
    assert normalized_value(std, three) == Surd.of(Fraction(n - 4, n - 1))
    (sgn,) = restrict_to_alt((1,) * n)
    assert all(normalized_value(sgn, cls) == Surd.of(1) for cls in alt_classes(n))


def test_standard_closed_form():
    assert standard_normalized_value(7, 3) == Fraction(3, 6)
    for d in (5, 7, 9):
        for s in range(0, d + 1):
            assert standard_normalized_value(d, s) == Fraction(d - s - 1, d - 1)


def test_max_nontrivial_examples():
    v, _ = max_nontrivial_value(7, CycleType((), 7))
    assert v == Surd.of(1)
    v, _ = max_nontrivial_value(7, CycleType((7,), 0))
    assert v.abs2() < Surd.of(1)


def test_full_support_scan():
    # exact maxima over full-support classes for n = 7..13
    scan = {}
    for n in range(7, 14):
        best = Fraction(0)
        for mu in cycle_types(n):
            if mu.fixed == 0 and mu.is_even():
                v, _ = max_nontrivial_value(n, mu)
                best = max(best, v.abs2().rational())
        scan[n] = best
    expected = {7: Fraction(1, 36), 8: Fraction(9, 49), 9: Fraction(1, 49), 10: Fraction(1, 81),
                11: Fraction(1, 100), 12: Fraction(25, 1089), 13: Fraction(1, 144)}
    assert scan == expected
    # fixed-point-free involutions dominate at even n, so only odd n decreases
    odd = [scan[n] for n in (7, 9, 11, 13)]
    assert odd == sorted(odd, reverse=True)
    # independent check of the n = 8 maximum: chi^(4,4) on 2^4 is 6 of degree 14
    assert oracles.frobenius_character((4, 4), (2, 2, 2, 2)) == 6 and dimension((4, 4)) == 14


def test_max_nontrivial_cap():
    with pytest.raises((ValueError, ResourceWarning, MemoryError)):
        max_nontrivial_value(30, CycleType((3,), 27), cap=16)


def test_table_outputs():
    csv = alt_table_csv(5)
    assert "1+1*sqrt(5)/2" in csv and "1-1*sqrt(5)/2" in csv
    rows = list(csv_module.reader(io.StringIO(sym_table_csv(4))))
    assert rows[0][0] == "partition"
    _, _, T = sym_table(4)
    assert [[int(v) for v in r[1:]] for r in rows[1:]] == T
    data = json.loads(table_json(5))
    assert data["n"] == 5


surds = st.builds(
    lambda a, b, D: Surd.of(Fraction(a)) + Surd.of(Fraction(b)) * Surd.sqrt(D),
    st.integers(-20, 20), st.integers(-20, 20), st.sampled_from([5, 2, 3, -1, -3, 13]),
)


@given(surds, surds)
def test_surd_arithmetic_matches_complex(x, y):
    try:
        s, p = x + y, x * y
    except ValueError:
        return  # different quadratic fields
    assert abs(complex(s) - (complex(x) + complex(y))) < 1e-9
    assert abs(complex(p) - complex(x) * complex(y)) < 1e-7
    assert abs(complex(x.abs2()) - abs(complex(x)) ** 2) < 1e-7
    assert x.conjugate().conjugate() == x


@given(surds)
def test_surd_text_roundtrip(x):
    assert parse_quadratic(str(x)) == x


def test_surd_text_format():
    phi = parse_quadratic("1+1*sqrt(5)/2")
    assert abs(complex(phi) - (1 + 5 ** 0.5) / 2) < 1e-15
    assert str(Surd.sqrt(5)) == "0+2*sqrt(5)/2"


ALT5 = alt_elements(5)


def test_gram_examples():
    assert gram_psd_check(constant_function(1), ALT5)
    assert gram_psd_check(delta_e(), ALT5)
    for chi in alt_table(5)[0]:
        assert gram_psd_check(alt_class_function(chi), ALT5)


def test_gram_detects_non_psd():
    minus = lambda g: 1 if g.is_identity() else -1
    assert not gram_psd_check(minus, ALT5[:10])


def test_gram_undefined():
    f = lambda g: {(): 1}[tuple(g.cycles())]
    with pytest.raises((UndefinedValue, KeyError)):
        gram_psd_check(f, ALT5[:5])


def test_thoma_tensor():
    one = thoma_tensor([constant_function(1), constant_function(1)])
    rng = random.Random(3)
    sample = [(rng.choice(ALT5), rng.choice(ALT5)) for _ in range(20)]
    assert all(one(x) == 1 for x in sample)
    mixed = thoma_tensor([delta_e(), constant_function(1)])
    e = Perm.identity(5)
    assert all(mixed(x) == 0 for x in sample if not x[0].is_identity())
    assert mixed((e, ALT5[7])) == 1
    (std,) = restrict_to_alt((4, 1))
    f = thoma_tensor([alt_class_function(std), alt_class_function(std)])
    assert gram_psd_check(f, sample_tuples(sample))


def sample_tuples(sample):
    from diagprod.characters.traces import TupleElement

    return [TupleElement(x) for x in sample]


def test_trivial_extension():
    in_alt4 = lambda g: g(5) == 5
    f = trivial_extension(constant_function(1), in_alt4)
    assert [f(g) for g in ALT5] == [1 if in_alt4(g) else 0 for g in ALT5]
    assert gram_psd_check(f, ALT5)
    whole = trivial_extension(constant_function(1), lambda g: True)
    assert all(whole(g) == 1 for g in ALT5)
    de = trivial_extension(delta_e(), in_alt4)
    assert all(de(g) == (1 if g.is_identity() else 0) for g in ALT5)
