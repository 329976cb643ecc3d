import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minbasis.errors import CapExceeded, EmptySupport, NonPositive, PreconditionViolated
from minbasis.partition import PartitionSpec, nathanson, part_of
from minbasis.radix import (Decomposition, classify_element, enumerate_part_elements,
                            lemma2_decompose, pack_support, support_of, verify_decomposition)

from oracles import basis_by_classification, lemma2_search
from strategies import lemma2_instance, specs


@pytest.mark.parametrize("F, n", [((0,), 1), ((0, 1, 2), 7), ((1, 3), 10)])
def test_pack_support(F, n):
    assert pack_support(F) == n


@pytest.mark.parametrize("n, F", [(1, (0,)), (10, (1, 3)), (21, (0, 2, 4))])
def test_support_of(n, F):
    assert support_of(n) == F


def test_support_errors():
    with pytest.raises(EmptySupport):
        pack_support([])
    with pytest.raises(NonPositive):
        support_of(0)
    with pytest.raises(ValueError):
        pack_support([1, 1])


def test_round_trip_to_2_20():
    for n in range(1, (1 << 20) + 1):
        assert pack_support(support_of(n)) == n


def test_classify(even_odd):
    assert classify_element(even_odd, 5) == 1
    assert classify_element(even_odd, 6) is None
    spec = PartitionSpec(3, (2, 3), 3, (1, 3, 2))
    for k in range(12):
        assert classify_element(spec, 1 << k) == part_of(spec, k)


def test_enumerate_examples(even_odd):
    assert enumerate_part_elements(even_odd, 1, 5) == [1, 4, 5, 16, 17, 20, 21]
    assert enumerate_part_elements(even_odd, 2, 3) == [2, 8, 10]
    spec = PartitionSpec(2, (1, 1, 1, 2), 2, (1, 1 + 1))
    assert enumerate_part_elements(spec, 2, 3) == [8]


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_part_elements(nathanson(2), 1, 60)
    assert len(enumerate_part_elements(nathanson(2), 1, 20, subset_cap=11)) == 2**11 - 1


@given(specs(max_period=6))
def test_enumeration_properties(spec):
    T = 9
    union = []
    for j in range(1, spec.h + 1):
        els = enumerate_part_elements(spec, j, T)
        k = len(spec.positions(j, T))
        assert len(els) == 2**k - 1
        assert all(a < b for a, b in zip(els, els[1:]))
        assert all(classify_element(spec, a) == j for a in els)
        union.extend(els)
    # disjoint union equals the classification oracle below 2^(T+1)
    assert len(union) == len(set(union))
    assert sorted(union) == basis_by_classification(spec, (1 << (T + 1)) - 1)


class TestDecomposeExamples:
    def test_pair(self):
        d = lemma2_decompose([2], [1, 1])
        assert d.sets == ((1, 2),) and d.leftover == ()

    def test_two_targets(self):
        d = lemma2_decompose([0, 2], [0, 1, 1])
        assert d.sets == ((1,), (2, 3))
        assert lemma2_search([0, 2], [0, 1, 1]) is not None

    def test_full_chain(self):
        d = lemma2_decompose([3], [0, 0, 1, 2])
        assert d.sets == ((1, 2, 3, 4),)

    def test_leftover_kept(self):
        # five copies of 2: one serves the target, four sum to 8 ≡ 0 (mod 4)
        d = lemma2_decompose([1], [1, 1, 1, 1, 1])
        assert verify_decomposition(d)
        assert sum(1 << d.terms[k - 1] for k in d.leftover) % 4 == 0
        assert d.leftover

    @pytest.mark.parametrize("targets, terms", [
        ([2], [1]),            # congruence fails
        ([2], [3]),            # term above w_s
        ([2, 1], [1, 2]),      # targets not increasing
        ([], [0]),
    ])
    def test_precondition(self, targets, terms):
        with pytest.raises(PreconditionViolated):
            lemma2_decompose(targets, terms)


class TestVerify:
    def test_wrong_sum(self):
        assert not verify_decomposition(Decomposition([2], [1, 1], [[1]]))

    def test_manual_ok(self):
        assert verify_decomposition(Decomposition([1, 2], [0, 0, 1, 1], [[1, 2], [3, 4]]))

    def test_overlap_and_empty(self):
        assert not verify_decomposition(Decomposition([1, 2], [0, 0, 1, 1], [[1, 2], [2, 3, 4]]))
        assert not verify_decomposition(Decomposition([1], [1], [[]]))

    def test_bad_leftover(self):
        assert not verify_decomposition(Decomposition([1], [1, 0], [[1]], leftover=()))
        assert not verify_decomposition(Decomposition([1], [1, 0], [[1]]))


def test_decompose_random_constructed():
    rng = random.Random(1234)
    for _ in range(300):
        targets, terms = lemma2_instance(rng)
        d = lemma2_decompose(targets, terms)
        assert verify_decomposition(d)


def test_decompose_exhaustive_small():
    rng = random.Random(99)
    checked = 0
    while checked < 150:
        targets, terms = lemma2_instance(rng, s_max=4, t_max=12, w_max=8)
        d = lemma2_decompose(targets, terms)
        assert verify_decomposition(d)
        assert lemma2_search(targets, terms) is not None
        checked += 1


@given(st.lists(st.integers(0, 5), min_size=1, max_size=9),
       st.sets(st.integers(0, 5), min_size=1, max_size=3))
def test_decompose_arbitrary_inputs(terms, target_set):
    """Congruence holds iff decomposition succeeds; then exhaustive search agrees."""
    targets = sorted(target_set)
    top = targets[-1]
    terms = [x for x in terms if x <= top]
    mod = 1 << (top + 1)
    congruent = sum(1 << w for w in targets) % mod == sum(1 << x for x in terms) % mod
    if congruent:
        d = lemma2_decompose(targets, terms)
        assert verify_decomposition(d)
        assert lemma2_search(targets, terms) is not None
    else:
        with pytest.raises(PreconditionViolated):
            lemma2_decompose(targets, terms)


def test_decomposition_deterministic():
    targets, terms = [1, 3], [0, 0, 2, 2]
    assert lemma2_decompose(targets, terms) == lemma2_decompose(targets, terms)
    d = lemma2_decompose(targets, terms)
    # lowest level merges first, lowest indices first
    assert d.sets[0] == (1, 2)
