import random

import pytest
from hypothesis import given, settings

from minbasis.errors import ConditionUnavailable, NotABasisElement, TTooSmall
from minbasis.minimality import (EMPIRICAL_SUPPORTED, REFUTED_IN_WINDOW, THEOREM_PROVEN, THM1,
                                 THM2, e_a_from_elements, e_a_window, removability_scan,
                                 verify_witness, witness, witness_membership, witness_suite)
from minbasis.partition import PartitionSpec, ling_tang, nathanson, sun
from minbasis.sumset import build_basis_window

from oracles import nested_sumset, representable
from strategies import specs


def test_e_a_synthetic():
    assert e_a_from_elements([1, 2, 3], 3, 2, 6) == [5, 6]


def test_e_a_contains_witness(even_odd):
    assert 11 in e_a_window(even_odd, 1, 2, 3)


def test_e_a_no_effect():
    # removing 7 from {1,...,7} changes nothing in 2A below 8
    assert e_a_from_elements(range(1, 8), 7, 2, 7) == []


def test_e_a_rejects_non_element(even_odd):
    with pytest.raises(NotABasisElement):
        e_a_window(even_odd, 3, 2, 4)


def test_e_a_matches_nested_loops():
    rng = random.Random(7)
    pool = [nathanson(2), nathanson(3), ling_tang(0), sun(2, 3), sun(3, 2),
            PartitionSpec(2, (1, 1, 1), 2, (2, 1)), PartitionSpec(3, (2,), 4, (1, 3, 2, 1)),
            PartitionSpec(2, (), 5, (1, 2, 2, 1, 2))]
    for _ in range(20):
        spec = rng.choice(pool)
        T = 9 if spec.h == 3 else 11
        elements, window = build_basis_window(spec, T)
        a = rng.choice([x for x in elements if x < 200])
        full = nested_sumset(elements, spec.h, window.N)
        rest = nested_sumset([x for x in elements if x != a], spec.h, window.N)
        assert e_a_window(spec, a, spec.h, T) == sorted(full - rest)


class TestWitness:
    def test_even_odd(self, even_odd):
        assert witness(even_odd, 1, 3, THM1) == 11
        assert witness(even_odd, 2, 3, THM1) == 7

    def test_ling_tang(self):
        assert witness(ling_tang(0), 1, 5, THM1) == 61

    def test_t_too_small(self, even_odd):
        with pytest.raises(TTooSmall):
            witness(even_odd, 8, 3, THM1)

    def test_thm1_block_bound(self):
        # for a = 1 the low block is [0, 5] under ling_tang(0)
        with pytest.raises(TTooSmall):
            witness(ling_tang(0), 1, 4, THM1)

    def test_condition_unavailable(self):
        with pytest.raises(ConditionUnavailable):
            witness(PartitionSpec(2, (1, 1, 1), 2, (2, 1)), 1, 6, THM1)
        with pytest.raises(ConditionUnavailable):
            witness(nathanson(2), 1, 6, THM2)

    def test_thm2_sun(self):
        spec = sun(2, 2)
        # W_1 = {0,1,4,5,...}, W_2 = {2,3,6,7,...}
        assert witness(spec, 1, 4, THM2) == 1 + 4 + 8

    def test_not_an_element(self, even_odd):
        with pytest.raises(NotABasisElement):
            witness(even_odd, 3, 5, THM1)


class TestVerify:
    def test_even_odd(self, even_odd):
        r = verify_witness(even_odd, 1, 2, 11, 3)
        assert (r.in_hA, r.in_hA_minus_a, r.verified) == (True, False, True)
        assert verify_witness(even_odd, 2, 2, 7, 3).verified

    def test_synthetic_fail(self):
        assert witness_membership([1, 2, 3], 1, 2, 4) == (True, True)

    def test_not_in_ha(self):
        assert witness_membership([5, 9], 5, 2, 12) == (False, False)

    def test_membership_against_recursion(self):
        rng = random.Random(11)
        for _ in range(40):
            elements = sorted(rng.sample(range(1, 80), 8))
            a = rng.choice(elements)
            h = rng.randint(1, 3)
            n = rng.randint(1, 200)
            rest = [x for x in elements if x != a]
            want = (representable(n, elements, h),
                    representable(n, elements, h) and representable(n, rest, h))
            assert witness_membership(elements, a, h, n) == want


def test_witness_suite_small():
    records = witness_suite(nathanson(2), 2, [6, 8], 40)
    assert records and all(r.verified for r in records)
    keys = [(r.a, r.T, r.mode) for r in records]
    assert keys == sorted(keys)


@settings(max_examples=15, deadline=None)
@given(specs(h_values=(2, 3), max_period=6, max_prefix=2))
def test_witness_sound_when_admissible(spec):
    records = witness_suite(spec, spec.h, [9], 60)
    assert all(r.verified for r in records)


class TestRemovability:
    def test_even_odd_proven(self, even_odd):
        rep = removability_scan(even_odd, 2, 14, 64)
        assert rep.verdict == THEOREM_PROVEN
        assert all(r.e_a_size > 0 for r in rep.results)
        assert rep.removable == [] and rep.unverified_witnesses == []
        assert rep.coverage_threshold == 2

    def test_negative_spec(self, thmb_negative):
        rep = removability_scan(thmb_negative, 2, 14, 64)
        assert rep.verdict == REFUTED_IN_WINDOW
        assert rep.removable

    def test_sun_three(self):
        rep = removability_scan(sun(3, 2), 3, 12, 32)
        assert REFUTED_IN_WINDOW not in {r.verdict for r in rep.results}
        assert rep.verdict == THEOREM_PROVEN

    def test_uncertified_is_empirical(self):
        # h differs from the partition's part count: no certificate applies
        rep = removability_scan(nathanson(2), 3, 11, 16)
        assert rep.certificates == ()
        assert rep.verdict in (EMPIRICAL_SUPPORTED, REFUTED_IN_WINDOW)

    def test_matches_two_window_route(self, thmb_negative):
        rep = removability_scan(thmb_negative, 2, 11, 40)
        for r in rep.results:
            e = e_a_window(thmb_negative, r.a, 2, 11)
            assert r.e_a_size == len(e)
            assert (r.e_a_min, r.e_a_max) == ((e[0], e[-1]) if e else (None, None))
            assert r.e_a_in_tail == sum(1 for n in e if n >= rep.tail_start)

    def test_results_sorted(self, even_odd):
        rep = removability_scan(even_odd, 2, 10, 100, workers=3)
        assert [r.a for r in rep.results] == sorted(r.a for r in rep.results)
        assert rep.to_dict() == removability_scan(even_odd, 2, 10, 100).to_dict()


def test_e_a_inside_ha(even_odd):
    elements, window = build_basis_window(even_odd, 9)
    hA = nested_sumset(elements, 2, window.N)
    for a in elements[:10]:
        assert set(e_a_window(even_odd, a, 2, 9)) <= hA
