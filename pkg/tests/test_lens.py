from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from dinv.dtable import DTable, connected_sum_d, reverse_orientation
from dinv.errors import InvalidInput
from dinv.lens import (
    LensSpace,
    lens_d_recursive,
    lens_d_table,
    lens_p1_closed_form,
    lens_p1_table,
    lens_recursive_table,
)
from dinv.obstruct import affine_match

F = Fraction


def test_small_lens_tables():
    assert lens_d_table(LensSpace(1, 1)).values == (0,)
    assert sorted(lens_d_table(LensSpace(2, 1)).values) == [F(-1, 4), F(1, 4)]
    assert lens_d_table(LensSpace(3, 1)).values == (F(1, 2), F(-1, 6), F(-1, 6))


def test_orientation_convention():
    # L(-p, q) carries the reversed orientation
    for p, q in [(5, 2), (7, 3), (9, 4)]:
        assert lens_d_table(LensSpace(-p, q)) == reverse_orientation(lens_d_table(LensSpace(p, q)))


def test_recursion_examples():
    assert lens_d_recursive(1, 1, 0) == 0
    assert sorted(lens_d_recursive(2, 1, i) for i in range(2)) == [F(-1, 4), F(1, 4)]
    assert sorted(lens_d_recursive(3, 1, i) for i in range(3)) == [F(-1, 6), F(-1, 6), F(1, 2)]


def test_recursion_agrees_with_lattice_up_to_12():
    for p in range(2, 13):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            lattice = lens_d_table(LensSpace(p, q))
            oracle = lens_recursive_table(p, q)
            assert lattice.multiset() == oracle.multiset()
            assert affine_match(lattice, oracle) is not None


def test_closed_form_examples():
    assert lens_p1_closed_form(1, 0) == 0
    assert (lens_p1_closed_form(2, 0), lens_p1_closed_form(2, 1)) == (F(1, 4), F(-1, 4))
    assert lens_p1_table(4).values == (F(3, 4), F(0), F(-1, 4), F(0))


@pytest.mark.parametrize("p", range(1, 51))
def test_closed_form_properties(p):
    t = lens_p1_table(p)
    assert t.values == lens_d_table(LensSpace(p, 1)).values
    assert all(t[i] == t[-i] for i in range(p))
    scaled = [4 * p * v + p for v in t.values]
    assert scaled == [(2 * i - p) ** 2 for i in range(p)]
    if p % 2 == 0:
        assert sum(scaled) % 4 == 0


def test_lens_space_normalization():
    assert LensSpace(7, 10).q == 3
    assert LensSpace(-1, 5).q == 1
    with pytest.raises(InvalidInput):
        LensSpace(0, 1)
    with pytest.raises(InvalidInput):
        LensSpace(6, 4)


def test_reverse_orientation_examples():
    assert reverse_orientation(DTable.cyclic([F(0)])).values == (0,)
    assert reverse_orientation(DTable.cyclic([F(1, 4), F(-1, 4)])).values == (F(-1, 4), F(1, 4))
    assert reverse_orientation(lens_p1_table(3)).values == (F(-1, 2), F(1, 6), F(1, 6))


def test_connected_sum_examples():
    a = lens_p1_table(3)
    assert connected_sum_d(a, DTable.cyclic([F(0)])) == a
    two = DTable.cyclic([F(1, 4), F(-1, 4)])
    assert sorted(connected_sum_d(two, two).values) == [F(-1, 2), 0, 0, F(1, 2)]
    assert connected_sum_d(a, DTable.cyclic([F(-2)])).values == tuple(v - 2 for v in a.values)


def test_connected_sum_coprime_is_cyclic():
    s = connected_sum_d(lens_p1_table(2), lens_p1_table(3))
    assert s.is_cyclic and len(s) == 6
    for i in range(2):
        for j in range(3):
            k = next(k for k in range(6) if k % 2 == i and k % 3 == j)
            assert s[k] == lens_p1_table(2)[i] + lens_p1_table(3)[j]


def test_dtable_json_round_trip():
    t = lens_d_table(LensSpace(7, 3))
    assert DTable.from_json(t.to_json()) == t
    assert t.to_json()["det"] == 7
    first = t.to_json()["entries"][0]
    assert first["label"] == 0 and Fraction(first["d"]) == t[0]


coprime = st.tuples(st.integers(2, 30), st.integers(1, 29)).filter(
    lambda pq: pq[1] < pq[0] and gcd(*pq) == 1
)


@settings(deadline=None)
@given(coprime)
def test_lens_table_invariants(pq):
    p, q = pq
    t = lens_d_table(LensSpace(p, q))
    assert len(t) == p
    assert t.conjugation_center() is not None
    assert reverse_orientation(reverse_orientation(t)) == t
    # d(L(p,q)) = d(L(p,q')) for q q' = 1 mod p, as multisets
    qi = pow(q, -1, p)
    assert lens_d_table(LensSpace(p, qi)).multiset() == t.multiset()
