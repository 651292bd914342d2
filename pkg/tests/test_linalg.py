from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from valgebroid.errors import DimensionError, InputError, MembershipError
from valgebroid.linalg import (Echelon, SparseVector, Subspace, format_rational, kernel,
                               parse_rational, quotient_coords, rref)

from oracles import rank as dense_rank

V = SparseVector.from_dense


def test_rref_examples():
    assert rref([], 2)[1] == 0
    assert rref([V([1, 0]), V([0, 1]), V([1, 1])])[1] == 2
    space, r = rref([V([2, 4]), V([1, 2])])
    assert r == 1 and space.rows == (V([1, 2]),)


def test_rref_dimension_mismatch():
    with pytest.raises(DimensionError):
        rref([V([1, 0]), V([1, 0, 0])])


def test_kernel_examples():
    assert kernel([V([1, 0, 0]), V([0, 1, 0]), V([0, 0, 1])]).rank == 0
    assert kernel([V([0, 0, 0]), V([0, 0, 0])]).rank == 3
    k = kernel([V([1, -1])])
    assert k.rows == (V([1, 1]),)


def test_quotient_coords_examples():
    full = Subspace.full(2)
    assert not quotient_coords(full, full, V([3, 5]))
    zero = Subspace.zero(2)
    assert quotient_coords(full, zero, V([3, 5])) == V([3, 5])
    line = Subspace.span(2, [V([1, 1])])
    c = quotient_coords(full, line, V([1, 0]))
    assert c.dimension == 1 and len(c.entries) == 1


def test_quotient_coords_membership():
    line = Subspace.span(3, [V([1, 0, 0])])
    with pytest.raises(MembershipError):
        quotient_coords(line, Subspace.zero(3), V([0, 1, 0]))


@pytest.mark.parametrize("text,value,reduced", [
    ("1/2", Fraction(1, 2), True), ("2/4", Fraction(1, 2), False), ("-3", Fraction(-3), True),
    (7, Fraction(7), True), ("0/5", Fraction(0), False),
])
def test_parse_rational(text, value, reduced):
    assert parse_rational(text) == (value, reduced)


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", "", None, True])
def test_parse_rational_rejects(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"


def test_echelon_key_controls_pivot():
    e = Echelon([{0: 1, 1: 1}], key=lambda c: -c)
    assert e.pivots() == [1]


small = st.integers(-3, 3)


@st.composite
def matrices(draw):
    n = draw(st.integers(1, 5))
    rows = draw(st.lists(st.lists(small, min_size=n, max_size=n), max_size=6))
    return n, [V(r) for r in rows]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_idempotent_and_rank(m):
    n, rows = m
    space, r = rref(rows, n)
    again, r2 = rref(list(space.rows), n)
    assert again == space and r == r2
    assert r == dense_rank([row.entries for row in rows])
    for p, row in zip(space.pivots, space.rows):
        assert row[p] == 1
        assert all(other[p] == 0 for other in space.rows if other is not row)
    assert list(space.pivots) == sorted(space.pivots)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    n, rows = m
    k = kernel(rows, n)
    assert k.rank + rref(rows, n)[1] == n
    for v in k.rows:
        for row in rows:
            assert sum(row[i] * x for i, x in v.entries.items()) == 0


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_quotient_zero_iff_member(m, vec):
    n, rows = m
    sub, _ = rref(rows, n)
    v = V(vec[:n])
    assert (not quotient_coords(Subspace.full(n), sub, v)) == sub.contains(v)


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_intersection_and_sum_dimensions(m1, m2):
    n = min(m1[0], m2[0])
    a = Subspace.span(n, [{i: x for i, x in r.entries.items() if i < n} for r in m1[1]])
    b = Subspace.span(n, [{i: x for i, x in r.entries.items() if i < n} for r in m2[1]])
    assert (a + b).rank + a.intersect(b).rank == a.rank + b.rank


def test_explicit_zero_entries_are_ignored():
    F = Fraction
    ech = Echelon([{0: F(0), 1: F(2)}])
    assert ech.pivots() == [1]
    assert ech.reduce({0: F(0), 1: F(3)}) == {}
    assert ech.contains({2: F(0)})
