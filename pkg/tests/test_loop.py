from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from valgebroid.algebroid import Tca, tca_of_algebroid
from valgebroid.errors import InputError, WindowError
from valgebroid.fixtures import dual_numbers_algebroid, heisenberg, null_line
from valgebroid.loop import (LoopLie, binomial, bracket, build_loop_lie, triangular_split,
                             verify_lie_axioms, verify_locality)


def f1(T=1, N=3):
    C = tca_of_algebroid(heisenberg())
    return build_loop_lie(C, (0, 0) if T == 1 else (0, 1), T, N)


def test_f1_untwisted_basis():
    L = f1()
    for d in range(1, 4):
        assert L.basis[F(d)] == [(1, F(-d))]
    assert sorted(L.basis[F(0)]) == [(0, F(-1)), (1, F(0))]


def test_f1_twisted_basis():
    L = f1(2)
    assert L.basis[F(0)] == [(0, F(-1))]
    assert L.basis[F(1, 2)] == [(1, F(-1, 2))]
    assert L.basis[F(-3, 2)] == [(1, F(3, 2))]
    assert L.basis.get(F(1), []) == []


def test_dual_numbers_twisted_only_unit_survives():
    C = tca_of_algebroid(dual_numbers_algebroid())
    L = build_loop_lie(C, (0, 1), 2, 3)
    assert L.basis_modes() == [(0, F(-1))]
    assert L.reduce(1, F(1, 2)) == {}
    assert L.reduce(1, F(-1, 2)) == {}


def test_brackets():
    assert bracket(f1(), (1, 1), (1, -1)) == {(0, F(-1)): F(1)}
    assert bracket(f1(2), (1, F(1, 2)), (1, F(-1, 2))) == {(0, F(-1)): F(1, 2)}
    assert bracket(f1(), (0, -1), (0, -1)) == {}


def test_bracket_window_error():
    with pytest.raises(WindowError):
        bracket(f1(N=1), (1, -1), (1, -1))


def test_reduction_rule():
    C = Tca(1, ("a", "b"), partial={0: {1: F(1)}})
    L = build_loop_lie(C, (0, 0), 1, 2)
    # a(m) = -(1/(m+1)) (da)(m+1) for m != -1, and (da)(0) = 0
    assert L.reduce(0, F(-2)) == {(1, F(-1)): F(1)}
    assert L.reduce(0, F(0)) == {(1, F(1)): F(-1)}
    assert L.reduce(1, F(0)) == {}
    assert L.basis[F(0)] == [(0, F(-1))]


def test_triangular_split():
    p, z, m = triangular_split(f1(2))
    assert z == [(0, F(-1))]
    assert all(f1(2).degree(x) > 0 for x in p) and all(f1(2).degree(x) < 0 for x in m)
    p, z, m = triangular_split(f1())
    assert sorted(z) == [(0, F(-1)), (1, F(0))]
    L0 = build_loop_lie(Tca(0, ()), (), 1, 2)
    assert triangular_split(L0) == ([], [], [])


def test_lie_axioms_and_locality():
    for T in (1, 2):
        assert verify_lie_axioms(f1(T)).passed
        assert verify_locality(f1(T)).passed
    L = build_loop_lie(tca_of_algebroid(heisenberg(3)), (0, 0, 1, 1), 2, 2)
    assert verify_lie_axioms(L).passed


def test_corrupted_table_fails_axioms():
    L = f1()
    x, y = (1, F(1)), (1, F(-1))
    L.table[(x, y)] = {(0, F(-1)): F(2)}
    assert not verify_lie_axioms(L).passed


def test_central_level_mode():
    L = f1(2)
    for x in L.basis_modes():
        assert bracket(L, (0, -1), x) == {}


def test_bad_grading_rejected():
    C = tca_of_algebroid(heisenberg())
    with pytest.raises(InputError):
        build_loop_lie(C, (0, 1), 3, 2)
    with pytest.raises(InputError):
        f1().reduce(1, F(1, 2))


@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.integers(0, 5))
def test_binomial_pascal(x, m):
    assert binomial(x, m + 1) == binomial(x - 1, m + 1) + binomial(x - 1, m)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_twisted_heisenberg_relation(m, n):
    L = f1(2, 4)
    x, y = (1, F(2 * m + 1, 2)), (1, F(2 * n + 1, 2))
    want = {(0, F(-1)): F(2 * m + 1, 2)} if m + n + 1 == 0 else {}
    assert L.bracket_vectors(L.reduce(*x), L.reduce(*y)) == want
