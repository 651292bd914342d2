"""The compiled and pure-Python kernels agree exactly."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from valgebroid import _pykernels as py
from valgebroid import kernels

ck = pytest.importorskip("valgebroid._ckernels")

vec = st.dictionaries(st.integers(0, 8), st.fractions(min_value=-4, max_value=4, max_denominator=5)
                      .filter(bool), max_size=6)


def build(mod, vectors, key=None):
    rows, cols, piv = {}, {}, []
    for v in vectors:
        piv.append(mod.insert_row(rows, cols, dict(v), key))
    return rows, cols, piv


@settings(max_examples=100, deadline=None)
@given(st.lists(vec, max_size=7), vec)
def test_insert_and_reduce_agree(vectors, probe):
    a = build(py, vectors)
    b = build(ck, vectors)
    assert a == b
    assert py.reduce_vector(probe, a[0]) == ck.reduce_vector(probe, b[0])


@settings(max_examples=50, deadline=None)
@given(st.lists(vec, max_size=5))
def test_keyed_pivots_agree(vectors):
    key = lambda c: (-c,)
    assert build(py, vectors, key) == build(ck, vectors, key)


@given(vec, vec, st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_axpy_scale_agree(u, v, c):
    assert py.axpy(dict(u), v, c) == ck.axpy(dict(u), v, c)
    assert py.scale(u, c) == ck.scale(u, c)
    assert all(x for x in ck.axpy(dict(u), v, c).values())


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_override(monkeypatch):
    import importlib

    monkeypatch.setenv("VALGEBROID_PURE", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.axpy({0: Fraction(1)}, {0: Fraction(1)}, Fraction(-1)) == {}
    finally:
        monkeypatch.delenv("VALGEBROID_PURE")
        importlib.reload(kernels)
