from fractions import Fraction as F

import pytest

from valgebroid.algebroid import CommAlgebra, VertexAlgebroid, check_vertex_algebroid
from valgebroid.automorphism import (GradedEndomorphism, SectorGrading, check_algebroid_endomorphism,
                                     check_sector_grading, endomorphism_order, fixed_subalgebroid,
                                     overlap_ideal)
from valgebroid.errors import InputError
from valgebroid.fixtures import (dual_numbers_algebroid, dual_numbers_grading, heisenberg,
                                 heisenberg_grading, null_line, truncated_polynomials)
from valgebroid.io import parse_input

from helpers import failed_identities


def test_f1_grading_passes():
    B = heisenberg()
    assert check_sector_grading(B, heisenberg_grading(B)).passed


def test_trivial_gradings_pass():
    for B in (heisenberg(), heisenberg(3), dual_numbers_algebroid(), null_line()):
        assert check_sector_grading(B, SectorGrading.trivial(B)).passed


def test_identity_off_sector_zero_fails():
    B = heisenberg()
    assert not check_sector_grading(B, SectorGrading(2, (1,), (0,))).passed


def test_pairing_sector_mismatch_fails():
    B = heisenberg()
    rep = check_sector_grading(B, SectorGrading(3, (0,), (1,)))
    assert "<b,b'> lands in sector r+s" in failed_identities(rep)


def test_ill_typed_pairing_rejected_at_parse():
    doc = {"T": 2, "A": {"basis": ["e"], "unit": "e", "product": [["e", "e", "e", "1"]]},
           "B": {"basis": ["beta"], "pairing": [["beta", "beta", "beta", "1"]]}, "sectors": {"beta": 1}}
    with pytest.raises(InputError, match="pairing"):
        parse_input(doc)


def test_sector_range_checked():
    with pytest.raises(InputError):
        SectorGrading(2, (0,), (2,))


def test_reflection_is_order_two_automorphism():
    B = heisenberg()
    f = GradedEndomorphism({0: {0: F(1)}}, {0: {0: F(-1)}})
    rep = check_algebroid_endomorphism(B, f)
    assert rep.passed and rep.data["bijective"] and rep.data["order"] == 2


def test_scaling_fails_pairing():
    B = heisenberg()
    f = GradedEndomorphism({0: {0: F(1)}}, {0: {0: F(2)}})
    assert "<fu,fv> = f<u,v>" in failed_identities(check_algebroid_endomorphism(B, f))


def test_identity_order_one():
    B = heisenberg(3)
    rep = check_algebroid_endomorphism(B, GradedEndomorphism.identity(B))
    assert rep.passed and rep.data["order"] == 1


def test_infinite_order_reported():
    B = null_line()
    f = GradedEndomorphism({0: {0: F(1)}}, {0: {0: F(2)}})
    assert check_algebroid_endomorphism(B, f).passed
    assert "infinite" in str(endomorphism_order(B, f, 16))


def test_composition_of_endomorphisms_passes():
    B = heisenberg(3)
    swap = GradedEndomorphism({0: {0: F(1)}}, {0: {1: F(1)}, 1: {0: F(1)}, 2: {2: F(-1)}})
    assert check_algebroid_endomorphism(B, swap).passed
    both = swap.compose(swap)
    assert check_algebroid_endomorphism(B, both).passed
    assert check_algebroid_endomorphism(B, swap).data["order"] == 2


def test_from_grading_requires_rational_eigenvalues():
    B = heisenberg()
    with pytest.raises(InputError):
        GradedEndomorphism.from_grading(B, SectorGrading(3, (0,), (0,)))


def test_fixed_parts():
    B = heisenberg()
    fp = fixed_subalgebroid(B, heisenberg_grading(B))
    assert fp.A0.labels == ("e",) and fp.B0.dim == 0
    fp = fixed_subalgebroid(B, SectorGrading.trivial(B))
    assert fp.B0 == B
    fp3 = fixed_subalgebroid(dual_numbers_algebroid(), dual_numbers_grading())
    assert fp3.A0.labels == ("e",) and fp3.B0.dim == 0
    for B2, G in ((heisenberg(), heisenberg_grading(heisenberg())),
                  (dual_numbers_algebroid(), dual_numbers_grading())):
        assert check_vertex_algebroid(fixed_subalgebroid(B2, G).B0).passed


def test_overlap_ideals():
    assert overlap_ideal(dual_numbers_algebroid().A, dual_numbers_grading()).rows == ()
    B = heisenberg()
    assert overlap_ideal(B.A, SectorGrading.trivial(B)).rows == ()
    A3 = truncated_polynomials(3)
    oi = overlap_ideal(A3, SectorGrading(2, (0, 1, 0), ()))
    assert oi.rows == ({1: F(1)},)  # x^2 in A0-local coordinates (e, x^2)
    assert oi.report.passed and oi.quotient.labels == ("e",)
