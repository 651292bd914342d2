"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import time
from contextlib import contextmanager
from fractions import Fraction as F
from pathlib import Path

import pytest

from valgebroid import cli
from valgebroid.algebroid import (CommAlgebra, LieAlgebroid, Tca, VertexAlgebroid, check_comm_algebra,
                                  check_lie_algebroid, check_tca, check_vertex_algebroid,
                                  lie_algebroid_quotient, tca_of_algebroid)
from valgebroid.automorphism import SectorGrading
from valgebroid.errors import InternalConsistencyError
from valgebroid.fixtures import (dual_numbers, dual_numbers_algebroid, dual_numbers_grading, heisenberg,
                                 heisenberg_grading, null_line, point_algebra)
from valgebroid.loop import build_loop_lie, verify_locality
from valgebroid.twisted import (TwistedFiber, build_MB, fiber_context, generator_states, induce_twisted,
                                is_simple_graded, radical_J, radical_J_bruteforce, regular_fiber,
                                same_subspaces, trivial_fiber, verify_commutator_transfer,
                                verify_twisted_jacobi)
from valgebroid.vertex import build_vb, check_functoriality, extend_automorphism, jacobi_grid

from oracles import (colored_partitions, dual_numbers_vb_slices, half_odd_partitions,
                     partition_counts_by_product, radical_by_operator_closure, rank)

INPUTS = Path(__file__).resolve().parent.parent / "inputs"
FIXTURES = {"F1": heisenberg(), "F2": heisenberg(3), "F3": dual_numbers_algebroid()}


@contextmanager
def criterion(capsys, n, title):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\ncriterion {n}: {status} ({time.perf_counter() - start:.2f} s) {title}")


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def mutants():
    """One corrupted table per checker family, with the checker that must reject it."""
    return [
        (check_comm_algebra, CommAlgebra(("e", "x", "y"), {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1},
                                                           (0, 2): {2: 1}, (2, 0): {2: 1}, (1, 2): {1: 1}}, 0)),
        (check_comm_algebra, CommAlgebra(("e", "x"), {(0, 0): {0: 1}, (0, 1): {1: 2}, (1, 0): {1: 2}}, 0)),
        (check_tca, Tca(1, ("e", "b", "c"), prod1={(1, 2): {0: 1}, (2, 1): {0: 2}})),
        (check_tca, Tca(0, ("x", "y", "z"), prod0={(0, 1): {1: 1}, (1, 0): {1: -1}, (1, 2): {0: 1},
                                                   (2, 1): {0: -1}})),
        (check_vertex_algebroid, VertexAlgebroid(dual_numbers(), ("beta",), action={(0, 0): {0: 1}},
                                                 pairing={(0, 0): {0: 1}})),
        (check_vertex_algebroid, VertexAlgebroid(point_algebra(), ("beta",), action={(0, 0): {0: 1}},
                                                 bracket={(0, 0): {0: 1}})),
        (check_vertex_algebroid, VertexAlgebroid(dual_numbers(), ("beta",), action={(0, 0): {0: 1}},
                                                 partial={0: {0: 1}})),
        (check_lie_algebroid, LieAlgebroid(point_algebra(), ("u",), bracket={(0, 0): {0: 1}})),
    ]


def test_criterion_1_axiom_suites(capsys):
    with criterion(capsys, 1, "axiom suites on F1, F2, F3 and mutation witnesses"):
        for name, B in FIXTURES.items():
            reps = [timed(check_comm_algebra, B.A), timed(check_tca, tca_of_algebroid(B)),
                    timed(check_vertex_algebroid, B),
                    timed(check_lie_algebroid, lie_algebroid_quotient(B)[0])]
            for rep, secs in reps:
                assert rep.passed and rep.total_violations == 0, (name, rep.text())
                assert secs < 1.0
        for checker, bad in mutants():
            rep, secs = timed(checker, bad)
            assert not rep.passed and rep.first_violation() is not None
            assert secs < 1.0


def test_criterion_2_untwisted_dimensions(capsys):
    with criterion(capsys, 2, "V_B dimensions against the colored-partition oracle"):
        start = time.perf_counter()
        f1 = build_vb(FIXTURES["F1"], 5).dims()
        f2 = build_vb(FIXTURES["F2"], 3).dims()
        f3 = build_vb(FIXTURES["F3"], 2).dims()
        assert time.perf_counter() - start < 10
        assert f1 == [colored_partitions(n, 1) for n in range(6)] == [1, 1, 2, 3, 5, 7]
        assert f2 == [colored_partitions(n, 3) for n in range(4)] == partition_counts_by_product(3, 3)
        assert f2 == [1, 3, 9, 22]
        assert f3 == dual_numbers_vb_slices(2) == [2, 0, 0]


def test_criterion_3_twisted_dimensions(capsys):
    with criterion(capsys, 3, "twisted F1 (T=2) dimensions, J = 0, graded simplicity"):
        start = time.perf_counter()
        B = FIXTURES["F1"]
        G = heisenberg_grading(B)
        ctx = fiber_context(B, G)
        TM = induce_twisted(B, G, trivial_fiber(ctx), F(5, 2), ctx)
        MB = build_MB(TM)
        assert MB.dims() == [half_odd_partitions(k) for k in range(6)] == [1, 1, 1, 2, 2, 3]
        assert all(not v for v in radical_J(MB).values())
        assert is_simple_graded(MB).passed
        assert time.perf_counter() - start < 10


def test_criterion_4_identity_suites(capsys):
    with criterion(capsys, 4, "Jacobi, twisted Jacobi, commutator transfer, locality at N=3"):
        start = time.perf_counter()
        B = FIXTURES["F1"]
        C = tca_of_algebroid(B)
        N = 3
        VA = build_vb(B, N)
        M = VA.module
        states = [(M.col_label(c), VA.state(d, i)) for d in M.degrees if d <= 1
                  for i, c in enumerate(M.basis[d])]
        rep = jacobi_grid(VA.fields, VA.engine, states, F(3, 2), 2)
        assert rep.passed and rep.checked > 0, rep.text()
        counts = [rep.checked]
        for G in (SectorGrading.trivial(B), heisenberg_grading(B)):
            L = build_loop_lie(C, G.combined(), G.T, N)
            assert verify_locality(L, 2).passed
            ctx = fiber_context(B, G)
            TM = induce_twisted(B, G, trivial_fiber(ctx), N, ctx)
            build_MB(TM)
            gens = [s for s in generator_states(TM) if s[1]]
            tj = verify_twisted_jacobi(TM, F(3, 2), 2, gens)
            assert tj.passed and tj.checked > 0, tj.text()
            ct = verify_commutator_transfer(TM, F(3, 2), 2)
            assert ct.passed and ct.total_checked > 0, ct.text()
            counts += [tj.checked, ct.total_checked]
        with capsys.disabled():
            print(f"\n  checks: V_B Jacobi {counts[0]}, T=1 {counts[1]}+{counts[2]}, T=2 {counts[3]}+{counts[4]}")
        assert time.perf_counter() - start < 60


def test_criterion_5_automorphisms(capsys):
    with criterion(capsys, 5, "extension of beta -> -beta: functoriality, restriction, composition"):
        B = FIXTURES["F1"]
        VA = build_vb(B, 3)
        fA, fB = {0: {0: F(1)}}, {0: {0: F(-1)}}
        rep = check_functoriality(VA, fA, fB)
        assert rep.passed and rep.total_checked > 0
        assert rep.children and rep.children[0].passed  # restriction to slices 0 and 1
        g = extend_automorphism(VA, fA, fB)
        gg = extend_automorphism(VA, fA, {0: {0: F(1)}})  # composition g o g = identity
        for d in VA.module.degrees:
            for i, img in g[d].items():
                twice = {}
                for key, c in img.items():
                    for k2, c2 in g[d][key[1]].items():
                        twice[k2] = twice.get(k2, 0) + c * c2
                assert {k: v for k, v in twice.items() if v} == gg[d][i]


def _untwisted_vs_T1(B, N):
    VA = build_vb(B, N)
    G = SectorGrading.trivial(B)
    ctx = fiber_context(B, G)
    TM = induce_twisted(B, G, regular_fiber(ctx), N, ctx)
    MB = build_MB(TM)
    return VA.module, MB


def test_criterion_6_reduction_consistency(capsys):
    with criterion(capsys, 6, "T=1 twisted pipeline reproduces V_B"):
        for B, N in ((FIXTURES["F1"], 3), (FIXTURES["F3"], 2)):
            V, M = _untwisted_vs_T1(B, N)
            assert V.dims() == M.dims()
            assert V.mode_table() == M.mode_table()


def test_criterion_7_guards(capsys, monkeypatch):
    with criterion(capsys, 7, "M_B(U)(0) = U and relation invariance; failures exit 4"):
        cases = [(heisenberg(), heisenberg_grading(heisenberg()), trivial_fiber, F(5, 2)),
                 (heisenberg(), SectorGrading.trivial(heisenberg()), regular_fiber, 3),
                 (heisenberg(3), SectorGrading(2, (0,), (1, 1, 0)), trivial_fiber, 2),
                 (dual_numbers_algebroid(), dual_numbers_grading(), trivial_fiber, 2),
                 (dual_numbers_algebroid(), SectorGrading.trivial(dual_numbers_algebroid()), regular_fiber, 2),
                 (null_line(), SectorGrading.trivial(null_line()), trivial_fiber, 4)]
        for B, G, fiber, N in cases:
            ctx = fiber_context(B, G)
            U = fiber(ctx)
            TM = induce_twisted(B, G, U, N, ctx)
            assert TM.fiber_report.passed
            MB = build_MB(TM)
            assert MB.dims()[0] == U.dim
            assert TM.reports[-1].passed
            assert all(c.passed for c in TM.reports[-1].children)

        def broken(TM):
            raise InternalConsistencyError("relation subspace is not invariant")

        monkeypatch.setattr(cli, "build_MB", broken)
        code = cli.main(["twist", "--input", str(INPUTS / "heisenberg.json"), "--max-degree", "2"])
        capsys.readouterr()
        assert code == 4


def _radical_cases():
    B1 = heisenberg()
    out = []
    for B, G, fiber, N in [
        (null_line(), SectorGrading.trivial(null_line()), trivial_fiber, 4),
        (heisenberg(2, [[1, 0], [0, 0]]), SectorGrading.trivial(heisenberg(2, [[1, 0], [0, 0]])), trivial_fiber, 2),
        (B1, heisenberg_grading(B1), trivial_fiber, F(5, 2)),
        (B1, heisenberg_grading(B1),
         lambda ctx: TwistedFiber(2, {(0, 0): {0: F(1)}, (0, 1): {1: F(1)}}, {}), F(3, 2)),
        (B1, SectorGrading.trivial(B1), trivial_fiber, 4),
    ]:
        ctx = fiber_context(B, G)
        TM = induce_twisted(B, G, fiber(ctx), N, ctx)
        out.append(build_MB(TM))
    return out


def test_criterion_8_radical_recursion(capsys):
    with criterion(capsys, 8, "recursive J equals the lattice-supremum J (total dim <= 12)"):
        for M in _radical_cases():
            assert M.total_dim() <= 12
            J = radical_J(M)
            assert same_subspaces(M, J, radical_J_bruteforce(M))
            oracle = radical_by_operator_closure(M.dims(), M.mode_table(), M.degrees)
            for d in M.degrees:
                ours = [{k[1]: c for k, c in M.coords(M.reduce(v)).items()} for v in J[d]]
                assert rank(ours) == rank(oracle[d]) == rank(ours + oracle[d])
