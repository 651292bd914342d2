"""Command-line front end.

    valgebroid check|build|twist|verify --input FILE --max-degree D
               [--fiber INDEX] [--grid P] [--format text|json] [--seed S]

Exit codes: 0 pass, 1 violations, 2 input error, 3 window exhausted,
4 internal-consistency failure.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .algebroid import (check_comm_algebra, check_lie_algebroid, check_tca, check_vertex_algebroid,
                        lie_algebroid_quotient, tca_of_algebroid)
from .automorphism import (GradedEndomorphism, check_algebroid_endomorphism, check_sector_grading,
                           fixed_subalgebroid, overlap_ideal)
from .errors import AlgebroidError, InputError
from .io import Problem, parse_input, resolve_fiber
from .loop import build_loop_lie, verify_lie_axioms, verify_locality
from .report import Report, rational_list
from .twisted import (build_MB, check_fiber_conditions, fiber_context, fiber_restriction,
                      induce_twisted, is_simple_graded, radical_J, same_fiber, simple_quotient,
                      trivial_fiber, verify_commutator_transfer, verify_derivative, verify_level,
                      verify_restricted, verify_twisted_jacobi, generator_states)
from .vertex import build_vb, check_functoriality, jacobi_grid

DEFAULT_MAX_POINTS = 20000


def _require(rep: Report, what: str) -> bool:
    if not rep.passed:
        rep.notes.append(f"{what} skipped: prerequisites failed")
    return rep.passed


def cmd_check(prob: Problem, args) -> Report:
    B, G = prob.B, prob.grading
    rep = Report("check")
    rep.add(check_comm_algebra(B.A))
    va = rep.add(check_vertex_algebroid(B))
    rep.add(check_tca(tca_of_algebroid(B)))
    if va.passed:
        g, _ = lie_algebroid_quotient(B)
        q = rep.add(check_lie_algebroid(g))
        q.name = "Lie algebroid B/A*dA"
    gr = rep.add(check_sector_grading(B, G))
    if gr.passed and va.passed:
        fixed = fixed_subalgebroid(B, G)
        sub = rep.add(check_vertex_algebroid(fixed.B0))
        sub.name = "fixed subalgebroid B^0"
        rep.add(overlap_ideal(B.A, G).report)
        ctx = fiber_context(B, G)
        for i in range(len(prob.fibers)):
            fr = rep.add(check_fiber_conditions(ctx, resolve_fiber(prob, i, ctx)))
            fr.name = f"fiber {i}"
    for name, f in prob.endomorphisms:
        er = rep.add(check_algebroid_endomorphism(B, f))
        er.name = f"endomorphism {name}"
    return rep


def cmd_build(prob: Problem, args) -> Report:
    rep = Report("build V_B")
    va = rep.add(check_vertex_algebroid(prob.B))
    if not _require(va, "build"):
        return rep
    VA = build_vb(prob.B, args.max_degree)
    rep.add(VA.report)
    rep.data["degrees"] = rational_list(VA.module.degrees)
    rep.data["dims"] = " ".join(str(d) for d in VA.dims())
    if args.basis:
        M = VA.module
        rep.data["basis"] = {str(d): M.labels(d) for d in M.degrees}
    return rep


def _twisted_setup(prob: Problem, args, N):
    B, G = prob.B, prob.grading
    ctx = fiber_context(B, G)
    if prob.fibers:
        U = resolve_fiber(prob, args.fiber, ctx)
    else:
        U = trivial_fiber(ctx)
    return ctx, U, induce_twisted(B, G, U, N, ctx)


def cmd_twist(prob: Problem, args) -> Report:
    B, G = prob.B, prob.grading
    N = Fraction(args.max_degree, G.T)
    rep = Report(f"twisted modules (T={G.T}, degrees <= {_q(N)})")
    rep.add(check_vertex_algebroid(B))
    rep.add(check_sector_grading(B, G))
    if not _require(rep, "twist"):
        return rep
    ctx, U, TM = _twisted_setup(prob, args, N)
    rep.add(TM.fiber_report)
    MB = build_MB(TM)
    rep.add(TM.reports[-1])
    J = radical_J(MB)
    LG = simple_quotient(MB, J)
    J2 = radical_J(LG)
    jr = rep.add(Report("J(L_g(U)) = 0"))
    for d in LG.degrees:
        jr.check("radical of the simple quotient vanishes", (_q(d),), {0: Fraction(len(J2[d]))}, {})
    rep.add(is_simple_graded(LG))
    V, fr = fiber_restriction(TM, MB)
    rep.add(fr)
    rt = rep.add(Report("fiber round trip"))
    if not same_fiber(U, V):
        rt.fail("M_B(U)(0) = U as modules", ("action tables differ",))
    rt.checked += 1
    rep.data["degrees"] = rational_list(MB.degrees)
    rep.data["dims_M_g"] = " ".join(map(str, TM.Mg.dims()))
    rep.data["dims_M_B"] = " ".join(map(str, MB.dims()))
    rep.data["dims_J"] = " ".join(str(len(J[d])) for d in MB.degrees)
    rep.data["dims_L_g"] = " ".join(map(str, LG.dims()))
    return rep


def cmd_verify(prob: Problem, args) -> Report:
    B, G = prob.B, prob.grading
    N = Fraction(args.max_degree)
    span = args.grid
    rng = random.Random(args.seed)
    limit = args.max_points
    rep = Report(f"identity suites (degrees <= {_q(N)}, grid {span})")
    rep.add(check_vertex_algebroid(B))
    rep.add(check_sector_grading(B, G))
    if not _require(rep, "verify"):
        return rep
    C = tca_of_algebroid(B)
    # untwisted
    VA = build_vb(B, N)
    M = VA.module
    rep.add(verify_lie_axioms(VA.loop))
    rep.add(verify_locality(VA.loop, span))
    states = [(M.col_label(c), VA.state(d, i)) for d in M.degrees if d <= 1 for i, c in enumerate(M.basis[d])]
    rep.add(jacobi_grid(VA.fields, VA.engine, states, N / 2, span, "Jacobi identity grid (V_B)", limit, rng))
    rep.add(verify_level(M, B.A.unit))
    ends = list(prob.endomorphisms)
    if G.T <= 2 and G.T > 1:
        ends.append(("sector grading", GradedEndomorphism.from_grading(B, G)))
    for name, f in ends:
        er = rep.add(check_algebroid_endomorphism(B, f))
        er.name = f"endomorphism {name}"
        if er.passed and er.data.get("bijective"):
            fr = rep.add(check_functoriality(VA, f.A, f.B))
            fr.name = f"functoriality of {name}"
    # twisted
    L = build_loop_lie(C, G.combined(), G.T, N)
    lr = rep.add(verify_lie_axioms(L))
    lr.name += f" (T={G.T})"
    lc = rep.add(verify_locality(L, span))
    lc.name += f" (T={G.T})"
    ctx, U, TM = _twisted_setup(prob, args, N)
    rep.add(TM.fiber_report)
    MB = build_MB(TM)
    rep.add(TM.reports[-1])
    gens = [s for s in generator_states(TM) if s[1]]
    rep.add(verify_twisted_jacobi(TM, N / 2, span, gens, limit, rng))
    rep.add(verify_commutator_transfer(TM, N / 2, span))
    rep.add(verify_level(MB, B.A.unit))
    rep.add(verify_derivative(TM.fields, TM.vl, gens, N / 2, span))
    rep.add(verify_restricted(TM.fields, gens))
    return rep


def _q(x) -> str:
    return rational_list([x])[0]


COMMANDS = {"check": cmd_check, "build": cmd_build, "twist": cmd_twist, "verify": cmd_verify}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="valgebroid", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", required=True, help="algebroid definition (JSON)")
    p.add_argument("--max-degree", type=int, default=3,
                   help="degree cutoff; for twist it counts steps of 1/T (degrees <= D/T)")
    p.add_argument("--fiber", type=int, default=0, help="fiber index in the input file")
    p.add_argument("--grid", type=int, default=2, help="index offsets range over [-P, P]")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled grids")
    p.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS,
                   help="grids with more in-window points are sampled")
    p.add_argument("--basis", action="store_true", help="build: dump basis labels")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.max_degree < 0:
            raise InputError("--max-degree must be nonnegative")
        if args.grid < 0:
            raise InputError("--grid must be nonnegative")
        prob = parse_input(args.input)
        for w in prob.warnings:
            print(f"warning: {w}", file=sys.stderr)
        rep = COMMANDS[args.command](prob, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AlgebroidError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    print(rep.to_json() if args.format == "json" else rep.text())
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
