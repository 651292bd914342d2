"""Graded twisted modules: induced M_g(U), universal M_B(U), radical J(U) and L_g(U).

A fiber U is a module for the Lie algebroid g = B^0 / A^0 dA^0 over A^0.  The
degree-0 modes act on U through it (``a(-1)`` by ``a``, ``b(0)`` by the class of
``b``), positive-degree modes create and negative-degree modes kill U.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebroid import (LieAlgebroid, LieAlgebroidModule, QuotientMap, VertexAlgebroid,
                        check_lie_algebroid_module, lie_algebroid_quotient, tca_of_algebroid, unit)
from .automorphism import FixedPart, SectorGrading, check_sector_grading, fixed_subalgebroid
from .errors import InputError, InternalConsistencyError
from .induced import InducedEngine
from .kernels import axpy
from .linalg import Echelon
from .loop import LoopLie, binomial, build_loop_lie, ceil_in_class, floor_in_class, frac_range
from .module import GradedModule, kernel_of_maps
from .report import Report
from .vertex import (FieldEngine, _vl_product, e_generators, jacobi_grid, translation_ambient,
                     vacuum_engine)

ONE = Fraction(1)


@dataclass(frozen=True)
class TwistedFiber:
    """Action tables of a fiber: ``A0_action[(a, u)]`` with ``a`` a global A index of
    sector 0, ``g_action[(i, u)]`` with ``i`` a basis index of the Lie algebroid g."""

    dim: int
    A0_action: dict
    g_action: dict
    labels: tuple = ()

    def __post_init__(self):
        labels = tuple(self.labels) or tuple(f"u{i}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise InputError("fiber labels do not match its dimension")
        object.__setattr__(self, "labels", labels)


@dataclass
class FiberContext:
    B: VertexAlgebroid
    G: SectorGrading
    fixed: FixedPart
    g: LieAlgebroid
    quotient: QuotientMap

    @property
    def g_labels(self) -> tuple:
        return self.g.labels

    def g_class(self, b: int) -> dict:
        """Class in g of the sector-0 B basis vector with global index ``b``."""
        local = self.fixed.B_index.index(b)
        return self.quotient.project(unit(local))

    def act_a(self, U: TwistedFiber, a_vec: dict, u_vec: dict) -> dict:
        out: dict = {}
        for a, x in a_vec.items():
            for u, y in u_vec.items():
                axpy(out, U.A0_action.get((a, u), {}), x * y)
        return out

    def act_b(self, U: TwistedFiber, b_vec: dict, u_vec: dict) -> dict:
        out: dict = {}
        for b, x in b_vec.items():
            for i, z in self.g_class(b).items():
                for u, y in u_vec.items():
                    axpy(out, U.g_action.get((i, u), {}), x * y * z)
        return out

    def as_module(self, U: TwistedFiber) -> LieAlgebroidModule:
        la = {g: i for i, g in enumerate(self.fixed.A_index)}
        return LieAlgebroidModule(
            U.dim,
            {(la[a], u): v for (a, u), v in U.A0_action.items()},
            dict(U.g_action),
            U.labels,
        )


def fiber_context(B: VertexAlgebroid, G: SectorGrading) -> FiberContext:
    fixed = fixed_subalgebroid(B, G)
    g, q = lie_algebroid_quotient(fixed.B0)
    return FiberContext(B, G, fixed, g, q)


def trivial_fiber(ctx: FiberContext) -> TwistedFiber:
    """The line on which e acts by 1 and everything else by 0."""
    e = ctx.B.A.unit
    return TwistedFiber(1, {(e, 0): {0: ONE}}, {}, ("1",))


def regular_fiber(ctx: FiberContext) -> TwistedFiber:
    """A^0 acting on itself by multiplication and g by the anchor."""
    A = ctx.B.A
    ai = ctx.fixed.A_index
    la = {g: i for i, g in enumerate(ai)}
    A0_action = {}
    for a, w in product(ai, ai):
        v = A.mul(unit(a), unit(w))
        A0_action[(a, la[w])] = {la[k]: x for k, x in v.items()}
    g_action = {}
    for i in range(ctx.g.dim):
        for w in range(len(ai)):
            g_action[(i, w)] = dict(ctx.g.anchor.get((i, w), {}))
    return TwistedFiber(len(ai), A0_action, g_action, tuple(A.labels[a] for a in ai))


def check_fiber_conditions(ctx: FiberContext, U: TwistedFiber) -> Report:
    """Module axioms over g plus (aa')U = 0 and ((a*b) - (1 - r/T)(a_0 b))U = 0."""
    rep = Report("fiber conditions")
    B, G = ctx.B, ctx.G
    A = B.A
    T = G.T
    for (a, u) in U.A0_action:
        if G.A[a] != 0:
            raise InputError(f"A0_action uses {A.labels[a]}, which is not in sector 0")
    for (i, u) in U.g_action:
        if not 0 <= i < ctx.g.dim:
            raise InputError("g_action index outside g")
    rep.add(check_lie_algebroid_module(ctx.g, ctx.as_module(U)))
    cond = rep.add(Report("twisted fiber conditions"))
    LU = U.labels
    for r in range(1, T):
        Ar = [a for a in range(A.dim) if G.A[a] == r]
        Ac = [a for a in range(A.dim) if G.A[a] == T - r]
        Bc = [b for b in range(B.dim) if G.B[b] == T - r]
        for a, a2, u in product(Ar, Ac, range(U.dim)):
            lhs = ctx.act_a(U, A.mul(unit(a), unit(a2)), unit(u))
            cond.check("(aa')u = 0", (A.labels[a], A.labels[a2], LU[u]), lhs, {}, LU)
        for a, b, u in product(Ar, Bc, range(U.dim)):
            lhs = ctx.act_b(U, B.act(unit(a), unit(b)), unit(u))
            a0b = {k: -x for k, x in B.pi(unit(b), unit(a)).items()}
            rhs = {k: x * (1 - Fraction(r, T)) for k, x in ctx.act_a(U, a0b, unit(u)).items()}
            cond.check("(a*b)u = (1-r/T)(a_0 b)u", (A.labels[a], B.labels[b], LU[u]), lhs, rhs, LU)
    # A0 dA0 must act by zero for U to come from g; g_action is defined on g, so this is automatic
    return rep


# --------------------------------------------------------------- modules


@dataclass
class TwistedModule:
    ctx: FiberContext
    U: TwistedFiber
    loop: LoopLie
    Mg: GradedModule
    fields: FieldEngine
    vl: InducedEngine
    E: list
    fiber_report: Report
    MB: GradedModule | None = None
    reports: list = field(default_factory=list)


def induce_twisted(B: VertexAlgebroid, G: SectorGrading, U: TwistedFiber, max_degree,
                   ctx: FiberContext | None = None) -> TwistedModule:
    """M_g(U) truncated at ``max_degree`` (a multiple of 1/T)."""
    N = Fraction(max_degree)
    if (N * G.T).denominator != 1 or N < 0:
        raise InputError("cutoff must be a nonnegative multiple of 1/T")
    gr = check_sector_grading(B, G)
    if not gr.passed:
        raise InputError("sector grading is not compatible: " + gr.first_violation().text())
    ctx = ctx or fiber_context(B, G)
    C = tca_of_algebroid(B)
    sectors = G.combined()
    L = build_loop_lie(C, sectors, G.T, N)
    nA = B.A.dim

    def fiber_action(x, u):
        g, m = x
        if L.degree(x) != 0:
            return {}
        if C.is_even(g):
            return dict(U.A0_action.get((g, u), {}))
        return ctx.act_b(U, unit(g - nA), unit(u))

    eng = InducedEngine(L, U.dim, fiber_action, lambda x: L.degree(x) > 0, U.labels)
    creators = eng.creators_by_degree(N)
    slices = {}
    for d in frac_range(Fraction(0), N, Fraction(1, G.T)):
        words = eng.words(d, creators)
        monos = [(w, u) for w in words for u in range(U.dim)]
        slices[d] = sorted(monos, key=lambda m: (_word_key(L, m[0]), m[1]))
    Mg = GradedModule("M_g(U)", eng, N, slices)
    vl = vacuum_engine(C)
    fe = FieldEngine(vl, Mg, sectors, G.T)
    E = e_generators(B, vl)
    frep = check_fiber_conditions(ctx, U)
    return TwistedModule(ctx, U, L, Mg, fe, vl, E, frep)


def _word_key(L: LoopLie, word):
    return tuple((-L.degree(x), x[0]) for x in word)


def relations_W(TM: TwistedModule) -> tuple[list, Report]:
    """Column vectors ``v_n u`` for v in E, u a fiber basis vector, all in-window n."""
    M = TM.Mg
    fe = TM.fields
    out = []
    rep = Report("relations W_g(U)")
    deg0 = []
    for name, v in TM.E:
        wt = fe.weight(next(iter(v))[0])
        r = fe.sector(next(iter(v))[0])
        res = Fraction(r, fe.T)
        for u in range(TM.U.dim):
            w = {((), u): ONE}
            n = ceil_in_class(wt - 1 - M.max_degree, res)
            while n <= wt - 1:
                vec = M.columns(fe.coef(v, n, w))
                if vec:
                    out.append(vec)
                    if wt - n - 1 == 0:
                        deg0.append((name, n, u, vec))
                n += 1
    for name, n, u, vec in deg0:
        rep.fail("W(0) = 0", (name, str(n), TM.U.labels[u]), {M.col_label(c): str(x) for c, x in vec.items()}, {})
    rep.checked += 1
    rep.data["generators"] = len(out)
    return out, rep


def build_MB(TM: TwistedModule) -> GradedModule:
    """M_B(U): quotient of M_g(U) by the submodule generated by W_g(U)."""
    M = TM.Mg
    W, wrep = relations_W(TM)
    R = M.close(W)
    MB = M.quotient_by([], "M_B(U)")
    MB.relations = R
    MB.finalize()
    rep = Report("M_B(U) truncation")
    rep.add(wrep)
    rep.add(M.check_invariance(R, "U(L)W"))
    d0 = Report("degree-0 slice equals U")
    d0.check("dim M_B(U)(0) = dim U", (), {0: Fraction(MB.dims()[0])}, {0: Fraction(TM.U.dim)})
    rep.add(d0)
    TM.reports.append(rep)
    TM.MB = MB
    if not d0.passed or not rep.children[1].passed:
        if TM.fiber_report.passed:
            raise InternalConsistencyError(rep.text())
        rep.notes.append("fiber conditions fail: M_B(U)(0) = U is not guaranteed; defect reported")
    TM.fields = FieldEngine(TM.vl, MB, TM.fields.sectors, TM.fields.T)
    return MB


# --------------------------------------------------------------- radical


def radical_J(M: GradedModule) -> dict:
    """Per-degree normal-form bases of J: J(0)=0 and w in J(n) iff every
    degree-lowering basis mode sends w into J at the lower degree."""
    J = {}
    ech = {}
    for d in M.degrees:
        cols = M.basis[d]
        if d == 0:
            J[d], ech[d] = [], Echelon()
            continue
        lower = M.modes_into_window(d)[0]
        images = []
        for c in cols:
            im = {}
            for x in lower:
                img = M.act(x, {c: ONE})
                if img:
                    rem = ech[M.degree_of(img)].reduce(img)
                    for k, y in rem.items():
                        im[(x, k)] = y
            images.append(im)
        ker = kernel_of_maps(len(cols), images)
        J[d] = [{cols[i]: x for i, x in v.items()} for v in ker]
        ech[d] = Echelon(J[d])
    return J


def radical_J_bruteforce(M: GradedModule) -> dict:
    """Largest submodule inside the positive-degree part, by shrinking to a fixed point.

    Starts from everything of positive degree and repeatedly removes vectors
    some in-window mode (of any degree) sends outside the current candidate.
    """
    cand = {d: [{c: ONE} for c in M.basis[d]] if d > 0 else [] for d in M.degrees}
    changed = True
    while changed:
        changed = False
        ech = {d: Echelon(cand[d]) for d in M.degrees}
        new = {}
        for d in M.degrees:
            vs = cand[d]
            if not vs:
                new[d] = []
                continue
            lo, lv, hi = M.modes_into_window(d)
            images = []
            for v in vs:
                im = {}
                for x in lo + lv + hi:
                    img = M.act(x, v)
                    if img:
                        for k, y in ech[M.degree_of(img)].reduce(img).items():
                            im[(x, k)] = y
                images.append(im)
            ker = kernel_of_maps(len(vs), images)
            sub = []
            for z in ker:
                acc: dict = {}
                for i, x in z.items():
                    axpy(acc, vs[i], x)
                sub.append(acc)
            if len(sub) < len(vs):
                changed = True
            new[d] = sub
        cand = new
    return cand


def same_subspaces(M: GradedModule, J1: dict, J2: dict) -> bool:
    for d in M.degrees:
        e1, e2 = Echelon(J1.get(d, [])), Echelon(J2.get(d, []))
        if len(e1) != len(e2) or any(e1.reduce(v) for v in J2.get(d, [])):
            return False
    return True


def simple_quotient(M: GradedModule, J: dict) -> GradedModule:
    return M.quotient_by([v for d in M.degrees for v in J[d]], "L_g(U)")


def is_simple_graded(M: GradedModule) -> Report:
    """Every basis vector generates the whole truncation (verdict up to the cutoff)."""
    rep = Report(f"graded simple up to degree {_fmt(M.max_degree)}")
    total = M.total_dim()
    if total == 0:
        rep.fail("nonzero module", ("degenerate: zero module",))
        return rep
    base = len(M.relations)
    for d in M.degrees:
        for c in M.basis[d]:
            sub = M.submodule([{c: ONE}])
            gen = len(sub) - base
            rep.check("generated submodule is everything", (M.col_label(c),),
                      {0: Fraction(gen)}, {0: Fraction(total)})
    return rep


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fiber_restriction(TM: TwistedModule, M: GradedModule) -> tuple[TwistedFiber, Report]:
    """Degree-0 action tables of M as a fiber; checked against the fiber conditions."""
    ctx = TM.ctx
    B = ctx.B
    nA = B.A.dim
    cols = M.basis[Fraction(0)]
    idx = {c: i for i, c in enumerate(cols)}

    def tab(vec):
        return {idx[c]: x for c, x in vec.items()}

    A0_action, g_action = {}, {}
    for a in ctx.fixed.A_index:
        for i, c in enumerate(cols):
            v = tab(M.act_raw(a, -1, {c: ONE}))
            if v:
                A0_action[(a, i)] = v
    for j, s in enumerate(ctx.quotient.survivors):
        b = ctx.fixed.B_index[s]
        for i, c in enumerate(cols):
            v = tab(M.act_raw(nA + b, 0, {c: ONE}))
            if v:
                g_action[(j, i)] = v
    U = TwistedFiber(len(cols), A0_action, g_action, tuple(M.col_label(c) for c in cols))
    rep = check_fiber_conditions(ctx, U)
    rep.name = "fiber restriction"
    return U, rep


def same_fiber(U: TwistedFiber, V: TwistedFiber) -> bool:
    """Equal action tables in the given bases."""
    clean = lambda t: {k: v for k, v in t.items() if v}
    return U.dim == V.dim and clean(U.A0_action) == clean(V.A0_action) and clean(U.g_action) == clean(V.g_action)


# --------------------------------------------------------------- identity suites


def generator_states(TM: TwistedModule):
    """(label, V_L vector) for every A and B basis vector."""
    C = TM.loop.C
    return [(C.labels[g], TM.vl.act_raw(g, -1, {((), 0): ONE})) for g in range(C.dim)]


def verify_twisted_jacobi(TM: TwistedModule, w_max, span: int = 2, states=None,
                          limit: int | None = None, rng=None) -> Report:
    states = states if states is not None else [s for s in generator_states(TM) if s[1]]
    return jacobi_grid(TM.fields, TM.vl, states, Fraction(w_max), span,
                       "twisted Jacobi identity grid", limit, rng)


def verify_commutator_transfer(TM: TwistedModule, w_max, span: int = 2) -> Report:
    """[u_m, v_n] on M three ways: directly, from V_L products, and from the loop bracket."""
    rep = Report("commutator transfer")
    M = TM.fields.M
    fe = TM.fields
    L = TM.loop
    C = L.C
    ws = [(d, c) for d in M.degrees if d <= w_max for c in M.basis[d]]
    states = generator_states(TM)
    skipped = 0
    for (g, (lu, u)), (h, (lv, v)) in product(enumerate(states), repeat=2):
        if not u or not v:
            continue
        rg, rh = L.residue(g), L.residue(h)
        for mo, no in product(range(-span, span + 1), repeat=2):
            m, n = rg + mo, rh + no
            for d, c in ws:
                deg = d + C.weight(g) + C.weight(h) - m - n - 2
                inter = [d + C.weight(h) - n - 1, d + C.weight(g) - m - 1]
                if deg < 0:
                    continue
                if deg > M.max_degree or max(inter) > M.max_degree:
                    skipped += 1
                    continue
                w = {c: ONE}
                direct = M.act_raw(g, m, M.act_raw(h, n, w))
                axpy(direct, M.act_raw(h, n, M.act_raw(g, m, w)), -ONE)
                wamb = M.ambient(w)
                transfer: dict = {}
                j = 0
                while j <= C.weight(g) + C.weight(h) - 1:
                    uv = _vl_product(TM.vl, u, j, v)
                    if uv:
                        axpy(transfer, fe.coef(uv, m + n - j, wamb), binomial(m, j))
                    j += 1
                transfer = M.normal_form(transfer)
                closed = _closed_form(L, g, m, h, n)
                closed_v: dict = {}
                for x, a in closed.items():
                    axpy(closed_v, M.act(x, w), a)
                wit = (lu, lv, _fmt(m), _fmt(n), M.col_label(c))
                rep.check("[u_m,v_n] = sum_j C(m,j)(u_j v)_{m+n-j}", wit, direct, transfer, M.col_label)
                rep.check("[u_m,v_n] matches the loop relations", wit, direct, closed_v, M.col_label)
    rep.data["skipped_out_of_window"] = skipped
    return rep


def _closed_form(L: LoopLie, g, m, h, n) -> dict:
    """The displayed relations for [u(m), v(n)], written out by generator type."""
    C = L.C
    out: dict = {}
    if C.is_even(g) and C.is_even(h):
        return out
    if C.is_even(g):
        for k, c in C.prod0.get((g, h), {}).items():
            axpy(out, L.reduce(k, m + n), c)
        return out
    if C.is_even(h):
        # [b(m), a(n)] = -[a(n), b(m)]
        for k, c in C.prod0.get((h, g), {}).items():
            axpy(out, L.reduce(k, m + n), -c)
        return out
    for k, c in C.prod0.get((g, h), {}).items():
        axpy(out, L.reduce(k, m + n), c)
    for k, c in C.prod1.get((g, h), {}).items():
        axpy(out, L.reduce(k, m + n - 1), m * c)
    return out


def verify_level(M: GradedModule, e: int) -> Report:
    rep = Report("level one: e(-1) acts as the identity")
    for d in M.degrees:
        for c in M.basis[d]:
            rep.check("e(-1)w = w", (M.col_label(c),), M.act_raw(e, -1, {c: ONE}), {c: ONE}, M.col_label)
    return rep


def verify_derivative(fe: FieldEngine, vl: InducedEngine, states, w_max, span: int = 2) -> Report:
    """(D v)_q = -q v_{q-1} on generator states."""
    rep = Report("derivative rule")
    M = fe.M
    ws = [(d, c) for d in M.degrees if d <= w_max for c in M.basis[d]]
    for lab, v in states:
        if not v:
            continue
        word = next(iter(v))[0]
        res = Fraction(fe.sector(word), fe.T)
        wt = fe.weight(word)
        Dv: dict = {}
        for mono, x in v.items():
            axpy(Dv, translation_ambient(vl, mono), x)
        for k in range(-span, span + 1):
            q = res + k
            for d, c in ws:
                if d + wt + 1 - q - 1 > M.max_degree or d + wt - q < 0:
                    continue
                w = M.ambient({c: ONE})
                lhs = M.normal_form(fe.coef(Dv, q, w))
                rhs = M.normal_form(fe.coef(v, q - 1, w))
                rhs = {i: -q * x for i, x in rhs.items() if q}
                rep.check("(Dv)_q w = -q v_{q-1} w", (lab, _fmt(q), M.col_label(c)), lhs, rhs, M.col_label)
    return rep


def verify_restricted(fe: FieldEngine, states, extra: int = 3) -> Report:
    """u_n w = 0 for every n above deg w + wt u - 1, witnessed on a few indices."""
    rep = Report("restricted: u_n w = 0 for n large")
    M = fe.M
    for lab, v in states:
        if not v:
            continue
        word = next(iter(v))[0]
        res = Fraction(fe.sector(word), fe.T)
        wt = fe.weight(word)
        for d in M.degrees:
            for c in M.basis[d]:
                bound = d + wt - 1
                n0 = floor_in_class(bound, res) + 1
                for k in range(extra):
                    out = M.normal_form(fe.coef(v, n0 + k, M.ambient({c: ONE})))
                    rep.check("u_n w = 0 beyond the bound", (lab, _fmt(n0 + k), M.col_label(c)), out, {}, M.col_label)
    return rep
