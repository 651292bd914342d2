"""Finite-order automorphisms given as Z/T sector gradings, and endomorphism checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebroid import CommAlgebra, VertexAlgebroid, unit
from .errors import InputError, InternalConsistencyError
from .linalg import Echelon
from .report import Report


@dataclass(frozen=True)
class SectorGrading:
    T: int
    A: tuple  # sector of each A basis vector
    B: tuple  # sector of each B basis vector

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(int(r) for r in self.A))
        object.__setattr__(self, "B", tuple(int(r) for r in self.B))
        if self.T < 1:
            raise InputError("T must be a positive integer")
        for r in self.A + self.B:
            if not 0 <= r < self.T:
                raise InputError(f"sector {r} outside 0..{self.T - 1}")

    @classmethod
    def trivial(cls, B: VertexAlgebroid) -> "SectorGrading":
        return cls(1, (0,) * B.A.dim, (0,) * B.dim)

    def combined(self) -> tuple:
        """Sectors on A + B with A first."""
        return self.A + self.B


def check_sector_grading(B: VertexAlgebroid, G: SectorGrading) -> Report:
    """Every structure constant respects sector addition mod T."""
    rep = Report("sector grading")
    A = B.A
    T = G.T
    if len(G.A) != A.dim or len(G.B) != B.dim:
        rep.fail("one sector per basis vector", (len(G.A), len(G.B)))
        return rep
    LA, LB = A.labels, B.labels
    if A.dim:
        rep.check("identity has sector 0", (LA[A.unit],), {0: Fraction(G.A[A.unit])}, {})

    def scan(name, table, left, right, out_sec, out_labels, in_labels):
        for (i, j), v in sorted(table.items()):
            want = (left[i] + right[j]) % T
            bad = {k: x for k, x in v.items() if out_sec[k] % T != want}
            rep.check(f"{name} lands in sector r+s", (in_labels[0][i], in_labels[1][j]), bad, {}, out_labels)

    scan("product", A.product, G.A, G.A, G.A, LA, (LA, LA))
    scan("a*b", B.action, G.A, G.B, G.B, LB, (LA, LB))
    scan("[b,b']", B.bracket, G.B, G.B, G.B, LB, (LB, LB))
    scan("pi(b)(a)", B.anchor, G.B, G.A, G.A, LA, (LB, LA))
    scan("<b,b'>", B.pairing, G.B, G.B, G.A, LA, (LB, LB))
    for a, v in sorted(B.partial.items()):
        bad = {k: x for k, x in v.items() if G.B[k] != G.A[a]}
        rep.check("partial preserves sectors", (LA[a],), bad, {}, LB)
    rep.notes.append("equivalently: scaling sector r by exp(2 pi i r/T) is an automorphism")
    return rep


@dataclass(frozen=True)
class GradedEndomorphism:
    """Images of basis vectors: ``A[a]`` is a vector in A, ``B[b]`` a vector in B."""

    A: dict
    B: dict

    def on_A(self, v: dict) -> dict:
        return _apply(self.A, v)

    def on_B(self, v: dict) -> dict:
        return _apply(self.B, v)

    def compose(self, other: "GradedEndomorphism") -> "GradedEndomorphism":
        """``self o other``."""
        return GradedEndomorphism(
            {a: self.on_A(v) for a, v in other.A.items()},
            {b: self.on_B(v) for b, v in other.B.items()},
        )

    @classmethod
    def identity(cls, B: VertexAlgebroid) -> "GradedEndomorphism":
        return cls({a: unit(a) for a in range(B.A.dim)}, {b: unit(b) for b in range(B.dim)})

    @classmethod
    def from_grading(cls, B: VertexAlgebroid, G: SectorGrading) -> "GradedEndomorphism":
        """The diagonal map for T <= 2, where the eigenvalues are rational."""
        if G.T > 2:
            raise InputError("eigenvalues are irrational for T > 2")
        sign = lambda r: Fraction(-1) if r else Fraction(1)
        return cls({a: {a: sign(G.A[a])} for a in range(B.A.dim)},
                   {b: {b: sign(G.B[b])} for b in range(B.dim)})


def _apply(table: dict, v: dict) -> dict:
    out: dict = {}
    for i, x in v.items():
        for k, y in table.get(i, {}).items():
            out[k] = out.get(k, 0) + x * y
    return {k: y for k, y in out.items() if y}


def _is_bijective(table: dict, n: int) -> bool:
    ech = Echelon(table.get(i, {}) for i in range(n))
    return len(ech) == n


def check_algebroid_endomorphism(B: VertexAlgebroid, f: GradedEndomorphism, max_order: int = 64) -> Report:
    """The six homomorphism conditions on all basis tuples, plus bijectivity and order."""
    rep = Report("vertex algebroid endomorphism")
    A = B.A
    LA, LB = A.labels, B.labels
    As, Bs = range(A.dim), range(B.dim)
    fa = lambda v: f.on_A(v)
    fb = lambda v: f.on_B(v)
    if A.dim:
        rep.check("f(e) = e", (LA[A.unit],), fa(A.one()), A.one(), LA)
    for a, a2 in product(As, As):
        rep.check("f(aa') = f(a)f(a')", (LA[a], LA[a2]), fa(A.mul(unit(a), unit(a2))),
                  A.mul(fa(unit(a)), fa(unit(a2))), LA)
    for u, v in product(Bs, Bs):
        rep.check("f[u,v] = [fu,fv]", (LB[u], LB[v]), fb(B.br(unit(u), unit(v))),
                  B.br(fb(unit(u)), fb(unit(v))), LB)
    for a, v in product(As, Bs):
        rep.check("f(a*v) = f(a)*f(v)", (LA[a], LB[v]), fb(B.act(unit(a), unit(v))),
                  B.act(fa(unit(a)), fb(unit(v))), LB)
    for u, v in product(Bs, Bs):
        rep.check("<fu,fv> = f<u,v>", (LB[u], LB[v]), B.pair(fb(unit(u)), fb(unit(v))),
                  fa(B.pair(unit(u), unit(v))), LA)
    for a in As:
        rep.check("f d = d f", (LA[a],), fb(B.d(unit(a))), B.d(fa(unit(a))), LB)
    for b, a in product(Bs, As):
        rep.check("f(pi(b)a) = pi(fb)(fa)", (LB[b], LA[a]), fa(B.pi(unit(b), unit(a))),
                  B.pi(fb(unit(b)), fa(unit(a))), LA)
    bij = _is_bijective(f.A, A.dim) and _is_bijective(f.B, B.dim)
    rep.data["bijective"] = bij
    rep.data["order"] = endomorphism_order(B, f, max_order) if bij else "not invertible"
    return rep


def endomorphism_order(B: VertexAlgebroid, f: GradedEndomorphism, max_order: int = 64):
    ident = GradedEndomorphism.identity(B)
    g = f
    for k in range(1, max_order + 1):
        if _same(g, ident, B):
            return k
        g = f.compose(g)
    return f"infinite or > {max_order}"


def _same(f: GradedEndomorphism, g: GradedEndomorphism, B: VertexAlgebroid) -> bool:
    return all(f.A.get(a, {}) == g.A.get(a, {}) for a in range(B.A.dim)) and all(
        f.B.get(b, {}) == g.B.get(b, {}) for b in range(B.dim)
    )


@dataclass(frozen=True)
class FixedPart:
    """Sector-0 subalgebroid with the embeddings of its bases."""

    A0: CommAlgebra
    B0: VertexAlgebroid
    A_index: tuple  # local -> global A index
    B_index: tuple  # local -> global B index


def fixed_subalgebroid(B: VertexAlgebroid, G: SectorGrading) -> FixedPart:
    """Restriction of all tables to sector-0 basis vectors."""
    A = B.A
    ai = tuple(a for a in range(A.dim) if G.A[a] == 0)
    bi = tuple(b for b in range(B.dim) if G.B[b] == 0)
    la = {g: i for i, g in enumerate(ai)}
    lb = {g: i for i, g in enumerate(bi)}

    def loc(v, m):
        out = {}
        for k, x in v.items():
            if k not in m:
                raise InternalConsistencyError("sector-0 inputs produced a nonzero sector component")
            out[m[k]] = x
        return out

    if A.unit not in la:
        raise InputError("identity must have sector 0")
    A0 = CommAlgebra(tuple(A.labels[a] for a in ai),
                     {(la[i], la[j]): loc(v, la) for (i, j), v in A.product.items() if i in la and j in la},
                     la[A.unit])
    B0 = VertexAlgebroid(
        A0,
        tuple(B.labels[b] for b in bi),
        {(la[a], lb[b]): loc(v, lb) for (a, b), v in B.action.items() if a in la and b in lb},
        {(lb[u], lb[v]): loc(w, lb) for (u, v), w in B.bracket.items() if u in lb and v in lb},
        {(lb[b], la[a]): loc(w, la) for (b, a), w in B.anchor.items() if b in lb and a in la},
        {(lb[u], lb[v]): loc(w, la) for (u, v), w in B.pairing.items() if u in lb and v in lb},
        {la[a]: loc(w, lb) for a, w in B.partial.items() if a in la},
    )
    return FixedPart(A0, B0, ai, bi)


@dataclass(frozen=True)
class OverlapIdeal:
    rows: tuple  # echelon rows of I in A0-local coordinates
    quotient: CommAlgebra
    survivors: tuple
    report: Report


def overlap_ideal(A: CommAlgebra, G: SectorGrading) -> OverlapIdeal:
    """I = sum over 0 < r < T of A^r A^(T-r), as an ideal of A^0, and A^0/I."""
    ai = tuple(a for a in range(A.dim) if G.A[a] == 0)
    la = {g: i for i, g in enumerate(ai)}
    gens = []
    for a, a2 in product(range(A.dim), repeat=2):
        r = G.A[a]
        if r and (r + G.A[a2]) % G.T == 0:
            v = A.mul(unit(a), unit(a2))
            if v:
                gens.append({la[k]: x for k, x in v.items()})
    e = la[A.unit]
    ideal = Echelon(gens, key=lambda c: (c == e, c))
    survivors = tuple(i for i in range(len(ai)) if i not in ideal.rows)
    pos = {s: i for i, s in enumerate(survivors)}
    rep = Report("overlap ideal")

    def A0_mul(u, v):
        w = A.mul({ai[i]: c for i, c in u.items()}, {ai[i]: c for i, c in v.items()})
        return {la[k]: x for k, x in w.items()}

    def project(v):
        return {pos[k]: x for k, x in ideal.reduce(v).items()}

    for p in ideal.pivots():
        for i in range(len(ai)):
            rep.check("A0 I in I", (A.labels[ai[i]], A.labels[ai[p]]),
                      ideal.reduce(A0_mul(unit(i), ideal.rows[p])), {})
    k = len(survivors)
    prod = {(i, j): project(A0_mul(unit(survivors[i]), unit(survivors[j]))) for i, j in product(range(k), repeat=2)}
    labels = tuple(A.labels[ai[s]] for s in survivors)
    quotient = CommAlgebra(labels, prod, pos[e]) if k else CommAlgebra((), {}, 0)
    rep.data["dim_I"] = len(ideal)
    rep.data["dim_A0/I"] = k
    return OverlapIdeal(tuple(ideal.basis()), quotient, survivors, rep)
