"""Commutative algebras, 1-truncated conformal algebras, vertex and Lie algebroids.

Every structure is a finite table of sparse vectors (dicts ``{index: Fraction}``)
on named basis vectors.  The ``check_*`` functions evaluate every axiom on
every basis tuple and return a :class:`~valgebroid.report.Report` whose
violations carry both sides of the failed identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DimensionError, InputError, InternalConsistencyError
from .kernels import axpy
from .linalg import Echelon
from .report import Report

Table = dict  # {(i, j): {k: Fraction}}


def unit(i) -> dict:
    return {i: Fraction(1)}


def bilinear(table: Table, u: dict, v: dict) -> dict:
    out: dict = {}
    for i, x in u.items():
        for j, y in v.items():
            t = table.get((i, j))
            if t:
                axpy(out, t, x * y)
    return out


def linear(table: dict, u: dict) -> dict:
    out: dict = {}
    for i, x in u.items():
        t = table.get(i)
        if t:
            axpy(out, t, x)
    return out


def vsum(*terms) -> dict:
    """Sum of ``(coefficient, vector)`` pairs."""
    out: dict = {}
    for c, v in terms:
        axpy(out, v, Fraction(c))
    return out


def _clean_table(table) -> Table:
    out = {}
    for k, v in table.items():
        v = {i: Fraction(x) for i, x in v.items() if x}
        if v:
            out[k] = v
    return out


def _check_indices(name: str, table: dict, key_dims: tuple, value_dim: int) -> None:
    for k, v in table.items():
        ks = k if isinstance(k, tuple) else (k,)
        if len(ks) != len(key_dims) or any(not 0 <= a < n for a, n in zip(ks, key_dims)):
            raise DimensionError(f"{name}: key {k} outside {key_dims}")
        for i in v:
            if not 0 <= i < value_dim:
                raise DimensionError(f"{name}: value index {i} outside {value_dim}")


# ---------------------------------------------------------------- structures


@dataclass(frozen=True)
class CommAlgebra:
    labels: tuple
    product: Table
    unit: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "product", _clean_table(self.product))
        n = self.dim
        if n and not 0 <= self.unit < n:
            raise DimensionError("unit index out of range")
        _check_indices("A.product", self.product, (n, n), n)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul(self, u: dict, v: dict) -> dict:
        return bilinear(self.product, u, v)

    def one(self) -> dict:
        return unit(self.unit)


@dataclass(frozen=True)
class VertexAlgebroid:
    """Vertex A-algebroid on the space with basis ``labels``.

    ``action[(a, b)]`` is a*b, ``bracket[(b, b')]`` the Leibniz bracket,
    ``anchor[(b, a)]`` is pi(b)(a), ``pairing[(b, b')]`` lies in A and
    ``partial[a]`` in B.
    """

    A: CommAlgebra
    labels: tuple
    action: Table = field(default_factory=dict)
    bracket: Table = field(default_factory=dict)
    anchor: Table = field(default_factory=dict)
    pairing: Table = field(default_factory=dict)
    partial: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for name in ("action", "bracket", "anchor", "pairing", "partial"):
            object.__setattr__(self, name, _clean_table(getattr(self, name)))
        nA, nB = self.A.dim, self.dim
        _check_indices("B.action", self.action, (nA, nB), nB)
        _check_indices("B.bracket", self.bracket, (nB, nB), nB)
        _check_indices("B.anchor", self.anchor, (nB, nA), nA)
        _check_indices("B.pairing", self.pairing, (nB, nB), nA)
        _check_indices("B.partial", self.partial, (nA,), nB)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def act(self, a: dict, v: dict) -> dict:
        return bilinear(self.action, a, v)

    def br(self, u: dict, v: dict) -> dict:
        return bilinear(self.bracket, u, v)

    def pi(self, u: dict, a: dict) -> dict:
        return bilinear(self.anchor, u, a)

    def pair(self, u: dict, v: dict) -> dict:
        return bilinear(self.pairing, u, v)

    def d(self, a: dict) -> dict:
        return linear(self.partial, a)


@dataclass(frozen=True)
class Tca:
    """1-truncated conformal algebra on C = C0 + C1 with combined indexing.

    Indices ``0..n0-1`` are C0 and ``n0..n0+n1-1`` are C1.  ``prod0`` and
    ``prod1`` hold u_0 v and u_1 v over all basis pairs; ``partial`` maps
    C0 indices to vectors in C1.
    """

    n0: int
    labels: tuple
    prod0: Table = field(default_factory=dict)
    prod1: Table = field(default_factory=dict)
    partial: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for name in ("prod0", "prod1", "partial"):
            object.__setattr__(self, name, _clean_table(getattr(self, name)))
        n = self.dim
        if not 0 <= self.n0 <= n:
            raise DimensionError("n0 outside [0, dim]")
        _check_indices("C.prod0", self.prod0, (n, n), n)
        _check_indices("C.prod1", self.prod1, (n, n), n)
        _check_indices("C.partial", self.partial, (n,), n)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n1(self) -> int:
        return self.dim - self.n0

    def is_even(self, i: int) -> bool:
        """True for C0 (weight 0) basis vectors."""
        return i < self.n0

    def weight(self, i: int) -> int:
        return 0 if i < self.n0 else 1

    def p0(self, u: dict, v: dict) -> dict:
        return bilinear(self.prod0, u, v)

    def p1(self, u: dict, v: dict) -> dict:
        return bilinear(self.prod1, u, v)

    def prod(self, i: int, u: dict, v: dict) -> dict:
        return self.p0(u, v) if i == 0 else self.p1(u, v)

    def d(self, a: dict) -> dict:
        return linear(self.partial, a)


@dataclass(frozen=True)
class LieAlgebroid:
    A: CommAlgebra
    labels: tuple
    bracket: Table = field(default_factory=dict)
    action: Table = field(default_factory=dict)  # (a, u) -> g
    anchor: Table = field(default_factory=dict)  # (u, a) -> A

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        for name in ("bracket", "action", "anchor"):
            object.__setattr__(self, name, _clean_table(getattr(self, name)))
        nA, n = self.A.dim, self.dim
        _check_indices("g.bracket", self.bracket, (n, n), n)
        _check_indices("g.action", self.action, (nA, n), n)
        _check_indices("g.anchor", self.anchor, (n, nA), nA)

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class LieAlgebroidModule:
    dim: int
    A_action: Table = field(default_factory=dict)  # (a, w) -> W
    g_action: Table = field(default_factory=dict)  # (u, w) -> W
    labels: tuple = ()

    def __post_init__(self):
        labels = tuple(self.labels) or tuple(f"w{i}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise DimensionError("module labels do not match its dimension")
        object.__setattr__(self, "labels", labels)
        for name in ("A_action", "g_action"):
            object.__setattr__(self, name, _clean_table(getattr(self, name)))
        for name in ("A_action", "g_action"):
            for (x, w), v in getattr(self, name).items():
                if not 0 <= w < self.dim or any(not 0 <= i < self.dim for i in v):
                    raise DimensionError(f"{name}: index outside module dimension")


# ------------------------------------------------------------------ checkers


def check_comm_algebra(A: CommAlgebra) -> Report:
    rep = Report("commutative algebra")
    L = A.labels
    n = A.dim
    if n == 0:
        rep.fail("nonzero algebra with unit", ())
        return rep
    for i, j in product(range(n), repeat=2):
        rep.check("commutativity", (L[i], L[j]), A.mul(unit(i), unit(j)), A.mul(unit(j), unit(i)), L)
    for i, j, k in product(range(n), repeat=3):
        lhs = A.mul(A.mul(unit(i), unit(j)), unit(k))
        rhs = A.mul(unit(i), A.mul(unit(j), unit(k)))
        rep.check("associativity", (L[i], L[j], L[k]), lhs, rhs, L)
    for i in range(n):
        rep.check("unit law", (L[A.unit], L[i]), A.mul(A.one(), unit(i)), unit(i), L)
    return rep


def check_tca(C: Tca) -> Report:
    rep = Report("1-truncated conformal algebra")
    L = C.labels
    n, n0 = C.dim, C.n0
    even, odd = range(n0), range(n0, n)

    # products must have the degree -i-1
    deg = rep.add(Report("degree of operations"))
    for i, j in product(range(n), repeat=2):
        for op, table in ((0, C.prod0), (1, C.prod1)):
            target = C.weight(i) + C.weight(j) - op - 1
            v = table.get((i, j), {})
            bad = {k: x for k, x in v.items() if target < 0 or C.weight(k) != target}
            deg.check(f"u_{op}v lands in degree {target}", (L[i], L[j]), bad, {}, L)
    for a in range(n):
        v = C.partial.get(a, {})
        bad = {k: x for k, x in v.items() if a >= n0 or k < n0}
        deg.check("partial: C0 -> C1", (L[a],), bad, {}, L)

    der = rep.add(Report("derivation"))
    for a in even:
        da = C.d(unit(a))
        for x in range(n):
            der.check("(da)_0 = 0", (L[a], L[x]), C.p0(da, unit(x)), {}, L)
            der.check("(da)_1 = -a_0", (L[a], L[x]), C.p1(da, unit(x)),
                      vsum((-1, C.p0(unit(a), unit(x)))), L)
        for u in odd:
            der.check("d(u_0 a) = u_0 da", (L[u], L[a]), C.d(C.p0(unit(u), unit(a))),
                      C.p0(unit(u), da), L)

    com = rep.add(Report("commutativity"))
    for a in even:
        for u in odd:
            com.check("u_0 a = -a_0 u", (L[u], L[a]), C.p0(unit(u), unit(a)),
                      vsum((-1, C.p0(unit(a), unit(u)))), L)
    for u, v in product(odd, repeat=2):
        com.check("u_0 v = -v_0 u + d(v_1 u)", (L[u], L[v]), C.p0(unit(u), unit(v)),
                  vsum((-1, C.p0(unit(v), unit(u))), (1, C.d(C.p1(unit(v), unit(u))))), L)
        com.check("u_1 v = v_1 u", (L[u], L[v]), C.p1(unit(u), unit(v)), C.p1(unit(v), unit(u)), L)

    asc = rep.add(Report("associativity"))
    for x, y, z in product(range(n), repeat=3):
        for i in (0, 1):
            lhs = C.p0(unit(x), C.prod(i, unit(y), unit(z)))
            rhs = vsum((1, C.prod(i, unit(y), C.p0(unit(x), unit(z)))),
                       (1, C.prod(i, C.p0(unit(x), unit(y)), unit(z))))
            asc.check(f"a_0 b_{i} c = b_{i} a_0 c + (a_0 b)_{i} c", (L[x], L[y], L[z]), lhs, rhs, L)
    return rep


def rescale_tca(C: Tca, ell) -> Tca:
    """Scale u_1 v on C1 x C1 by 1/ell and the derivation by ell."""
    ell = Fraction(ell)
    if ell == 0:
        raise InputError("rescaling parameter must be nonzero")
    n0 = C.n0
    prod1 = {}
    for (i, j), v in C.prod1.items():
        if i >= n0 and j >= n0:
            prod1[(i, j)] = {k: x / ell for k, x in v.items()}
        else:
            prod1[(i, j)] = dict(v)
    partial = {a: {k: ell * x for k, x in v.items()} for a, v in C.partial.items()}
    return Tca(n0, C.labels, dict(C.prod0), prod1, partial)


def tca_of_algebroid(B: VertexAlgebroid) -> Tca:
    """The truncated conformal algebra A + B with u_0v=[u,v], u_1v=<u,v>,
    u_0a=pi(u)(a), a_0u=-pi(u)(a) and a_i a'=0."""
    nA = B.A.dim
    labels = B.A.labels + B.labels
    prod0, prod1, partial = {}, {}, {}
    for (u, v), w in B.bracket.items():
        prod0[(nA + u, nA + v)] = {nA + k: x for k, x in w.items()}
    for (u, v), w in B.pairing.items():
        prod1[(nA + u, nA + v)] = dict(w)
    for (u, a), w in B.anchor.items():
        prod0[(nA + u, a)] = dict(w)
        prod0[(a, nA + u)] = {k: -x for k, x in w.items()}
    for a, w in B.partial.items():
        partial[a] = {nA + k: x for k, x in w.items()}
    return Tca(nA, labels, prod0, prod1, partial)


def _split_tca(C: Tca, A: CommAlgebra):
    """Read algebroid tables off a Tca on A + B (inverse of tca_of_algebroid)."""
    nA = C.n0
    if A.dim != nA:
        raise DimensionError("algebra dimension differs from C0")
    bracket, pairing, anchor, partial = {}, {}, {}, {}
    for (i, j), w in C.prod0.items():
        if i >= nA and j >= nA:
            bracket[(i - nA, j - nA)] = {k - nA: x for k, x in w.items()}
        elif i >= nA and j < nA:
            anchor[(i - nA, j)] = dict(w)
    for (i, j), w in C.prod1.items():
        if i >= nA and j >= nA:
            pairing[(i - nA, j - nA)] = dict(w)
    for a, w in C.partial.items():
        partial[a] = {k - nA: x for k, x in w.items()}
    return bracket, pairing, anchor, partial


def check_prop24_conditions(C: Tca, A: CommAlgebra, action: Table) -> Report:
    """The six compatibility conditions between the Tca on A + B and the
    A-action on B that make the pair a vertex A-algebroid."""
    rep = Report("Tca/module compatibility")
    nA, n = C.n0, C.dim
    L = C.labels
    Bl = L[nA:]

    def act(a: dict, v: dict) -> dict:  # a in A (A-indices), v in C1 (combined)
        loc = {k - nA: x for k, x in v.items()}
        return {k + nA: x for k, x in bilinear(action, a, loc).items()}

    As, Bs = range(nA), range(nA, n)
    for a, a2, u in product(As, As, Bs):
        lhs = vsum((1, act(unit(a), act(unit(a2), unit(u)))), (-1, act(A.mul(unit(a), unit(a2)), unit(u))))
        rhs = vsum((1, act(C.p0(unit(u), unit(a)), C.d(unit(a2)))),
                   (1, act(C.p0(unit(u), unit(a2)), C.d(unit(a)))))
        rep.check("a(a'u)-(aa')u = (u_0a)da' + (u_0a')da", (L[a], L[a2], L[u]), lhs, rhs, L)
    for u, a, v in product(Bs, As, Bs):
        lhs = vsum((1, C.p0(unit(u), act(unit(a), unit(v)))), (-1, act(unit(a), C.p0(unit(u), unit(v)))))
        rep.check("u_0(av)-a(u_0v) = (u_0a)v", (L[u], L[a], L[v]), lhs,
                  act(C.p0(unit(u), unit(a)), unit(v)), L)
    for u, a, a2 in product(Bs, As, As):
        lhs = C.p0(unit(u), A.mul(unit(a), unit(a2)))
        rhs = vsum((1, A.mul(unit(a), C.p0(unit(u), unit(a2)))), (1, A.mul(C.p0(unit(u), unit(a)), unit(a2))))
        rep.check("u_0(aa') = a(u_0a') + (u_0a)a'", (L[u], L[a], L[a2]), lhs, rhs, L)
    for a, a2, v in product(As, As, Bs):
        lhs = C.p0(unit(a), act(unit(a2), unit(v)))
        rhs = A.mul(unit(a2), C.p0(unit(a), unit(v)))
        rep.check("a_0(a'v) = a'(a_0v)", (L[a], L[a2], L[v]), lhs, rhs, L)
    for a, u, v in product(As, Bs, Bs):
        lhs = C.p1(act(unit(a), unit(u)), unit(v))
        rhs = vsum((1, A.mul(unit(a), C.p1(unit(u), unit(v)))),
                   (-1, C.p0(unit(u), C.p0(unit(v), unit(a)))))
        rep.check("(au)_1v = a(u_1v) - u_0v_0a", (L[a], L[u], L[v]), lhs, rhs, L)
    for a, a2 in product(As, As):
        lhs = C.d(A.mul(unit(a), unit(a2)))
        rhs = vsum((1, act(unit(a), C.d(unit(a2)))), (1, act(unit(a2), C.d(unit(a)))))
        rep.check("d(aa') = a da' + a' da", (L[a], L[a2]), lhs, rhs, L)
    rep.data["B_basis"] = list(Bl)
    return rep


def check_vertex_algebroid(B: VertexAlgebroid) -> Report:
    """Def. of a vertex A-algebroid on all basis tuples, plus the structural
    requirements (unit, Leibniz, anchor) and the equivalent Tca conditions."""
    rep = Report("vertex algebroid")
    A = B.A
    LA, LB = A.labels, B.labels
    nA, nB = A.dim, B.dim
    As, Bs = range(nA), range(nB)
    e = A.one()

    def pi_vec(v: dict, a: dict) -> dict:
        return B.pi(v, a)

    st = rep.add(Report("structure"))
    for v in Bs:
        st.check("1*v = v", (LB[v],), B.act(e, unit(v)), unit(v), LB)
    for u, v, w in product(Bs, repeat=3):
        lhs = B.br(unit(u), B.br(unit(v), unit(w)))
        rhs = vsum((1, B.br(B.br(unit(u), unit(v)), unit(w))), (1, B.br(unit(v), B.br(unit(u), unit(w)))))
        st.check("Leibniz [u,[v,w]] = [[u,v],w] + [v,[u,w]]", (LB[u], LB[v], LB[w]), lhs, rhs, LB)
    for u, v, a in product(Bs, Bs, As):
        lhs = pi_vec(B.br(unit(u), unit(v)), unit(a))
        rhs = vsum((1, B.pi(unit(u), B.pi(unit(v), unit(a)))), (-1, B.pi(unit(v), B.pi(unit(u), unit(a)))))
        st.check("pi([u,v]) = [pi(u),pi(v)]", (LB[u], LB[v], LA[a]), lhs, rhs, LA)
    for v, a, a2 in product(Bs, As, As):
        lhs = B.pi(unit(v), A.mul(unit(a), unit(a2)))
        rhs = vsum((1, A.mul(B.pi(unit(v), unit(a)), unit(a2))), (1, A.mul(unit(a), B.pi(unit(v), unit(a2)))))
        st.check("pi(v) is a derivation", (LB[v], LA[a], LA[a2]), lhs, rhs, LA)
    for u, v in product(Bs, repeat=2):
        st.check("<u,v> = <v,u>", (LB[u], LB[v]), B.pair(unit(u), unit(v)), B.pair(unit(v), unit(u)), LA)
    for a, a2 in product(As, As):
        st.check("pi(da) = 0", (LA[a], LA[a2]), pi_vec(B.d(unit(a)), unit(a2)), {}, LA)

    ax = rep.add(Report("algebroid axioms"))
    for a, a2, v in product(As, As, Bs):
        lhs = vsum((1, B.act(unit(a), B.act(unit(a2), unit(v)))), (-1, B.act(A.mul(unit(a), unit(a2)), unit(v))))
        rhs = vsum((1, B.act(B.pi(unit(v), unit(a)), B.d(unit(a2)))),
                   (1, B.act(B.pi(unit(v), unit(a2)), B.d(unit(a)))))
        ax.check("a*(a'*v)-(aa')*v = pi(v)(a)*d(a') + pi(v)(a')*d(a)", (LA[a], LA[a2], LB[v]), lhs, rhs, LB)
    for u, a, v in product(Bs, As, Bs):
        lhs = B.br(unit(u), B.act(unit(a), unit(v)))
        rhs = vsum((1, B.act(B.pi(unit(u), unit(a)), unit(v))), (1, B.act(unit(a), B.br(unit(u), unit(v)))))
        ax.check("[u,a*v] = pi(u)(a)*v + a*[u,v]", (LB[u], LA[a], LB[v]), lhs, rhs, LB)
    for u, v in product(Bs, repeat=2):
        lhs = vsum((1, B.br(unit(u), unit(v))), (1, B.br(unit(v), unit(u))))
        ax.check("[u,v]+[v,u] = d<u,v>", (LB[u], LB[v]), lhs, B.d(B.pair(unit(u), unit(v))), LB)
    for a, v, a2 in product(As, Bs, As):
        lhs = pi_vec(B.act(unit(a), unit(v)), unit(a2))
        rhs = A.mul(unit(a), B.pi(unit(v), unit(a2)))
        ax.check("pi(a*v) = a pi(v)", (LA[a], LB[v], LA[a2]), lhs, rhs, LA)
    for a, u, v in product(As, Bs, Bs):
        lhs = B.pair(B.act(unit(a), unit(u)), unit(v))
        rhs = vsum((1, A.mul(unit(a), B.pair(unit(u), unit(v)))), (-1, B.pi(unit(u), B.pi(unit(v), unit(a)))))
        ax.check("<a*u,v> = a<u,v> - pi(u)(pi(v)(a))", (LA[a], LB[u], LB[v]), lhs, rhs, LA)
    for v, v1, v2 in product(Bs, repeat=3):
        lhs = B.pi(unit(v), B.pair(unit(v1), unit(v2)))
        rhs = vsum((1, B.pair(B.br(unit(v), unit(v1)), unit(v2))), (1, B.pair(unit(v1), B.br(unit(v), unit(v2)))))
        ax.check("pi(v)(<v1,v2>) = <[v,v1],v2> + <v1,[v,v2]>", (LB[v], LB[v1], LB[v2]), lhs, rhs, LA)
    for a, a2 in product(As, As):
        lhs = B.d(A.mul(unit(a), unit(a2)))
        rhs = vsum((1, B.act(unit(a), B.d(unit(a2)))), (1, B.act(unit(a2), B.d(unit(a)))))
        ax.check("d(aa') = a*d(a') + a'*d(a)", (LA[a], LA[a2]), lhs, rhs, LB)
    for v, a in product(Bs, As):
        ax.check("[v,d(a)] = d(pi(v)(a))", (LB[v], LA[a]), B.br(unit(v), B.d(unit(a))),
                 B.d(B.pi(unit(v), unit(a))), LB)
    for v, a in product(Bs, As):
        ax.check("<v,d(a)> = pi(v)(a)", (LB[v], LA[a]), B.pair(unit(v), B.d(unit(a))),
                 B.pi(unit(v), unit(a)), LA)
    rep.notes.append(
        "invariance pi(v)<v1,v2> checked on all ordered basis triples; "
        "it is linear in each slot, so the polarized form holds iff this does"
    )

    C = tca_of_algebroid(B)
    rep.add(check_tca(C))
    rep.add(check_prop24_conditions(C, A, B.action))
    return rep


def algebroid_of_tca(C: Tca, A: CommAlgebra, action: Table, labels=None) -> VertexAlgebroid:
    """Rebuild the algebroid from a Tca on A + B plus a given A-action on B.

    The action is not invented; the compatibility conditions and the Tca
    axioms are verified and an :class:`InputError` is raised on failure.
    """
    for rep in (check_tca(C), check_prop24_conditions(C, A, action)):
        if not rep.passed:
            v = rep.first_violation()
            raise InputError(f"{rep.name} fails: {v.text() if v else ''}")
    for (i, j), w in C.prod0.items():
        if i < C.n0 and j < C.n0 and w:
            raise InputError("a_0 a' must vanish")
    for (i, j), w in C.prod0.items():
        if i < C.n0 <= j:
            opp = C.prod0.get((j, i), {})
            if vsum((1, w), (1, opp)):
                raise InputError("a_0 u must equal -u_0 a")
    bracket, pairing, anchor, partial = _split_tca(C, A)
    labels = tuple(labels) if labels is not None else C.labels[C.n0:]
    return VertexAlgebroid(A, labels, dict(action), bracket, anchor, pairing, partial)


# ------------------------------------------------------------- Lie algebroids


def check_lie_algebroid(g: LieAlgebroid) -> Report:
    rep = Report("Lie algebroid")
    A = g.A
    LA, Lg = A.labels, g.labels
    n, nA = g.dim, A.dim
    gs, As = range(n), range(nA)

    def br(u, v):
        return bilinear(g.bracket, u, v)

    def act(a, u):
        return bilinear(g.action, a, u)

    def anc(u, a):
        return bilinear(g.anchor, u, a)

    for u in gs:
        rep.check("[u,u] = 0", (Lg[u],), br(unit(u), unit(u)), {}, Lg)
    for u, v in product(gs, repeat=2):
        rep.check("[u,v] = -[v,u]", (Lg[u], Lg[v]), br(unit(u), unit(v)), vsum((-1, br(unit(v), unit(u)))), Lg)
    for u, v, w in product(gs, repeat=3):
        lhs = vsum((1, br(unit(u), br(unit(v), unit(w)))), (1, br(unit(v), br(unit(w), unit(u)))),
                   (1, br(unit(w), br(unit(u), unit(v)))))
        rep.check("Jacobi", (Lg[u], Lg[v], Lg[w]), lhs, {}, Lg)
    if nA:
        for u in gs:
            rep.check("e u = u", (Lg[u],), act(A.one(), unit(u)), unit(u), Lg)
    for a, a2, u in product(As, As, gs):
        rep.check("a(a'u) = (aa')u", (LA[a], LA[a2], Lg[u]), act(unit(a), act(unit(a2), unit(u))),
                  act(A.mul(unit(a), unit(a2)), unit(u)), Lg)
    for u, a, a2 in product(gs, As, As):
        lhs = anc(unit(u), A.mul(unit(a), unit(a2)))
        rhs = vsum((1, A.mul(anc(unit(u), unit(a)), unit(a2))), (1, A.mul(unit(a), anc(unit(u), unit(a2)))))
        rep.check("anchor acts by derivations", (Lg[u], LA[a], LA[a2]), lhs, rhs, LA)
    for u, v, a in product(gs, gs, As):
        lhs = anc(br(unit(u), unit(v)), unit(a))
        rhs = vsum((1, anc(unit(u), anc(unit(v), unit(a)))), (-1, anc(unit(v), anc(unit(u), unit(a)))))
        rep.check("[u,v]a = u(va) - v(ua)", (Lg[u], Lg[v], LA[a]), lhs, rhs, LA)
    for u, a, v in product(gs, As, gs):
        lhs = br(unit(u), act(unit(a), unit(v)))
        rhs = vsum((1, act(unit(a), br(unit(u), unit(v)))), (1, act(anc(unit(u), unit(a)), unit(v))))
        rep.check("[u,av] = a[u,v] + (ua)v", (Lg[u], LA[a], Lg[v]), lhs, rhs, Lg)
    for a, u, b in product(As, gs, As):
        lhs = A.mul(unit(a), anc(unit(u), unit(b)))
        rhs = anc(act(unit(a), unit(u)), unit(b))
        rep.check("a(ub) = (au)b", (LA[a], Lg[u], LA[b]), lhs, rhs, LA)
    return rep


def check_lie_algebroid_module(g: LieAlgebroid, W: LieAlgebroidModule) -> Report:
    rep = Report("Lie algebroid module")
    A = g.A
    LA, Lg, LW = A.labels, g.labels, W.labels
    n, nA, m = g.dim, A.dim, W.dim
    for (x, w) in W.A_action:
        if not 0 <= x < nA:
            raise DimensionError("A-action key outside A")
    for (x, w) in W.g_action:
        if not 0 <= x < n:
            raise DimensionError("g-action key outside g")

    def aw(a, w):
        return bilinear(W.A_action, a, w)

    def uw(u, w):
        return bilinear(W.g_action, u, w)

    def br(u, v):
        return bilinear(g.bracket, u, v)

    ws = range(m)
    if nA:
        for w in ws:
            rep.check("e w = w", (LW[w],), aw(A.one(), unit(w)), unit(w), LW)
    for a, a2, w in product(range(nA), range(nA), ws):
        rep.check("a(a'w) = (aa')w", (LA[a], LA[a2], LW[w]), aw(unit(a), aw(unit(a2), unit(w))),
                  aw(A.mul(unit(a), unit(a2)), unit(w)), LW)
    for u, v, w in product(range(n), range(n), ws):
        lhs = uw(br(unit(u), unit(v)), unit(w))
        rhs = vsum((1, uw(unit(u), uw(unit(v), unit(w)))), (-1, uw(unit(v), uw(unit(u), unit(w)))))
        rep.check("[u,v]w = u(vw) - v(uw)", (Lg[u], Lg[v], LW[w]), lhs, rhs, LW)
    for u, a, w in product(range(n), range(nA), ws):
        lhs = vsum((1, uw(unit(u), aw(unit(a), unit(w)))), (-1, aw(unit(a), uw(unit(u), unit(w)))))
        rhs = aw(bilinear(g.anchor, unit(u), unit(a)), unit(w))
        rep.check("u(aw) - a(uw) = (ua)w", (Lg[u], LA[a], LW[w]), lhs, rhs, LW)
    for a, u, w in product(range(nA), range(n), ws):
        lhs = aw(unit(a), uw(unit(u), unit(w)))
        rhs = uw(bilinear(g.action, unit(a), unit(u)), unit(w))
        rep.check("a(uw) = (au)w", (LA[a], Lg[u], LW[w]), lhs, rhs, LW)
    return rep


@dataclass(frozen=True)
class QuotientMap:
    """Projection B -> B/S onto the complement spanned by surviving basis
    vectors (the non-pivot columns of S)."""

    dim: int
    relations: dict  # RREF rows {pivot: row}
    survivors: tuple  # B indices kept, in order

    def project(self, v: dict) -> dict:
        from .kernels import reduce_vector

        r = reduce_vector(v, self.relations)
        pos = {b: i for i, b in enumerate(self.survivors)}
        return {pos[k]: x for k, x in r.items()}

    def lift(self, i: int) -> dict:
        return unit(self.survivors[i])


def quotient_map(dim: int, spanning) -> QuotientMap:
    ech = Echelon()
    for v in spanning:
        ech.add(v)
    survivors = tuple(i for i in range(dim) if i not in ech.rows)
    return QuotientMap(dim, dict(ech.rows), survivors)


def a_partial_a(B: VertexAlgebroid) -> list[dict]:
    """Spanning set of A*dA = span{a * d(a')}."""
    out = []
    for a, a2 in product(range(B.A.dim), repeat=2):
        v = B.act(unit(a), B.d(unit(a2)))
        if v:
            out.append(v)
    return out


def lie_algebroid_quotient(B: VertexAlgebroid) -> tuple[LieAlgebroid, QuotientMap]:
    """B / A*dA with the induced bracket, A-action and anchor."""
    q = quotient_map(B.dim, a_partial_a(B))
    ideal = Echelon(q.relations.values())
    # well-definedness: A*dA is a two-sided ideal, an A-submodule and has zero anchor
    for s in list(ideal.rows.values()):
        for b in range(B.dim):
            for v in (B.br(s, unit(b)), B.br(unit(b), s)):
                if not ideal.contains(v):
                    raise InternalConsistencyError("A*dA is not an ideal of B")
        for a in range(B.A.dim):
            if not ideal.contains(B.act(unit(a), s)):
                raise InternalConsistencyError("A*dA is not an A-submodule of B")
            if B.pi(s, unit(a)):
                raise InternalConsistencyError("anchor does not vanish on A*dA")
    k = len(q.survivors)
    labels = tuple(B.labels[i] for i in q.survivors)
    bracket, action, anchor = {}, {}, {}
    for i, j in product(range(k), repeat=2):
        bracket[(i, j)] = q.project(B.br(q.lift(i), q.lift(j)))
    for a, i in product(range(B.A.dim), range(k)):
        action[(a, i)] = q.project(B.act(unit(a), q.lift(i)))
        anchor[(i, a)] = B.pi(q.lift(i), unit(a))
    return LieAlgebroid(B.A, labels, bracket, action, anchor), q


def regular_module(g: LieAlgebroid) -> LieAlgebroidModule:
    """A acting on itself by multiplication, g by the anchor."""
    A = g.A
    n = A.dim
    A_action = {(a, w): A.mul(unit(a), unit(w)) for a in range(n) for w in range(n)}
    g_action = {(u, w): bilinear(g.anchor, unit(u), unit(w)) for u in range(g.dim) for w in range(n)}
    return LieAlgebroidModule(n, A_action, g_action, A.labels)
