"""Degree-truncated quotients of induced modules.

A :class:`GradedModule` is an induced module (the ambient space, spanned by
PBW monomials) truncated at ``max_degree``, together with a relation
subspace kept as an integer-column echelon form.  Columns are assigned slice
by slice in a caller-chosen order, so the pivots (the smallest column of each
relation row) and hence the surviving quotient basis are deterministic.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .errors import InternalConsistencyError, WindowError
from .induced import InducedEngine
from .kernels import axpy
from .linalg import Echelon, kernel, SparseVector
from .loop import frac_range
from .report import Report

ONE = Fraction(1)


class GradedModule:
    """Truncated graded quotient of an induced module.

    ``normalizer`` (optional) rewrites an ambient monomial into an equivalent
    combination before column lookup; it must only ever add elements of the
    relation subspace.
    """

    def __init__(self, flavor: str, engine: InducedEngine, max_degree, slices: dict,
                 normalizer=None, labeler=None):
        self.flavor = flavor
        self.engine = engine
        self.loop = engine.loop
        self.T = self.loop.T
        self.max_degree = Fraction(max_degree)
        self.degrees = list(frac_range(Fraction(0), self.max_degree, Fraction(1, self.T)))
        self.col: dict = {}
        self.monos: list = []
        self.col_degree: list = []
        self.slices: dict = {}
        for d in self.degrees:
            cols = []
            for mono in slices.get(d, []):
                if mono in self.col:
                    raise InternalConsistencyError("duplicate monomial in slice enumeration")
                self.col[mono] = len(self.monos)
                self.monos.append(mono)
                self.col_degree.append(d)
                cols.append(self.col[mono])
            self.slices[d] = cols
        self.relations = Echelon()
        self.normalizer = normalizer
        self.labeler = labeler or engine.label
        self.basis: dict = {}
        self.position: dict = {}
        self.notes: list = []
        self.finalize()

    # ---- bookkeeping

    def finalize(self) -> None:
        """Recompute the surviving basis after the relations changed."""
        rows = self.relations.rows
        self.basis = {d: [c for c in self.slices[d] if c not in rows] for d in self.degrees}
        self.position = {}
        for d in self.degrees:
            for i, c in enumerate(self.basis[d]):
                self.position[c] = (d, i)

    def dims(self) -> list[int]:
        return [len(self.basis[d]) for d in self.degrees]

    def total_dim(self) -> int:
        return sum(self.dims())

    def labels(self, d) -> list[str]:
        return [self.labeler(self.monos[c]) for c in self.basis[d]]

    def col_label(self, c) -> str:
        return self.labeler(self.monos[c])

    def degree_of(self, vec: dict):
        """Common degree of a nonzero column vector."""
        ds = {self.col_degree[c] for c in vec}
        if len(ds) != 1:
            raise InternalConsistencyError("inhomogeneous vector")
        return ds.pop()

    def in_window(self, d) -> bool:
        return 0 <= d <= self.max_degree

    # ---- conversions between ambient monomials and columns

    def try_columns(self, vec: dict):
        """Column form of an ambient vector, or ``None`` if some monomial is not materialized."""
        out: dict = {}
        col = self.col
        for mono, c in vec.items():
            j = col.get(mono)
            if j is None:
                return None
            out[j] = c
        return out

    def columns(self, vec: dict) -> dict:
        """Normalized column form; raises when a monomial lies outside the truncation."""
        out: dict = {}
        col = self.col
        for mono, c in vec.items():
            j = col.get(mono)
            if j is None and self.normalizer is not None:
                for m2, c2 in self.normalizer(mono).items():
                    j2 = col.get(m2)
                    if j2 is None:
                        self._missing(m2)
                    axpy(out, {j2: c2}, c)
                continue
            if j is None:
                self._missing(mono)
            axpy(out, {j: c}, ONE)
        return out

    def _missing(self, mono):
        d = self.engine.degree(mono)
        if d > self.max_degree:
            raise WindowError(f"degree {d} exceeds the cutoff {self.max_degree}")
        raise InternalConsistencyError(f"monomial {self.engine.label(mono)} is not materialized")

    def ambient(self, vec: dict) -> dict:
        return {self.monos[c]: x for c, x in vec.items()}

    def normal_form(self, ambient_vec: dict) -> dict:
        """Reduced column vector of an ambient vector."""
        return self.relations.reduce(self.columns(ambient_vec))

    def reduce(self, vec: dict) -> dict:
        return self.relations.reduce(vec)

    def coords(self, vec: dict) -> dict:
        """``{(degree, index): coefficient}`` of a reduced column vector."""
        out = {}
        for c, x in vec.items():
            pos = self.position.get(c)
            if pos is None:
                raise InternalConsistencyError("vector is not in normal form")
            out[pos] = x
        return out

    def basis_vector(self, d, i) -> dict:
        return {self.basis[d][i]: ONE}

    # ---- actions

    def act_ambient(self, x, vec: dict) -> dict:
        """Basis mode on a column vector, result as ambient monomials (not reduced)."""
        out: dict = {}
        eng = self.engine
        for c, a in vec.items():
            axpy(out, eng.act(x, self.monos[c]), a)
        return out

    def act(self, x, vec: dict) -> dict:
        """Basis mode on a column vector, result in normal form."""
        return self.normal_form(self.act_ambient(x, vec))

    def act_raw(self, g, m, vec: dict) -> dict:
        out: dict = {}
        for x, a in self.loop.reduce(g, m).items():
            axpy(out, self.act(x, vec), a)
        return out

    def modes_into_window(self, d):
        """Basis modes sending degree ``d`` into the truncation, split by sign of degree."""
        lower, level, raise_ = [], [], []
        L = self.loop
        for x in L.basis_modes():
            e = L.degree(x)
            if not self.in_window(d + e):
                continue
            (lower if e < 0 else level if e == 0 else raise_).append(x)
        return lower, level, raise_

    def mode_table(self) -> dict:
        """``{(mode, degree, i): {(degree', j): c}}`` over all in-window basis modes."""
        table = {}
        for d in self.degrees:
            lo, lv, hi = self.modes_into_window(d)
            for x in lo + lv + hi:
                for i, c in enumerate(self.basis[d]):
                    table[(x, d, i)] = self.coords(self.act(x, {c: ONE}))
        return table

    # ---- subspaces

    def close(self, seeds, ech: Echelon | None = None, extra_ops=(), cap_skips=None) -> Echelon:
        """Two-phase closure of the span of ``seeds`` under all in-window modes.

        Degree-lowering modes are applied first until nothing new appears,
        then level and raising modes (plus ``extra_ops``), repeating until a
        fixed point.  Seeds and results are ambient column vectors; results
        with non-materialized monomials are skipped and counted in
        ``cap_skips`` (a one-element list).
        """
        ech = Echelon() if ech is None else ech
        low_q: deque = deque()
        high_q: deque = deque()

        def push(vec):
            if not vec:
                return
            r = ech.reduce(vec)
            if r and ech.add(r) is not None:
                low_q.append(r)
                high_q.append(r)

        for s in seeds:
            push(s)
        mode_cache: dict = {}

        def modes(d):
            hit = mode_cache.get(d)
            if hit is None:
                hit = mode_cache[d] = self.modes_into_window(d)
            return hit

        def apply(x, vec):
            res = self.try_columns(self.act_ambient(x, vec))
            if res is None:
                if cap_skips is not None:
                    cap_skips[0] += 1
                return None
            return res

        while low_q or high_q:
            while low_q:
                v = low_q.popleft()
                for x in modes(self.degree_of(v))[0]:
                    push(apply(x, v))
            if high_q:
                v = high_q.popleft()
                lo, lv, hi = modes(self.degree_of(v))
                for x in lv + hi:
                    push(apply(x, v))
                for op in extra_ops:
                    res = op(v)
                    if res is None:
                        if cap_skips is not None:
                            cap_skips[0] += 1
                        continue
                    push(res)
        return ech

    def check_invariance(self, ech: Echelon, name: str, extra_ops=()) -> Report:
        """Every in-window mode maps each relation row back into the span."""
        rep = Report(f"invariance of {name}")
        skipped = 0
        for p in ech.pivots():
            row = ech.rows[p]
            d = self.degree_of(row)
            lo, lv, hi = self.modes_into_window(d)
            ops = [(self.loop.label(x), (lambda v, x=x: self.try_columns(self.act_ambient(x, v))))
                   for x in lo + lv + hi]
            ops += list(extra_ops)
            for lab, op in ops:
                res = op(row)
                if res is None:
                    skipped += 1
                    continue
                rem = ech.reduce(res)
                rep.check(f"{lab} preserves {name}", (self.col_label(p),), rem, {},
                          self.col_label)
        if skipped:
            rep.notes.append(f"{skipped} applications left the materialized monomials and were skipped")
        return rep

    def submodule(self, seeds) -> Echelon:
        """Relations plus the submodule generated by ``seeds`` (column vectors)."""
        return self.close(seeds, self.relations.copy())

    def quotient_by(self, vectors, flavor: str) -> "GradedModule":
        """Same ambient module with additional relations (must already be invariant)."""
        new = GradedModule.__new__(GradedModule)
        new.__dict__.update(self.__dict__)
        new.flavor = flavor
        new.relations = self.relations.copy()
        for v in vectors:
            new.relations.add(v)
        new.notes = list(self.notes)
        new.finalize()
        return new


def kernel_of_maps(n: int, images) -> list[dict]:
    """Basis of ``{c in Q^n : sum_i c_i images[i] = 0}``.

    ``images[i]`` is a sparse dict over arbitrary hashable keys.
    """
    keys = {}
    for im in images:
        for k in im:
            keys.setdefault(k, len(keys))
    rows = {}
    for i, im in enumerate(images):
        for k, x in im.items():
            rows.setdefault(keys[k], {})[i] = x
    mat = [SparseVector(n, r) for r in rows.values()]
    return [dict(v.entries) for v in kernel(mat, n).rows]
