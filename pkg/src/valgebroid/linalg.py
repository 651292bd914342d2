"""Exact rational sparse linear algebra.

Scalars are :class:`fractions.Fraction`.  A :class:`SparseVector` stores only
nonzero entries; a :class:`Subspace` is an immutable reduced row-echelon basis.
:class:`Echelon` is the mutable, incremental variant used by the closure
algorithms in the module builders.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DimensionError, InputError, MembershipError
from .kernels import axpy, insert_row, reduce_vector

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text) -> tuple[Fraction, bool]:
    """Parse ``"p/q"`` (or an int).  Returns the value and whether it was reduced.

    >>> parse_rational("2/4")
    (Fraction(1, 2), False)
    """
    if isinstance(text, bool):
        raise InputError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text), True
    if not isinstance(text, str):
        raise InputError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if not m:
        raise InputError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    reduced = value.numerator == num and value.denominator == den
    return value, reduced


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def clean(entries: Mapping) -> dict:
    """Copy of ``entries`` with zeros removed and values coerced to Fraction."""
    return {k: Fraction(v) for k, v in entries.items() if v}


def add(u: Mapping, v: Mapping, c=1) -> dict:
    """``u + c*v`` as a new dict."""
    return axpy(dict(u), v, Fraction(c))


@dataclass(frozen=True)
class SparseVector:
    dimension: int
    entries: Mapping[int, Fraction]

    def __post_init__(self):
        entries = clean(self.entries)
        for k in entries:
            if not (isinstance(k, int) and 0 <= k < self.dimension):
                raise DimensionError(f"index {k} outside dimension {self.dimension}")
        object.__setattr__(self, "entries", dict(sorted(entries.items())))

    @classmethod
    def from_dense(cls, values: Iterable) -> "SparseVector":
        values = list(values)
        return cls(len(values), {i: Fraction(x) for i, x in enumerate(values) if x})

    @classmethod
    def zero(cls, dimension: int) -> "SparseVector":
        return cls(dimension, {})

    def dense(self) -> list[Fraction]:
        out = [Fraction(0)] * self.dimension
        for k, x in self.entries.items():
            out[k] = x
        return out

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __add__(self, other: "SparseVector") -> "SparseVector":
        _same_dim(self, other)
        return SparseVector(self.dimension, add(self.entries, other.entries))

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        _same_dim(self, other)
        return SparseVector(self.dimension, add(self.entries, other.entries, -1))

    def __neg__(self) -> "SparseVector":
        return SparseVector(self.dimension, {k: -x for k, x in self.entries.items()})

    def __mul__(self, c) -> "SparseVector":
        c = Fraction(c)
        return SparseVector(self.dimension, {k: c * x for k, x in self.entries.items()})

    __rmul__ = __mul__

    def __hash__(self):
        return hash((self.dimension, tuple(self.entries.items())))


def _same_dim(u: SparseVector, v: SparseVector) -> None:
    if u.dimension != v.dimension:
        raise DimensionError(f"dimension mismatch: {u.dimension} vs {v.dimension}")


def _nonzero(v: Mapping) -> Mapping:
    """The kernels assume no stored zeros; strip them from caller input."""
    return v if all(v.values()) else {k: x for k, x in v.items() if x}


class Echelon:
    """Incrementally maintained reduced row-echelon basis over arbitrary keys.

    Pivots are the smallest column under ``key`` (natural order by default),
    so callers control which coordinates survive in a quotient by choosing
    column numbering.
    """

    def __init__(self, rows: Iterable[Mapping] = (), key=None):
        self.rows: dict = {}
        self._cols: dict = {}
        self._key = key
        for r in rows:
            self.add(r)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        return reduce_vector(_nonzero(v), self.rows)

    def add(self, v: Mapping):
        """Insert ``v``; returns its new pivot, or ``None`` if already spanned."""
        return insert_row(self.rows, self._cols, _nonzero(v), self._key)

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def pivots(self) -> list:
        return sorted(self.rows, key=self._key)

    def basis(self) -> list[dict]:
        return [dict(self.rows[p]) for p in self.pivots()]

    def copy(self) -> "Echelon":
        e = Echelon(key=self._key)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e._cols = {c: set(s) for c, s in self._cols.items()}
        return e


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n in reduced row-echelon form.

    ``rows`` are sorted by pivot; each has a 1 at its pivot and 0 at every
    other pivot column.
    """

    dimension: int
    rows: tuple[SparseVector, ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @classmethod
    def zero(cls, dimension: int) -> "Subspace":
        return cls(dimension, (), ())

    @classmethod
    def full(cls, dimension: int) -> "Subspace":
        rows = tuple(SparseVector(dimension, {i: 1}) for i in range(dimension))
        return cls(dimension, rows, tuple(range(dimension)))

    @classmethod
    def span(cls, dimension: int, vectors: Iterable) -> "Subspace":
        ech = Echelon()
        for v in vectors:
            entries = v.entries if isinstance(v, SparseVector) else v
            if isinstance(v, SparseVector) and v.dimension != dimension:
                raise DimensionError(f"dimension mismatch: {v.dimension} vs {dimension}")
            ech.add(entries)
        return cls._from_echelon(dimension, ech)

    @classmethod
    def _from_echelon(cls, dimension: int, ech: Echelon) -> "Subspace":
        piv = tuple(ech.pivots())
        rows = tuple(SparseVector(dimension, ech.rows[p]) for p in piv)
        return cls(dimension, rows, piv)

    def echelon(self) -> Echelon:
        e = Echelon()
        for p, r in zip(self.pivots, self.rows):
            e.rows[p] = dict(r.entries)
            for k in r.entries:
                if k != p:
                    e._cols.setdefault(k, set()).add(p)
        return e

    def reduce(self, v: SparseVector) -> SparseVector:
        _check_dim(self.dimension, v)
        rows = {p: r.entries for p, r in zip(self.pivots, self.rows)}
        return SparseVector(self.dimension, reduce_vector(v.entries, rows))

    def contains(self, v: SparseVector) -> bool:
        return not self.reduce(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.dimension != self.dimension:
            raise DimensionError("dimension mismatch")
        return Subspace.span(self.dimension, self.rows + other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus-free intersection via the kernel of [self; -other]."""
        if other.dimension != self.dimension:
            raise DimensionError("dimension mismatch")
        k1, k2 = self.rank, other.rank
        if not k1 or not k2:
            return Subspace.zero(self.dimension)
        # columns of the stacked matrix are the k1+k2 basis vectors
        cols = [r.entries for r in self.rows] + [
            {i: -x for i, x in r.entries.items()} for r in other.rows
        ]
        eqs = []
        for i in range(self.dimension):
            eq = {j: c[i] for j, c in enumerate(cols) if i in c}
            if eq:
                eqs.append(SparseVector(k1 + k2, eq))
        ker = kernel(eqs, k1 + k2)
        out = []
        for z in ker.rows:
            acc: dict = {}
            for j, c in z.entries.items():
                if j < k1:
                    axpy(acc, self.rows[j].entries, c)
            out.append(acc)
        return Subspace.span(self.dimension, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.pivots == other.pivots
            and all(a.entries == b.entries for a, b in zip(self.rows, other.rows))
        )

    def __hash__(self):
        return hash((self.dimension, self.pivots, self.rows))


def _check_dim(n: int, v: SparseVector) -> None:
    if v.dimension != n:
        raise DimensionError(f"dimension mismatch: {v.dimension} vs {n}")


def rref(matrix: Iterable[SparseVector], dimension: int | None = None) -> tuple[Subspace, int]:
    """Row-reduce a list of rows.  Returns the row space and the rank."""
    matrix = list(matrix)
    if dimension is None:
        if not matrix:
            dimension = 0
        else:
            dimension = matrix[0].dimension
    for v in matrix:
        _check_dim(dimension, v)
    space = Subspace.span(dimension, matrix)
    return space, space.rank


def kernel(matrix: Iterable[SparseVector], columns: int | None = None) -> Subspace:
    """Right null space ``{v : A v = 0}`` of the matrix with the given rows."""
    matrix = list(matrix)
    if columns is None:
        if not matrix:
            raise DimensionError("column count required for an empty matrix")
        columns = matrix[0].dimension
    row_space, _ = rref(matrix, columns)
    pivots = set(row_space.pivots)
    basis = []
    for f in range(columns):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for p, r in zip(row_space.pivots, row_space.rows):
            x = r.entries.get(f)
            if x:
                v[p] = -x
        basis.append(v)
    return Subspace.span(columns, basis)


def complement_basis(space: Subspace, sub: Subspace) -> Echelon:
    """Echelon basis of a complement of ``sub`` in ``space``.

    Rows are the space rows reduced modulo ``sub`` and re-echelonized; their
    pivots are non-pivot columns of ``sub``.
    """
    sub_ech = sub.echelon()
    comp = Echelon()
    for r in space.rows:
        comp.add(sub_ech.reduce(r.entries))
    return comp


def quotient_coords(space: Subspace, sub: Subspace, v: SparseVector) -> SparseVector:
    """Coordinates of ``v + sub`` in the deterministic complement basis.

    The complement basis is indexed by its pivot order; the result has
    dimension ``space.rank - sub.rank``.
    """
    if not space.contains_subspace(sub):
        raise MembershipError("sub is not contained in space")
    _check_dim(space.dimension, v)
    if not space.contains(v):
        raise MembershipError("vector is not in the ambient subspace")
    comp = complement_basis(space, sub)
    r = sub.echelon().reduce(v.entries)
    piv = comp.pivots()
    if comp.reduce(r):
        raise MembershipError("reduction left a remainder outside the complement")
    coords = {i: r[p] for i, p in enumerate(piv) if r.get(p)}
    return SparseVector(len(piv), coords)
