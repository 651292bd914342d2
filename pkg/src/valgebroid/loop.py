"""The loop Lie algebra of a 1-truncated conformal algebra twisted by a sector grading.

Modes are pairs ``(generator, exponent)`` with the exponent a Fraction in
``sector/T + Z``.  The quotient by the image of ``d/dt + partial`` is taken by
a fixed reduction map: weight-0 modes other than ``a(-1)`` are rewritten as
weight-1 modes, and weight-1 zero modes are reduced modulo ``partial`` of the
sector-0 weight-0 space.  The surviving modes form the basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebroid import Tca, unit
from .errors import InputError, WindowError
from .kernels import axpy
from .linalg import Echelon
from .report import Report

ONE = Fraction(1)


def binomial(x, m: int) -> Fraction:
    """Generalized binomial coefficient as a falling factorial over m!."""
    if m < 0:
        return Fraction(0)
    out = Fraction(1)
    x = Fraction(x)
    for i in range(m):
        out = out * (x - i) / (i + 1)
    return out


def frac_range(lo: Fraction, hi: Fraction, step: Fraction):
    """Values ``lo, lo+step, ...`` not exceeding ``hi``."""
    x = lo
    while x <= hi:
        yield x
        x += step


def ceil_in_class(x: Fraction, residue: Fraction) -> Fraction:
    """Smallest value >= x congruent to ``residue`` mod 1."""
    k = -((-(x - residue)) // 1)
    return residue + k


def floor_in_class(x: Fraction, residue: Fraction) -> Fraction:
    """Largest value <= x congruent to ``residue`` mod 1."""
    return residue + (x - residue) // 1


@dataclass
class LoopLie:
    """Degree-windowed loop Lie algebra with its reduction map.

    ``sectors[g]`` is the sector of the combined generator index ``g``.
    ``window`` bounds the public basis lists and the bracket table; the
    reduction and raw bracket themselves work for any exponent.
    """

    C: Tca
    T: int
    sectors: tuple
    window: Fraction
    zero_mode_rows: dict = field(default_factory=dict)
    zero_mode_survivors: tuple = ()
    basis: dict = field(default_factory=dict)  # degree -> [mode]
    table: dict = field(default_factory=dict)  # (x, y) -> {mode: c}
    _reduce_memo: dict = field(default_factory=dict, repr=False)
    _bracket_memo: dict = field(default_factory=dict, repr=False)

    # ---- generators and modes

    def weight(self, g: int) -> int:
        return self.C.weight(g)

    def residue(self, g: int) -> Fraction:
        return Fraction(self.sectors[g], self.T)

    def degree(self, mode) -> Fraction:
        g, m = mode
        return self.weight(g) - m - 1

    def sort_key(self, mode):
        """PBW ordering key; monomials list modes by non-increasing key."""
        return (self.degree(mode), mode[0])

    def label(self, mode) -> str:
        g, m = mode
        return f"{self.C.labels[g]}({_fmt(m)})"

    def is_basis(self, mode) -> bool:
        g, m = mode
        if (m - self.residue(g)).denominator != 1:
            return False
        if self.C.is_even(g):
            return m == -1 and self.sectors[g] == 0
        if m != 0:
            return True
        return g in self.zero_mode_survivors

    def reduce(self, g: int, m) -> dict:
        """Express the raw mode ``g(m)`` in basis modes."""
        m = Fraction(m)
        key = (g, m)
        hit = self._reduce_memo.get(key)
        if hit is not None:
            return hit
        if (m - self.residue(g)).denominator != 1:
            raise InputError(
                f"exponent {_fmt(m)} of {self.C.labels[g]} is not in its sector class {_fmt(self.residue(g))} + Z"
            )
        if self.C.is_even(g):
            if m == -1:
                out = {key: ONE}
            else:
                c = -ONE / (m + 1)
                out = {}
                for h, x in self.C.partial.get(g, {}).items():
                    axpy(out, self.reduce(h, m + 1), c * x)
        elif m != 0:
            out = {key: ONE}
        else:
            rows = self.zero_mode_rows
            r = dict(unit(g))
            if g in rows:
                axpy(r, rows[g], -ONE)
            out = {(h, m): x for h, x in r.items()}
        self._reduce_memo[key] = out
        return out

    def reduce_vector(self, v: dict) -> dict:
        """Reduce a combination of raw modes."""
        out: dict = {}
        for (g, m), c in v.items():
            axpy(out, self.reduce(g, m), c)
        return out

    def bracket_raw(self, x, y) -> dict:
        """[u(m), v(n)] = (u_0 v)(m+n) + m (u_1 v)(m+n-1), reduced; no window check."""
        key = (x, y)
        hit = self._bracket_memo.get(key)
        if hit is not None:
            return hit
        (g, m), (h, n) = x, y
        out: dict = {}
        for k, c in self.C.prod0.get((g, h), {}).items():
            axpy(out, self.reduce(k, m + n), c)
        if m:
            for k, c in self.C.prod1.get((g, h), {}).items():
                axpy(out, self.reduce(k, m + n - 1), m * c)
        self._bracket_memo[key] = out
        return out

    def bracket_vectors(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                axpy(out, self.bracket_raw(x, y), a * b)
        return out

    # ---- windowed views

    def in_window(self, d) -> bool:
        return -self.window <= d <= self.window

    def degrees(self):
        step = Fraction(1, self.T)
        return list(frac_range(-self.window, self.window, step))

    def basis_modes(self):
        return [x for d in self.degrees() for x in self.basis.get(d, [])]


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def build_loop_lie(C: Tca, sectors, T: int, window) -> LoopLie:
    """Build the loop algebra with per-degree bases and bracket table on ``[-window, window]``."""
    T = int(T)
    if T < 1:
        raise InputError("order T must be positive")
    sectors = tuple(int(r) for r in sectors)
    if len(sectors) != C.dim:
        raise InputError("one sector per generator required")
    if any(not 0 <= r < T for r in sectors):
        raise InputError("sectors must lie in 0..T-1")
    _check_grading(C, sectors, T)
    window = Fraction(window)
    if window < 0:
        raise InputError("window must be nonnegative")

    # complement of partial(C0^0) inside C1^0: non-pivot columns
    ech = Echelon()
    for a in range(C.n0):
        if sectors[a] == 0:
            ech.add(C.d(unit(a)))
    survivors = tuple(g for g in range(C.n0, C.dim) if sectors[g] == 0 and g not in ech.rows)
    L = LoopLie(C, T, sectors, window, dict(ech.rows), survivors)

    step = Fraction(1, T)
    for d in frac_range(-window, window, step):
        modes = []
        for g in range(C.dim):
            if C.is_even(g):
                if d == 0 and sectors[g] == 0:
                    modes.append((g, Fraction(-1)))
                continue
            m = -d
            if (m - L.residue(g)).denominator == 1 and L.is_basis((g, m)):
                modes.append((g, m))
        L.basis[d] = modes
    allm = L.basis_modes()
    for x, y in product(allm, repeat=2):
        if L.in_window(L.degree(x) + L.degree(y)):
            L.table[(x, y)] = L.bracket_raw(x, y)
    return L


def _check_grading(C: Tca, sectors, T: int) -> None:
    for name, table in (("u_0v", C.prod0), ("u_1v", C.prod1)):
        for (i, j), v in table.items():
            for k in v:
                if (sectors[i] + sectors[j] - sectors[k]) % T:
                    raise InputError(
                        f"grading inconsistent: {name} on ({C.labels[i]}, {C.labels[j]}) has a {C.labels[k]} component"
                    )
    for a, v in C.partial.items():
        for k in v:
            if sectors[a] != sectors[k]:
                raise InputError(f"grading inconsistent: partial({C.labels[a]}) leaves its sector")


def bracket(L: LoopLie, x, y) -> dict:
    """Bracket of two (possibly raw) modes, reduced; degrees must stay in the window."""
    xs = L.reduce(*x)
    ys = L.reduce(*y)
    dx, dy = L.degree(x), L.degree(y)
    if not (L.in_window(dx) and L.in_window(dy) and L.in_window(dx + dy)):
        raise WindowError(
            f"bracket of {L.label(x)} and {L.label(y)} leaves the window [-{_fmt(L.window)}, {_fmt(L.window)}]"
        )
    out: dict = {}
    for a, ca in xs.items():
        for b, cb in ys.items():
            t = L.table.get((a, b))
            if t is None:
                t = L.bracket_raw(a, b)
            axpy(out, t, ca * cb)
    return out


def triangular_split(L: LoopLie):
    """Basis lists of positive, zero and negative degree."""
    plus, zero, minus = [], [], []
    for d in L.degrees():
        bucket = plus if d > 0 else zero if d == 0 else minus
        bucket.extend(L.basis.get(d, []))
    return plus, zero, minus


def verify_lie_axioms(L: LoopLie) -> Report:
    """Antisymmetry and Jacobi on the stored table, plus degree additivity."""
    rep = Report("loop Lie algebra axioms")
    modes = L.basis_modes()
    lab = L.label

    def br(u: dict, v: dict):
        out: dict = {}
        for x, a in u.items():
            for y, b in v.items():
                t = L.table.get((x, y))
                if t is None:
                    return None
                axpy(out, t, a * b)
        return out

    for (x, y), v in sorted(L.table.items(), key=lambda kv: (L.sort_key(kv[0][0]), L.sort_key(kv[0][1]))):
        d = L.degree(x) + L.degree(y)
        bad = {z: c for z, c in v.items() if L.degree(z) != d}
        rep.check("degree additivity", (lab(x), lab(y)), bad, {}, lab)
    for x, y in product(modes, repeat=2):
        if (x, y) in L.table:
            yx = L.table.get((y, x), {})
            rep.check("[x,y] = -[y,x]", (lab(x), lab(y)), L.table[(x, y)], {z: -c for z, c in yx.items()}, lab)
    for x, y, z in product(modes, repeat=3):
        terms = []
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            inner = L.table.get((b, c))
            if inner is None:
                break
            t = br({a: ONE}, inner)
            if t is None:
                break
            terms.append(t)
        else:
            total: dict = {}
            for t in terms:
                axpy(total, t, ONE)
            rep.check("Jacobi", (lab(x), lab(y), lab(z)), total, {}, lab)
    rep.data["basis_size"] = len(modes)
    return rep


def verify_locality(L: LoopLie, span: int = 2) -> Report:
    """Finite form of (x1-x2)^2 [b(x1), b'(x2)] = 0 and (x1-x2)[a(x1), b(x2)] = 0.

    Coefficientwise: [b(m+2),b'(n)] - 2[b(m+1),b'(n+1)] + [b(m),b'(n+2)] = 0 and
    [a(m+1),u(n)] - [a(m),u(n+1)] = 0, for raw modes of every generator pair.
    """
    rep = Report("locality")
    C = L.C
    lab = L.label
    W = L.window
    for g, h in product(range(C.dim), repeat=2):
        rg, rh = L.residue(g), L.residue(h)
        ms = list(frac_range(ceil_in_class(-W - span, rg), floor_in_class(W, rg), ONE))
        ns = list(frac_range(ceil_in_class(-W - span, rh), floor_in_class(W, rh), ONE))
        for m, n in product(ms, ns):
            if C.is_even(g):
                lhs = _raw_br(L, (g, m + 1), (h, n))
                axpy(lhs, _raw_br(L, (g, m), (h, n + 1)), -ONE)
                rep.check("(x1-x2)[a(x1),u(x2)] = 0", (C.labels[g], C.labels[h], _fmt(m), _fmt(n)), lhs, {}, lab)
            else:
                lhs = _raw_br(L, (g, m + 2), (h, n))
                axpy(lhs, _raw_br(L, (g, m + 1), (h, n + 1)), Fraction(-2))
                axpy(lhs, _raw_br(L, (g, m), (h, n + 2)), ONE)
                rep.check("(x1-x2)^2[b(x1),u(x2)] = 0", (C.labels[g], C.labels[h], _fmt(m), _fmt(n)), lhs, {}, lab)
    return rep


def _raw_br(L: LoopLie, x, y) -> dict:
    return L.bracket_vectors(L.reduce(*x), L.reduce(*y))
