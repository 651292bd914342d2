"""Normal-ordered PBW monomials in modules induced from a loop Lie algebra.

A monomial is ``(word, fiber)``: ``word`` is a tuple of creator modes sorted
by non-increasing :meth:`LoopLie.sort_key`, applied to fiber basis vector
``fiber``.  Modes are applied by commuting them to their PBW position, using
the bracket for every swap.  Nothing here is truncated: the engine computes
exact results in any degree, and truncation is left to the graded modules
built on top of it.
"""

from __future__ import annotations

import sys
from fractions import Fraction

from .kernels import axpy
from .loop import LoopLie

ONE = Fraction(1)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class InducedEngine:
    """Action of loop modes on an induced module.

    ``creators`` decides which basis modes build monomials; every other mode
    is pushed right until it reaches the fiber, where ``fiber_action(mode, u)``
    gives its action (returning ``{}`` for modes that kill the fiber).
    """

    def __init__(self, loop: LoopLie, fiber_dim: int, fiber_action, creators, fiber_labels=None):
        self.loop = loop
        self.fiber_dim = fiber_dim
        self.fiber_action = fiber_action
        self.is_creator = creators
        self.fiber_labels = tuple(fiber_labels) if fiber_labels is not None else tuple(
            f"u{i}" for i in range(fiber_dim)
        )
        self._memo: dict = {}
        self._key = loop.sort_key

    # ---- monomials

    def degree(self, mono) -> Fraction:
        d = Fraction(0)
        for x in mono[0]:
            d += self.loop.degree(x)
        return d

    def label(self, mono) -> str:
        word, u = mono
        parts = [self.loop.label(x) for x in word]
        parts.append(self.fiber_labels[u])
        return "·".join(parts)

    # ---- action

    def act(self, x, mono) -> dict:
        """Basis mode ``x`` applied to a monomial; result in normal order."""
        key = (x, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        word, u = mono
        if not word:
            if self.is_creator(x):
                out = {((x,), u): ONE}
            else:
                out = {((), w): c for w, c in self.fiber_action(x, u).items()}
        else:
            y = word[0]
            if self.is_creator(x) and self._key(x) >= self._key(y):
                out = {((x,) + word, u): ONE}
            else:
                rest = (word[1:], u)
                out = {}
                # x y rest = y (x rest) + [x, y] rest
                for m, c in self.act(x, rest).items():
                    axpy(out, self.act(y, m), c)
                for z, c in self.loop.bracket_raw(x, y).items():
                    axpy(out, self.act(z, rest), c)
        self._memo[key] = out
        return out

    def act_vec(self, x, vec: dict) -> dict:
        out: dict = {}
        for m, c in vec.items():
            axpy(out, self.act(x, m), c)
        return out

    def act_modes(self, modes: dict, vec: dict) -> dict:
        """A combination of basis modes applied to a vector."""
        out: dict = {}
        for x, a in modes.items():
            for m, c in vec.items():
                axpy(out, self.act(x, m), a * c)
        return out

    def act_raw(self, g: int, m, vec: dict) -> dict:
        """Raw mode ``g(m)`` applied to a vector."""
        return self.act_modes(self.loop.reduce(g, m), vec)

    def apply_word(self, word, u: int = 0) -> dict:
        """Product of the listed basis modes (leftmost applied last) on fiber vector ``u``."""
        vec = {((), u): ONE}
        for x in reversed(word):
            vec = self.act_vec(x, vec)
        return vec

    # ---- enumeration

    def creators_by_degree(self, max_degree: Fraction, zero_degree=()):
        """Creator modes of degree in (0, max_degree] plus the given degree-0 creators."""
        L = self.loop
        out = list(zero_degree)
        step = Fraction(1, L.T)
        d = step
        while d <= max_degree:
            for g in range(L.C.dim):
                if L.C.is_even(g):
                    continue
                m = -d
                if (m - L.residue(g)).denominator == 1 and L.is_basis((g, m)) and self.is_creator((g, m)):
                    out.append((g, m))
            d += step
        out.sort(key=self._key, reverse=True)
        return out

    def words(self, degree: Fraction, creators, max_zero: int | None = None):
        """All sorted creator words of the given total degree.

        ``max_zero`` caps the number of degree-0 creators in a word.
        """
        L = self.loop
        degs = [L.degree(x) for x in creators]
        out = []

        def rec(start: int, remaining: Fraction, zeros: int, acc: list):
            if remaining == 0:
                out.append(tuple(acc))
            for i in range(start, len(creators)):
                d = degs[i]
                if d > remaining:
                    continue
                if d == 0:
                    if max_zero is not None and zeros >= max_zero:
                        continue
                    acc.append(creators[i])
                    rec(i, remaining, zeros + 1, acc)
                    acc.pop()
                else:
                    acc.append(creators[i])
                    rec(i, remaining - d, zeros, acc)
                    acc.pop()

        rec(0, Fraction(degree), 0, [])
        return out
