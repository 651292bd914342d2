"""Small reference algebroids used by tests, benchmarks and the example inputs."""

from __future__ import annotations

from fractions import Fraction

from .algebroid import CommAlgebra, VertexAlgebroid
from .automorphism import SectorGrading

ONE = Fraction(1)


def point_algebra() -> CommAlgebra:
    return CommAlgebra(("e",), {(0, 0): {0: ONE}}, 0)


def dual_numbers() -> CommAlgebra:
    """Q[x]/(x^2) on the basis (e, x)."""
    return CommAlgebra(("e", "x"), {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}}, 0)


def truncated_polynomials(n: int) -> CommAlgebra:
    """Q[x]/(x^n) on the basis 1, x, ..., x^(n-1)."""
    labels = ("e",) + tuple("x" if k == 1 else f"x{k}" for k in range(1, n))
    prod = {(i, j): {i + j: ONE} for i in range(n) for j in range(n) if i + j < n}
    return CommAlgebra(labels, prod, 0)


def heisenberg(rank: int = 1, pairing=None) -> VertexAlgebroid:
    """A = Q e, B abelian of the given rank with the given (default identity) Gram matrix."""
    A = point_algebra()
    labels = ("beta",) if rank == 1 else tuple(f"beta{i + 1}" for i in range(rank))
    gram = pairing if pairing is not None else [[int(i == j) for j in range(rank)] for i in range(rank)]
    pair = {(i, j): {0: Fraction(gram[i][j])} for i in range(rank) for j in range(rank) if gram[i][j]}
    action = {(0, b): {b: ONE} for b in range(rank)}
    return VertexAlgebroid(A, labels, action=action, pairing=pair)


def dual_numbers_algebroid() -> VertexAlgebroid:
    return VertexAlgebroid(dual_numbers(), ())


def null_line() -> VertexAlgebroid:
    """A = Q e, B = Q beta with every structure map zero except 1*beta = beta."""
    return heisenberg(1, [[0]])


def heisenberg_grading(B: VertexAlgebroid) -> SectorGrading:
    """beta -> -beta as a sector grading with T = 2."""
    return SectorGrading(2, (0,) * B.A.dim, (1,) * B.dim)


def dual_numbers_grading() -> SectorGrading:
    return SectorGrading(2, (0, 1), ())
