"""Brute-force reference computations, independent of the package.

Values produced here were computed once and are also frozen as literals in
the tests, so a regression in either place shows up.
"""

from fractions import Fraction
from itertools import combinations_with_replacement


def multisets_of_parts(total, parts):
    """All multisets from ``parts`` (a list of (size, tag)) with sizes summing to ``total``."""
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(parts)):
            size = parts[i][0]
            if size <= remaining:
                acc.append(parts[i])
                rec(i, remaining - size, acc)
                acc.pop()

    rec(0, total, [])
    return out


def colored_partitions(n, colors):
    """Number of partitions of n with ``colors`` kinds of every positive part."""
    parts = [(k, c) for k in range(1, n + 1) for c in range(colors)]
    return len(multisets_of_parts(n, parts))


def half_odd_partitions(twice_n):
    """Partitions of twice_n/2 into parts from {1/2, 3/2, 5/2, ...}, counted in halves."""
    parts = [(k, 0) for k in range(1, twice_n + 1, 2)]
    return len(multisets_of_parts(twice_n, parts))


def partition_counts_by_product(n_max, colors):
    """Coefficients of prod_k (1 - q^k)^(-colors), by repeated series multiplication."""
    series = [1] + [0] * n_max
    for k in range(1, n_max + 1):
        for _ in range(colors):
            for i in range(k, n_max + 1):
                series[i] += series[i - k]
    return series


def dual_numbers_vb_slices(n_max):
    """Dims of V_B for A = Q[x]/(x^2), B = 0 from first principles.

    With B = 0 the only modes are a(m) with a in A; since da = 0 every a(m)
    with m != -1 vanishes in the loop algebra, so V_L is spanned by words in
    e(-1), x(-1) (degree 0 only) and V_B(0) = A, V_B(n > 0) = 0.
    """
    return [2] + [0] * n_max


# ---------------------------------------------------------------- linear algebra


def rank(rows):
    """Rank of a list of dict rows by plain Gaussian elimination."""
    rows = [dict(r) for r in rows if r]
    r = 0
    cols = sorted({k for row in rows for k in row}, key=repr)
    for c in cols:
        piv = next((i for i in range(r, len(rows)) if rows[i].get(c)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i].get(c):
                f = Fraction(rows[i][c]) / p[c]
                new = dict(rows[i])
                for k, x in p.items():
                    new[k] = new.get(k, 0) - f * x
                rows[i] = {k: x for k, x in new.items() if x}
        r += 1
    return r


def null_space(columns, images):
    """Basis of {c in Q^columns : sum_i c_i images[i] = 0} by dense elimination."""
    keys = sorted({k for im in images for k in im}, key=repr)
    mat = [[Fraction(images[i].get(k, 0)) for i in range(columns)] for k in keys]
    piv_cols = []
    r = 0
    for c in range(columns):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(columns) if c not in piv_cols]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for row, pc in zip(mat, piv_cols):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------- radical


def radical_by_operator_closure(dims, table, degrees):
    """Sum of all graded submodules with zero degree-0 part, from a mode table alone.

    ``table[(mode, d, i)]`` is ``{(d', j): c}``.  For each degree n the space
    of all composite operators M(n) -> M(k) (words of in-window modes) is
    closed up as a set of matrices; then J(n) is the common kernel of the
    operators landing in degree 0.  A vector w lies in J iff the submodule it
    generates misses degree 0, so this is the lattice supremum.
    """
    by_degree = {}
    for (x, d, i), img in table.items():
        by_degree.setdefault(d, {}).setdefault(x, {})[i] = img
    J = {}
    for n, dn in zip(degrees, dims):
        if n == degrees[0]:
            J[n] = []
            continue
        # operators as tuples of images of the dn basis vectors, keyed by target degree
        start = tuple({(n, i): Fraction(1)} for i in range(dn))
        ops = {n: [start]}
        spans = {n: [_flatten(start)]}
        queue = [(n, start)]
        while queue:
            d, op = queue.pop()
            for x, cols in by_degree.get(d, {}).items():
                new = []
                target = None
                for img in op:
                    out = {}
                    for (dd, j), c in img.items():
                        for key, y in cols.get(j, {}).items():
                            out[key] = out.get(key, 0) + c * y
                            target = key[0]
                    new.append({k: v for k, v in out.items() if v})
                if target is None or not any(new):
                    continue
                flat = _flatten(new)
                have = spans.setdefault(target, [])
                if rank(have + [flat]) > rank(have):
                    have.append(flat)
                    ops.setdefault(target, []).append(tuple(new))
                    queue.append((target, tuple(new)))
        zero_ops = ops.get(degrees[0], [])
        images = []
        for i in range(dn):
            im = {}
            for k, op in enumerate(zero_ops):
                for key, c in op[i].items():
                    im[(k, key)] = c
            images.append(im)
        J[n] = null_space(dn, images)
    return J


def _flatten(op):
    return {(i, key): c for i, img in enumerate(op) for key, c in img.items()}
