"""Pure-Python sparse elimination kernels.

Vectors are plain dicts ``{column: coefficient}`` with no stored zeros.
``_ckernels.pyx`` implements the same four functions; ``kernels`` picks one.
"""


def axpy(dst, src, c):
    """In place ``dst += c * src``; zero results are deleted."""
    if not c:
        return dst
    for k, x in src.items():
        y = dst.get(k)
        if y is None:
            dst[k] = c * x
        else:
            y = y + c * x
            if y:
                dst[k] = y
            else:
                del dst[k]
    return dst


def reduce_vector(v, rows):
    """Return ``v`` reduced modulo an RREF row set ``{pivot: row}``.

    Rows carry 1 at their pivot and 0 at every other pivot, so one pass over
    the pivots present in ``v`` suffices.
    """
    out = dict(v)
    hits = [k for k in out if k in rows]
    for p in hits:
        c = out.get(p)
        if c:
            axpy(out, rows[p], -c)
    return out


def insert_row(rows, col_index, v, key=None):
    """Add ``v`` to the RREF row set; return the new pivot or ``None``.

    ``col_index`` maps each non-pivot column to the set of pivots whose row
    has an entry there; it is kept in sync so back-substitution only touches
    affected rows.  ``key`` orders columns (default: natural order).
    """
    r = reduce_vector(v, rows)
    if not r:
        return None
    p = min(r, key=key) if key is not None else min(r)
    inv = 1 / r[p]
    if inv != 1:
        for k in r:
            r[k] = r[k] * inv
    users = col_index.pop(p, None)
    if users:
        for q in users:
            row = rows[q]
            c = row[p]
            for k in row:
                if k != q:
                    s = col_index.get(k)
                    if s is not None:
                        s.discard(q)
            axpy(row, r, -c)
            for k in row:
                if k != q:
                    col_index.setdefault(k, set()).add(q)
    rows[p] = r
    for k in r:
        if k != p:
            col_index.setdefault(k, set()).add(p)
    return p


def scale(v, c):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}
