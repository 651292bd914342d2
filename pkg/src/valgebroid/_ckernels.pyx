# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse elimination kernels; same contract as ``_pykernels``."""


cpdef dict axpy(dict dst, dict src, object c):
    if not c:
        return dst
    cdef object k, x, y
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


cpdef dict reduce_vector(object v, dict rows):
    cdef dict out = dict(v)
    cdef list hits = [k for k in out if k in rows]
    cdef object p, c
    for p in hits:
        c = out.get(p)
        if c:
            axpy(out, <dict>rows[p], -c)
    return out


cpdef object insert_row(dict rows, dict col_index, object v, object key=None):
    cdef dict r = reduce_vector(v, rows)
    if not r:
        return None
    cdef object p = min(r, key=key) if key is not None else min(r)
    cdef object inv = 1 / r[p]
    cdef object k, q, c, s
    cdef dict row
    if inv != 1:
        for k in r:
            r[k] = r[k] * inv
    users = col_index.pop(p, None)
    if users:
        for q in users:
            row = <dict>rows[q]
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


cpdef dict scale(dict v, object c):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}
