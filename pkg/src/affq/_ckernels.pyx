# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``affq._pykernels``."""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF
from libc.stdlib cimport malloc, free

BACKEND = "cython"

DEF STACK = 256


cdef tuple _pack(long *buf, Py_ssize_t n):
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t k
    cdef object o
    for k in range(n):
        o = buf[k]
        Py_INCREF(o)
        PyTuple_SET_ITEM(out, k, o)
    return out


cdef tuple _mul(tuple a, tuple b):
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0:
        return b
    if lb == 0:
        return a
    cdef long sbuf[STACK]
    cdef long *buf = sbuf
    cdef bint heap = la + lb > STACK
    if heap:
        buf = <long *> malloc((la + lb) * sizeof(long))
    cdef Py_ssize_t i = 0, j = 0, n = 0
    cdef long ai, asv, bi, bsv, e
    while i < la and j < lb:
        ai = a[i]
        asv = a[i + 1]
        bi = b[j]
        bsv = b[j + 1]
        if ai < bi or (ai == bi and asv < bsv):
            buf[n] = ai
            buf[n + 1] = asv
            buf[n + 2] = a[i + 2]
            n += 3
            i += 3
        elif ai == bi and asv == bsv:
            e = <long> a[i + 2] + <long> b[j + 2]
            if e != 0:
                buf[n] = ai
                buf[n + 1] = asv
                buf[n + 2] = e
                n += 3
            i += 3
            j += 3
        else:
            buf[n] = bi
            buf[n + 1] = bsv
            buf[n + 2] = b[j + 2]
            n += 3
            j += 3
    while i < la:
        buf[n] = a[i]
        n += 1
        i += 1
    while j < lb:
        buf[n] = b[j]
        n += 1
        j += 1
    cdef tuple out = _pack(buf, n)
    if heap:
        free(buf)
    return out


cdef bint _dominant(tuple a):
    cdef Py_ssize_t t, la = len(a)
    for t in range(2, la, 3):
        if <long> a[t] < 0:
            return False
    return True


def mono_mul(tuple a, tuple b):
    return _mul(a, b)


def mono_pow(tuple a, long n):
    if n == 0:
        return ()
    cdef list out = list(a)
    cdef Py_ssize_t t
    for t in range(2, len(out), 3):
        out[t] = out[t] * n
    return tuple(out)


def is_dominant_key(tuple a):
    return _dominant(a)


def poly_mul(dict da, dict db):
    if len(da) > len(db):
        da, db = db, da
    cdef dict out = {}
    cdef list items_b = list(db.items())
    cdef tuple ka, kb, k
    cdef object ca, cb, prev
    for ka, ca in da.items():
        for kb, cb in items_b:
            k = _mul(ka, kb)
            prev = out.get(k)
            if prev is None:
                out[k] = ca * cb
            else:
                out[k] = prev + ca * cb
    return {k: c for k, c in out.items() if c}


cdef object _bitmask(list indices, Py_ssize_t nbytes):
    cdef bytearray buf = bytearray(nbytes)
    cdef unsigned char[:] view = buf
    cdef Py_ssize_t x
    for x in indices:
        view[x >> 3] |= 1 << (x & 7)
    return int.from_bytes(buf, "little")


cdef tuple _exponent_masks(list keys):
    cdef dict pos_idx = {}, neg_idx = {}
    cdef Py_ssize_t x, t, r, lk, nbytes
    cdef long e
    cdef tuple k, v
    cdef list rows
    for x in range(len(keys)):
        k = keys[x]
        lk = len(k)
        for t in range(0, lk, 3):
            e = k[t + 2]
            v = (k[t], k[t + 1])
            rows = pos_idx.setdefault(v, []) if e > 0 else neg_idx.setdefault(v, [])
            if e < 0:
                e = -e
            while len(rows) < e:
                rows.append([])
            for r in range(e):
                (<list> rows[r]).append(x)
    nbytes = (len(keys) >> 3) + 1
    pos = {v: [_bitmask(r_, nbytes) for r_ in rows] for v, rows in pos_idx.items()}
    neg = {v: [_bitmask(r_, nbytes) for r_ in rows] for v, rows in neg_idx.items()}
    return pos, neg


def dominant_product_terms(dict da, dict db):
    if len(da) < len(db):
        da, db = db, da
    cdef list keys = list(da)
    cdef list coefs = [da[k] for k in keys]
    cdef dict pos, neg, exps
    pos, neg = _exponent_masks(keys)
    cdef object everything = (int(1) << len(keys)) - 1
    cdef object cand, low, cb, prev
    cdef dict out = {}
    cdef tuple kb, v, k
    cdef list rows
    cdef Py_ssize_t t, lk, x
    cdef long e, f
    for kb, cb in db.items():
        cand = everything
        exps = {}
        lk = len(kb)
        for t in range(0, lk, 3):
            e = kb[t + 2]
            v = (kb[t], kb[t + 1])
            exps[v] = e
            if e < 0:
                rows = pos.get(v)
                if rows is None or len(rows) < -e:
                    cand = 0
                    break
                cand &= rows[-e - 1]
        if not cand:
            continue
        for v, rows in neg.items():
            f = exps.get(v, 0)
            if f < 0:
                f = 0
            if f < len(rows):
                cand &= ~rows[f]
                if not cand:
                    break
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            k = _mul(<tuple> keys[x], kb)
            prev = out.get(k)
            out[k] = coefs[x] * cb if prev is None else prev + coefs[x] * cb
    return {k: c for k, c in out.items() if c}


def tuple_sum(list col_keys, list compat, bint chain_only):
    cdef Py_ssize_t T = len(col_keys)
    cdef dict out = {}
    if T == 0:
        out[()] = 1
        return out
    cdef list choice = [0] * T
    cdef list partial = [()] * (T + 1)
    cdef list masks = [0] * T
    cdef Py_ssize_t t = 0, u, b
    cdef object mask, low, prev
    cdef tuple k
    masks[0] = (int(1) << len(col_keys[0])) - 1
    # iterative depth-first walk; masks[t] holds the untried choices at level t
    while t >= 0:
        mask = masks[t]
        if not mask:
            t -= 1
            continue
        low = mask & -mask
        masks[t] = mask ^ low
        b = (<object> low).bit_length() - 1
        choice[t] = b
        k = _mul(partial[t], col_keys[t][b])
        if t + 1 == T:
            prev = out.get(k)
            out[k] = 1 if prev is None else prev + 1
            continue
        partial[t + 1] = k
        mask = compat[t + 1][t][b]
        if not chain_only:
            for u in range(t):
                if not mask:
                    break
                mask = mask & compat[t + 1][u][choice[u]]
        t += 1
        masks[t] = mask
    return out
