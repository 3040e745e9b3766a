"""Pure-Python reference kernels.

Monomials are *keys*: flat tuples ``(i0, s0, e0, i1, s1, e1, ...)`` sorted by
``(i, s)`` with no zero exponents.  Polynomials are plain ``dict`` objects
mapping keys to nonzero ``int`` coefficients.  The compiled module
``_ckernels`` exposes the same functions with identical semantics.
"""

BACKEND = "python"


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la = len(a)
    lb = len(b)
    while i < la and j < lb:
        ai = a[i]
        bi = b[j]
        if ai < bi or (ai == bi and a[i + 1] < b[j + 1]):
            out.extend(a[i:i + 3])
            i += 3
        elif ai == bi and a[i + 1] == b[j + 1]:
            e = a[i + 2] + b[j + 2]
            if e:
                out.append(ai)
                out.append(a[i + 1])
                out.append(e)
            i += 3
            j += 3
        else:
            out.extend(b[j:j + 3])
            j += 3
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return tuple(out)


def mono_pow(a, n):
    if n == 0:
        return ()
    out = list(a)
    for t in range(2, len(out), 3):
        out[t] *= n
    return tuple(out)


def is_dominant_key(a):
    for t in range(2, len(a), 3):
        if a[t] < 0:
            return False
    return True


def poly_mul(da, db):
    if len(da) > len(db):
        da, db = db, da
    out = {}
    get = out.get
    items_b = list(db.items())
    for ka, ca in da.items():
        for kb, cb in items_b:
            k = mono_mul(ka, kb)
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _bitmask(indices, nbytes):
    buf = bytearray(nbytes)
    for x in indices:
        buf[x >> 3] |= 1 << (x & 7)
    return int.from_bytes(buf, "little")


def _exponent_masks(keys):
    """Bitmasks over ``keys`` by variable and exponent threshold.

    ``pos[v][e - 1]`` marks the keys whose exponent at ``v`` is at least ``e``;
    ``neg[v][f]`` marks those whose exponent at ``v`` is below ``-f``.
    """
    pos_idx, neg_idx = {}, {}
    for x, k in enumerate(keys):
        for t in range(0, len(k), 3):
            e = k[t + 2]
            v = (k[t], k[t + 1])
            if e > 0:
                rows = pos_idx.setdefault(v, [])
                while len(rows) < e:
                    rows.append([])
                for r in range(e):
                    rows[r].append(x)
            else:
                rows = neg_idx.setdefault(v, [])
                while len(rows) < -e:
                    rows.append([])
                for r in range(-e):
                    rows[r].append(x)
    nbytes = (len(keys) >> 3) + 1
    pos = {v: [_bitmask(r, nbytes) for r in rows] for v, rows in pos_idx.items()}
    neg = {v: [_bitmask(r, nbytes) for r in rows] for v, rows in neg_idx.items()}
    return pos, neg


def dominant_product_terms(da, db):
    """Dominant monomials of ``da * db`` with coefficients.

    ``ma * mb`` is dominant iff the positive part of each factor covers the
    negative part of the other.  The larger factor is indexed by bitmasks so
    that every ``mb`` finds its partners with a few big-integer operations.
    """
    if len(da) < len(db):
        da, db = db, da
    keys = list(da)
    coefs = [da[k] for k in keys]
    pos, neg = _exponent_masks(keys)
    everything = (1 << len(keys)) - 1
    out = {}
    for kb, cb in db.items():
        cand = everything
        exps = {}
        for t in range(0, len(kb), 3):
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
            k = mono_mul(keys[x], kb)
            out[k] = out.get(k, 0) + coefs[x] * cb
    return {k: c for k, c in out.items() if c}


def tuple_sum(col_keys, compat, chain_only):
    """Sum of products over compatible tuples, one entry per column.

    ``col_keys[t]`` lists the monomial keys of column ``t``.  For ``u < t``,
    ``compat[t][u][a]`` is an int bitmask of the indices ``b`` of column ``t``
    compatible with choice ``a`` in column ``u``.  With ``chain_only`` only
    the predecessor column is consulted.
    """
    T = len(col_keys)
    out = {}
    if T == 0:
        out[()] = 1
        return out
    choice = [0] * T
    partial = [()] * (T + 1)
    full0 = (1 << len(col_keys[0])) - 1

    def rec(t):
        if t == 0:
            mask = full0
        else:
            mask = compat[t][t - 1][choice[t - 1]]
            if not chain_only:
                for u in range(t - 1):
                    mask &= compat[t][u][choice[u]]
                    if not mask:
                        return
        keys = col_keys[t]
        base = partial[t]
        while mask:
            low = mask & -mask
            b = low.bit_length() - 1
            mask ^= low
            choice[t] = b
            k = mono_mul(base, keys[b])
            if t + 1 == T:
                out[k] = out.get(k, 0) + 1
            else:
                partial[t + 1] = k
                rec(t + 1)

    rec(0)
    return out
