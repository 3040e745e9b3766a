"""Lattice paths and non-overlapping tuples for minimal affinization q-characters.

A path is stored as a tuple of points ``(x, y, eps)``.  Type A paths have
``eps = 0`` everywhere.  In type B the row ``x = 2n-1`` carries a point at
height ``y + eps*epsilon`` for an infinitesimal ``epsilon``; such points are
stored with ``eps`` in ``{-1, +1}`` and compared as tuples ``(y, eps)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import kernels
from .catalog import MinAffParams, highest_weight_key
from .lattice import AlgebraType, GMonomial, QPolynomial, key_from_items, poly_iota, poly_tau


class PathError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MPath:
    alg: AlgebraType
    i: int
    k: int
    points: tuple

    def ys(self) -> list:
        return [p[1] for p in self.points]

    def to_json_obj(self) -> dict:
        return {"type": str(self.alg), "i": self.i, "k": self.k,
                "points": [list(p) for p in self.points]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def in_domain(alg: AlgebraType, i: int, k: int) -> bool:
    if not 1 <= i <= alg.n:
        return False
    if alg.family == "A":
        return (i - k) % 2 == 1
    if i == alg.n:
        return k % 2 == 1
    return k % 2 == 0


def _check(alg, i, k):
    if not in_domain(alg, i, k):
        raise PathError(f"({i}, {k}) is outside the path domain of {alg}")


def _steps(y0, count, step):
    for signs in product((-1, 1), repeat=count):
        ys = [y0]
        for sg in signs:
            ys.append(ys[-1] + sg * step)
        yield ys


def _half_paths(n: int, l: int) -> list:
    if l % 4 == 3:
        xs = list(range(0, 2 * n - 1, 2))
    else:
        xs = list(range(4 * n - 2, 2 * n - 1, -2))
    out = []
    for ys in _steps(l + 2 * n - 1, n - 1, 2):
        base = tuple((x, y, 0) for x, y in zip(xs, ys))
        last = ys[-1]
        for tail in ((2 * n - 1, last - 1, -1), (2 * n - 1, last + 1, 1)):
            out.append(base + (tail,))
    return out


@lru_cache(maxsize=None)
def _raw_paths(alg: AlgebraType, i: int, k: int) -> tuple:
    _check(alg, i, k)
    n = alg.n
    if alg.family == "A":
        y_end = n + 1 - i + k
        res = []
        for ys in _steps(i + k, n + 1, 1):
            if ys[-1] == y_end:
                res.append(tuple((x, y, 0) for x, y in enumerate(ys)))
        return tuple(sorted(res, key=lambda p: [q[1:] for q in p]))
    if i == n:
        res = _half_paths(n, k)
    else:
        off = 2 * n - 2 * i - 1
        res = []
        for a in _half_paths(n, k - off):
            for b in _half_paths(n, k + off):
                if a[-1][1:] > b[-1][1:]:
                    res.append(a + tuple(reversed(b)))
    return tuple(sorted(set(res), key=lambda p: [q[1:] for q in p]))


def _tau_inv(n: int, x: int) -> int:
    if x < 2 * n - 1:
        return x // 2
    return (4 * n - 2 - x) // 2


def _corners_raw(alg: AlgebraType, pts: tuple):
    plus, minus = [], []
    if alg.family == "A":
        for r in range(1, len(pts) - 1):
            y0, y1, y2 = pts[r - 1][1], pts[r][1], pts[r + 1][1]
            if y0 == y1 + 1 == y2:
                plus.append((pts[r][0], y1))
            elif y0 == y1 - 1 == y2:
                minus.append((pts[r][0], y1))
        return plus, minus
    n = alg.n
    edge = (0, 2 * n - 1, 4 * n - 2)
    for r in range(1, len(pts) - 1):
        x = pts[r][0]
        if x in edge:
            continue
        a, b, c = pts[r - 1][1:], pts[r][1:], pts[r + 1][1:]
        if a > b and c > b:
            plus.append((_tau_inv(n, x), b[0]))
        elif a < b and c < b:
            minus.append((_tau_inv(n, x), b[0]))
    mid = {p[1:] for p in pts if p[0] == 2 * n - 1}
    for y, e in sorted(mid):
        if e == -1 and (y, 1) not in mid:
            plus.append((n, y))
        elif e == 1 and (y, -1) not in mid:
            minus.append((n, y))
    return plus, minus


def _key_of(alg: AlgebraType, pts: tuple) -> tuple:
    plus, minus = _corners_raw(alg, pts)
    return key_from_items([(i, l, 1) for i, l in plus] + [(i, l, -1) for i, l in minus])


def enumerate_paths(alg: AlgebraType, i: int, k: int) -> list:
    return [MPath(alg, i, k, pts) for pts in _raw_paths(alg, i, k)]


def corners(path: MPath):
    plus, minus = _corners_raw(path.alg, path.points)
    return sorted(plus), sorted(minus)


def monomial_of_path(path: MPath) -> GMonomial:
    return GMonomial.from_key(_key_of(path.alg, path.points))


def _extent(pts: tuple) -> dict:
    ext: dict = {}
    for x, y, e in pts:
        v = (y, e)
        lo, hi = ext.get(x, (v, v))
        ext[x] = (min(lo, v), max(hi, v))
    return ext


def _above(ea: dict, eb: dict) -> bool:
    for x, (_, hi) in ea.items():
        other = eb.get(x)
        if other is not None and not hi < other[0]:
            return False
    return True


def strictly_above(p: MPath, p2: MPath) -> bool:
    if p.alg != p2.alg:
        raise PathError("paths of different algebra types")
    return _above(_extent(p.points), _extent(p2.points))


def _unique(alg, i, k, pick):
    found = [p for p in enumerate_paths(alg, i, k) if not corners(p)[pick]]
    if len(found) != 1:
        raise PathError(f"expected one path without {'upper' if pick == 0 else 'lower'} "
                        f"corners in ({i},{k}), found {len(found)}")
    return found[0]


def highest_path(alg: AlgebraType, i: int, k: int) -> MPath:
    return _unique(alg, i, k, 1)


def lowest_path(alg: AlgebraType, i: int, k: int) -> MPath:
    return _unique(alg, i, k, 0)


@lru_cache(maxsize=None)
def _column(alg: AlgebraType, i: int, k: int):
    raw = _raw_paths(alg, i, k)
    return [_key_of(alg, p) for p in raw], [_extent(p) for p in raw]


@lru_cache(maxsize=None)
def _compat(alg: AlgebraType, upper: tuple, lower: tuple) -> tuple:
    """Bitmasks: for each path of ``upper``, the paths of ``lower`` strictly below it."""
    _, eu = _column(alg, *upper)
    _, el = _column(alg, *lower)
    out = []
    for a in eu:
        mask = 0
        for b, ext in enumerate(el):
            if _above(a, ext):
                mask |= 1 << b
        out.append(mask)
    return tuple(out)


def columns_at_zero(alg: AlgebraType, k: tuple) -> list:
    return MinAffParams(alg, 0, k).columns()


def tuple_polynomial(alg: AlgebraType, cols: list) -> dict:
    """Sum over non-overlapping tuples with the given (node, shift) columns."""
    col_keys = [_column(alg, i, kk)[0] for i, kk in cols]
    compat = [[_compat(alg, cols[u], cols[t]) for u in range(t)] for t in range(len(cols))]
    return kernels.tuple_sum(col_keys, compat, alg.family == "A")


@lru_cache(maxsize=256)
def _qchar_zero(alg: AlgebraType, k: tuple) -> dict:
    return tuple_polynomial(alg, columns_at_zero(alg, k))


def qchar_dict(p: MinAffParams) -> dict:
    """q-character of ``p`` as a raw key dictionary (do not mutate)."""
    base = poly_tau(_qchar_zero(p.alg, p.k), p.s)
    if p.dual:
        return poly_iota(p.alg, base)
    return base


def qchar_minaff(p: MinAffParams) -> QPolynomial:
    return QPolynomial.from_dict(qchar_dict(p))


def clear_caches() -> None:
    _qchar_zero.cache_clear()
    _compat.cache_clear()
    _column.cache_clear()
    _raw_paths.cache_clear()


def render_ascii(path: MPath) -> str:
    """Debug grid: one row per height, ``*`` on path points (``+``/``-`` for eps)."""
    pts = path.points
    xs = sorted({p[0] for p in pts})
    ys = sorted({p[1] for p in pts})
    col = {x: c for c, x in enumerate(xs)}
    rows = []
    for y in ys:
        line = [" ."] * len(xs)
        for x, yy, e in pts:
            if yy == y:
                line[col[x]] = " " + {0: "*", 1: "+", -1: "-"}[e]
        rows.append(f"{y:>5} |" + "".join(line))
    rows.append("      +" + "--" * len(xs))
    rows.append("       " + "".join(f"{x:>2}"[-2:] for x in xs))
    return "\n".join(rows)


def highest_monomial_matches(p: MinAffParams) -> bool:
    d = qchar_dict(p)
    return d.get(highest_weight_key(p), 0) == 1
