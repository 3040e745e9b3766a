"""Weyl dimension formula and classical decompositions of KR modules (types A, B)."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .lattice import AlgebraType


def _eps_coords(alg: AlgebraType, lam) -> list:
    """Highest weight in the orthogonal basis (A: n+1 coordinates, B: n)."""
    n = alg.n
    if alg.family == "A":
        return [sum(lam[p] for p in range(j, n)) for j in range(n)] + [0]
    return [sum(lam[p] for p in range(j, n - 1)) + Fraction(lam[n - 1], 2) for j in range(n)]


def _positive_roots(alg: AlgebraType) -> list:
    n = alg.n
    roots = []
    if alg.family == "A":
        for a in range(n + 1):
            for b in range(a + 1, n + 1):
                v = [0] * (n + 1)
                v[a], v[b] = 1, -1
                roots.append(v)
        return roots
    for a in range(n):
        v = [0] * n
        v[a] = 1
        roots.append(v)
        for b in range(a + 1, n):
            for sg in (1, -1):
                w = [0] * n
                w[a], w[b] = 1, sg
                roots.append(w)
    return roots


def _rho(alg: AlgebraType) -> list:
    n = alg.n
    if alg.family == "A":
        return [Fraction(n - j) for j in range(n + 1)]
    return [Fraction(2 * (n - j) - 1, 2) for j in range(n)]


def weyl_dimension(alg: AlgebraType, lam) -> int:
    """Dimension of the simple module with highest weight sum lam_i omega_i."""
    lam = tuple(lam)
    if len(lam) != alg.n or any(x < 0 for x in lam):
        raise ValueError(f"bad dominant weight {lam} for {alg}")
    lv = _eps_coords(alg, lam)
    rho = _rho(alg)
    num = Fraction(1)
    for r in _positive_roots(alg):
        a = sum(Fraction(x) * y for x, y in zip(lv, r))
        b = sum(x * y for x, y in zip(rho, r))
        num *= (a + b) / b
    assert num.denominator == 1
    return int(num)


def kr_decomposition(alg: AlgebraType, i: int, m: int) -> list:
    """Classical highest weights (with multiplicity one) of the KR module W^{(i)}_m.

    Type A is irreducible.  In type B the rectangle is cut by vertical
    dominoes: for i < n the weights are sum c_j omega_j over j = i, i-2, ...
    (omega_0 = 0) with sum c_j = m; for i = n a weight (m mod 2) omega_n is
    kept and the remaining floor(m/2) columns of height n are cut the same way
    with omega_n replaced by 2 omega_n.
    """
    alg.check_node(i)
    n = alg.n
    if m == 0:
        return [(0,) * n]
    if alg.family == "A":
        lam = [0] * n
        lam[i - 1] = m
        return [tuple(lam)]
    if i < n:
        heights = list(range(i, -1, -2))
        total, base = m, [0] * n
    else:
        heights = list(range(n, -1, -2))
        total, base = m // 2, [0] * n
        base[n - 1] = m % 2
    out = []
    for cs in product(range(total + 1), repeat=len(heights)):
        if sum(cs) != total:
            continue
        lam = list(base)
        for h, c in zip(heights, cs):
            if h == 0 or not c:
                continue
            lam[h - 1] += 2 * c if (i == n and h == n) else c
        out.append(tuple(lam))
    return sorted(out)


def kr_dimension(alg: AlgebraType, i: int, m: int) -> int:
    return sum(weyl_dimension(alg, lam) for lam in kr_decomposition(alg, i, m))
