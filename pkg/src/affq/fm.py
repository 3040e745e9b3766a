"""sl2 q-characters, the phi_i lift and the Frenkel-Mukhin closure."""

from __future__ import annotations

import heapq
import os
from functools import lru_cache
from itertools import product

from .kernels import mono_mul
from .lattice import (
    AlgebraType,
    GMonomial,
    QPolynomial,
    a_inv_key,
    key_from_items,
    key_items,
    key_node_dominant,
)

DEFAULT_BUDGET = 10 ** 7


class FMError(RuntimeError):
    pass


class BudgetExceeded(FMError):
    pass


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("AFFQ_BUDGET")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise FMError(f"AFFQ_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise FMError("AFFQ_BUDGET must be positive")
    return value


# ---------------------------------------------------------------------------
# sl2

def kr_lowerings(k: int, c: int, d: int = 1) -> list:
    """Lists of A^{-1} positions for the k+1 terms of the KR string centred at c."""
    return [[c + d * (k - 2 * j) for j in range(t)] for t in range(k + 1)]


def kr_top(k: int, c: int, d: int = 1) -> list:
    return [c + d * (k - 2 * l - 1) for l in range(k)]


def strings(shifts: dict, d: int = 1) -> list:
    """Split a dominant multiset {shift: multiplicity} into (length, centre) strings.

    Repeatedly takes the longest run of step ``2d`` that ends at the largest
    remaining shift.
    """
    left = {s: m for s, m in shifts.items() if m}
    out = []
    while left:
        top = max(left)
        run = [top]
        while run[-1] - 2 * d in left:
            run.append(run[-1] - 2 * d)
        for s in run:
            left[s] -= 1
            if not left[s]:
                del left[s]
        k = len(run)
        out.append((k, top - d * (k - 1)))
    return out


def _sl2_key(items, d=1):
    return key_from_items((1, s, e) for s, e in items)


def _a_sl2(b: int, d: int) -> list:
    return [(b - d, 1), (b + d, 1)]


def sl2_kr_qchar(k: int, c: int = 0, d: int = 1) -> QPolynomial:
    """q-character of the KR string of length ``k`` centred at ``c`` (node 1)."""
    if k < 0:
        raise FMError("k must be nonnegative")
    top = [(s, 1) for s in kr_top(k, c, d)]
    terms = {}
    for low in kr_lowerings(k, c, d):
        items = list(top)
        for b in low:
            items.extend((s, -e) for s, e in _a_sl2(b, d))
        key = _sl2_key(items)
        terms[key] = terms.get(key, 0) + 1
    return QPolynomial.from_dict(terms)


def sl2_qchar(m: GMonomial, d: int = 1) -> QPolynomial:
    """q-character of the simple sl2 module with dominant highest monomial ``m``."""
    shifts = {}
    for i, s, e in key_items(m.key):
        if e < 0:
            raise FMError(f"{m} is not dominant")
        shifts[s] = shifts.get(s, 0) + e
    out = QPolynomial.one()
    for k, c in strings(shifts, d):
        out = out * sl2_kr_qchar(k, c, d)
    return out


# ---------------------------------------------------------------------------
# phi_i

@lru_cache(maxsize=65536)
def _phi_lowerings(shifts: tuple, d: int) -> tuple:
    """Multiset of lowering lists (as sorted tuples) for the sl2 monomial ``shifts``."""
    parts = [kr_lowerings(k, c, d) for k, c in strings(dict(shifts), d)]
    acc: dict = {}
    for combo in product(*parts):
        low = tuple(sorted(b for lst in combo for b in lst))
        acc[low] = acc.get(low, 0) + 1
    return tuple(sorted(acc.items()))


def _node_shifts(key: tuple, i: int) -> tuple:
    return tuple((key[t + 1], key[t + 2]) for t in range(0, len(key), 3) if key[t] == i)


def phi_terms(alg: AlgebraType, i: int, key: tuple) -> list:
    """[(key, multiplicity, lowering count)] for phi_i of an i-dominant key."""
    sh = _node_shifts(key, i)
    if any(e < 0 for _, e in sh):
        raise FMError(f"{GMonomial.from_key(key)} is not {i}-dominant")
    d = alg.d(i)
    out = []
    for low, mult in _phi_lowerings(sh, d):
        m = key
        for b in low:
            m = mono_mul(m, a_inv_key(alg, i, b))
        out.append((m, mult, len(low)))
    return out


def phi_expansion(alg: AlgebraType, i: int, m: GMonomial) -> QPolynomial:
    alg.check_node(i)
    acc: dict = {}
    for key, mult, _ in phi_terms(alg, i, m.key):
        acc[key] = acc.get(key, 0) + mult
    return QPolynomial.from_dict(acc)


# ---------------------------------------------------------------------------
# Frenkel-Mukhin closure

def fm_qchar_dict(alg: AlgebraType, top: tuple, budget: int | None = None) -> dict:
    if any(e < 0 for _, _, e in key_items(top)):
        raise FMError(f"{GMonomial.from_key(top)} is not dominant")
    if budget is None:
        budget = budget_from_env()
    nodes = list(alg.nodes)
    coef = {top: 1}
    colour = {top: [0] * len(nodes)}
    depth = {top: 0}
    heap = [(0, top)]
    queued = {top}
    while heap:
        dep, m = heapq.heappop(heap)
        c = coef[m]
        cols = colour[m]
        dominant_here = [key_node_dominant(m, j) for j in nodes]
        if all(dominant_here) and m != top:
            raise FMError(f"dominant monomial {GMonomial.from_key(m)} met; module is not special")
        for idx, j in enumerate(nodes):
            if not dominant_here[idx]:
                if cols[idx] < c:
                    raise FMError(f"closure failed at node {j} for {GMonomial.from_key(m)}")
                continue
            add = c - cols[idx]
            if add < 0:
                raise FMError(f"negative multiplicity at node {j} for {GMonomial.from_key(m)}")
            if not add:
                continue
            cols[idx] = c
            for m2, mult, low in phi_terms(alg, j, m):
                if not low:
                    continue
                col2 = colour.get(m2)
                if col2 is None:
                    col2 = [0] * len(nodes)
                    colour[m2] = col2
                    coef[m2] = 0
                    depth[m2] = dep + low
                col2[idx] += add * mult
                if col2[idx] > coef[m2]:
                    coef[m2] = col2[idx]
                if m2 not in queued:
                    queued.add(m2)
                    heapq.heappush(heap, (dep + low, m2))
                    if len(coef) > budget:
                        raise BudgetExceeded(f"more than {budget} monomials")
    return coef


def fm_qchar(alg: AlgebraType, m_plus: GMonomial, budget: int | None = None) -> QPolynomial:
    return QPolynomial.from_dict(fm_qchar_dict(alg, m_plus.key, budget))


def is_special(p: QPolynomial) -> bool:
    from .lattice import dominant_keys
    return len(dominant_keys(p.terms)) == 1


def is_antispecial(p: QPolynomial) -> bool:
    from .lattice import antidominant_keys
    return len(antidominant_keys(p.terms)) == 1
