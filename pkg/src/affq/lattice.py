"""Monomials and Laurent polynomials in the variables Y_{i,s}.

Internally a monomial is a *key*: a flat tuple ``(i0, s0, e0, i1, s1, e1, ...)``
sorted by ``(i, s)`` without zero exponents.  A polynomial is a ``dict`` from
keys to nonzero integers.  :class:`GMonomial` and :class:`QPolynomial` are thin
immutable wrappers used at the public surface.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from . import kernels
from .kernels import mono_mul

__all__ = [
    "AlgebraType",
    "GMonomial",
    "QPolynomial",
    "a_factor",
    "is_dominant",
    "is_antidominant",
    "is_right_negative",
    "leq",
    "dominant_monomials",
    "antidominant_monomials",
    "iota",
    "tau_shift",
    "restrict",
    "beta_j",
    "parse_monomial",
    "parse_polynomial",
]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class AlgebraType:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in ("A", "B"):
            raise LatticeError(f"unsupported family {self.family!r}")
        if self.n < 1 or (self.family == "B" and self.n < 2):
            raise LatticeError(f"bad rank {self.n} for type {self.family}")

    @classmethod
    def parse(cls, text: str) -> "AlgebraType":
        m = re.fullmatch(r"\s*([ABab])\s*_?\s*(\d+)\s*", text)
        if not m:
            raise LatticeError(f"cannot parse algebra type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.n}"

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def d(self, i: int) -> int:
        self.check_node(i)
        if self.family == "B" and i < self.n:
            return 2
        return 1

    @property
    def t(self) -> int:
        return 2 if self.family == "B" else 1

    def check_node(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise LatticeError(f"node {i} out of range for {self}")

    def cartan(self, i: int, j: int) -> int:
        if i == j:
            return 2
        if abs(i - j) != 1:
            return 0
        if self.family == "B" and i == self.n and j == self.n - 1:
            return -2
        return -1

    def symmetrized(self, i: int, j: int) -> int:
        """Entry b_ij of B = DC."""
        return self.d(i) * self.cartan(i, j)


# ---------------------------------------------------------------------------
# key level helpers

def key_from_items(items: Iterable[tuple[int, int, int]]) -> tuple:
    acc: dict[tuple[int, int], int] = {}
    for i, s, e in items:
        acc[(i, s)] = acc.get((i, s), 0) + e
    out = []
    for (i, s) in sorted(acc):
        e = acc[(i, s)]
        if e:
            out.extend((i, s, e))
    return tuple(out)


def key_items(key: tuple) -> Iterator[tuple[int, int, int]]:
    for t in range(0, len(key), 3):
        yield key[t], key[t + 1], key[t + 2]


def key_inv(key: tuple) -> tuple:
    out = list(key)
    for t in range(2, len(out), 3):
        out[t] = -out[t]
    return tuple(out)


def key_div(a: tuple, b: tuple) -> tuple:
    return mono_mul(a, key_inv(b))


def key_tau(key: tuple, b: int) -> tuple:
    if not b:
        return key
    out = list(key)
    for t in range(1, len(out), 3):
        out[t] += b
    return tuple(out)


def key_node_dominant(key: tuple, j: int) -> bool:
    for t in range(0, len(key), 3):
        if key[t] == j and key[t + 2] < 0:
            return False
    return True


def key_iota(alg: AlgebraType, key: tuple) -> tuple:
    n = alg.n
    if alg.family == "A":
        return key_from_items((n - i + 1, n - s + 1, -e) for i, s, e in key_items(key))
    return key_from_items((i, 4 * n - s - 2, -e) for i, s, e in key_items(key))


@lru_cache(maxsize=None)
def a_key(alg: AlgebraType, i: int, s: int) -> tuple:
    alg.check_node(i)
    di = alg.d(i)
    items = [(i, s - di, 1), (i, s + di, 1)]
    for j in alg.nodes:
        if j == i:
            continue
        c = alg.cartan(j, i)
        if c == -1:
            items.append((j, s, -1))
        elif c == -2:
            items.extend(((j, s - 1, -1), (j, s + 1, -1)))
        elif c == -3:
            items.extend(((j, s - 2, -1), (j, s, -1), (j, s + 2, -1)))
    return key_from_items(items)


@lru_cache(maxsize=None)
def a_inv_key(alg: AlgebraType, i: int, s: int) -> tuple:
    return key_inv(a_key(alg, i, s))


def key_leq(alg: AlgebraType, m: tuple, m2: tuple) -> bool:
    """True iff m2 / m is a product of A_{i,s} with nonnegative exponents."""
    q = key_div(m2, m)
    if not q:
        return True
    floor = min(q[t] for t in range(1, len(q), 3))
    while q:
        top = max(q[t] for t in range(1, len(q), 3))
        # pick the smallest node at the top shift for determinism
        for t in range(0, len(q), 3):
            if q[t + 1] == top:
                i, e = q[t], q[t + 2]
                break
        if e < 0:
            return False
        centre = top - alg.d(i)
        if centre - alg.d(i) < floor:
            return False
        q = mono_mul(q, kernels.mono_pow(a_inv_key(alg, i, centre), e))
    return True


def key_to_text(key: tuple) -> str:
    if not key:
        return "1"
    parts = []
    for i, s, e in key_items(key):
        parts.append(f"{i}_{s}" if e == 1 else f"{i}_{s}^{e}")
    return " ".join(parts)


_TOKEN = re.compile(r"^(\d+)_(-?\d+)(?:\^(-?\d+))?$")


def key_from_text(text: str) -> tuple:
    text = text.strip()
    if text in ("", "1"):
        return ()
    items = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise LatticeError(f"bad monomial token {tok!r}")
        e = int(m.group(3)) if m.group(3) is not None else 1
        if e == 0:
            raise LatticeError(f"zero exponent in {tok!r}")
        items.append((int(m.group(1)), int(m.group(2)), e))
    return key_from_items(items)


def poly_add(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def poly_tau(p: dict, b: int) -> dict:
    if not b:
        return p
    return {key_tau(k, b): c for k, c in p.items()}


def poly_iota(alg: AlgebraType, p: dict) -> dict:
    return {key_iota(alg, k): c for k, c in p.items()}


def poly_mul_key(p: dict, key: tuple) -> dict:
    return {mono_mul(k, key): c for k, c in p.items()}


def dominant_keys(p: dict) -> list:
    return sorted((k, c) for k, c in p.items() if kernels.is_dominant_key(k))


def antidominant_keys(p: dict) -> list:
    return sorted((k, c) for k, c in p.items() if all(k[t] < 0 for t in range(2, len(k), 3)))


# ---------------------------------------------------------------------------
# public wrappers

class GMonomial:
    """Immutable monomial in the Y_{i,s}."""

    __slots__ = ("key", "_hash")

    def __init__(self, exps=None):
        if exps is None:
            key = ()
        elif isinstance(exps, dict):
            key = key_from_items((i, s, e) for (i, s), e in exps.items())
        else:
            key = key_from_items(exps)
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def from_key(cls, key: tuple) -> "GMonomial":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "key", key)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def Y(cls, i: int, s: int, e: int = 1) -> "GMonomial":
        return cls.from_key((i, s, e) if e else ())

    @classmethod
    def parse(cls, text: str) -> "GMonomial":
        return cls.from_key(key_from_text(text))

    def __setattr__(self, name, value):
        raise AttributeError("GMonomial is immutable")

    def __reduce__(self):
        return (GMonomial.from_key, (self.key,))

    @property
    def exps(self) -> dict:
        return {(i, s): e for i, s, e in key_items(self.key)}

    def items(self):
        return list(key_items(self.key))

    def exponent(self, i: int, s: int) -> int:
        for a, b, e in key_items(self.key):
            if (a, b) == (i, s):
                return e
        return 0

    def __mul__(self, other):
        if isinstance(other, GMonomial):
            return GMonomial.from_key(mono_mul(self.key, other.key))
        if isinstance(other, QPolynomial):
            return QPolynomial.from_dict({self.key: 1}) * other
        return NotImplemented

    def __truediv__(self, other: "GMonomial") -> "GMonomial":
        return GMonomial.from_key(key_div(self.key, other.key))

    def __pow__(self, n: int) -> "GMonomial":
        return GMonomial.from_key(kernels.mono_pow(self.key, n))

    def inverse(self) -> "GMonomial":
        return GMonomial.from_key(key_inv(self.key))

    def is_unit(self) -> bool:
        return not self.key

    def degree(self) -> int:
        return sum(e for _, _, e in key_items(self.key))

    def weight(self, n: int) -> tuple:
        w = [0] * n
        for i, _, e in key_items(self.key):
            w[i - 1] += e
        return tuple(w)

    def __eq__(self, other):
        return isinstance(other, GMonomial) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(("GMonomial", self.key))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return key_to_text(self.key)

    def __repr__(self):
        return f"GMonomial({key_to_text(self.key)!r})"

    def to_json_vars(self) -> list:
        return [list(t) for t in key_items(self.key)]


class QPolynomial:
    """Immutable Laurent polynomial with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for m, c in items:
                key = m.key if isinstance(m, GMonomial) else tuple(m)
                v = d.get(key, 0) + int(c)
                if v:
                    d[key] = v
                else:
                    d.pop(key, None)
        object.__setattr__(self, "terms", d)

    @classmethod
    def from_dict(cls, d: dict) -> "QPolynomial":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "terms", {k: c for k, c in d.items() if c})
        return obj

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls.from_dict({(): 1})

    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls.from_dict({})

    @classmethod
    def monomial(cls, m: GMonomial, c: int = 1) -> "QPolynomial":
        return cls.from_dict({m.key: c})

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    def __reduce__(self):
        return (QPolynomial.from_dict, (self.terms,))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for k in sorted(self.terms):
            yield GMonomial.from_key(k), self.terms[k]

    def __contains__(self, m: GMonomial):
        return m.key in self.terms

    def coefficient(self, m: GMonomial) -> int:
        return self.terms.get(m.key, 0)

    def monomials(self) -> list:
        return [GMonomial.from_key(k) for k in sorted(self.terms)]

    def _coerce(self, other):
        if isinstance(other, QPolynomial):
            return other.terms
        if isinstance(other, GMonomial):
            return {other.key: 1}
        if isinstance(other, int):
            return {(): other} if other else {}
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial.from_dict(poly_add(self.terms, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial.from_dict(poly_add(self.terms, o, -1))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial.from_dict(poly_add(o, self.terms, -1))

    def __neg__(self):
        return QPolynomial.from_dict({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QPolynomial.from_dict(kernels.poly_mul(self.terms, o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = QPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def mass(self) -> int:
        return sum(self.terms.values())

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            mono = key_to_text(k)
            if c == 1:
                parts.append(mono)
            elif mono == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        text = self.to_text()
        if len(text) > 120:
            text = text[:117] + "..."
        return f"QPolynomial({text!r})"

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {"coef": self.terms[k], "vars": [list(t) for t in key_items(k)]}
                for k in sorted(self.terms)
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QPolynomial":
        return cls((key_from_items(tuple(v) for v in t["vars"]), t["coef"]) for t in obj["terms"])

    @classmethod
    def from_json(cls, text: str) -> "QPolynomial":
        return cls.from_json_obj(json.loads(text))

    @classmethod
    def parse(cls, text: str) -> "QPolynomial":
        return parse_polynomial(text)


_TERM = re.compile(r"^(-?\d+)\*(.+)$")


def parse_monomial(text: str) -> GMonomial:
    return GMonomial.parse(text)


def parse_polynomial(text: str) -> QPolynomial:
    text = text.strip()
    if text == "0":
        return QPolynomial.zero()
    terms = []
    for part in text.split(" + "):
        part = part.strip()
        m = _TERM.match(part)
        if m:
            terms.append((key_from_text(m.group(2)), int(m.group(1))))
        elif re.fullmatch(r"-?\d+", part) and part != "1":
            terms.append(((), int(part)))
        else:
            terms.append((key_from_text(part), 1))
    return QPolynomial(terms)


def _as_poly(p) -> dict:
    if isinstance(p, QPolynomial):
        return p.terms
    if isinstance(p, GMonomial):
        return {p.key: 1}
    if isinstance(p, dict):
        return p
    raise TypeError(f"expected QPolynomial or GMonomial, got {type(p).__name__}")


def _wrap_like(p, d: dict):
    if isinstance(p, GMonomial):
        (k,) = d
        return GMonomial.from_key(k)
    return QPolynomial.from_dict(d)


# ---------------------------------------------------------------------------
# operations

def a_factor(alg: AlgebraType, i: int, s: int) -> GMonomial:
    return GMonomial.from_key(a_key(alg, i, s))


def is_dominant(m: GMonomial) -> bool:
    return kernels.is_dominant_key(m.key)


def is_antidominant(m: GMonomial) -> bool:
    return all(e <= 0 for _, _, e in key_items(m.key))


def is_right_negative(m: GMonomial) -> bool:
    if not m.key:
        return False
    top = max(s for _, s, _ in key_items(m.key))
    return all(e < 0 for _, s, e in key_items(m.key) if s == top)


def leq(alg: AlgebraType, m: GMonomial, m2: GMonomial) -> bool:
    return key_leq(alg, m.key, m2.key)


def dominant_monomials(p: QPolynomial) -> list:
    return [(GMonomial.from_key(k), c) for k, c in dominant_keys(p.terms)]


def antidominant_monomials(p: QPolynomial) -> list:
    return [(GMonomial.from_key(k), c) for k, c in antidominant_keys(p.terms)]


def iota(alg: AlgebraType, p):
    return _wrap_like(p, poly_iota(alg, _as_poly(p)))


def tau_shift(p, b: int):
    return _wrap_like(p, poly_tau(_as_poly(p), b))


def restrict(p) -> dict:
    """Classical character: node-weight vectors with summed coefficients.

    Weights are tuples of length max-node; the empty monomial maps to ``()``
    padded to the same length when other terms fix it.
    """
    d = _as_poly(p)
    n = max((k[t] for k in d for t in range(0, len(k), 3)), default=0)
    out: dict = {}
    for k, c in d.items():
        w = [0] * n
        for i, _, e in key_items(k):
            w[i - 1] += e
        w = tuple(w)
        out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def restrict_n(p, n: int) -> dict:
    """Like :func:`restrict` with a fixed weight length ``n``."""
    out: dict = {}
    for k, c in _as_poly(p).items():
        w = [0] * n
        for i, _, e in key_items(k):
            w[i - 1] += e
        w = tuple(w)
        out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def beta_j(p, j: int):
    """Project onto node ``j``; the result lives on node 1 (a rank-one lattice)."""
    out: dict = {}
    for k, c in _as_poly(p).items():
        kk = tuple(x for t in range(0, len(k), 3) if k[t] == j for x in (1, k[t + 1], k[t + 2]))
        out[kk] = out.get(kk, 0) + c
    out = {k: c for k, c in out.items() if c}
    if isinstance(p, GMonomial):
        return GMonomial.from_key(next(iter(out)))
    return QPolynomial.from_dict(out)
