"""Minimal affinizations, neighbouring points and M-system instances."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from .kernels import mono_mul
from .lattice import (
    AlgebraType,
    GMonomial,
    LatticeError,
    a_inv_key,
    key_div,
    key_from_items,
    key_items,
    key_tau,
)

SHAPES = ("A-generic", "B-j<n", "B-kn+2", "B-kn=1")


class CatalogError(ValueError):
    pass


def _highest_items(alg: AlgebraType, s: int, k: tuple) -> list:
    n = alg.n
    items = []
    acc = 0
    for j in range(1, n + 1):
        kj = k[j - 1]
        for l in range(kj):
            if alg.family == "A":
                sh = s + 2 * acc + 2 * l + (j - 1)
            elif j < n:
                sh = s + 4 * acc + 4 * l + 2 * j - 2
            else:
                sh = s + 4 * acc + 2 * l + 2 * n - 3
            items.append((j, sh, 1))
        acc += kj
    return items


@dataclass(frozen=True, order=True)
class MinAffParams:
    alg: AlgebraType
    s: int
    k: tuple
    dual: bool = False

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if len(k) != self.alg.n:
            raise CatalogError(f"k has {len(k)} entries, {self.alg} needs {self.alg.n}")
        if any(x < 0 for x in k):
            raise CatalogError("k entries must be nonnegative")

    @property
    def length(self) -> int:
        return sum(self.k)

    @property
    def chirality(self) -> str:
        return "dual" if self.dual else "plain"

    def is_trivial(self) -> bool:
        return not any(self.k)

    def is_kr(self) -> bool:
        return sum(1 for x in self.k if x) == 1

    def shifted(self, b: int) -> "MinAffParams":
        return replace(self, s=self.s + b)

    def plain(self) -> "MinAffParams":
        return replace(self, dual=False)

    def as_dual(self) -> "MinAffParams":
        return replace(self, dual=True)

    def columns(self) -> list:
        """(node, shift) of each factor of the plain highest weight, by shift."""
        items = _highest_items(self.alg, self.s, self.k)
        return sorted(((i, sh) for i, sh, _ in items), key=lambda t: (t[1], t[0]))

    def __str__(self):
        base = f"{self.alg}:s={self.s}:k={','.join(map(str, self.k))}"
        return base + (":dual" if self.dual else "")

    @classmethod
    def parse(cls, text: str) -> "MinAffParams":
        m = re.fullmatch(r"\s*([AB]\d+):s=(-?\d+):k=([\d,]+)(:dual)?\s*", text)
        if not m:
            raise CatalogError(f"cannot parse minimal affinization {text!r}")
        alg = AlgebraType.parse(m.group(1))
        k = tuple(int(x) for x in m.group(3).split(","))
        return cls(alg, int(m.group(2)), k, bool(m.group(4)))

    def to_json_obj(self) -> dict:
        return {"type": str(self.alg), "s": self.s, "k": list(self.k), "chirality": self.chirality}


def highest_weight_key(p: MinAffParams) -> tuple:
    items = _highest_items(p.alg, p.s, p.k)
    if p.dual:
        items = [(i, -sh, e) for i, sh, e in items]
    return key_from_items(items)


def highest_weight(p: MinAffParams) -> GMonomial:
    return GMonomial.from_key(highest_weight_key(p))


def identify_key(alg: AlgebraType, key: tuple, dual: bool = False) -> Optional[MinAffParams]:
    """Parameters whose highest weight is ``key``, or None."""
    if not key:
        return MinAffParams(alg, 0, (0,) * alg.n, dual)
    if any(e <= 0 for _, _, e in key_items(key)):
        return None
    k = [0] * alg.n
    for i, _, e in key_items(key):
        k[i - 1] += e
    first = min(i for i, _, _ in key_items(key))
    shifts = [sh for i, sh, _ in key_items(key) if i == first]
    probe = MinAffParams(alg, 0, tuple(k))
    ref = [sh for i, sh, _ in _highest_items(alg, 0, probe.k) if i == first]
    # plain: the lowest shift on the first node is s + min(ref); dual shifts are negated
    if not dual:
        s = min(shifts) - min(ref)
    else:
        s = -max(shifts) - min(ref)
    cand = MinAffParams(alg, s, tuple(k), dual)
    return cand if highest_weight_key(cand) == key else None


def identify(alg: AlgebraType, m: GMonomial, dual: bool = False) -> Optional[MinAffParams]:
    return identify_key(alg, m.key, dual)


# ---------------------------------------------------------------------------
# neighbouring points

def _half(num: int, den: int) -> int:
    if num % den:
        raise CatalogError("neighbouring point off the lattice")
    return num // den


def _check_point(alg: AlgebraType, pt) -> None:
    i, k = pt
    alg.check_node(i)
    if alg.family == "B":
        if (i < alg.n and k % 2 == 0) or (i == alg.n and k % 2):
            raise CatalogError(f"point {pt} is not on the {alg} neighbouring lattice")


def _nb_A(alg, i, k, i2, k2):
    n = alg.n
    if (i + k - i2 - k2) % 2:
        raise CatalogError("points of different parity")
    if k + i > k2 - i2:
        X = [(_half(i + k + i2 - k2, 2), _half(i + k - i2 + k2, 2))]
    elif k + i == k2 - i2:
        X = []
    else:
        raise CatalogError("X undefined: k+i < k'-i'")
    if k + n + 1 - i > k2 - n - 1 + i2:
        Y = [(_half(i2 + k2 + i - k, 2), _half(i2 + k2 - i + k, 2))]
    elif k + n + 1 - i == k2 - n - 1 + i2:
        Y = []
    else:
        raise CatalogError("Y undefined")
    return X, Y


def _B_set(n, i, k, i2, k2):
    if i < n and i2 < n:
        if k2 - k == 2 * i + 2 * i2:
            return []
        if k2 - k < 2 * i + 2 * i2:
            return [(_half(2 * i + k + 2 * i2 - k2, 4), _half(2 * i + k - 2 * i2 + k2, 2))]
    elif i < n and i2 == n:
        if k2 - k == 2 * i + 2 * n - 1:
            return []
        if k2 - k < 2 * i + 2 * n - 1:
            return [(_half(2 * i + k + 2 * n - 1 - k2, 4), _half(2 * i + k - 2 * n + 1 + k2, 2))]
    elif i == n and i2 < n:
        return [(n, k2 - 2 * n + 1 + 2 * i2)]
    else:
        return []
    raise CatalogError("B undefined for these points")


def _F_set(n, i, k, i2, k2):
    if i < n and i2 < n:
        if k2 - k <= 4 * n - 4 - 2 * i - 2 * i2:
            return [(_half(2 * i2 + k2 + 2 * i - k, 4), _half(2 * i2 + k2 - 2 * i + k, 2))]
        if k2 - k >= 4 * n - 2 * i - 2 * i2:
            return [(n, k + 2 * n - 1 - 2 * i), (n, k2 - 2 * n + 1 + 2 * i2)]
    elif i < n and i2 == n:
        return [(n, k + 2 * n - 1 - 2 * i)]
    elif i == n and i2 < n:
        if k2 - k < 2 * n - 1 - 2 * i2:
            return [(_half(2 * n - 1 + k + 2 * i2 - k2, 4), _half(2 * n - 1 + k - 2 * i2 + k2, 2))]
        if k2 - k == 2 * n - 1 - 2 * i2:
            return []
    else:
        return [(_half(4 * n - 2 + k - k2, 4), _half(k + k2, 2))]
    raise CatalogError("F undefined for these points")


def neighbouring_points(alg: AlgebraType, p, p2):
    """The pair (X, Y) of neighbouring point lists for ``p`` below ``p2``."""
    i, k = p
    i2, k2 = p2
    _check_point(alg, p)
    _check_point(alg, p2)
    if alg.family == "A":
        return _nb_A(alg, i, k, i2, k2)
    n = alg.n
    Bs = _B_set(n, i, k, i2, k2)
    Fs = _F_set(n, i, k, i2, k2)
    if i < n:
        r = (2 * n + k - 2 * i) % 4
        return (Bs, Fs) if r == 1 else (Fs, Bs)
    return (Bs, Fs) if k % 4 == 0 else (Fs, Bs)


def neighbouring_points_normalized(alg: AlgebraType, p, p2):
    """Neighbouring points evaluated at the residue class the B-type formulas expect.

    For B the pair is computed after a spectral shift by 0 or 2 that puts
    ``p`` in the (B, F) branch, then shifted back.  Type A is unchanged.
    """
    if alg.family == "A":
        return neighbouring_points(alg, p, p2)
    n = alg.n
    i, k = p
    r = (2 * n + k - 2 * i) % 4 if i < n else (k % 4) + 1
    delta = 0 if r == 1 else 2
    X, Y = neighbouring_points(alg, (i, k + delta), (p2[0], p2[1] + delta))
    return [(a, b - delta) for a, b in X], [(a, b - delta) for a, b in Y]


# ---------------------------------------------------------------------------
# M-system instances

@dataclass(frozen=True)
class MSystemInstance:
    alg: AlgebraType
    s: int
    i: int
    j: int
    k: tuple
    shape: str
    M: tuple  # six GMonomials
    params: tuple  # MinAffParams for M1..M4 (M5/M6 entries may be None)
    dual: bool = False
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def M1(self):
        return self.M[0]

    @property
    def M2(self):
        return self.M[1]

    @property
    def M3(self):
        return self.M[2]

    @property
    def M4(self):
        return self.M[3]

    @property
    def M5(self):
        return self.M[4]

    @property
    def M6(self):
        return self.M[5]

    @property
    def ident(self) -> str:
        tag = ":dual" if self.dual else ""
        return f"{self.alg}:s={self.s}:k={','.join(map(str, self.k))}{tag}"

    def equation_text(self) -> str:
        def br(m):
            return f"[{m}]"
        a = "".join(br(m) for m in self.M[0:2])
        b = "".join(br(m) for m in self.M[2:4])
        c = "".join(br(m) for m in self.M[4:6])
        return f"{a} = {b} + {c}"

    def to_json_obj(self) -> dict:
        return {
            "id": self.ident,
            "type": str(self.alg),
            "s": self.s,
            "i": self.i,
            "j": self.j,
            "k": list(self.k),
            "shape": self.shape,
            "chirality": "dual" if self.dual else "plain",
            "M": [{"vars": m.to_json_vars()} for m in self.M],
            "params": [p.to_json_obj() if p is not None else None for p in self.params],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def classify_shape(alg: AlgebraType, k: tuple):
    """(i, j, shape) for a non-KR M2 vector ``k``."""
    nz = [p + 1 for p, x in enumerate(k) if x]
    if len(nz) < 2:
        raise CatalogError(f"k={k} names a Kirillov-Reshetikhin or trivial module")
    i, j = nz[0], nz[1]
    if alg.family == "A":
        return i, j, "A-generic"
    n = alg.n
    if j < n:
        return i, j, "B-j<n"
    return i, j, ("B-kn+2" if k[n - 1] >= 2 else "B-kn=1")


def _xcal(alg: AlgebraType, s: int, i: int, ki: int) -> list:
    d = alg.d(i)
    return [(i, s + d * (i + 2 * l - 5)) for l in range(1, ki + 1)]


def msystem_instance(alg: AlgebraType, s: int, k, i: Optional[int] = None,
                     j: Optional[int] = None, shape: Optional[str] = None,
                     normalize: bool = True) -> MSystemInstance:
    """The equation whose second factor is M^{(s-2d_i)}_k.

    ``k`` is the vector of M2, which fixes ``i``, ``j`` and the shape; when
    given explicitly they must agree.  ``normalize=False`` evaluates the B-type
    neighbouring points literally (kept for diagnostics).
    """
    k = tuple(int(x) for x in k)
    if len(k) != alg.n or any(x < 0 for x in k):
        raise CatalogError(f"bad k vector {k} for {alg}")
    i0, j0, shape0 = classify_shape(alg, k)
    if i is not None and i != i0:
        raise CatalogError(f"i={i} disagrees with k={k} (first nonzero entry is {i0})")
    if j is not None and j != j0:
        raise CatalogError(f"j={j} disagrees with k={k} (second nonzero entry is {j0})")
    if shape is not None and shape != shape0:
        raise CatalogError(f"shape {shape} disagrees with k={k} ({shape0})")
    i, j, shape = i0, j0, shape0
    d = alg.d(i)
    ki = k[i - 1]
    drop = 2 if shape == "B-kn+2" else 1
    k1 = list(k)
    k1[j - 1] -= drop
    k3 = list(k1)
    k3[i - 1] += 1
    k4 = list(k)
    k4[i - 1] -= 1
    p1 = MinAffParams(alg, s, tuple(k1))
    p2 = MinAffParams(alg, s - 2 * d, k)
    p3 = MinAffParams(alg, s - 2 * d, tuple(k3))
    p4 = MinAffParams(alg, s, tuple(k4))
    M1 = highest_weight_key(p1)
    M2 = highest_weight_key(p2)
    Xs, Ys = [], []
    nb = neighbouring_points_normalized if normalize else neighbouring_points
    for pt in _xcal(alg, s, i, ki):
        X, Y = nb(alg, pt, (pt[0], pt[1] + 2 * d))
        Xs.extend(X)
        Ys.extend(Y)
    ei = tuple(ki if q == i else 0 for q in alg.nodes)
    base1 = highest_weight_key(MinAffParams(alg, s, ei))
    base2 = highest_weight_key(MinAffParams(alg, s - 2 * d, ei))
    M5 = key_div(mono_mul(key_from_items((a, b, 1) for a, b in Xs), M1), base1)
    M6 = key_div(mono_mul(key_from_items((a, b, 1) for a, b in Ys), M2), base2)
    for name, key in (("M5", M5), ("M6", M6)):
        if any(e < 0 for _, _, e in key_items(key)):
            raise CatalogError(f"{name}={GMonomial.from_key(key)} is not dominant for k={k}, s={s}")
    p5 = identify_key(alg, M5)
    p6 = identify_key(alg, M6)
    mons = tuple(GMonomial.from_key(x) for x in (M1, M2, highest_weight_key(p3),
                                                  highest_weight_key(p4), M5, M6))
    return MSystemInstance(alg, s, i, j, k, shape, mons, (p1, p2, p3, p4, p5, p6),
                           meta={"X": Xs, "Y": Ys})


def sigma_shifts(inst: MSystemInstance) -> list:
    """Spectral positions sigma_r of the lowering factors A_{i,sigma_r}^{-1}."""
    alg, s, i = inst.alg, inst.s, inst.i
    d = alg.d(i)
    ki = inst.k[i - 1]
    return [s + d * (i + 2 * ki - 2 * r - 4) for r in range(ki)]


def _lowered(alg, key, i, sig, r):
    out = key
    for q in range(r + 1):
        out = mono_mul(out, a_inv_key(alg, i, sig[q]))
    return out


def predicted_dominant_keys(inst: MSystemInstance):
    alg, i = inst.alg, inst.i
    ki = inst.k[i - 1]
    sig = sigma_shifts(inst)
    m12 = mono_mul(inst.M1.key, inst.M2.key)
    m34 = mono_mul(inst.M3.key, inst.M4.key)
    lhs = [_lowered(alg, m12, i, sig, r) for r in range(-1, ki)]
    t34 = [_lowered(alg, m34, i, sig, r) for r in range(-1, ki - 1)]
    t56 = [mono_mul(inst.M5.key, inst.M6.key)]
    return lhs, t34, t56


def predicted_dominants(inst: MSystemInstance):
    lhs, t34, t56 = predicted_dominant_keys(inst)
    wrap = lambda ks: [GMonomial.from_key(x) for x in ks]  # noqa: E731
    return wrap(lhs), wrap(t34), wrap(t56)


def tau_instance_key(key: tuple, b: int) -> tuple:
    return key_tau(key, b)


__all__ = [
    "MinAffParams",
    "MSystemInstance",
    "CatalogError",
    "SHAPES",
    "highest_weight",
    "highest_weight_key",
    "identify",
    "identify_key",
    "neighbouring_points",
    "neighbouring_points_normalized",
    "msystem_instance",
    "classify_shape",
    "predicted_dominants",
    "predicted_dominant_keys",
    "sigma_shifts",
    "LatticeError",
]
