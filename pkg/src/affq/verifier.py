"""Decidable checks for M-system identities and the surrounding claims."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

from . import kernels
from .catalog import (
    MinAffParams,
    MSystemInstance,
    highest_weight_key,
    identify_key,
    msystem_instance,
    predicted_dominant_keys,
    sigma_shifts,
)
from .fm import fm_qchar_dict, phi_terms
from .kernels import mono_mul
from .lattice import (
    AlgebraType,
    GMonomial,
    a_inv_key,
    dominant_keys,
    key_div,
    key_items,
    key_to_text,
    poly_add,
    poly_iota,
    restrict_n,
)
from .paths import qchar_dict


class EngineDisagreement(RuntimeError):
    pass


@dataclass
class VerificationReport:
    ident: str
    equation: str
    lhs_terms: int = 0
    rhs_terms: int = 0
    equal: Optional[bool] = None
    dominant: Optional[dict] = None
    certificates: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        if self.equal is False:
            return False
        if self.dominant is not None and not self.dominant.get("match", True):
            return False
        return all(c.get("passed", True) for c in self.certificates)

    def to_json_obj(self, timing: bool = False) -> dict:
        obj = {
            "id": self.ident,
            "equation": self.equation,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "equal": self.equal,
            "dominant": self.dominant,
            "certificates": self.certificates,
            "notes": self.notes,
            "ok": self.ok,
        }
        if timing:
            obj["wall_time"] = round(self.wall_time, 6)
        return obj

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_json_obj(timing), sort_keys=True)


# ---------------------------------------------------------------------------
# factor q-characters

def factor_qchar(alg: AlgebraType, mono: GMonomial, params: Optional[MinAffParams],
                 engine: str = "path", dual: bool = False, budget: Optional[int] = None) -> dict:
    """q-character of one factor; ``mono`` is the plain highest weight."""
    if engine not in ("path", "fm", "both"):
        raise ValueError(f"unknown engine {engine!r}")
    if params is None:
        params = identify_key(alg, mono.key)
    res_path = res_fm = None
    if engine in ("path", "both") and params is not None:
        res_path = qchar_dict(params.plain())
    if engine in ("fm", "both") or res_path is None:
        res_fm = fm_qchar_dict(alg, mono.key, budget)
    if res_path is not None and res_fm is not None and res_path != res_fm:
        raise EngineDisagreement(f"path and fm engines disagree on {mono}")
    out = res_path if res_path is not None else res_fm
    return poly_iota(alg, out) if dual else out


def _factors(inst: MSystemInstance, engine: str, budget=None, dual: bool = False) -> list:
    plain = inst if not inst.dual else _plain_of(inst)
    return [factor_qchar(plain.alg, m, p, engine, dual, budget)
            for m, p in zip(plain.M, plain.params)]


def _plain_of(inst: MSystemInstance) -> MSystemInstance:
    return inst.meta["plain"]


def _multiset(keys_with_coef) -> list:
    out = []
    for k, c in keys_with_coef:
        out.extend([k] * c)
    return sorted(out)


def _text_list(keys) -> list:
    return [key_to_text(k) for k in keys]


# ---------------------------------------------------------------------------
# operations

def classify_dominants(inst: MSystemInstance, engine: str = "path", qchars=None) -> dict:
    if inst.dual:
        raise ValueError("dominant classification applies to plain instances")
    q = qchars or _factors(inst, engine)
    scans = [
        _multiset(kernels.dominant_product_terms(q[0], q[1]).items()),
        _multiset(kernels.dominant_product_terms(q[2], q[3]).items()),
        _multiset(kernels.dominant_product_terms(q[4], q[5]).items()),
    ]
    pred = [sorted(x) for x in predicted_dominant_keys(inst)]
    names = ("lhs", "t34", "t56")
    section = {"match": scans == pred}
    for nm, sc, pr in zip(names, scans, pred):
        section[nm] = {"scan": _text_list(sc), "predicted": _text_list(pr), "match": sc == pr}
    return section


def simplicity_certificate(inst: MSystemInstance, engine: str = "path", qchars=None) -> list:
    alg, i = inst.alg, inst.i
    ki = inst.k[i - 1]
    if ki < 2:
        return []
    q = qchars or _factors(inst, engine)
    q3, q4 = q[2], q[3]
    sig = sigma_shifts(inst)
    base = mono_mul(inst.M3.key, inst.M4.key)
    out = []
    current = base
    for r in range(ki - 1):
        current = mono_mul(current, a_inv_key(alg, i, sig[r]))
        n1 = mono_mul(current, a_inv_key(alg, i, sig[r]))
        in_phi = any(m == n1 for m, _, _ in phi_terms(alg, i, current))
        in_prod = any(key_div(n1, m) in q4 for m in q3)
        out.append({
            "r": r,
            "M_r": key_to_text(current),
            "n1": key_to_text(n1),
            "in_phi": in_phi,
            "in_M3M4": in_prod,
            "passed": in_phi and not in_prod,
        })
    return out


def verify_equation(inst: MSystemInstance, engine: str = "path", cross_check: bool = False,
                    classify: bool = True, certify: bool = True,
                    budget: Optional[int] = None) -> VerificationReport:
    t0 = time.perf_counter()
    if cross_check:
        engine = "both"
    rep = VerificationReport(inst.ident, inst.equation_text())
    q = _factors(inst, engine, budget, dual=inst.dual)
    lhs = kernels.poly_mul(q[0], q[1])
    rhs = poly_add(kernels.poly_mul(q[2], q[3]), kernels.poly_mul(q[4], q[5]))
    rep.lhs_terms = len(lhs)
    rep.rhs_terms = len(rhs)
    rep.equal = lhs == rhs
    if not inst.dual:
        if classify:
            rep.dominant = classify_dominants(inst, qchars=q)
        if certify:
            rep.certificates = simplicity_certificate(inst, qchars=q)
            if rep.certificates and rep.equal and not all(c["passed"] for c in rep.certificates):
                rep.notes.append("certificate failed while the identity holds: manual review")
    rep.wall_time = time.perf_counter() - t0
    return rep


def classify_only(inst: MSystemInstance, engine: str = "path") -> VerificationReport:
    """Dominant scans and certificates without expanding the full products."""
    t0 = time.perf_counter()
    rep = VerificationReport(inst.ident, inst.equation_text())
    q = _factors(inst, engine)
    rep.dominant = classify_dominants(inst, qchars=q)
    rep.certificates = simplicity_certificate(inst, qchars=q)
    rep.wall_time = time.perf_counter() - t0
    return rep


def verify_real(p: MinAffParams) -> bool:
    q = qchar_dict(p)
    dom = kernels.dominant_product_terms(q, q)
    top = highest_weight_key(p)
    return dom == {mono_mul(top, top): 1}


def dual_instance(inst: MSystemInstance) -> MSystemInstance:
    if inst.dual:
        return inst.meta["plain"]
    alg = inst.alg
    mons, params = [], []
    for m, p in zip(inst.M, inst.params):
        if p is not None:
            dp = p.as_dual()
            mons.append(GMonomial.from_key(highest_weight_key(dp)))
            params.append(dp)
        else:
            dq = poly_iota(alg, fm_qchar_dict(alg, m.key))
            (top, _), = dominant_keys(dq)
            mons.append(GMonomial.from_key(top))
            params.append(None)
    meta = dict(inst.meta)
    meta["plain"] = inst
    return MSystemInstance(alg, inst.s, inst.i, inst.j, inst.k, inst.shape, tuple(mons),
                           tuple(params), True, meta)


def verify_dual(inst: MSystemInstance, engine: str = "path", cross_check: bool = False,
                budget: Optional[int] = None) -> VerificationReport:
    dinst = inst if inst.dual else dual_instance(inst)
    rep = verify_equation(dinst, engine, cross_check, budget=budget)
    # the dual factors must carry the dual highest weights
    q = _factors(dinst, "both" if cross_check else engine, budget, dual=True)
    for idx, (m, qq) in enumerate(zip(dinst.M, q), start=1):
        dom = dominant_keys(qq)
        if dom != [(m.key, 1)]:
            rep.equal = False
            rep.notes.append(f"dual factor M{idx} has dominant part {dom}, expected {m}")
    return rep


def _restrict_product(a: dict, b: dict) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = tuple(x + y for x, y in zip(wa, wb))
            out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


def verify_m_system_restriction(inst: MSystemInstance, engine: str = "path") -> bool:
    n = inst.alg.n
    q = _factors(inst, engine, dual=inst.dual)
    r = [restrict_n(x, n) for x in q]
    lhs = _restrict_product(r[0], r[1])
    rhs = _restrict_product(r[2], r[3])
    for w, c in _restrict_product(r[4], r[5]).items():
        rhs[w] = rhs.get(w, 0) + c
    rhs = {w: c for w, c in rhs.items() if c}
    return lhs == rhs


# ---------------------------------------------------------------------------
# example suite and grids

A3 = AlgebraType("A", 3)
B2 = AlgebraType("B", 2)

# (algebra, s, M2 vector, expected equation "[M1][M2] = [M3][M4] + [M5][M6]")
EXAMPLES = [
    (A3, -1, (1, 1, 0), "[1_-1][1_-3 2_0] = [1_-3 1_-1][2_0] + [2_-2 2_0]"),
    (A3, -3, (2, 1, 0), "[1_-3 1_-1][1_-5 1_-3 2_0] = [1_-3 2_0][1_-5 1_-3 1_-1] + [2_-4 2_-2 2_0]"),
    (A3, -3, (0, 1, 1), "[2_-2][2_-4 3_-1] = [2_-4 2_-2][3_-1] + [1_-3][3_-3 3_-1]"),
    (A3, -5, (0, 2, 1), "[2_-4 2_-2][2_-6 2_-4 3_-1] = [2_-4 3_-1][2_-6 2_-4 2_-2] + [1_-5 1_-3][3_-5 3_-3 3_-1]"),
    (A3, -3, (1, 0, 1), "[1_-3][1_-5 3_-1] = [1_-5 1_-3][3_-1] + [2_-4 3_-1]"),
    (A3, -5, (2, 0, 1), "[1_-5 1_-3][1_-7 1_-5 3_-1] = [1_-5 3_-1][1_-7 1_-5 1_-3] + [2_-6 2_-4 3_-1]"),
    (A3, -5, (1, 1, 1), "[1_-5 3_-1][1_-7 2_-4 3_-1] = [1_-7 1_-5 3_-1][2_-4 3_-1] + [2_-6 2_-4 3_-1][3_-1]"),
    (A3, -7, (2, 1, 1), "[1_-7 1_-5 3_-1][1_-9 1_-7 2_-4 3_-1] = [1_-7 2_-4 3_-1][1_-9 1_-7 1_-5 3_-1] + [2_-8 2_-6 2_-4 3_-1][3_-1]"),
    (B2, -3, (1, 2), "[1_-3][1_-7 2_-2 2_0] = [1_-7 1_-3][2_-2 2_0] + [2_-6 2_-4 2_-2 2_0]"),
    (B2, -7, (2, 2), "[1_-7 1_-3][1_-11 1_-7 2_-2 2_0] = [1_-7 2_-2 2_0][1_-11 1_-7 1_-3] + [2_-10 2_-8 2_-6 2_-4 2_-2 2_0]"),
    (B2, -1, (1, 1), "[1_-1][1_-5 2_0] = [2_0][1_-5 1_-1] + [2_-4 2_-2 2_0]"),
    (B2, -5, (2, 1), "[1_-5 1_-1][1_-9 1_-5 2_0] = [1_-5 2_0][1_-9 1_-5 1_-1] + [2_-8 2_-6 2_-4 2_-2 2_0]"),
]

DUAL_EXAMPLES = [
    "[1_1][2_0 1_3] = [1_1 1_3][2_0] + [2_0 2_2]",
    "[1_1 1_3][2_0 1_3 1_5] = [2_0 1_3][1_1 1_3 1_5] + [2_0 2_2 2_4]",
    "[2_2][3_1 2_4] = [2_2 2_4][3_1] + [1_3][3_1 3_3]",
    "[2_2 2_4][3_1 2_4 2_6] = [3_1 2_4][2_2 2_4 2_6] + [1_3 1_5][3_1 3_3 3_5]",
    "[1_3][3_1 1_5] = [1_3 1_5][3_1] + [3_1 2_4]",
    "[1_3 1_5][3_1 1_5 1_7] = [3_1 1_5][1_3 1_5 1_7] + [3_1 2_4 2_6]",
    "[3_1 1_5][3_1 2_4 1_7] = [3_1 1_5 1_7][3_1 2_4] + [3_1 2_4 2_6][3_1]",
    "[3_1 1_5 1_7][3_1 2_4 1_7 1_9] = [3_1 2_4 1_7][3_1 1_5 1_7 1_9] + [3_1 2_4 2_6 2_8][3_1]",
    "[1_3][2_0 2_2 1_7] = [1_3 1_7][2_0 2_2] + [2_0 2_2 2_4 2_6]",
    "[1_3 1_7][2_0 2_2 1_7 1_11] = [2_0 2_2 1_7][1_3 1_7 1_11] + [2_0 2_2 2_4 2_6 2_8 2_10]",
    "[1_1][2_0 1_5] = [2_0][1_1 1_5] + [2_0 2_2 2_4]",
    "[1_1 1_5][2_0 1_5 1_9] = [2_0 1_5][1_1 1_5 1_9] + [2_0 2_2 2_4 2_6 2_8]",
]


def parse_equation(text: str) -> tuple:
    """Three sorted tuples of monomial keys (units dropped) for the sides of an equation."""
    import re
    from .lattice import key_from_text

    lhs, rhs = text.split("=")
    t34, t56 = rhs.split("+")

    def side(part):
        ks = [key_from_text(x) for x in re.findall(r"\[([^\]]*)\]", part)]
        return tuple(sorted(k for k in ks if k))

    return side(lhs), side(t34), side(t56)


def instance_sides(inst: MSystemInstance) -> tuple:
    def side(ms):
        return tuple(sorted(m.key for m in ms if m.key))
    return side(inst.M[0:2]), side(inst.M[2:4]), side(inst.M[4:6])


def example_instances() -> list:
    return [msystem_instance(alg, s, k) for alg, s, k, _ in EXAMPLES]


def grid_vectors(alg: AlgebraType, max_entry: int = 2) -> list:
    out = []
    for k in product(range(max_entry + 1), repeat=alg.n):
        if sum(1 for x in k if x) >= 2:
            out.append(k)
    return out


def grid_shift(alg: AlgebraType) -> int:
    """Smallest admissible base shift: type B needs odd s."""
    return -1 if alg.family == "B" else 0


def grid_instances(alg: AlgebraType, max_entry: int = 2, s: Optional[int] = None) -> list:
    if s is None:
        s = grid_shift(alg)
    return [msystem_instance(alg, s, k) for k in grid_vectors(alg, max_entry)]


def run_batch(items: list, fn: Callable, jobs: int = 1) -> list:
    """Apply ``fn`` to every item, in a process pool when ``jobs > 1``; order is preserved."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


__all__ = [
    "VerificationReport",
    "EngineDisagreement",
    "verify_equation",
    "classify_dominants",
    "classify_only",
    "simplicity_certificate",
    "verify_real",
    "dual_instance",
    "verify_dual",
    "verify_m_system_restriction",
    "EXAMPLES",
    "DUAL_EXAMPLES",
    "example_instances",
    "grid_instances",
    "grid_vectors",
    "grid_shift",
    "parse_equation",
    "instance_sides",
    "run_batch",
    "factor_qchar",
]
