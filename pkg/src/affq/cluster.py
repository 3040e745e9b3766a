"""Truncated Hernandez-Leclerc seeds, quiver mutation and token exchanges.

Vertices are pairs ``(c, k)``: column ``c`` and level ``k >= 1`` counted from
the top.  Type A has columns ``1..n`` (column ``i`` is node ``i``).  Type B has
``2n-1`` columns: ``C_n`` is node ``n``; node ``i < n`` owns ``C_i`` and
``C_{2n-i}``, which carry the two interleaved shift series of that node.

Each vertex also has a Gamma label ``(i, r)`` used to lay down the initial
arrows: ``(i, r) -> (j, r + b_ij)`` whenever ``b_ij != 0``.  Labels are
``r = bottom shift`` of the initial KR token, lowered by one for the short
nodes of type B so that every label of a connected component has the same
parity.

The infinite quiver is cut at depth ``R``.  Vertices whose arrows may differ
from the infinite quiver are tracked in ``Seed.tainted``; taint starts on the
vertices adjacent to the cut and spreads to the near neighbours of every
mutation that touches it.

A column pass "to infinity" drags a front of arrows down the column: a vertex
off the column stays attached to whichever column vertex is mutated next.
In the limit the front leaves every finite region, so a truncated pass ends
by deleting the arrows between the last column vertex and the vertices that
followed it for at least ``FRONT_STREAK`` consecutive mutations and sit
farther than ``local_span`` away.  Deleted arrows are logged in
``Seed.dropped``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from . import kernels
from .catalog import CatalogError, MinAffParams, highest_weight_key, identify_key, msystem_instance
from .fm import strings
from .lattice import AlgebraType, GMonomial, a_inv_key, key_from_items, key_items


class ClusterError(RuntimeError):
    pass


class ExchangeError(ClusterError):
    pass


class UnsafeVertex(ClusterError):
    pass


@dataclass(frozen=True)
class Opaque:
    """A cluster variable the engine could not name."""
    ident: int

    def __str__(self):
        return f"?{self.ident}"


Token = Union[MinAffParams, Opaque]


def token_text(t: Optional[Token]) -> str:
    if t is None:
        return "-"
    if isinstance(t, Opaque):
        return str(t)
    tag = "~" if t.dual else ""
    return f"{tag}t^({t.s})_{''.join(map(str, t.k)) if max(t.k) < 10 else ','.join(map(str, t.k))}"


def token_json(t: Token):
    if isinstance(t, Opaque):
        return {"opaque": t.ident}
    return t.to_json_obj()


# ---------------------------------------------------------------------------
# quiver

class Quiver:
    """Skew-symmetric exchange matrix stored sparsely: ``b[u][v] = #(u->v) - #(v->u)``."""

    def __init__(self, vertices=()):
        self._b: dict = {v: {} for v in vertices}

    @property
    def vertices(self) -> list:
        return sorted(self._b)

    def __contains__(self, v):
        return v in self._b

    def add_arrow(self, u, v, mult: int = 1) -> None:
        if u == v:
            raise ClusterError(f"loop at {u}")
        self._set(u, v, self._b[u].get(v, 0) + mult)

    def _set(self, u, v, value: int) -> None:
        if value:
            self._b[u][v] = value
            self._b[v][u] = -value
        else:
            self._b[u].pop(v, None)
            self._b[v].pop(u, None)

    def b(self, u, v) -> int:
        return self._b[u].get(v, 0)

    def neighbours(self, v) -> list:
        return sorted(self._b[v])

    def incoming(self, v) -> dict:
        return {u: -m for u, m in self._b[v].items() if m < 0}

    def outgoing(self, v) -> dict:
        return {u: m for u, m in self._b[v].items() if m > 0}

    def arrows(self) -> list:
        """Sorted ``(u, v, multiplicity)`` triples."""
        return sorted((u, v, m) for u, row in self._b.items() for v, m in row.items() if m > 0)

    def mutate(self, k) -> None:
        ins = self.incoming(k)
        outs = self.outgoing(k)
        for u, a in ins.items():
            for w, c in outs.items():
                self._set(u, w, self.b(u, w) + a * c)
        for u in list(self._b[k]):
            self._set(k, u, -self._b[k][u])

    def copy(self) -> "Quiver":
        q = Quiver()
        q._b = {v: dict(row) for v, row in self._b.items()}
        return q

    def check(self) -> None:
        """Raise unless the matrix is skew-symmetric and loop free."""
        for u, row in self._b.items():
            if u in row:
                raise ClusterError(f"loop at {u}")
            for v, m in row.items():
                if self._b[v].get(u) != -m:
                    raise ClusterError(f"matrix not skew-symmetric at {u}, {v}")

    def __eq__(self, other):
        return isinstance(other, Quiver) and self._b == other._b


# ---------------------------------------------------------------------------
# columns, labels and initial tokens

def column_count(alg: AlgebraType) -> int:
    return alg.n if alg.family == "A" else 2 * alg.n - 1


def column_node(alg: AlgebraType, c: int) -> int:
    if not 1 <= c <= column_count(alg):
        raise ClusterError(f"column {c} out of range for {alg}")
    if alg.family == "A" or c <= alg.n:
        return c
    return 2 * alg.n - c


def columns_of_node(alg: AlgebraType, i: int) -> list:
    alg.check_node(i)
    if alg.family == "A" or i == alg.n:
        return [i]
    return [i, 2 * alg.n - i]


def _upper_series(alg: AlgebraType, c: int) -> bool:
    """Type B short node: does column ``c`` carry the series s = -4k-2i+5 ?

    ``C_i`` carries it exactly when ``n - i`` is odd, so the series alternate
    along ``C_1 .. C_{n-1}``.  Any other choice breaks the B3/B4 sequences.
    """
    i = column_node(alg, c)
    return (c == i) == ((alg.n - i) % 2 == 1)


def initial_token(alg: AlgebraType, c: int, k: int) -> MinAffParams:
    i = column_node(alg, c)
    vec = tuple(k if q == i else 0 for q in alg.nodes)
    n = alg.n
    if alg.family == "A":
        s = -2 * k - i + (3 if i % 2 == 0 else 2)
    elif i == n:
        s = -2 * n - 2 * k + 5
    else:
        s = -4 * k - 2 * i + (5 if _upper_series(alg, c) else 3)
    return MinAffParams(alg, s, vec)


def vertex_label(alg: AlgebraType, c: int, k: int) -> tuple:
    i = column_node(alg, c)
    s = initial_token(alg, c, k).s
    if alg.family == "A":
        return i, s + i - 1
    if i == alg.n:
        return i, s + 2 * alg.n - 3
    return i, s + 2 * i - 3


FRONT_STREAK = 3


def local_span(alg: AlgebraType) -> int:
    """Longest label distance an arrow of the limit quiver is allowed to span."""
    return 4 * alg.t + 2


def column_depth(alg: AlgebraType, c: int, R: int) -> int:
    """Levels kept in column ``c``; the type B long-node column steps half as far."""
    if alg.family == "B" and column_node(alg, c) == alg.n:
        return 2 * R
    return R


def _label_index(alg: AlgebraType, depth: int) -> dict:
    return {vertex_label(alg, c, k): (c, k)
            for c in range(1, column_count(alg) + 1)
            for k in range(1, column_depth(alg, c, depth) + 1)}


def _gamma_targets(alg: AlgebraType, label: tuple) -> list:
    i, r = label
    return [(j, r + alg.symmetrized(i, j)) for j in alg.nodes if alg.symmetrized(i, j)]


def _gamma_sources(alg: AlgebraType, label: tuple) -> list:
    i, r = label
    return [(j, r - alg.symmetrized(j, i)) for j in alg.nodes if alg.symmetrized(j, i)]


# ---------------------------------------------------------------------------
# exchange resolution

@dataclass(frozen=True)
class Exchange:
    kind: str  # "M-system", "T-system" or "opaque"
    new: Token
    ident: str = ""
    reason: str = ""


def _side(tokens) -> Counter:
    return Counter(t for t in tokens if not (isinstance(t, MinAffParams) and t.is_trivial()))


def _kr_from_bottom(alg: AlgebraType, i: int, m: int, bottom: int) -> Optional[MinAffParams]:
    if m == 0:
        return MinAffParams(alg, 0, (0,) * alg.n)
    d = alg.d(i)
    return identify_key(alg, key_from_items((i, bottom + 2 * d * l, 1) for l in range(m)))


def _split_strings(alg: AlgebraType, key: tuple) -> Optional[list]:
    per_node: dict = {}
    for i, s, e in key_items(key):
        if e < 0:
            return None
        per_node.setdefault(i, {})[s] = e
    out = []
    for i, shifts in sorted(per_node.items()):
        d = alg.d(i)
        for length, centre in strings(shifts, d):
            p = _kr_from_bottom(alg, i, length, centre - d * (length - 1))
            if p is None:
                return None
            out.append(p)
    return out


def _t_system_candidates(old: MinAffParams) -> list:
    alg = old.alg
    (i,) = [q + 1 for q, x in enumerate(old.k) if x]
    m = old.k[i - 1]
    d = alg.d(i)
    b0 = min(sh for _, sh in old.columns())
    out = []
    for b in (b0 - 2 * d, b0):
        lo = _kr_from_bottom(alg, i, m, b)
        hi = _kr_from_bottom(alg, i, m, b + 2 * d)
        new = lo if b == b0 - 2 * d else hi
        top = [_kr_from_bottom(alg, i, m + 1, b), _kr_from_bottom(alg, i, m - 1, b + 2 * d)]
        key = kernels.mono_mul(highest_weight_key(lo), highest_weight_key(hi))
        for l in range(m):
            key = kernels.mono_mul(key, a_inv_key(alg, i, b + d + 2 * d * l))
        bottom = _split_strings(alg, key)
        if None in top or bottom is None or new is None:
            continue
        ident = f"T:{alg}:node={i}:m={m}:bottom={b}"
        out.append(("T-system", new, _side(top), _side(bottom), ident, (lo, hi, top, bottom)))
    return out


def _m1_vectors(alg: AlgebraType, k1: tuple) -> list:
    """M2 vectors whose M1 vector is ``k1``."""
    nz = [q + 1 for q, x in enumerate(k1) if x]
    if not nz:
        return []
    i = nz[0]
    nxt = nz[1] if len(nz) > 1 else alg.n
    out = []
    for j in range(i + 1, nxt + 1):
        if alg.family == "B" and j == alg.n:
            drops = (1, 2) if k1[j - 1] == 0 else (2,)
        else:
            drops = (1,)
        for dr in drops:
            k2 = list(k1)
            k2[j - 1] += dr
            out.append(tuple(k2))
    return out


def _instance_candidate(inst, new: MinAffParams) -> tuple:
    p = inst.params
    side3 = _side([p[2], p[3]])
    if p[4] is not None and p[5] is not None:
        side5 = _side([p[4], p[5]])
    else:
        side5 = Counter({("monomial", kernels.mono_mul(inst.M5.key, inst.M6.key)): 1})
    return ("M-system", new, side3, side5, inst.ident, inst)


def _m_system_candidates(old: MinAffParams) -> list:
    alg = old.alg
    out = []
    nz = [q + 1 for q, x in enumerate(old.k) if x]
    if len(nz) >= 2:  # old plays M2
        d = alg.d(nz[0])
        try:
            inst = msystem_instance(alg, old.s + 2 * d, old.k)
            out.append(_instance_candidate(inst, inst.params[0]))
        except CatalogError:
            pass
    for k2 in _m1_vectors(alg, old.k):  # old plays M1
        try:
            inst = msystem_instance(alg, old.s, k2)
        except CatalogError:
            continue
        if inst.params[0] == old:
            out.append(_instance_candidate(inst, inst.params[1]))
    return out


def exchange_candidates(old: MinAffParams) -> list:
    """Candidate exchanges keyed on the plain token ``old``.

    Each entry is ``(kind, new, side_a, side_b, ident, data)`` where the sides
    are token multisets (units dropped).
    """
    if old.is_trivial():
        return []
    cands = _m_system_candidates(old)
    if old.is_kr():
        cands += _t_system_candidates(old)
    return cands


def _side_matches(side: Counter, expected: Counter) -> bool:
    mono = [x for x in expected if isinstance(x, tuple) and x and x[0] == "monomial"]
    if not mono:
        return side == expected
    key = ()
    for t, mult in side.items():
        if not isinstance(t, MinAffParams):
            return False
        for _ in range(mult):
            key = kernels.mono_mul(key, highest_weight_key(t))
    return key == mono[0][1]


def _exchange_identity_holds(old, new, ins, outs) -> bool:
    from .paths import qchar_dict

    def prod(tokens):
        acc = {(): 1}
        for t in tokens:
            acc = kernels.poly_mul(acc, qchar_dict(t))
        return acc

    lhs = prod([old, new])
    a, b = prod(ins), prod(outs)
    rhs = dict(a)
    for key, c in b.items():
        rhs[key] = rhs.get(key, 0) + c
    return lhs == {k: c for k, c in rhs.items() if c}


def resolve_exchange(old: Token, ins: list, outs: list) -> Optional[Exchange]:
    """Name the token replacing ``old`` when the neighbours are ``ins``/``outs``.

    Dual tokens are resolved through their plain counterparts.  Returns None
    when no candidate matches.
    """
    everything = [old, *ins, *outs]
    if any(isinstance(t, Opaque) for t in everything):
        return None
    duals = {t.dual for t in everything if not t.is_trivial()}
    if len(duals) > 1:
        return None
    dual = duals.pop() if duals else False
    plain_in = _side([t.plain() for t in ins])
    plain_out = _side([t.plain() for t in outs])
    hits = []
    for kind, new, sa, sb, ident, _ in exchange_candidates(old.plain()):
        if (_side_matches(plain_in, sa) and _side_matches(plain_out, sb)) or \
                (_side_matches(plain_in, sb) and _side_matches(plain_out, sa)):
            hits.append(Exchange(kind, new.as_dual() if dual else new, ident + (":dual" if dual else "")))
    unique = list(dict.fromkeys(hits))
    if len(unique) > 1:
        unique = [h for h in unique if _exchange_identity_holds(old, h.new, ins, outs)]
    if len(unique) > 1:
        raise ExchangeError(f"ambiguous exchange at {token_text(old)}: {[h.ident for h in unique]}")
    return unique[0] if unique else None


# ---------------------------------------------------------------------------
# seeds

@dataclass
class StepRecord:
    step: int
    vertex: tuple
    label: tuple
    old: Token
    new: Token
    kind: str
    ident: str
    reliable: bool
    incoming: list = field(default_factory=list)
    outgoing: list = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "step": self.step,
            "vertex": list(self.vertex),
            "label": list(self.label),
            "old": token_json(self.old),
            "new": token_json(self.new),
            "kind": self.kind,
            "instance": self.ident,
            "reliable": self.reliable,
            "incoming": [token_json(t) for t in self.incoming],
            "outgoing": [token_json(t) for t in self.outgoing],
        }


class Seed:
    def __init__(self, alg: AlgebraType, R: int, quiver: Quiver, tokens: dict, labels: dict,
                 tainted: set, dual: bool = False):
        self.alg = alg
        self.R = R
        self.quiver = quiver
        self.tokens = tokens
        self.labels = labels
        self.tainted = tainted
        self.dual = dual
        self.passes = 0
        self.history: list = []
        self.dropped: list = []
        self._opaque = 0

    @property
    def safe_depth(self) -> int:
        """Depth trusted by the pass-count rule (taint tracking is finer)."""
        return max(self.R - self.passes, 0)

    def vertex_at(self, c: int, k: int) -> tuple:
        v = (c, k)
        if v not in self.quiver:
            raise ClusterError(f"no vertex at column {c}, level {k}")
        return v

    def column(self, c: int) -> list:
        column_node(self.alg, c)
        return [(c, k) for k in range(1, column_depth(self.alg, c, self.R) + 1)]

    def is_reliable(self, v) -> bool:
        return v not in self.tainted

    def copy(self) -> "Seed":
        s = Seed(self.alg, self.R, self.quiver.copy(), dict(self.tokens), dict(self.labels),
                 set(self.tainted), self.dual)
        s.passes = self.passes
        s.history = list(self.history)
        s.dropped = list(self.dropped)
        s._opaque = self._opaque
        return s

    def _new_opaque(self) -> Opaque:
        self._opaque += 1
        return Opaque(self._opaque)

    def mutate(self, v, strict: bool = False) -> StepRecord:
        """Mutate in place at ``v`` and return the transcript entry.

        With ``strict`` a tainted vertex raises UnsafeVertex.  An exchange in
        the untainted region that matches no candidate raises ExchangeError.
        """
        if v not in self.quiver:
            raise ClusterError(f"unknown vertex {v}")
        star = [v, *self.quiver.neighbours(v)]
        reliable = not any(u in self.tainted for u in star)
        if strict and not reliable:
            raise UnsafeVertex(f"vertex {v} is outside the safe region")
        ins, outs = [], []
        for u, m in sorted(self.quiver.incoming(v).items()):
            ins += [self.tokens[u]] * m
        for u, m in sorted(self.quiver.outgoing(v).items()):
            outs += [self.tokens[u]] * m
        old = self.tokens[v]
        ex = resolve_exchange(old, ins, outs)
        if ex is None:
            if reliable:
                names = ", ".join(token_text(t) for t in ins)
                names2 = ", ".join(token_text(t) for t in outs)
                raise ExchangeError(f"no exchange matches {token_text(old)} at {v}: "
                                    f"in [{names}] out [{names2}]")
            ex = Exchange("opaque", self._new_opaque())
        self.quiver.mutate(v)
        if not reliable:
            self.tainted.update(u for u in star if self.near(u, v))
        self.tokens[v] = ex.new
        rec = StepRecord(len(self.history) + 1, v, self.labels[v], old, ex.new, ex.kind,
                         ex.ident, reliable, ins, outs)
        self.history.append(rec)
        return rec

    def near(self, u, v) -> bool:
        return abs(self.labels[u][1] - self.labels[v][1]) <= local_span(self.alg)

    def drop_front(self, c: int, followers: set) -> list:
        """Delete the arrows that rode the pass on column ``c`` down to the cut."""
        f = self.column(c)[-1]
        gone = []
        for u in self.quiver.neighbours(f):
            if u in followers and not self.near(u, f):
                m = self.quiver.b(u, f)
                gone.append((u, f, m) if m > 0 else (f, u, -m))
        for u, w, m in gone:
            self.quiver.add_arrow(u, w, -m)
        self.dropped.extend((self.passes, u, w, m) for u, w, m in gone)
        return gone

    def mutate_column(self, c: int, on_step=None) -> list:
        """Mutate every vertex of column ``c`` from the top, then cut the front.

        ``on_step(seed, record)`` is called after each mutation.
        """
        recs = []
        streak: dict = {}
        for v in self.column(c):
            nb = {u for u in self.quiver.neighbours(v) if u[0] != c}
            streak = {u: streak.get(u, 0) + 1 for u in nb}
            recs.append(self.mutate(v))
            if on_step is not None:
                on_step(self, recs[-1])
        self.passes += 1
        self.drop_front(c, {u for u, n in streak.items() if n >= FRONT_STREAK})
        return recs

    def find(self, pred) -> list:
        return sorted(v for v, t in self.tokens.items() if pred(t))

    def to_dot(self, name: str = "seed") -> str:
        lines = [f"digraph {name} {{", "  rankdir=TB;"]
        for v in self.quiver.vertices:
            c, k = v
            style = ", style=dashed" if v in self.tainted else ""
            lines.append(f'  "{c},{k}" [label="{token_text(self.tokens[v])}"{style}];')
        for u, w, m in self.quiver.arrows():
            attr = f' [label="{m}"]' if m > 1 else ""
            lines.append(f'  "{u[0]},{u[1]}" -> "{w[0]},{w[1]}"{attr};')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def state_json_obj(self) -> dict:
        return {
            "type": str(self.alg),
            "depth": self.R,
            "dual": self.dual,
            "vertices": [{"vertex": list(v), "label": list(self.labels[v]),
                          "token": token_json(self.tokens[v]), "reliable": v not in self.tainted}
                         for v in self.quiver.vertices],
            "arrows": [[list(u), list(w), m] for u, w, m in self.quiver.arrows()],
        }


def _build_seed(alg: AlgebraType, R: int, dual: bool) -> Seed:
    if R < 2:
        raise ClusterError("depth must be at least 2")
    cols = range(1, column_count(alg) + 1)
    verts = [(c, k) for c in cols for k in range(1, column_depth(alg, c, R) + 1)]
    labels = {v: vertex_label(alg, *v) for v in verts}
    if dual:
        labels = {v: (i, -r) for v, (i, r) in labels.items()}
    inner = {lab: v for v, lab in labels.items()}
    wide = _label_index(alg, R + 4)
    if dual:
        wide = {(i, -r): v for (i, r), v in wide.items()}
    q = Quiver(verts)
    tainted = set()
    for v in verts:
        lab = labels[v]
        for t in _gamma_targets(alg, lab):
            if t in inner:
                q.add_arrow(v, inner[t])
            elif t in wide:
                tainted.add(v)
        for src in _gamma_sources(alg, lab):
            if src not in inner and src in wide:
                tainted.add(v)
    tokens = {v: initial_token(alg, *v) for v in verts}
    if dual:
        tokens = {v: t.as_dual() for v, t in tokens.items()}
    return Seed(alg, R, q, tokens, labels, tainted, dual)


def initial_seed(alg: AlgebraType, R: int) -> Seed:
    return _build_seed(alg, R, False)


def dual_seed(alg: AlgebraType, R: int) -> Seed:
    """The W+ seed: labels ``(i, -r)``, tokens are the dual (iota) images."""
    return _build_seed(alg, R, True)


def mutate(seed: Seed, v) -> Seed:
    """Functional mutation restricted to the safe region."""
    out = seed.copy()
    out.mutate(v, strict=True)
    return out


# ---------------------------------------------------------------------------
# mutation sequences

def _prod_blocks(blocks) -> list:
    out = []
    for b in blocks:
        out.extend(b)
    return out


def _up(a: int, b: int) -> list:
    return list(range(a, b + 1))


def _down(a: int) -> list:
    return list(range(a, 0, -1))


def _a_prefix(r: int) -> list:
    if r <= 2:
        return []
    top = (r - 1) // 2 if r % 2 else (r - 2) // 2
    return _prod_blocks(_down(2 * k) for k in range(1, top + 1))


def _n1(n: int) -> list:
    if n == 2:
        return []
    if n % 2:
        return _prod_blocks(_up(2 * n - 2 * k - 1, 2 * n - 1) for k in range(0, (n - 3) // 2 + 1))
    return _prod_blocks(_up(2 * n - 2 * k - 2, 2 * n - 1) for k in range(0, (n - 4) // 2 + 1))


def _n2(n: int) -> list:
    if n in (2, 3):
        return []
    if n % 2:
        return _prod_blocks(_down(2 * k + 2) for k in range(0, (n - 5) // 2 + 1))
    return _prod_blocks(_down(2 * k + 1) for k in range(0, (n - 4) // 2 + 1))


def _n3(n: int, r: int) -> list:
    if r == 1 or (n % 2 == 0 and r == 2):
        return []
    if n % 2:
        top = (r - 3) // 2 if r % 2 else (r - 2) // 2
        return _prod_blocks(_up(2 * n - 2 * k - 1, 2 * n - 1) for k in range(0, top + 1))
    top = (r - 4) // 2 if r % 2 == 0 else (r - 3) // 2
    return _prod_blocks(_up(2 * n - 2 * k - 2, 2 * n - 1) for k in range(0, top + 1))


def column_sequence(alg: AlgebraType, k) -> list:
    """Column passes producing the minimal affinization with vector ``k``."""
    k = tuple(int(x) for x in k)
    n = alg.n
    if len(k) != n or any(x < 0 for x in k):
        raise ClusterError(f"bad target vector {k} for {alg}")
    nz = [q + 1 for q, x in enumerate(k) if x]
    if len(nz) < 2:
        raise ClusterError(f"target {k} is trivial or Kirillov-Reshetikhin")
    i, r = nz[0], nz[-1]
    seq: list = []
    if alg.family == "A":
        seq += _a_prefix(r)
        for t in range(r, i, -1):
            seq += _down(t - 1) * k[t - 1]
        return seq
    kn = k[n - 1]
    if kn and kn % 2 == 0:
        seq += _n1(n)
        for t in range(n, i, -1):
            times = kn // 2 if t == n else k[t - 1]
            seq += _up(2 * n - t + 1, 2 * n - 1) * times
    elif kn:
        seq += _n2(n)
        for t in range(n, i, -1):
            times = (kn + 1) // 2 if t == n else k[t - 1]
            seq += _down(t - 1) * times
    else:
        seq += _n3(n, r)
        for t in range(r, i, -1):
            seq += _up(2 * n - t + 1, 2 * n - 1) * k[t - 1]
    return seq


def mutation_sequence(alg: AlgebraType, k, R: int) -> list:
    """The vertex list of ``column_sequence`` with every column cut at the seed depth."""
    return [(c, lvl) for c in column_sequence(alg, k)
            for lvl in range(1, column_depth(alg, c, R) + 1)]


# ---------------------------------------------------------------------------
# driver

@dataclass
class RunReport:
    alg: AlgebraType
    target: tuple
    R: int
    dual: bool
    columns: list
    found: list  # [(vertex, token)] matching the target vector at level k_i
    steps: list
    identity_checks: dict
    seed: Seed = field(repr=False)

    @property
    def ok(self) -> bool:
        return bool(self.found) and all(self.identity_checks.values())

    @property
    def unmatched(self) -> list:
        return [s for s in self.steps if s.reliable and s.kind == "opaque"]

    def to_json_obj(self) -> dict:
        return {
            "type": str(self.alg),
            "target": list(self.target),
            "depth": self.R,
            "chirality": "dual" if self.dual else "plain",
            "columns": self.columns,
            "found": [{"vertex": list(v), "token": token_json(t)} for v, t in self.found],
            "steps": [s.to_json_obj() for s in self.steps],
            "identity_checks": {str(k): v for k, v in self.identity_checks.items()},
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)


def verify_step_identity(rec: StepRecord) -> bool:
    """Substitute q-characters into the exchange recorded in ``rec``."""
    if rec.kind == "opaque":
        return False
    return _exchange_identity_holds(rec.old, rec.new, rec.incoming, rec.outgoing)


def auto_depth(alg: AlgebraType, k) -> int:
    """A depth whose untainted region still reaches the target after the whole run."""
    cols = column_sequence(alg, k)
    return max(8, 4 + 2 * len(cols) + max(k))


def run_columns(alg: AlgebraType, cols, R: int, dual: bool = False, on_step=None) -> Seed:
    seed = dual_seed(alg, R) if dual else initial_seed(alg, R)
    for c in cols:
        seed.mutate_column(c, on_step)
    return seed


def run_and_verify(alg: AlgebraType, k, R: Optional[int] = None, verify_qchar: bool = False,
                   dual: bool = False, on_step=None) -> RunReport:
    k = tuple(int(x) for x in k)
    cols = column_sequence(alg, k)
    if R is None:
        R = auto_depth(alg, k)
    seed = run_columns(alg, cols, R, dual, on_step)
    i = next(q + 1 for q, x in enumerate(k) if x)
    level = k[i - 1]
    found = []
    if level <= R:
        for c in columns_of_node(alg, i):
            v = (c, level)
            t = seed.tokens[v]
            if isinstance(t, MinAffParams) and t.k == k and t.dual == dual and seed.is_reliable(v):
                found.append((v, t))
    checks = {}
    if verify_qchar:
        for rec in seed.history:
            if rec.reliable:
                checks[rec.step] = verify_step_identity(rec)
    return RunReport(alg, k, R, dual, cols, found, list(seed.history), checks, seed)


def reliable_tokens(seed: Seed) -> dict:
    return {v: t for v, t in seed.tokens.items() if v not in seed.tainted}


def highest_monomial(t: Token) -> Optional[GMonomial]:
    if isinstance(t, Opaque):
        return None
    return GMonomial.from_key(highest_weight_key(t))


__all__ = [
    "ClusterError",
    "ExchangeError",
    "UnsafeVertex",
    "Opaque",
    "Quiver",
    "Seed",
    "StepRecord",
    "RunReport",
    "Exchange",
    "column_count",
    "column_node",
    "columns_of_node",
    "initial_token",
    "vertex_label",
    "initial_seed",
    "dual_seed",
    "mutate",
    "exchange_candidates",
    "resolve_exchange",
    "column_sequence",
    "mutation_sequence",
    "run_and_verify",
    "run_columns",
    "auto_depth",
    "verify_step_identity",
    "reliable_tokens",
    "highest_monomial",
    "token_text",
]
