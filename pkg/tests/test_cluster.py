import json

import pytest
from hypothesis import given, strategies as st

from affq.catalog import MinAffParams
from affq.cluster import (
    ClusterError, ExchangeError, Opaque, Quiver, UnsafeVertex, auto_depth, column_count,
    column_sequence, columns_of_node, dual_seed, initial_seed, mutate, reliable_tokens,
    highest_monomial, resolve_exchange, run_and_verify, run_columns, verify_step_identity,
)
from affq.catalog import msystem_instance
from affq.verifier import EXAMPLES, grid_vectors, instance_sides, parse_equation

from conftest import A3, A4, B2, B3
import golden

FIGS = golden.load_figures()
ERRATA = golden.load_errata()
FIXED = golden.apply_errata(FIGS, ERRATA)


# ---------------------------------------------------------------- quiver
@st.composite
def quivers(draw):
    n = draw(st.integers(2, 7))
    q = Quiver(range(n))
    for _ in range(draw(st.integers(0, 12))):
        u, v = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if u != v:
            q.add_arrow(u, v, draw(st.integers(1, 2)))
    return q


@given(quivers(), st.data())
def test_quiver_mutation_is_involution(q, data):
    k = data.draw(st.sampled_from(q.vertices))
    before = q.copy()
    q.mutate(k)
    q.check()
    q.mutate(k)
    assert q == before


@given(quivers(), st.lists(st.integers(0, 6), max_size=8))
def test_quiver_never_has_two_cycles(q, ks):
    for k in ks:
        if k in q:
            q.mutate(k)
    q.check()
    for u, v, m in q.arrows():
        assert m > 0 and q.b(v, u) == -m


def test_quiver_rejects_loops():
    with pytest.raises(ClusterError):
        Quiver([1]).add_arrow(1, 1)


# ---------------------------------------------------------------- seeds
@pytest.mark.parametrize("alg", [A3, B2, B3], ids=str)
def test_initial_seed_is_consistent(alg):
    seed = initial_seed(alg, 8)
    seed.quiver.check()
    assert seed.tainted and set(reliable_tokens(seed)) == set(seed.tokens) - seed.tainted
    for (c, k), t in seed.tokens.items():
        assert t.is_kr() and sum(t.k) == k


@pytest.mark.parametrize("alg,cols", [(A3, [1, 2]), (B2, [1, 3])], ids=str)
def test_seed_mutation_involution(alg, cols):
    # the openings of the reference runs; other vertices need not give module classes
    seed = initial_seed(alg, 8)
    for v in [(c, 1) for c in cols]:
        twice = mutate(mutate(seed, v), v)
        assert twice.tokens == seed.tokens
        assert twice.quiver == seed.quiver


def test_strict_mutation_refuses_tainted_vertex():
    seed = initial_seed(A3, 6)
    v = sorted(seed.tainted)[0]
    with pytest.raises(UnsafeVertex):
        mutate(seed, v)


def test_layout_type_b():
    assert column_count(B3) == 5
    assert columns_of_node(B3, 1) == [1, 5]
    assert columns_of_node(B3, 3) == [3]
    with pytest.raises(ClusterError):
        initial_seed(A3, 1)


def test_resolve_rejects_inconsistent_star():
    old = MinAffParams(A3, -1, (1, 0, 0))
    assert resolve_exchange(old, [MinAffParams(A3, 5, (0, 0, 2))], []) is None
    seed = initial_seed(A3, 6)
    seed.tokens[(1, 1)] = MinAffParams(A3, 9, (0, 0, 3))
    seed.tainted.clear()
    with pytest.raises(ExchangeError):
        seed.mutate((1, 1))


# ---------------------------------------------------------------- figures
def test_errata_follow_persistence_rule():
    for e in ERRATA["entries"]:
        panels = FIGS[e["figure"]]
        idx = [p["panel"] for p in panels].index(e["panel"])
        node = e["node"]
        assert not panels[idx]["nodes"][node]["boxed"]
        prev = panels[idx - 1]["nodes"][node]
        assert {"k": prev["k"], "s": prev["s"]} == e["corrected"] != e["printed"]


@pytest.mark.parametrize("key", list(golden.RUNS))
def test_golden_figure(key):
    result = golden.check_figure(key, FIXED)
    bad = [(p, errs) for p, errs in result if errs]
    assert not bad, bad


def test_uncorrected_figure_differs_only_at_errata():
    result = golden.check_figure("A3_C2C1C2C1C1", FIGS)
    bad = sorted(p for p, errs in result if errs)
    assert bad == sorted(e["panel"] for e in ERRATA["entries"])


@pytest.mark.parametrize("key", list(golden.RUNS))
def test_golden_exchanges_are_identities(key):
    alg, cols, _ = golden.RUNS[key]
    seed = run_columns(alg, cols, golden.GOLDEN_DEPTH)
    shown = [r for r in seed.history if r.vertex[1] <= 3]
    assert shown and all(r.reliable and r.kind != "opaque" for r in shown)
    assert all(verify_step_identity(r) for r in shown)


@pytest.mark.parametrize("key", list(golden.RUNS))
def test_all_reliable_exchanges_are_identities(key):
    alg, cols, _ = golden.RUNS[key]
    seed = run_columns(alg, cols, 8)
    recs = [r for r in seed.history if r.reliable]
    assert recs and all(verify_step_identity(r) for r in recs)


# ---------------------------------------------------------------- sequences
@pytest.mark.parametrize("alg,k", [(A3, (1, 1, 0)), (A3, (1, 1, 1)), (A3, (2, 1, 1)),
                                   (B2, (1, 1)), (B2, (1, 2)), (B2, (2, 3))], ids=str)
def test_sequence_reaches_target(alg, k):
    rep = run_and_verify(alg, k)
    assert rep.ok and rep.found
    assert not rep.unmatched


@pytest.mark.parametrize("alg", [A3, A4, B2, B3], ids=str)
def test_sequences_over_grid(alg):
    for k in grid_vectors(alg, 2):
        assert run_and_verify(alg, k).found, k


def _tok(alg, s, *k):
    return MinAffParams(alg, s, k)


def test_initial_tokens_a3():
    seed = initial_seed(A3, 3)
    expect = {(2, 1): _tok(A3, -1, 0, 1, 0), (1, 1): _tok(A3, -1, 1, 0, 0),
              (3, 1): _tok(A3, -3, 0, 0, 1), (2, 2): _tok(A3, -3, 0, 2, 0),
              (1, 2): _tok(A3, -3, 2, 0, 0), (3, 2): _tok(A3, -5, 0, 0, 2)}
    assert {v: seed.tokens[v] for v in expect} == expect
    assert str(highest_monomial(seed.tokens[(1, 2)])) == "1_-3 1_-1"


def test_initial_tokens_b2():
    seed = initial_seed(B2, 7)
    assert seed.tokens[(2, 1)] == _tok(B2, -1, 0, 1)
    assert seed.tokens[(2, 2)] == _tok(B2, -3, 0, 2)
    assert {seed.tokens[(1, 1)], seed.tokens[(3, 1)]} == {_tok(B2, -1, 1, 0), _tok(B2, -3, 1, 0)}


def test_first_mutation_is_first_example_equation():
    seed = initial_seed(A3, 8)
    rec = seed.mutate((1, 1))
    assert rec.new == _tok(A3, -3, 1, 1, 0) and rec.kind == "M-system"
    inst = msystem_instance(A3, -1, (1, 1, 0))
    assert instance_sides(inst) == parse_equation(EXAMPLES[0][3])
    assert verify_step_identity(rec)


@pytest.mark.parametrize("alg,k,cols,token", [
    (A3, (1, 1, 0), [1], (-3, (1, 1, 0))),
    (A3, (1, 1, 1), [2, 1, 2, 1, 1], (-7, (1, 1, 1))),
    (B2, (1, 2), [3], (-7, (1, 2))),
], ids=str)
def test_reference_targets(alg, k, cols, token):
    rep = run_and_verify(alg, k)
    assert rep.columns == cols
    assert [(t.s, t.k) for _, t in rep.found] == [token]


@pytest.mark.parametrize("alg,k", [(A3, (1, 1, 1)), (B2, (1, 2)), (B3, (1, 2, 2))], ids=str)
def test_truncation_stability(alg, k):
    cols = column_sequence(alg, k)
    R = auto_depth(alg, k)
    a = reliable_tokens(run_columns(alg, cols, R))
    b = reliable_tokens(run_columns(alg, cols, R + 4))
    common = set(a) & set(b)
    assert len(common) > 10
    assert {v: a[v] for v in common} == {v: b[v] for v in common}


def test_dual_seed_and_run():
    seed = dual_seed(A3, 8)
    assert all(t.dual for t in seed.tokens.values())
    plain = initial_seed(A3, 8)
    assert all(seed.labels[v] == (i, -r) for v, (i, r) in plain.labels.items())
    rep = run_and_verify(A3, (1, 1, 0), verify_qchar=True, dual=True)
    assert rep.ok and all(t.dual for _, t in rep.found)
    first = rep.steps[0]
    assert first.kind == "M-system" and verify_step_identity(first)


def test_report_json_is_deterministic():
    a = run_and_verify(B2, (1, 1)).to_json()
    b = run_and_verify(B2, (1, 1)).to_json()
    assert a == b and json.loads(a)["ok"]


def test_opaque_tokens_render():
    assert str(Opaque(3)).startswith("?")
