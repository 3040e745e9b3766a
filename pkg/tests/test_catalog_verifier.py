import pytest

from affq.catalog import CatalogError, MinAffParams, classify_shape, msystem_instance
from affq.verifier import (
    DUAL_EXAMPLES, EXAMPLES, dual_instance, grid_instances, grid_shift, instance_sides,
    parse_equation, verify_dual, verify_equation, verify_m_system_restriction,
)

from conftest import A3, A4, B2, B3

EX_IDS = [f"{alg}-{k}" for alg, _, k, _ in EXAMPLES]


@pytest.mark.parametrize("alg,s,k,text", EXAMPLES, ids=EX_IDS)
def test_instance_matches_listed_equation(alg, s, k, text):
    inst = msystem_instance(alg, s, k)
    assert instance_sides(inst) == parse_equation(text)


@pytest.mark.parametrize("alg,s,k,text", EXAMPLES, ids=EX_IDS)
def test_listed_equation_holds(alg, s, k, text):
    rep = verify_equation(msystem_instance(alg, s, k), cross_check=True)
    assert rep.equal and rep.ok, rep.to_json()


@pytest.mark.parametrize("idx", range(len(EXAMPLES)), ids=EX_IDS)
def test_dual_example(idx):
    alg, s, k, _ = EXAMPLES[idx]
    inst = msystem_instance(alg, s, k)
    dual = dual_instance(inst)
    assert instance_sides(dual) == parse_equation(DUAL_EXAMPLES[idx])
    assert verify_dual(inst, cross_check=True).ok
    assert dual_instance(dual) is inst


@pytest.mark.parametrize("alg,s,k,text", EXAMPLES[:3] + EXAMPLES[8:10], ids=EX_IDS[:3] + EX_IDS[8:10])
def test_restricted_identity(alg, s, k, text):
    assert verify_m_system_restriction(msystem_instance(alg, s, k))


def test_shapes():
    assert classify_shape(A3, (1, 0, 2)) == (1, 3, "A-generic")
    assert classify_shape(B3, (1, 1, 0)) == (1, 2, "B-j<n")
    assert classify_shape(B2, (1, 2)) == (1, 2, "B-kn+2")
    assert classify_shape(B2, (3, 1)) == (1, 2, "B-kn=1")
    with pytest.raises(CatalogError):
        classify_shape(A3, (0, 2, 0))


def test_msystem_rejects_bad_vectors():
    with pytest.raises(CatalogError):
        msystem_instance(A3, 0, (1, 1))
    with pytest.raises(CatalogError):
        msystem_instance(A3, 0, (1, 1, 0), i=2)
    with pytest.raises(CatalogError):
        MinAffParams(A3, 0, (1, -1, 0))


def test_params_text_roundtrip():
    for p in [MinAffParams(A4, -3, (1, 0, 2, 0)), MinAffParams(B3, 5, (0, 1, 1), True)]:
        assert MinAffParams.parse(str(p)) == p


@pytest.mark.parametrize("alg", [A3, B2], ids=str)
def test_small_grid_identities(alg):
    insts = grid_instances(alg, max_entry=1)
    assert all(inst.s == grid_shift(alg) for inst in insts)
    for inst in insts:
        rep = verify_equation(inst)
        assert rep.ok, rep.to_json()


def test_shift_invariance_of_instances():
    a = msystem_instance(B2, -1, (2, 1))
    b = msystem_instance(B2, 3, (2, 1))
    assert [str(x) for x in b.params[:4]] == [str(p.shifted(4)) for p in a.params[:4]]
