"""Checks backing the interpretation choices recorded in data/resolutions.json."""

import json
from itertools import product
from pathlib import Path

import pytest

from affq.catalog import MinAffParams, highest_weight, msystem_instance
from affq.cluster import column_sequence, run_and_verify
from affq.fm import fm_qchar
from affq.lattice import AlgebraType
from affq.paths import _raw_paths, in_domain, qchar_minaff
from affq.verifier import grid_vectors, verify_equation

RES = json.loads((Path(__file__).parent / "data" / "resolutions.json").read_text())
B2, B3, B4 = (AlgebraType("B", n) for n in (2, 3, 4))


@pytest.mark.parametrize("case", RES["xcal_offset"]["extrapolated_checks"],
                         ids=lambda c: f"{c['type']}-{c['k']}")
def test_xcal_offset_extrapolation(case):
    alg = AlgebraType.parse(case["type"])
    inst = msystem_instance(alg, case["s"], case["k"])
    assert inst.i == alg.n - 1
    assert verify_equation(inst, classify=False, certify=False).equal


@pytest.mark.parametrize("alg,max_sum", [(B2, 4), (B3, 4), (B4, 2)], ids=str)
def test_gluing_reading_matches_fm(alg, max_sum):
    for k in product(range(max_sum + 1), repeat=alg.n):
        if 0 < sum(k) <= max_sum:
            p = MinAffParams(alg, -1, k)
            assert qchar_minaff(p) == fm_qchar(alg, highest_weight(p)), k


@pytest.mark.parametrize("alg", [B2, B3, B4], ids=str)
def test_gluing_gaps(alg):
    n = alg.n
    for i in range(1, n):
        for k in range(-4, 9):
            if not in_domain(alg, i, k):
                continue
            for p in _raw_paths(alg, i, k):
                (_, ya, ea), (_, yb, eb) = p[n], p[n + 1]
                assert (ya, ea) > (yb, eb)
                assert (ya - yb) % 2 == 0
                assert ya != yb or (ea, eb) == (1, -1)


@pytest.mark.parametrize("alg", [B3, B4], ids=str)
def test_even_kn_sequences(alg):
    n = alg.n
    for k in grid_vectors(alg, 2):
        if k[n - 1] and k[n - 1] % 2 == 0:
            cols = column_sequence(alg, k)
            assert max(cols) <= 2 * n - 1
            assert run_and_verify(alg, k).found, k
