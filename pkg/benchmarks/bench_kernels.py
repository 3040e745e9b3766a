"""Compiled vs pure-Python kernels on workloads taken from the engines.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import sys
import timeit

from affq import _pykernels
from affq.catalog import MinAffParams, msystem_instance
from affq.lattice import AlgebraType
from affq.paths import _column, _compat, columns_at_zero, qchar_dict
from affq.verifier import _factors

A3, A4, B3 = AlgebraType("A", 3), AlgebraType("A", 4), AlgebraType("B", 3)


def _tuple_inputs(alg, k):
    cols = columns_at_zero(alg, k)
    col_keys = [_column(alg, i, kk)[0] for i, kk in cols]
    compat = [[_compat(alg, cols[u], cols[t]) for u in range(t)] for t in range(len(cols))]
    return col_keys, compat, alg.family == "A"


def workloads():
    p = qchar_dict(MinAffParams(A3, 0, (1, 2, 1)))
    q = qchar_dict(MinAffParams(A3, 4, (2, 1, 0)))
    keys = list(p)
    big = _factors(msystem_instance(A4, 0, (1, 2, 2, 2)), "path")
    return {
        "mono_mul 175x175 pairs": lambda m: [m.mono_mul(a, b) for a in keys for b in keys],
        "poly_mul A3 (1,2,1)x(2,1,0)": lambda m: m.poly_mul(p, q),
        "dominant scan A4 (1,2,2,2)": lambda m: m.dominant_product_terms(big[0], big[1]),
        "tuple_sum A4 (2,2,2,2)": (lambda args: lambda m: m.tuple_sum(*args))(
            _tuple_inputs(A4, (2, 2, 2, 2))),
        "tuple_sum B3 (2,2,2)": (lambda args: lambda m: m.tuple_sum(*args))(
            _tuple_inputs(B3, (2, 2, 2))),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    try:
        from affq import _ckernels
    except ImportError:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    for name, fn in workloads().items():
        if fn(_ckernels) != fn(_pykernels):
            print(f"backends disagree on {name}", file=sys.stderr)
            return 1
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        rows.append({"workload": name, "python_s": t_py, "cython_s": t_c, "speedup": t_py / t_c})
    if args.json:
        print(json.dumps(rows, indent=1))
    else:
        print(f"{'workload':32s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
        for r in rows:
            print(f"{r['workload']:32s} {r['python_s']:10.4f} {r['cython_s']:10.4f} {r['speedup']:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
