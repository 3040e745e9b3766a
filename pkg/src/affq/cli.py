"""``affq`` command line: q-characters, identity verification and mutation runs.

Exit codes: 0 success, 1 identity failure, 2 engine disagreement,
3 resource budget exceeded, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from functools import partial
from pathlib import Path

from .catalog import CatalogError, MinAffParams, highest_weight_key, msystem_instance
from .cluster import (
    ClusterError,
    ExchangeError,
    auto_depth,
    column_count,
    column_sequence,
    dual_seed,
    initial_seed,
    run_and_verify,
    run_columns,
    token_text,
    verify_step_identity,
)
from .fm import DEFAULT_BUDGET, BudgetExceeded, FMError, budget_from_env, fm_qchar_dict
from .lattice import AlgebraType, LatticeError, QPolynomial, poly_iota
from .paths import PathError, qchar_dict
from .verifier import (
    EngineDisagreement,
    example_instances,
    grid_instances,
    grid_shift,
    run_batch,
    verify_dual,
    verify_equation,
)

EXIT_OK, EXIT_IDENTITY, EXIT_ENGINE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4

DEFAULTS = {
    "type": None,
    "n": None,
    "s": None,
    "k": None,
    "dual": False,
    "engine": "path",
    "json": False,
    "budget": None,
    "cross_check": False,
    "jobs": 1,
    "out": None,
    "max_entry": 2,
    "target": None,
    "columns": None,
    "depth": None,
    "verify_qchar": False,
    "dot": None,
}


class BadInput(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# configuration

def load_config(path: str) -> dict:
    """Flat key/value settings from a JSON or TOML file."""
    p = Path(path)
    raw = p.read_bytes()
    if p.suffix.lower() == ".json":
        data = json.loads(raw)
    else:
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        data = tomllib.loads(raw.decode())
    if not isinstance(data, dict):
        raise BadInput("config file must hold a table of keys")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in DEFAULTS:
            raise BadInput(f"unknown config key {key!r}")
        if isinstance(value, dict):
            raise BadInput(f"config key {key!r} must be a flat value")
        out[name] = value
    return out


def merge(args: argparse.Namespace) -> dict:
    """Flags override the config file, which overrides the built-in defaults."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(load_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["budget"] is None or os.environ.get("AFFQ_BUDGET"):
        cfg["budget"] = budget_from_env(cfg["budget"] or DEFAULT_BUDGET)
    return cfg


def _algebra(cfg) -> AlgebraType:
    if cfg["type"] is None or cfg["n"] is None:
        raise BadInput("the algebra needs --type and --n")
    return AlgebraType.parse(f"{cfg['type']}{int(cfg['n'])}")


def _vector(value, alg: AlgebraType, what: str) -> tuple:
    if value is None:
        raise BadInput(f"missing --{what}")
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        text = str(value).strip()
        parts = [x for x in text.replace(" ", "").split(",") if x] if text else []
    try:
        vec = tuple(int(x) for x in parts)
    except ValueError:
        raise BadInput(f"--{what} must be comma separated integers") from None
    if alg is not None and len(vec) != alg.n:
        raise BadInput(f"--{what} needs {alg.n} entries")
    return vec


def _emit(text: str, cfg) -> None:
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# qchar

def _path_checked(params: MinAffParams, budget: int) -> dict:
    q = qchar_dict(params.plain())
    if len(q) > budget:
        raise BudgetExceeded(f"more than {budget} monomials")
    return q


def compute_qchar(params: MinAffParams, engine: str, budget: int) -> dict:
    if engine not in ("path", "fm", "both"):
        raise BadInput(f"unknown engine {engine!r}")
    alg = params.alg
    got = {}
    if engine in ("path", "both"):
        got["path"] = _path_checked(params, budget)
    if engine in ("fm", "both"):
        got["fm"] = fm_qchar_dict(alg, highest_weight_key(params.plain()), budget)
    if engine == "both" and got["path"] != got["fm"]:
        raise EngineDisagreement(f"path and fm engines disagree on {params}")
    q = got.get("path", got.get("fm"))
    return poly_iota(alg, q) if params.dual else q


def cmd_qchar(cfg) -> int:
    alg = _algebra(cfg)
    k = _vector(cfg["k"], alg, "k")
    params = MinAffParams(alg, int(cfg["s"] or 0), k, bool(cfg["dual"]))
    poly = QPolynomial.from_dict(compute_qchar(params, cfg["engine"], cfg["budget"]))
    if cfg["json"]:
        obj = {"params": params.to_json_obj(), "engine": cfg["engine"], "mass": poly.mass(),
               "qchar": poly.to_json_obj()}
        _emit(json.dumps(obj, sort_keys=True) + "\n", cfg)
    else:
        _emit(poly.to_text() + "\n", cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _verify_one(inst, engine: str, cross_check: bool, dual: bool, budget: int):
    if dual:
        return verify_dual(inst, engine, cross_check, budget=budget)
    return verify_equation(inst, engine, cross_check, budget=budget)


def _shift(cfg, alg) -> int:
    return grid_shift(alg) if cfg["s"] is None else int(cfg["s"])


def cmd_verify(cfg, mode: str) -> int:
    if mode == "examples":
        insts = example_instances()
    elif mode == "msystem":
        alg = _algebra(cfg)
        insts = [msystem_instance(alg, _shift(cfg, alg), _vector(cfg["k"], alg, "k"))]
    elif mode == "grid":
        alg = _algebra(cfg)
        insts = grid_instances(alg, int(cfg["max_entry"]), _shift(cfg, alg))
    else:
        raise BadInput(f"unknown verify mode {mode!r}")
    fn = partial(_verify_one, engine=cfg["engine"], cross_check=bool(cfg["cross_check"]),
                 dual=bool(cfg["dual"]), budget=cfg["budget"])
    reports = run_batch(insts, fn, int(cfg["jobs"]))
    ok = all(r.ok for r in reports)
    if cfg["json"]:
        obj = {"mode": mode, "chirality": "dual" if cfg["dual"] else "plain", "ok": ok,
               "reports": [r.to_json_obj() for r in reports]}
        _emit(json.dumps(obj, sort_keys=True, indent=1) + "\n", cfg)
    else:
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.ident}  {r.equation}" for r in reports]
        lines.append(f"{sum(r.ok for r in reports)}/{len(reports)} identities verified")
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if ok else EXIT_IDENTITY


# ---------------------------------------------------------------------------
# mutate

def _write_dot(directory: str, idx: int, seed) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / f"step_{idx:03d}.dot").write_text(seed.to_dot(f"step_{idx:03d}"))


def cmd_mutate(cfg) -> int:
    alg = _algebra(cfg)
    dual = bool(cfg["dual"])
    if cfg["columns"] is not None:
        cols = list(_vector(cfg["columns"], None, "columns"))
        bad = [c for c in cols if not 1 <= c <= column_count(alg)]
        if bad:
            raise BadInput(f"columns {bad} out of range for {alg}")
        target = None
    elif cfg["target"] is not None:
        target = _vector(cfg["target"], alg, "target")
        cols = column_sequence(alg, target)
    else:
        raise BadInput("mutate needs --target or --columns")
    depth = cfg["depth"]
    if depth is not None and int(depth) < 2:
        raise BadInput("--depth must be at least 2")
    hook = None
    if cfg["dot"]:
        def hook(seed, rec):
            _write_dot(cfg["dot"], rec.step, seed)
    if target is not None:
        depth = int(depth) if depth is not None else auto_depth(alg, target)
    else:
        depth = int(depth) if depth is not None else 8
    if cfg["dot"]:
        start = dual_seed(alg, depth) if dual else initial_seed(alg, depth)
        _write_dot(cfg["dot"], 0, start)
    if target is not None:
        rep = run_and_verify(alg, target, depth, bool(cfg["verify_qchar"]), dual, on_step=hook)
        seed, steps, found = rep.seed, rep.steps, rep.found
        checks = rep.identity_checks
    else:
        seed = run_columns(alg, cols, depth, dual, on_step=hook)
        steps, found = seed.history, []
        checks = {r.step: verify_step_identity(r) for r in steps
                  if r.reliable} if cfg["verify_qchar"] else {}
    ok = (target is None or bool(found)) and all(checks.values())
    if cfg["json"]:
        obj = {
            "type": str(alg),
            "chirality": "dual" if dual else "plain",
            "target": list(target) if target else None,
            "columns": cols,
            "depth": seed.R,
            "steps": [r.to_json_obj() for r in steps],
            "found": [{"vertex": list(v), "token": t.to_json_obj()} for v, t in found],
            "identity_checks": {str(k): v for k, v in sorted(checks.items())},
            "dropped_front": [[p, list(u), list(w), m] for p, u, w, m in seed.dropped],
            "final": seed.state_json_obj(),
            "ok": ok,
        }
        _emit(json.dumps(obj, sort_keys=True, indent=1) + "\n", cfg)
    else:
        lines = [f"{alg} depth {seed.R} columns {' '.join(f'C{c}' for c in cols) or '(none)'}"]
        for r in steps:
            flag = "" if r.reliable else "  [beyond safe region]"
            lines.append(f"{r.step:4d} {r.vertex}  {token_text(r.old)} -> {token_text(r.new)}"
                         f"  {r.kind} {r.ident}{flag}")
        if not steps:
            for v in seed.quiver.vertices:
                lines.append(f"     {v}  {token_text(seed.tokens[v])}")
        if target is not None:
            if found:
                for v, t in found:
                    lines.append(f"target {token_text(t)} found at column {v[0]}, level {v[1]}")
            else:
                lines.append(f"target {target} not found")
        if checks:
            lines.append(f"q-character identities: {sum(checks.values())}/{len(checks)} hold")
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if ok else EXIT_IDENTITY


# ---------------------------------------------------------------------------
# argument parsing

def _common(p: argparse.ArgumentParser, algebra: bool = True) -> None:
    if algebra:
        p.add_argument("-t", "--type", choices=["A", "B", "a", "b"])
        p.add_argument("-n", "--n", type=int)
    p.add_argument("--json", action="store_true", default=None)
    p.add_argument("--out")
    p.add_argument("--config", help="JSON or TOML file with flat keys")
    p.add_argument("--budget", type=int)
    p.add_argument("--dual", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="affq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("qchar", help="q-character of a minimal affinization")
    _common(q)
    q.add_argument("--s", type=int)
    q.add_argument("--k")
    q.add_argument("--engine", choices=["path", "fm", "both"])

    v = sub.add_parser("verify", help="verify M-system identities")
    v.add_argument("mode", choices=["examples", "msystem", "grid"])
    _common(v)
    v.add_argument("--s", type=int)
    v.add_argument("--k")
    v.add_argument("--max-entry", dest="max_entry", type=int)
    v.add_argument("--engine", choices=["path", "fm", "both"])
    v.add_argument("--cross-check", dest="cross_check", action="store_true", default=None)
    v.add_argument("--jobs", type=int)

    m = sub.add_parser("mutate", help="run a mutation sequence")
    _common(m)
    m.add_argument("--target", help="vector k of the minimal affinization to reach")
    m.add_argument("--columns", help="explicit comma separated column passes")
    m.add_argument("--depth", type=int)
    m.add_argument("--verify-qchar", dest="verify_qchar", action="store_true", default=None)
    m.add_argument("--dot", help="directory for per-step DOT files")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return int(e.code or 0)
    try:
        cfg = merge(args)
        if args.command == "qchar":
            return cmd_qchar(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.mode)
        return cmd_mutate(cfg)
    except EngineDisagreement as e:
        print(f"affq: {e}", file=sys.stderr)
        return EXIT_ENGINE
    except BudgetExceeded as e:
        print(f"affq: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ExchangeError as e:
        print(f"affq: {e}", file=sys.stderr)
        return EXIT_IDENTITY
    except (BadInput, CatalogError, LatticeError, PathError, ClusterError, FMError,
            ValueError, OSError) as e:
        print(f"affq: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
