"""Command-line interface.

Every report goes through one pipeline: the subcommand builds a payload
dict, ``_plain`` rounds each float to 12 significant digits, and the result
is either dumped as JSON or rendered as ``key: value`` lines.  Both views
therefore show the same numbers.  Human output drops the radian fields and
the optimizer's step history; JSON keeps them.

Exit codes: 0 success, 1 operational error, 2 usage error.
"""

import argparse
import contextlib
import json
import math
import sys

from . import _backend, catalog
from .acceptance import run_all
from .equivalence import DEFAULT_NODE_BUDGET, DEFAULT_TOL, equivalent
from .errors import FrameError
from .frame import analyze, tightness_diagnostics
from .frameio import read_frame, write_frame_file
from .optimizer import BELOW_ALERT, OptimizerConfig, minimize
from .transforms import complement, union

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

SIGNIFICANT = 12
HUMAN_SKIP = {"history"}


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, f".{SIGNIFICANT}g"))


def _plain(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return _num(value)
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return _plain(value.item())
    raise TypeError(f"cannot render {type(value).__name__}")


def _scalar(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{SIGNIFICANT}g")
    return str(v)


def _human(payload, out, indent=""):
    for key, v in payload.items():
        if key in HUMAN_SKIP or key.endswith("_rad"):
            continue
        if isinstance(v, dict):
            print(f"{indent}{key}:", file=out)
            _human(v, out, indent + "  ")
        elif isinstance(v, list):
            print(f"{indent}{key}: " + " ".join(_scalar(x) for x in v), file=out)
        else:
            print(f"{indent}{key}: {_scalar(v)}", file=out)


def emit(payload, as_json, out):
    plain = _plain(payload)
    if as_json:
        json.dump(plain, out, indent=2)
        out.write("\n")
    else:
        _human(plain, out)


def _write_frame(F, path, generator, out):
    text = write_frame_file(F, generator)
    if path is None:
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- subcommands ---------------------------------------------------------------


def _cmd_catalog_list(args, out, err):
    rows = []
    for e in catalog.list_entries():
        rows.append({
            "name": e.name,
            "N": e.N,
            "d": e.d,
            "expected_max_correlation": e.expected_max_correlation,
            "equiangular": e.equiangular,
            "parseval": e.is_parseval,
        })
    if args.json:
        emit({"entries": rows, "families": catalog.families()}, True, out)
        return EXIT_OK
    for r in _plain(rows):
        print(
            f"{r['name']:<26} N={r['N']:<3} d={r['d']:<2} "
            f"M={_scalar(r['expected_max_correlation']):<16} "
            f"equiangular={_scalar(r['equiangular'])} parseval={_scalar(r['parseval'])}",
            file=out,
        )
    fams = ", ".join(f"{f}:<n >= {m}>" for f, m in catalog.families().items())
    print(f"families: {fams}", file=out)
    return EXIT_OK


def _cmd_catalog_emit(args, out, err):
    F = catalog.build(args.name)
    _write_frame(F, args.output, f"catalog:{args.name}", out)
    return EXIT_OK


def analysis_payload(F):
    rep = analyze(F)
    diag = tightness_diagnostics(F)
    return {
        "N": rep.N,
        "d": rep.d,
        "parseval_defect": rep.parseval_defect,
        "uniformity_defect": rep.uniformity_defect,
        "tight_constant_A": rep.tight_constant_A,
        "max_correlation": rep.max_correlation,
        "min_angle_deg": rep.min_angle_deg,
        "min_angle_rad": rep.min_angle_rad,
        "welch_bound": rep.welch,
        "equiangular": rep.equiangular,
        "redundancy": rep.redundancy,
        "tightness": {
            "column_norms_sq": list(diag.column_norms_sq),
            "max_column_inner": diag.max_column_inner,
            "is_tight": diag.is_tight,
        },
    }


def _cmd_analyze(args, out, err):
    emit(analysis_payload(read_frame(args.file)), args.json, out)
    return EXIT_OK


def _cmd_complement(args, out, err):
    F = read_frame(args.file)
    _write_frame(complement(F), args.output, f"complement of {args.file}", out)
    return EXIT_OK


def _cmd_union(args, out, err):
    F, G = read_frame(args.file1), read_frame(args.file2)
    _write_frame(union(F, G), args.output, f"union of {args.file1} and {args.file2}", out)
    return EXIT_OK


def _cmd_equiv(args, out, err):
    v = equivalent(read_frame(args.file1), read_frame(args.file2), tol=args.tol, node_budget=args.budget)
    payload = {
        "status": v.status,
        "distinguishing_invariant": v.distinguishing_invariant,
        "nodes_explored": v.nodes_explored,
        "witness": None,
    }
    if v.witness is not None:
        payload["witness"] = {"perm": list(v.witness.perm), "signs": list(v.witness.signs)}
    emit(payload, args.json, out)
    return EXIT_OK


def _cmd_optimize(args, out, err):
    cfg = OptimizerConfig(args.N, args.d, seed=args.seed, restarts=args.restarts)
    res = minimize(cfg)
    angle = math.acos(min(1.0, res.achieved))
    payload = {
        "N": cfg.N,
        "d": cfg.d,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "config_digest": cfg.digest(),
        "achieved": res.achieved,
        "min_angle_deg": math.degrees(angle),
        "min_angle_rad": angle,
        "reference": res.reference,
        "welch_bound": res.welch,
        "certified": res.certified,
        "best_restart": res.best_restart,
        "per_restart_best": list(res.per_restart_best),
        "history": [[p, obj] for p, obj in res.history],
    }
    emit(payload, args.json, out)
    if args.output is not None:
        _write_frame(res.best_frame, args.output, f"optimizer:{cfg.digest()} {cfg.N} {cfg.d} seed={cfg.seed}", out)
    if res.certified == BELOW_ALERT:
        print("warning: achieved coherence is below a certified lower bound", file=err)
    return EXIT_OK


def _cmd_rattle(args, out, err):
    r = catalog.rattle_feasibility_check()
    emit({
        "system_residual": r.system_residual,
        "infeasible": r.infeasible,
        "target": r.target,
        "unconstrained_bound": r.unconstrained_bound,
        "resolution": r.resolution,
        "contradiction": r.contradiction,
    }, args.json, out)
    return EXIT_OK


def _cmd_verify(args, out, err):
    results = run_all(out)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed", file=out)
    return EXIT_OK if passed == len(results) else EXIT_ERROR


# -- parser --------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="corrframes", description=__doc__.split("\n")[0])
    p.add_argument(
        "--backend",
        choices=_backend.available_backends(),
        help="kernel backend (default: %s)" % _backend.backend_name(),
    )
    sub = p.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="list or emit catalog frames")
    csub = cat.add_subparsers(dest="catalog_command", required=True)
    c = csub.add_parser("list", help="list catalog entries")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_catalog_list)
    c = csub.add_parser("emit", help="write a catalog frame as a frame file")
    c.add_argument("name")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_catalog_emit)

    c = sub.add_parser("analyze", help="report metrics of a frame file")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_analyze)

    c = sub.add_parser("complement", help="Naimark complement of a uniform Parseval frame")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_complement)

    c = sub.add_parser("union", help="rescaled union of two frames of the same dimension")
    c.add_argument("file1")
    c.add_argument("file2")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_union)

    c = sub.add_parser("equiv", help="decide signed-permutation equivalence of two frames")
    c.add_argument("file1")
    c.add_argument("file2")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_equiv)

    c = sub.add_parser("optimize", help="search for a minimal-coherence uniform Parseval frame")
    c.add_argument("N", type=int)
    c.add_argument("d", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--restarts", type=int, default=32)
    c.add_argument("--json", action="store_true")
    c.add_argument("-o", "--output", help="also write the best frame to this file")
    c.set_defaults(func=_cmd_optimize)

    c = sub.add_parser("rattle", help="feasibility check for tightening the 10-line frame")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_rattle)

    c = sub.add_parser("verify", help="run the acceptance suite")
    c.set_defaults(func=_cmd_verify)
    return p


def execute(argv, stdout=None, stderr=None):
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse: --help (0) or usage error (2)
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    previous = _backend.backend_name()
    if args.backend:
        _backend.set_backend(args.backend)
    try:
        return args.func(args, out, err)
    except (FrameError, ValueError, RuntimeError, KeyError, OSError) as exc:
        print(f"corrframes: error: {exc}", file=err)
        return EXIT_ERROR
    finally:
        _backend.set_backend(previous)


def main():
    sys.exit(execute(sys.argv[1:]))
