"""nyman-lab: batch front end.  Every report is {"manifest": ..., "result": ...}."""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor


from . import __version__
from . import analytic as an
from . import function_field as ff
from . import hardy as hd
from . import kernels as kn
from . import nyman as ny
from .errors import DomainError, InputFormatError, NymanLabError, ReportIOError
from .reporting import (RunManifest, default_zeros_path, emit_report, file_digest, ingest_zeros)

EXIT_USAGE = 64
EULER_GAMMA = 0.57721566490153286
# options that only steer where/how the report goes, never what it contains
_CONTROL = ("command", "handler", "out", "replay", "replay_out", "config", "timing")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# ---------------------------------------------------------------------------
# argument types

def complex_arg(text):
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def int_list(text):
    try:
        out = [int(x) for x in str(text).replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def zero_list(text):
    text = str(text).strip()
    if text.lower() in ("empty", "none", ""):
        return []
    return [complex_arg(x) for x in text.split(",")]


def rectangle_arg(text):
    try:
        vals = [float(x) for x in str(text).replace(",", " ").split()]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("rectangle is sigma_min,sigma_max,t_min,t_max")
    return vals


def bool_arg(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _character(q, index):
    if q == 1:
        return "zeta"
    tab = an.character_table(q)
    if not 0 <= index < len(tab):
        raise DomainError(f"character index {index} out of range 0..{len(tab) - 1} for q = {q}")
    return tab[index]


def _zeros_path(args):
    return args.zeros_file if args.zeros_file else default_zeros_path()


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (result, rows, columns, error_bounds, input_files)

def cmd_zeta_eval(args):
    r = an.riemann_zeta(args.s)
    result = {"s": args.s, "value": r.value, "abs_error_bound": r.abs_error_bound,
              "terms_used": r.terms_used}
    return result, None, None, {"value": r.abs_error_bound}, []


def cmd_lfunc_eval(args):
    chi = _character(args.q, args.index)
    if chi == "zeta":
        r = an.riemann_zeta(args.s)
        principal = True
    else:
        r = an.dirichlet_L(chi, args.s)
        principal = chi.is_principal
    result = {"s": args.s, "q": args.q, "index": args.index, "principal": principal,
              "value": r.value, "abs_error_bound": r.abs_error_bound}
    return result, None, None, {"value": r.abs_error_bound}, []


def cmd_mellin_check(args):
    rows = []
    for s in args.s:
        if args.kernel == "rho":
            m = kn.mellin_rho(args.alpha, s)
            closed = kn.mellin_rho_closed(args.alpha, s)
        elif args.kernel == "A":
            m = kn.mellin_A(s)
            closed = kn.mellin_A_closed(s)
        else:
            m = kn.mellin_frac(s)
            # 1/(s-1) - zeta(s)/s, whose value at s = 1 is 1 - Euler's gamma
            closed = complex(1 - EULER_GAMMA) if s == 1 else (
                1 / (s - 1) - an.riemann_zeta(s).value / s)
        diff = abs(m.value - closed)
        rows.append({"s": s, "numeric": m.value, "closed_form": closed, "difference": diff,
                     "abs_error_bound": m.abs_error_bound, "pass": diff < args.tol})
    verdict = "pass" if all(r["pass"] for r in rows) else "fail"
    result = {"kernel": args.kernel, "alpha": args.alpha if args.kernel == "rho" else None,
              "tolerance": args.tol, "verdict": verdict, "rows": rows}
    bounds = {"max_abs_error_bound": max(r["abs_error_bound"] for r in rows)}
    cols = ["s", "numeric", "closed_form", "difference", "abs_error_bound", "pass"]
    return result, rows, cols, bounds, []


def cmd_nb_distance(args):
    rows = ny.distance_curve(args.N, grid_rule=args.grid, eps=args.eps, threads=args.threads)
    result = {"grid": args.grid, "eps": args.eps, "rows": rows}
    bounds = {"entry_error_bound": max(r["entry_error_bound"] for r in rows)}
    cols = ["N", "d_squared", "d_squared_ridge", "condition_estimate", "entry_error_bound"]
    return result, rows, cols, bounds, []


def cmd_bsy(args):
    path = _zeros_path(args)
    g = ingest_zeros(path)
    r = hd.bsy_integral(args.T, g, scheme=args.scheme, mirror=args.mirror)
    verdict = "pass" if abs(r.value) <= r.tail_bound else "fail"
    result = {"T": args.T, "value": r.value, "tail_bound": r.tail_bound,
              "quad_error": r.quad_error, "scheme": r.scheme, "mirror": args.mirror,
              "ordinates_used": r.ordinates_used, "c1": r.c1, "c2": r.c2,
              "heuristic_tail": r.heuristic_tail, "verdict": verdict}
    return result, None, None, {"value": r.quad_error, "tail": r.tail_bound}, [path]


def cmd_zero_scan(args):
    L = _character(args.q, args.index)
    region = hd.Rectangle(*args.rect)
    rects = hd.rectangle_grid(region, args.nx, args.ny)

    def run(r):
        return hd.zero_count_rectangle(L, r)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            counts = list(pool.map(run, rects))
    else:
        counts = [run(r) for r in rects]
    rows = []
    for r, zc in zip(rects, counts):
        row = r.as_dict()
        row.update(count=zc.count, winding=zc.winding, pole_adjusted=zc.pole_adjusted,
                   evaluations=zc.evaluations)
        rows.append(row)
    inputs = []
    result = {"q": args.q, "index": args.index, "region": region.as_dict(),
              "count": sum(zc.count for zc in counts), "rectangles": rows}
    if L == "zeta" and region.sigma_min < 0.5 < region.sigma_max:
        path = _zeros_path(args)
        g = ingest_zeros(path)
        inputs.append(path)
        expected = sum(1 for x in g if region.t_min < x < region.t_max)
        result["table_count"] = expected
        result["verdict"] = "pass" if expected == result["count"] else "fail"
    cols = ["sigma_min", "sigma_max", "t_min", "t_max", "count", "winding", "pole_adjusted",
            "evaluations"]
    bounds = {"winding_max_deviation": max(abs(zc.winding - round(zc.winding)) for zc in counts)}
    return result, rows, cols, bounds, inputs


def cmd_blaschke(args):
    Z = hd.BadZeroSet(tuple(args.zeros), args.mode, args.q)
    rows = []
    for s in args.s:
        b = hd.blaschke_eval(Z, s)
        rows.append({"s": s, "value": b, "modulus": abs(b)})
    result = {"zeros": list(Z.zeros), "mode": args.mode, "q": args.q, "rows": rows}
    return result, rows, ["s", "value", "modulus"], {}, []


def _causality_dict(rep):
    return {"verdict": rep.verdict, "witness": rep.witness, "witness_modulus": rep.witness_modulus,
            "bad_zero_count": rep.bad_zero_count,
            "scanned_region": rep.scanned_region.as_dict() if rep.scanned_region else None,
            "rectangles": rep.rectangles, "notes": rep.notes, "assumptions": list(hd.ASSUMPTIONS)}


def cmd_scatter_check(args):
    if args.zeros is not None:
        if args.mode == "disc" and args.q is None:
            raise DomainError("disc mode needs --q")
        Z = hd.BadZeroSet(tuple(args.zeros), args.mode, args.q)
        rep = hd.causality_verdict(Z, args.mode, chi_trivial=not args.nontrivial, q=args.q)
    elif args.scan is not None:
        L = _character(args.q or 1, args.index)
        rep = hd.causality_scan(L, hd.Rectangle(*args.scan), args.nx, args.ny, args.threads)
    else:
        raise DomainError("scatter-check needs --zeros or --scan")
    result = _causality_dict(rep)
    return result, result["rectangles"] or None, \
        ["sigma_min", "sigma_max", "t_min", "t_max", "count"], {}, []


def _ff_row(P):
    rh = ff.ff_rh_check(P)
    c = ff.ff_causality(P)
    return {"q": P.q, "label": P.label, "coefficients": list(P.coeffs), "verdict": rh.verdict,
            "max_deviation": rh.max_deviation, "roots_z": list(rh.roots.z),
            "bad_zero_count": len(rh.bad_zeros), "causality": c.verdict,
            "witness": c.witness, "witness_modulus": c.witness_modulus}


def cmd_ff_check(args):
    inputs = []
    if args.corpus is not None:
        path = None if args.corpus == "builtin" else args.corpus
        if path:
            inputs.append(path)
        rows = [_ff_row(P) for P in ff.load_curve_corpus(path)]
        expected = {"curve": ("on_circle", "causal")}
        ok = all((r["verdict"], r["causality"]) == expected.get(r["label"], ("violated", "violated"))
                 for r in rows)
        result = {"corpus": args.corpus, "verdict": "pass" if ok else "fail", "rows": rows}
    else:
        if args.coeffs is not None:
            coeffs = args.coeffs
        elif args.a is not None:
            coeffs = [1, -args.a, args.q]
        else:
            raise DomainError("ff-check needs --coeffs, --a or --corpus")
        if args.q is None:
            raise DomainError("ff-check needs --q")
        P = ff.LPolynomial(args.q, tuple(coeffs), args.label)
        result = _ff_row(P)
        rows = [result]
    bounds = {"max_deviation": max(r["max_deviation"] for r in rows)}
    cols = ["q", "label", "coefficients", "verdict", "max_deviation", "causality",
            "witness_modulus"]
    return result, rows, cols, bounds, inputs


def cmd_selftest(args):
    from .selftest import run_selftest
    rows = run_selftest()
    verdict = "pass" if all(r["passed"] for r in rows) else "fail"
    result = {"verdict": verdict, "failures": sum(not r["passed"] for r in rows), "rows": rows}
    return result, rows, ["suite", "check", "passed", "error"], {}, []


# ---------------------------------------------------------------------------
# parser

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--config", default=None, help="key=value file; flags win")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--timing", action="store_true",
                        help="record wall time in the manifest (breaks byte identity)")

    p = _Parser(prog="nyman-lab", description=__doc__)
    p.add_argument("--version", action="version", version=f"nyman-lab {__version__}")
    p.add_argument("--replay", default=None, metavar="REPORT",
                   help="re-run the manifest embedded in a saved report")
    p.add_argument("--replay-out", default=None, metavar="FILE",
                   help="destination of the replayed report (default stdout)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, handler, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("zeta-eval", cmd_zeta_eval, "zeta(s)")
    sp.add_argument("--s", type=complex_arg, required=True)

    sp = add("lfunc-eval", cmd_lfunc_eval, "Dirichlet L(s, chi)")
    sp.add_argument("--s", type=complex_arg, required=True)
    sp.add_argument("--q", type=int, required=True, help="modulus")
    sp.add_argument("--index", type=int, default=0, help="position in the character table")

    sp = add("mellin-check", cmd_mellin_check, "numeric Mellin transforms vs closed forms")
    sp.add_argument("--kernel", choices=("rho", "A", "frac"), default="rho")
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--s", type=complex_arg, nargs="+", default=[complex(2)])
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("nb-distance", cmd_nb_distance, "Nyman-Beurling distance curve")
    sp.add_argument("--N", type=int_list, default=[1, 2, 5, 10], help="e.g. 10,20,40")
    sp.add_argument("--grid", choices=("reciprocal", "uniform"), default="reciprocal")
    sp.add_argument("--eps", type=float, default=ny.DEFAULT_EPS)

    sp = add("bsy", cmd_bsy, "weighted log|zeta| integral with its tail bound")
    sp.add_argument("--T", type=float, default=200.0)
    sp.add_argument("--zeros-file", default=None, help="default: packaged table")
    sp.add_argument("--scheme", choices=("subtract", "graded"), default="subtract")
    sp.add_argument("--mirror", type=bool_arg, nargs="?", const=True, default=False)

    sp = add("zero-scan", cmd_zero_scan, "argument-principle zero counts on a rectangle grid")
    sp.add_argument("--rect", type=rectangle_arg, required=True,
                    help="sigma_min,sigma_max,t_min,t_max")
    sp.add_argument("--q", type=int, default=1, help="1 for zeta")
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--nx", type=int, default=1)
    sp.add_argument("--ny", type=int, default=1)
    sp.add_argument("--zeros-file", default=None)

    sp = add("blaschke", cmd_blaschke, "evaluate a Blaschke product")
    sp.add_argument("--zeros", type=zero_list, required=True, help="'empty' or z1,z2,...")
    sp.add_argument("--mode", choices=("halfplane", "disc"), default="halfplane")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--s", type=complex_arg, nargs="+", required=True)

    sp = add("scatter-check", cmd_scatter_check, "causality verdict of the scattering multiplier")
    sp.add_argument("--zeros", type=zero_list, default=None, help="'empty' or z1,z2,...")
    sp.add_argument("--mode", choices=("halfplane", "disc"), default="halfplane")
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--nontrivial", type=bool_arg, nargs="?", const=True, default=False,
                    help="non-trivial character: V = 1")
    sp.add_argument("--scan", type=rectangle_arg, default=None,
                    help="scan sigma_min,sigma_max,t_min,t_max for zeros instead")
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--nx", type=int, default=1)
    sp.add_argument("--ny", type=int, default=1)

    sp = add("ff-check", cmd_ff_check, "function-field RH and causality checks")
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--coeffs", type=int_list, default=None, help="P(T) coefficients, ascending")
    sp.add_argument("--a", type=int, default=None, help="genus-1 shortcut: 1 - aT + qT^2")
    sp.add_argument("--label", default="curve")
    sp.add_argument("--corpus", nargs="?", const="builtin", default=None,
                    help="check every row of a curve corpus CSV (default: packaged)")

    add("selftest", cmd_selftest, "reduced invariant suites of every module")
    return p


# ---------------------------------------------------------------------------
# config and replay

def read_config(path):
    """``key = value`` lines; '#' comments and [section] headers are ignored."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ReportIOError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise InputFormatError("expected key = value", line=lineno)
        k, v = (x.strip() for x in line.split("=", 1))
        if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
            v = v[1:-1]
        out[k.replace("-", "_")] = v
    return out


def _subparser(parser, name):
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise UsageError(f"unknown command {name!r}")


def _convert(action, value):
    """Config values arrive as strings; run them through the flag's own converter."""
    if action.nargs in ("+", "*"):
        conv = [action.type(x) if action.type else x for x in value.split()]
    else:
        conv = action.type(value) if action.type else value
    if action.choices is not None:
        vals = conv if isinstance(conv, list) and action.nargs in ("+", "*") else [conv]
        if any(v not in action.choices for v in vals):
            raise argparse.ArgumentTypeError(f"{value!r} not in {list(action.choices)}")
    return conv


def _peek_config(argv, commands):
    """(command, config path) found by scanning argv before a full parse."""
    command = next((t for t in argv if t in commands), None)
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    return command, path


def parse(argv):
    parser = build_parser()
    commands = parser._subparsers._group_actions[0].choices
    command, cfg_path = _peek_config(argv, commands)
    if command and cfg_path:
        # flags win: config values only replace defaults (and satisfy required flags)
        cfg = read_config(cfg_path)
        sp = _subparser(parser, command)
        actions = {a.dest: a for a in sp._actions if a.dest not in ("help",) + _CONTROL}
        defaults = {}
        for k, v in cfg.items():
            if k not in actions:
                raise InputFormatError(f"unknown config key {k!r} for {command}")
            try:
                defaults[k] = _convert(actions[k], v)
            except argparse.ArgumentTypeError as exc:
                raise InputFormatError(f"config key {k}: {exc}") from None
        for a in sp._actions:
            if a.dest in defaults:
                a.required = False
        sp.set_defaults(**defaults)
    args = parser.parse_args(argv)
    if args.replay:
        if args.command:
            parser.error("--replay takes no subcommand")
        return args
    if not args.command:
        parser.error("a subcommand is required")
    return args


def _recorded_argv(argv):
    """argv minus the options that do not influence the payload (--out, --timing)."""
    out = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out=") or tok == "--timing":
            continue
        out.append(tok)
    return out


def load_replay(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ReportIOError(f"cannot read replay file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"replay file is not JSON: {exc.msg}", line=exc.lineno) from None
    manifest = doc.get("manifest", doc) if isinstance(doc, dict) else None
    if not isinstance(manifest, dict) or not isinstance(manifest.get("argv"), list):
        raise InputFormatError("replay file has no manifest with an argv list")
    for p, digest in manifest.get("input_digests", {}).items():
        if file_digest(p) != digest:
            raise ReportIOError(f"input {p} changed since the manifest was written")
    if manifest.get("tool_version") != __version__:
        warnings.warn(f"manifest written by version {manifest.get('tool_version')}, "
                      f"running {__version__}", stacklevel=2)
    return [str(x) for x in manifest["argv"]]


# ---------------------------------------------------------------------------

def _parameters(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _CONTROL}


def run(argv):
    args = parse(argv)
    if args.replay:
        replay_argv = load_replay(args.replay)
        if replay_argv and replay_argv[0].startswith("-"):
            raise InputFormatError("manifest argv must start with a subcommand")
        extra = ["--out", args.replay_out] if args.replay_out else []
        return run(replay_argv + extra)
    t0 = time.perf_counter()
    result, rows, cols, bounds, inputs = args.handler(args)
    if args.config:
        inputs = [args.config] + inputs
    manifest = RunManifest(
        command=args.command,
        parameters=_parameters(args),
        argv=_recorded_argv(argv),
        input_digests={p: file_digest(p) for p in inputs},
        tool_version=__version__,
        wall_time=(time.perf_counter() - t0) if args.timing else None,
        error_bounds=bounds,
    )
    report = {"manifest": manifest.as_dict(), "result": result}
    emit_report(report, args.format, args.out, rows=rows, columns=cols)
    if args.command == "selftest" and result["verdict"] != "pass":
        return 1
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return run(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_USAGE
    except NymanLabError as exc:
        sys.stderr.write(f"nyman-lab: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help / --version
        return exc.code if isinstance(exc.code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
