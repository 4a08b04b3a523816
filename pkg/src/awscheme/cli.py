"""Command-line entry point: evaluation and verification sweeps.

Exit codes: 0 every record passed, 1 some record failed, 2 invalid input,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import difference_ops as dops
from . import families as fam
from . import limits
from .errors import NumericalError, ParameterError
from .report import ReportWriteError, VerificationReport, emit
from .transforms import AWTransformer, BigTransformer, LittleTransformer, orthogonality_matrix

OUTPUT_ENV = "AWSCHEME_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

# CLI family name -> (operator family, parameter level, parameter class)
FAMILY = {
    "aw": ("AW", "aw", fam.AWParams),
    "aw-qbessel": ("AWBessel", "aw_bessel", fam.AWBesselParams),
    "big-jacobi": ("BigJacobi", "big", fam.BigParams),
    "big-qbessel": ("BigBessel", "bessel", fam.BesselParams),
    "little-jacobi": ("LittleJacobi", "little", fam.LittleParams),
    "little-qbessel": ("LittleBessel", "bessel", fam.BesselParams),
    "dual-big-qbessel": ("DualBigBessel", "bessel", fam.BesselParams),
    "dual-big-jacobi": ("DualBigJacobi", "big", fam.BigParams),
}

EVALUATORS = {
    "aw": fam.aw_function,
    "aw-qbessel": fam.aw_qbessel,
    "big-jacobi": fam.big_jacobi,
    "big-qbessel": fam.big_qbessel,
    "little-jacobi": fam.little_jacobi,
    "little-qbessel": fam.little_qbessel,
}

DEFAULTS = {
    "aw": dict(q=0.5, a=0.9, b=0.3, c=0.3, d=2.0, t=-1.0),
    "aw_bessel": dict(q=0.5, a=0.6, b=0.3),
    "big": dict(q=0.5, a=0.8, b=0.5, c=0.4, z=1.0),
    "little": dict(q=0.5, a=0.6, b=0.3, y=1.0),
    "bessel": dict(q=0.5, a=0.6),
}

THRESHOLDS = {
    "eigencheck": 1e-10,
    "orthocheck:little-qbessel": 1e-8,
    "orthocheck:big-qbessel": 1e-6,
    "orthocheck:aw-qbessel": 1e-6,
    "roundtrip:aw": 1e-4,
    "roundtrip:big": 1e-4,
    "roundtrip:little": 1e-6,
    "limitcheck": 1e-3,
    "dualcheck:aw_self_dual": 1e-11,
    "dualcheck:little_jacobi_aw_bessel": 1e-13,
    "dualcheck:little_bessel_self_dual": 0.0,
    "dualcheck:big_jacobi_cdqh": 1e-12,
    "dualcheck:big_bessel_q_laguerre": 1e-12,
}

PARAM_NAMES = ("q", "a", "b", "c", "d", "t", "z", "y")


class InputError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        v = complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return v.real if v.imag == 0 else v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="awscheme", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=True, families=tuple(FAMILY)):
        if family:
            p.add_argument("--family", required=True, choices=families)
        for name in PARAM_NAMES:
            p.add_argument(f"--{name}", type=float)
        p.add_argument("--params", type=Path, help="JSON file with level-tagged parameter blocks")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, help="override the pass threshold")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help=f"report path ('-' for stdout; default ${OUTPUT_ENV}/<command>.<format>)")
        p.add_argument("--timing", action="store_true", help="record wall-clock runtimes (reports then differ run to run)")

    p = sub.add_parser("eval", help="evaluate one family at one point")
    common(p, families=tuple(EVALUATORS))
    p.add_argument("--gamma", type=_complex, default=1.0)
    p.add_argument("--x", type=_complex, required=True)

    p = sub.add_parser("eigencheck", help="q-difference equation residuals")
    common(p)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--points", type=int, default=5)
    p.add_argument("--random-params", action="store_true", help="draw fresh admissible parameters per sample")

    p = sub.add_parser("orthocheck", help="Gram matrices of the q-Bessel families")
    common(p, families=("little-qbessel", "big-qbessel", "aw-qbessel"))
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--indices", default=None, help="inclusive range lo:hi")

    p = sub.add_parser("roundtrip", help="transform then inverse on grid indicators")
    common(p, family=False)
    p.add_argument("--level", required=True, choices=("aw", "big", "little"))

    p = sub.add_parser("limitcheck", help="limit transition scans")
    common(p, family=False)
    p.add_argument("--transition", default="all", choices=("all", *sorted(limits.TRANSITIONS)))

    p = sub.add_parser("dualcheck", help="duality relations")
    common(p, family=False)
    p.add_argument("--which", default="all", choices=("all", *limits.DUALITIES))
    p.add_argument("--samples", type=int, default=20)
    return ap


def _load_params(args, level: str) -> dict:
    vals = dict(DEFAULTS[level])
    if args.params is not None:
        try:
            blob = json.loads(args.params.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read parameter file {args.params}: {exc}") from None
        if not isinstance(blob, dict):
            raise InputError("parameter file must hold an object keyed by level (aw, big, little, ...)")
        unknown = set(blob) - set(DEFAULTS)
        if unknown:
            raise InputError(f"unknown level tags {sorted(unknown)}; expected {sorted(DEFAULTS)}")
        vals.update(blob.get(level, {}))
    for name in PARAM_NAMES:
        v = getattr(args, name, None)
        if v is not None:
            if name not in vals:
                raise InputError(f"parameter --{name} does not apply to level {level!r}")
            vals[name] = v
    return vals


def _make(cls, vals):
    keys = {f for f in cls.__dataclass_fields__}
    return cls(**{k: v for k, v in vals.items() if k in keys})


def _threshold(args, key):
    return args.tol if args.tol is not None else THRESHOLDS[key]


def _clock(args):
    t0 = time.perf_counter()
    return lambda: int(round((time.perf_counter() - t0) * 1000)) if args.timing else 0


def _fmt(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return format(v.real, ".17g")
    return format(v, ".17g").strip("()")


def cmd_eval(args, report):
    _, level, cls = FAMILY[args.family]
    p = _make(cls, _load_params(args, level))
    r = EVALUATORS[args.family](p, args.gamma, args.x)
    print(_fmt(r.value))
    return None


def cmd_eigencheck(args, report):
    opfam, level, cls = FAMILY[args.family]
    rng = np.random.default_rng(args.seed)
    fixed = None if args.random_params else _make(cls, _load_params(args, level))
    worst = 0.0
    clock = _clock(args)
    for _ in range(args.samples):
        p, label, pts = dops.draw_case(opfam, rng, fixed, args.points)
        res = dops.eigen_residual(dops.operator_for(opfam, p), dops.evaluator(opfam, p), label, pts)
        worst = max(worst, res)
    params = {"family": args.family, "samples": args.samples, "points": args.points, "seed": args.seed}
    if fixed is not None:
        params.update(fixed.as_dict())
    report.add(f"eigencheck:{args.family}", f"eigen:{opfam}", worst, _threshold(args, "eigencheck"),
               runtime_ms=clock(), **params)


def _range(text, default):
    if text is None:
        return default
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError:
        raise InputError(f"--indices must look like lo:hi, got {text!r}") from None
    return range(lo, hi + 1)


def cmd_orthocheck(args, report):
    _, level, cls = FAMILY[args.family]
    vals = _load_params(args, level)
    _make(cls, vals)
    name = {"little-qbessel": "LittleBessel", "big-qbessel": "BigBessel", "aw-qbessel": "AWBessel"}[args.family]
    params = {k: vals[k] for k in ("q", "a", "b") if k in vals}
    if name != "LittleBessel":
        params["gamma"] = args.gamma
    idx = _range(args.indices, range(0, 5) if name == "LittleBessel" else range(-2, 3))
    clock = _clock(args)
    g = orthogonality_matrix(name, params, idx)
    ms = clock()
    thr = _threshold(args, f"orthocheck:{args.family}")
    tag = f"orthogonality:{name}"
    meta = dict(params, indices=f"{idx.start}:{idx.stop - 1}")
    report.add(f"orthocheck:{args.family}:off_diagonal", tag, g.off_diagonal_ratio(), thr, runtime_ms=ms, **meta)
    report.add(f"orthocheck:{args.family}:diagonal", tag, g.diagonal_error(), thr, runtime_ms=ms, **meta)


def cmd_roundtrip(args, report):
    level = args.level
    vals = _load_params(args, level)
    cls = {"aw": fam.AWParams, "big": fam.BigParams, "little": fam.LittleParams}[level]
    _make(cls, vals)
    est = {"aw": AWTransformer, "big": BigTransformer, "little": LittleTransformer}[level]
    keys = est().get_params().keys()
    clock = _clock(args)
    T = est(**{k: v for k, v in vals.items() if k in keys}).fit()
    X = np.eye(len(T.grid_))
    err = float(np.max(np.abs(T.inverse_transform(T.transform(X)) - X)))
    report.add(f"roundtrip:{level}", f"transform_pair:{level}", err, _threshold(args, f"roundtrip:{level}"),
               runtime_ms=clock(), grid_size=len(T.grid_), **vals)


def cmd_limitcheck(args, report):
    ids = sorted(limits.TRANSITIONS) if args.transition == "all" else [args.transition]
    thr = _threshold(args, "limitcheck")
    for tid in ids:
        clock = _clock(args)
        scan = limits.limit_scan(tid)
        metric = scan.final_error if scan.converged(thr) else float("inf")
        report.add(f"limitcheck:{tid}", f"limit:{tid}", metric, thr, runtime_ms=clock(),
                   final_error=scan.final_error, order=scan.order,
                   monotone_from=-1 if scan.monotone_from is None else scan.monotone_from,
                   m_min=limits.M_RANGE[0], m_max=limits.M_RANGE[1])
    if args.transition == "all":
        clock = _clock(args)
        c = limits.commutativity_scan()
        report.add("limitcheck:commutativity", "limit:composite_paths", c["gap"][-1], thr, runtime_ms=clock(),
                   m_max=limits.M_RANGE[1])


def cmd_dualcheck(args, report):
    which = limits.DUALITIES if args.which == "all" else [args.which]
    for w in which:
        clock = _clock(args)
        err = limits.duality_check(w, samples=args.samples, seed=args.seed)
        report.add(f"dualcheck:{w}", f"duality:{w}", err, _threshold(args, f"dualcheck:{w}"),
                   runtime_ms=clock(), samples=args.samples, seed=args.seed)


COMMANDS = {
    "eval": cmd_eval,
    "eigencheck": cmd_eigencheck,
    "orthocheck": cmd_orthocheck,
    "roundtrip": cmd_roundtrip,
    "limitcheck": cmd_limitcheck,
    "dualcheck": cmd_dualcheck,
}


def _destination(args):
    if args.output is not None:
        return args.output
    root = os.environ.get(OUTPUT_ENV)
    if root:
        return str(Path(root) / f"{args.command}.{args.format}")
    return "-"


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = VerificationReport()
    try:
        COMMANDS[args.command](args, report)
    except (ParameterError, InputError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.command == "eval":
        return EXIT_OK
    try:
        emit(report, args.format, _destination(args))
    except ReportWriteError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    for r in report.records:
        if not r.passed:
            print(f"FAIL {r.check_id}: {r.metric!r} > {r.threshold!r}", file=sys.stderr)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
