"""Command line entry point.

JSON goes to stdout and human-readable summaries to stderr.  Exit codes:
0 success, 1 a check or certificate failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import acceptance, kernels, search
from .multipoly import gamma, lambda_, poly_from_json, poly_to_json
from .ncalc import TupleConstraint, matrix_to_dict, op_norm, symm_apply, tuple_from_list
from .polynorm import parse_domain, sup_norm

EXPERIMENTS = {
    "gamma": search.gamma_bound_trial,
    "theorem": search.theorem_bound_trial,
    "drury": search.drury_trial,
    "spectral": search.spectral_radius_trial,
    "lemma51": search.lemma51_trial,
    "contraction": search.contraction_ratio_search,
}


class InputError(Exception):
    pass


def _read(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str | None):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path or 'stdin'}: {exc}") from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return matrix_to_dict(obj) if obj.ndim == 2 else obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands ----------------------------------------------------------------------


def cmd_transform(args) -> int:
    p = poly_from_json(_read(args.input))
    out = gamma(p) if args.command == "gamma" else lambda_(p)
    sys.stdout.write(poly_to_json(out) + "\n")
    return 0


def cmd_symm(args) -> int:
    p = poly_from_json(_read(args.poly))
    items = _load_json(args.tuple)
    if not isinstance(items, list):
        raise InputError("a tuple file holds a JSON array of matrices")
    T = tuple_from_list(items)
    value = symm_apply(p, T)
    norm = op_norm(value)
    _emit({"matrix": matrix_to_dict(value), "norm": norm})
    _note(f"operator norm = {norm:.12g}")
    return 0


def cmd_norm(args) -> int:
    p = poly_from_json(_read(args.input))
    est = sup_norm(p, parse_domain(args.domain), grid=args.grid, refine=args.refine)
    _emit(est.to_dict())
    _note(f"sup norm on {args.domain} in [{est.lower:.12g}, {est.upper:.12g}]")
    return 0


def cmd_certify(args) -> int:
    if args.check:
        cert = kernels.Certificate.from_dict(_load_json(args.check))
        ok = kernels.check_certificate(cert)
        _emit({"file": args.check, "reproduced": ok, "verdict": cert.verdict, "margin": cert.margin})
        _note("certificate reproduced" if ok else "certificate does NOT reproduce")
        return 0 if ok else 1
    if args.n is None or args.r is None:
        raise InputError("certify needs --n and --r (or --check FILE)")
    spec = kernels.KernelSpec(kernels.KernelKind(args.kernel), args.n, args.trunc)
    cert = kernels.certify_positivity(spec, args.r, grid=args.grid, refine=args.refine, max_points=args.max_points)
    _emit(cert.to_dict())
    _note(f"{cert.verdict}: margin {cert.margin:.3e} at r = {args.r} ({cert.elapsed:.1f}s)")
    return 0 if cert.certified else 1


def cmd_constants(args) -> int:
    out = {"M": kernels.m_bound(args.n).to_dict()}
    if args.r_mode != "none":
        out["R"] = kernels.r_bound(args.n, mode=args.r_mode, steps=args.steps).to_dict()
    _emit(out)
    summary = f"M_{args.n} <= {out['M']['value']:.6g}"
    if "R" in out:
        summary += f", R_{args.n} <= {out['R']['value']:.6g} ({args.r_mode})"
    _note(summary)
    return 0


def cmd_example7(args) -> int:
    rep = search.example7()
    s, d = rep["symm"], rep["difference_squared"]
    bracket = rep["polydisk_norm"]
    lines = [
        "p(z1, z2) = (z1 - z2)^2 + 2 (z1 + z2) + 1",
        "T1, T2 = reflections [[1/2, +-sqrt3/2], [+-sqrt3/2, -1/2]]",
        f"(T1 - T2)^2 = {np.real_if_close(d).round(12).tolist()}",
        f"symm p(T1, T2) = {np.real_if_close(s).round(12).tolist()}",
        f"norm = {rep['norm']:.12g}",
        f"spectral radius = {rep['spectral_radius']:.12g}",
        f"p(1, -1) = {np.real_if_close(rep['value_at_1_minus_1']):.12g}",
        f"polydisk norm bracket [{bracket.lower:.9g}, {bracket.upper:.9g}]",
        f"norm of symm p exceeds the polydisk norm: {rep['norm'] > bracket.upper}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_search(args) -> int:
    if args.seed is None:
        raise InputError("search needs an explicit --seed")
    base = search.ExperimentConfig.from_dict(_load_json(args.config)) if args.config else search.ExperimentConfig()
    overrides = {"seed": args.seed}
    for name in ("n", "dim", "degree", "trials", "iterations", "threads"):
        if getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if args.constraint is not None:
        overrides["constraint"] = TupleConstraint(args.constraint)
    cfg = search.with_overrides(base, **overrides)
    fn = EXPERIMENTS[args.experiment]
    if args.experiment == "lemma51":
        if not args.radii:
            raise InputError("lemma51 needs --radii")
        records = fn(cfg, [float(x) for x in args.radii.split(",")])
    elif args.experiment == "contraction":
        records = [fn(cfg, reflections=args.reflections)]
    else:
        records = fn(cfg)
    search.write_records(records, sys.stdout)
    summary = search.summarize(records)
    _note(json.dumps(summary, sort_keys=True))
    return 1 if summary["violations"] else 0


def cmd_verify(args) -> int:
    numbers = sorted(acceptance.CHECKS) if not args.only else [int(x) for x in args.only.split(",")]
    if any(k not in acceptance.CHECKS for k in numbers):
        raise InputError(f"criteria are numbered {min(acceptance.CHECKS)}..{max(acceptance.CHECKS)}")
    results = []
    for k in numbers:
        res = acceptance.run_check(k, threads=args.threads)
        _note(res.line())
        results.append(res)
    _emit([{"criterion": r.number, "name": r.name, "passed": r.passed, "elapsed": r.elapsed,
            "details": r.details} for r in results])
    return 0 if all(r.passed for r in results) else 1


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symcalc", description="Symmetrized polynomial calculus for matrix tuples.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, text in (("gamma", "apply Gamma: c_a -> c_a a!/|a|!"), ("lambda", "apply the inverse of Gamma")):
        p = sub.add_parser(name, help=text)
        p.add_argument("input", nargs="?", default="-", help="polynomial JSON file (default stdin)")
        p.set_defaults(func=cmd_transform)

    p = sub.add_parser("symm", help="evaluate symm(p)(T)")
    p.add_argument("--poly", required=True)
    p.add_argument("--tuple", required=True)
    p.set_defaults(func=cmd_symm)

    p = sub.add_parser("norm", help="sup norm bracket of a polynomial")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--domain", required=True, help="torus:n | polydisk:n:R[,R..] | delta:n")
    p.add_argument("--grid", type=int)
    p.add_argument("--refine", type=int, default=3)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("certify", help="positivity certificate for a kernel")
    p.add_argument("--kernel", choices=[k.value for k in kernels.KernelKind], default="lprime")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=float)
    p.add_argument("--trunc", type=int, default=kernels.DEFAULT_TRUNCATION)
    p.add_argument("--grid", type=int)
    p.add_argument("--refine", type=int, default=kernels.DEFAULT_REFINE)
    p.add_argument("--max-points", type=int, default=kernels.DEFAULT_MAX_POINTS)
    p.add_argument("--check", metavar="FILE", help="recompute a stored certificate")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("constants", help="M_n and R_n reports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-mode", choices=["certified", "hand", "none"], default="certified")
    p.add_argument("--steps", type=int, default=kernels.BISECTION_STEPS)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("example7", help="two reflections where symm breaks the polydisk bound")
    p.set_defaults(func=cmd_example7)

    p = sub.add_parser("search", help="seeded random experiments (JSON lines)")
    p.add_argument("--experiment", choices=sorted(EXPERIMENTS), required=True)
    p.add_argument("--config", help="ExperimentConfig JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--constraint", choices=[c.value for c in TupleConstraint])
    p.add_argument("--radii", help="comma separated radii for lemma51")
    p.add_argument("--reflections", action="store_true", help="contraction search over 2x2 reflections")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", help="comma separated criterion numbers")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"symcalc {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
