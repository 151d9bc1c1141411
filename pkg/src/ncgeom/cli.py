"""Command-line front end producing deterministic JSON/CSV/text reports.

Exit codes: 0 all assertions pass, 2 assertion failure, 1 usage error.
Progress goes to stderr; stdout stays machine-clean.  Floats are serialized
with 17 significant digits and keys are sorted, so identical inputs give
byte-identical reports on one platform.  NCG_TOL overrides the rank tolerance
and is echoed in the envelope.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

SCHEMA = "ncg-report/1"


def _fmt(x):
    if isinstance(x, float):
        return float(f"{x:.17g}")
    if isinstance(x, complex):
        return {"re": float(f"{x.real:.17g}"), "im": float(f"{x.imag:.17g}")}
    if isinstance(x, (np.floating,)):
        return _fmt(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


def _emit(envelope, fmt, out):
    if fmt == "json":
        text = json.dumps(_fmt(envelope), sort_keys=True, indent=2) + "\n"
    elif fmt == "text":
        lines = [f"# {envelope['command']}"]
        for a in envelope.get("assertions", []):
            mark = "PASS" if a["passed"] else "FAIL"
            lines.append(f"[{mark}] {a['name']}: observed={a['observed']} expected={a['expected']}")
        for k, v in sorted(envelope.items()):
            if k in ("assertions", "command"):
                continue
            lines.append(f"{k}: {json.dumps(_fmt(v), sort_keys=True)}")
        text = "\n".join(lines) + "\n"
    elif fmt == "csv":
        rows = ["name,passed,observed,expected"]
        for a in envelope.get("assertions", []):
            obs = json.dumps(_fmt(a["observed"])).replace(",", ";")
            exp = json.dumps(_fmt(a["expected"])).replace(",", ";")
            rows.append(f"\"{a['name']}\",{int(a['passed'])},{obs},{exp}")
        if "degrees" in envelope:
            rows.append("degree,rank,betti")
            for d in envelope["degrees"]:
                rows.append(f"{d['degree']},{d['rank']},{d['betti']}")
        text = "\n".join(rows) + "\n"
    else:
        raise ValueError(fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _progress(stage):
    def cb(m, count, dim):
        print(f"  [{stage}] degree {m}: {count} words, span {dim}", file=sys.stderr)
    return cb


def _tolerance(args):
    env = os.environ.get("NCG_TOL")
    if env is not None:
        return float(env)
    return args.tol


def cmd_sphere(args):
    from . import build_sphere, sphere_report

    if args.level < 1:
        print("sphere: --level must be >= 1", file=sys.stderr)
        return 1
    t0 = time.time()
    model = build_sphere(args.level, tol=_tolerance(args))
    print(f"built level-{args.level} sphere (dim H = {model.data.hilbert_dim})",
          file=sys.stderr)
    report, cx = sphere_report(model, kmax=args.max_degree)
    report["degrees"] = [{"degree": k, "rank": r, "betti": b}
                         for k, (r, b) in enumerate(zip(report["module_ranks"], report["betti"]))]
    envelope = {
        "schema": SCHEMA,
        "command": f"sphere --level {args.level}",
        "tolerance": _tolerance(args),
        "wall_clock_seconds": time.time() - t0,
        **report,
    }
    _emit(envelope, args.format, args.out)
    return 0 if report["pass"] else 2


def cmd_torus(args):
    from . import build_doubled, build_kahler, build_torus, torus_report
    from .spectral_forms import bigrade_decompose, check_axioms

    from math import gcd
    if args.den < 2 or (args.num != 0 and gcd(args.num, args.den) != 1):
        print("torus: --num/--den must be coprime with --den >= 2 (or --num 0)",
              file=sys.stderr)
        return 1
    t0 = time.time()
    model = build_torus(args.num, args.den, tol=_tolerance(args))
    print(f"built torus M/N = {args.num}/{args.den}", file=sys.stderr)
    report, cx, ref = torus_report(model)
    envelope = {
        "schema": SCHEMA,
        "command": f"torus --num {args.num} --den {args.den}",
        "tolerance": _tolerance(args),
        **report,
    }
    if args.with_n11 or args.with_n22:
        doubled = build_doubled(model)
        envelope["n11"] = {"residuals": {k: float(v) for k, v in doubled.residuals.items()}}
        ok = max(doubled.residuals.values()) <= 1e-10
        envelope["assertions"].append({"name": "doubled relations (flat pair)",
                                        "passed": bool(ok),
                                        "observed": float(max(doubled.residuals.values())),
                                        "expected": 0.0})
    if args.with_n22:
        kdata, extras = build_kahler(doubled)
        ax = check_axioms(kdata)
        _, ortho, grad = bigrade_decompose(kdata, kmax=2)
        envelope["n22"] = {"axiom_residuals": {k: float(v) for k, v in ax.items()},
                           "bidegree_orthogonality": float(ortho),
                           "grading_residual": float(grad)}
        ok = max(ax.values()) <= 1e-10 and ortho <= 1e-10
        envelope["assertions"].append({"name": "Kahler axioms + bidegree orthogonality",
                                        "passed": bool(ok),
                                        "observed": float(max(max(ax.values()), ortho)),
                                        "expected": 0.0})
    envelope["wall_clock_seconds"] = time.time() - t0
    envelope["pass"] = all(a["passed"] for a in envelope["assertions"])
    _emit(envelope, args.format, args.out)
    return 0 if envelope["pass"] else 2


def cmd_verify(args):
    from . import (build_broken_susy, build_brst, build_sphere, build_torus,
                   check_axioms)

    t0 = time.time()
    tol = _tolerance(args)
    if args.model == "sphere":
        model = build_sphere(args.level, tol=tol)
        residuals = check_axioms(model.data)
        extra = {}
    elif args.model == "torus":
        model = build_torus(args.num, args.den, tol=tol)
        residuals = check_axioms(model.data)
        extra = {}
    elif args.model == "brst":
        data, _, checks = build_brst(args.level, tol=tol)
        residuals = check_axioms(data)
        residuals.update({f"build/{k}": v for k, v in checks.items()})
        extra = {}
    elif args.model == "susy":
        _, _, _, rep = build_broken_susy(args.level, tol=tol)
        residuals = dict(rep["residuals"])
        extra = {"min_laplacian_eigenvalue": rep["min_laplacian_eigenvalue"],
                 "kernel_dimension": rep["kernel_dimension"]}
    else:
        print(f"verify: unknown model {args.model}", file=sys.stderr)
        return 1
    worst = max(residuals.values())
    assertions = [{"name": f"relation: {k}", "passed": bool(v <= args.tol_pass),
                   "observed": float(v), "expected": 0.0}
                  for k, v in sorted(residuals.items())]
    if args.model == "susy":
        assertions.append({"name": "min Laplacian eigenvalue",
                           "passed": bool(abs(extra["min_laplacian_eigenvalue"] - 0.125) <= 1e-9),
                           "observed": extra["min_laplacian_eigenvalue"], "expected": 0.125})
    envelope = {
        "schema": SCHEMA,
        "command": f"verify --model {args.model}",
        "tolerance": tol,
        "residuals": {k: float(v) for k, v in residuals.items()},
        "worst_residual": float(worst),
        "assertions": assertions,
        "pass": all(a["passed"] for a in assertions),
        "wall_clock_seconds": time.time() - t0,
        **extra,
    }
    _emit(envelope, args.format, args.out)
    return 0 if envelope["pass"] else 2


def build_parser():
    p = argparse.ArgumentParser(prog="ncgeom",
                                description="finite non-commutative geometry reports")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--format", choices=("json", "text", "csv"), default="json")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("sphere", help="fuzzy 3-sphere report")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=4)
    common(sp)
    sp.set_defaults(func=cmd_sphere)

    tp = sub.add_parser("torus", help="non-commutative torus report")
    tp.add_argument("--num", type=int, required=True)
    tp.add_argument("--den", type=int, required=True)
    tp.add_argument("--with-n11", action="store_true")
    tp.add_argument("--with-n22", action="store_true")
    common(tp)
    tp.set_defaults(func=cmd_torus)

    vp = sub.add_parser("verify", help="axiom validator")
    vp.add_argument("--model", choices=("sphere", "torus", "brst", "susy"), required=True)
    vp.add_argument("--level", type=int, default=1)
    vp.add_argument("--num", type=int, default=1)
    vp.add_argument("--den", type=int, default=5)
    vp.add_argument("--tol-pass", type=float, default=1e-10)
    common(vp)
    vp.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
