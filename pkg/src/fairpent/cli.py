"""Command-line interface: ``fairpent generate|verify|split|jacobian``.

Exit codes: 0 success or pass, 1 domain failure (verification failed,
solver failed, hexagon out of range), 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .errors import FairTilingError
from .hexsplit import (
    JACOBIAN_DET_CLOSED_FORM,
    canonical_params,
    finite_diff_jacobian_ab,
    jacobian_ab,
    split_hexagon,
)
from .nlsolve import SolverConfig
from .patch import generate_patch, reference_patch
from .verify import VerifyConfig, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _hexagon_arg(text):
    try:
        nums = [float(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}")
    if len(nums) != 12:
        raise argparse.ArgumentTypeError(f"expected 12 numbers (x1,y1,...,x6,y6), got {len(nums)}")
    return np.array(nums).reshape(6, 2)


def _err(msg):
    print(f"fairpent: {msg}", file=sys.stderr)


def cmd_generate(args) -> int:
    cfg = SolverConfig(tol_residual=args.tol_residual)
    try:
        if args.unperturbed:
            t = reference_patch(args.rings, cfg)
        else:
            t = generate_patch(args.rings, args.epsilon, args.rho, args.seed, cfg)
    except FairTilingError as exc:
        _err(str(exc))
        return EXIT_FAIL
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    try:
        io.save(t, args.out)
        if args.svg:
            io.render_svg(t, args.svg)
    except OSError as exc:
        _err(str(exc))
        return EXIT_USAGE
    print(f"wrote {len(t)} pentagons to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        t = io.load(args.infile)
        ref = io.load(args.reference) if args.reference else None
        cfg = VerifyConfig(args.tol_area, args.tol_perimeter, args.delta_sep, args.mu_max, args.eps_max, args.tol_total_area)
        report = verify(t, cfg, ref)
    except (OSError, ValueError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    print(json.dumps(report.to_dict(), indent=1, sort_keys=True))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_split(args) -> int:
    hexagon = canonical_params().hexagon() if args.regular else args.hexagon
    try:
        split = split_hexagon(hexagon, SolverConfig(tol_residual=args.tol_residual), eps_max=args.eps_max)
    except FairTilingError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_FAIL
    out = {
        "pentagons": [
            {
                "vertices": p.vertices.tolist(),
                "area": p.area(),
                "perimeter": p.perimeter(),
                "angles": np.roll(p.angles(), -m).tolist(),
                "marked_side": m,
            }
            for p, m in zip(split.pentagons, split.marked_side)
        ],
        "residual_norm": split.report.residual_norm,
        "iterations": split.report.iterations,
        "angle_deviation": split.angle_deviation,
    }
    print(json.dumps(out, indent=1))
    if args.svg:
        items = [(p.vertices, i) for i, p in enumerate(split.pentagons)]
        try:
            with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(io.svg_from_polygons(items))
        except OSError as exc:
            _err(str(exc))
            return EXIT_USAGE
    return EXIT_OK


def cmd_jacobian(args) -> int:
    v0 = canonical_params()
    analytic = float(np.linalg.det(jacobian_ab(v0)))
    fd = float(np.linalg.det(finite_diff_jacobian_ab(v0, args.h)))
    out = {
        "closed_form": JACOBIAN_DET_CLOSED_FORM,
        "analytic": analytic,
        "finite_difference": fd,
        "analytic_error": abs(analytic - JACOBIAN_DET_CLOSED_FORM),
        "finite_difference_error": abs(fd - JACOBIAN_DET_CLOSED_FORM),
    }
    print(json.dumps(out, indent=1))
    ok = out["analytic_error"] <= 1e-10 and out["finite_difference_error"] <= 1e-6
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairpent", description="Fair tilings by pairwise incongruent convex pentagons.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a finite patch and write it as JSON")
    g.add_argument("--rings", type=_nonneg_int, default=1)
    g.add_argument("--epsilon", type=float, default=5e-3, help="perturbation of the first cluster")
    g.add_argument("--rho", type=float, default=0.7, help="per-cluster shrink factor")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tol-residual", type=float, default=1e-12)
    g.add_argument("--unperturbed", action="store_true", help="write the congruent reference patch instead")
    g.add_argument("--out", required=True)
    g.add_argument("--svg")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="certify a tiling file; prints a JSON report")
    v.add_argument("--in", dest="infile", required=True)
    v.add_argument("--reference", help="unperturbed tiling for the closeness check")
    d = VerifyConfig()
    v.add_argument("--tol-area", type=float, default=d.tol_area)
    v.add_argument("--tol-perimeter", type=float, default=d.tol_perimeter)
    v.add_argument("--delta-sep", type=float, default=d.delta_sep)
    v.add_argument("--mu-max", type=float, default=d.mu_max)
    v.add_argument("--eps-max", type=float, default=d.eps_max)
    v.add_argument("--tol-total-area", type=float, default=d.tol_total_area)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("split", help="split one hexagon into three fair pentagons")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--hexagon", type=_hexagon_arg, help="x1,y1,...,x6,y6 counterclockwise")
    src.add_argument("--regular", action="store_true")
    s.add_argument("--eps-max", type=float, default=0.05)
    s.add_argument("--tol-residual", type=float, default=1e-12)
    s.add_argument("--svg")
    s.set_defaults(func=cmd_split)

    j = sub.add_parser("jacobian", help="check the split Jacobian determinant at the regular configuration")
    j.add_argument("--h", type=float, default=1e-6, help="finite-difference step")
    j.set_defaults(func=cmd_jacobian)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
