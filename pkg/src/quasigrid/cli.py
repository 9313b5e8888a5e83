"""Command-line interface: generate, check-regular, verify.

Exit codes: 0 success, 1 usage error, 2 singularity found (or an uncovered
spec refused without --force after a disc search found a singularity),
3 a requested verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io as tio
from .dualizer import SingularPointError, generate_tiling
from .multigrid import format_rational, parse_rational
from .regularity import Verdict, find_singularities, theorem2_applies
from .validator import UnsupportedOrder, check_rotational_symmetry, shape_census, validate

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_spec_args(p: argparse.ArgumentParser, radius_default: str = "10") -> None:
    p.add_argument("--n", type=int, required=True, help="symmetry order of the multigrid (>= 3)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--offset", help="common offset p/q for every grid")
    g.add_argument("--offsets", help="comma-separated offsets p/q, one per grid")
    p.add_argument("--radius", type=_rational, default=Fraction(radius_default), help="disc radius p/q")


def _spec(args):
    try:
        return tio.spec_from_args(args.n, args.offset, args.offsets)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))


def _offsets_text(spec) -> str:
    return ",".join(format_rational(g) for g in spec.offsets)


def _report_singularities(reports, stream) -> None:
    json.dump({"singularities": [r.to_dict() for r in reports]}, stream, indent=2)
    stream.write("\n")


def cmd_generate(args) -> int:
    spec = _spec(args)
    verdict = theorem2_applies(spec)
    if verdict is not Verdict.REGULAR_BY_THEOREM and not args.force:
        found = find_singularities(spec, args.radius + 2)
        if found:
            print(f"singular multigrid: {len(found)} singular point(s) near the disc", file=sys.stderr)
            _report_singularities(found, sys.stderr)
            return EXIT_SINGULAR
        print(
            f"{spec.to_text()} is not covered by the regularity theorem and no singularity was found "
            f"within radius {format_rational(args.radius + 2)}; pass --force to generate",
            file=sys.stderr,
        )
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        tiling = generate_tiling(spec, args.radius, force=True)
    except SingularPointError as exc:
        print(str(exc), file=sys.stderr)
        _report_singularities([exc.report], sys.stderr)
        return EXIT_SINGULAR
    out = Path(args.out)
    if args.format in ("json", "both"):
        path = out if args.format == "json" else out.with_suffix(".json")
        path.write_text(tio.dumps(tiling))
    if args.format in ("svg", "both"):
        path = out if args.format == "svg" else out.with_suffix(".svg")
        opts = tio.RenderOptions(scale=args.scale, stroke_width=args.stroke_width, crop_to_core=args.crop)
        path.write_text(tio.render_svg(tiling, opts))
    census = shape_census(tiling)
    line = (
        f"n={spec.n} offsets={_offsets_text(spec)} tiles={len(tiling.tiles)} "
        f"shapes={len(census)} verdict={verdict.value}"
    )
    status = EXIT_OK
    if args.symmetry_check is not None:
        try:
            ok = check_rotational_symmetry(tiling, args.symmetry_check)
        except UnsupportedOrder as exc:
            raise UsageError(str(exc))
        line += f" symmetry{args.symmetry_check}={'true' if ok else 'false'}"
        status = EXIT_OK if ok else EXIT_FAILED
    print(line)
    if args.verbose:
        print(f"generated in {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return status


def cmd_check_regular(args) -> int:
    spec = _spec(args)
    verdict = theorem2_applies(spec)
    found = find_singularities(spec, args.radius)
    doc = {
        "spec": spec.to_dict(),
        "theorem_verdict": verdict.value,
        "searched_radius": format_rational(args.radius),
        "singularities": [r.to_dict() for r in found],
    }
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        state = "singular" if found else "no singularity found"
        print(
            f"n={spec.n} offsets={_offsets_text(spec)} verdict={verdict.value} "
            f"radius={format_rational(args.radius)} {state} ({len(found)})"
        )
    return EXIT_SINGULAR if found else EXIT_OK


def cmd_verify(args) -> int:
    if args.input:
        if args.n is not None:
            raise UsageError("give either --input or a multigrid, not both")
        try:
            tiling = tio.loads(Path(args.input).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read {args.input}: {exc}")
    else:
        if args.n is None:
            raise UsageError("--input or --n is required")
        spec = _spec(args)
        try:
            tiling = generate_tiling(spec, args.radius, force=args.force)
        except SingularPointError as exc:
            print(str(exc), file=sys.stderr)
            _report_singularities([exc.report], sys.stderr)
            return EXIT_SINGULAR
        except ValueError as exc:
            raise UsageError(str(exc))
    orders = None
    if args.orders:
        orders = [int(x) for x in args.orders.split(",")]
    try:
        report = validate(tiling, orders)
    except UnsupportedOrder as exc:
        raise UsageError(str(exc))
    print(json.dumps(report.to_dict(), indent=2))
    ok = report.rhombus_ok and report.edge_to_edge_ok and (orders is None or all(report.symmetry.values()))
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quasigrid", description="Rhombus tilings dual to n-fold multigrids.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="build a tiling patch and write JSON and/or SVG")
    _add_spec_args(g)
    g.add_argument("--out", default="tiling", help="output path (suffix replaced for --format both)")
    g.add_argument("--format", choices=("json", "svg", "both"), default="both")
    g.add_argument("--force", action="store_true", help="generate even if the regularity theorem does not apply")
    g.add_argument("--symmetry-check", type=int, metavar="M", help="check M-fold rotational symmetry")
    g.add_argument("--scale", type=float, default=40.0, help="SVG pixels per unit edge")
    g.add_argument("--stroke-width", type=float, default=1.0)
    g.add_argument("--crop", action="store_true", help="render only tiles inside the core disc")
    g.add_argument("-v", "--verbose", action="store_true")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("check-regular", help="search a disc for points where three lines meet")
    _add_spec_args(c)
    c.add_argument("--json", action="store_true", help="print the verdict document as JSON")
    c.set_defaults(func=cmd_check_regular)

    v = sub.add_parser("verify", help="validate a tiling document or a freshly generated patch")
    v.add_argument("--input", help="tiling JSON document")
    v.add_argument("--n", type=int)
    grp = v.add_mutually_exclusive_group()
    grp.add_argument("--offset")
    grp.add_argument("--offsets")
    v.add_argument("--radius", type=_rational, default=Fraction(10))
    v.add_argument("--force", action="store_true")
    v.add_argument("--orders", help="comma-separated symmetry orders to test")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "radius", None) is not None and args.radius <= 0:
        parser.error("--radius must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"quasigrid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
