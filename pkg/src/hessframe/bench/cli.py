"""``bench`` command line entry point.

Exit codes: 0 success, 2 spec error, 3 some cells failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from hessframe.bench.lines import run_lines
from hessframe.bench.output import emit, emit_lines
from hessframe.bench.runner import run_experiment
from hessframe.bench.spec import LONG_PRESETS, PRESETS, ExperimentSpec, preset, quick
from hessframe.errors import SpecError

EXIT_OK, EXIT_SPEC, EXIT_PARTIAL = 0, 2, 3


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("spec", nargs="?", help="experiment spec JSON file")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="use a built-in sweep instead of a spec file")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--out-dir", default="bench-out", help="output directory (default: %(default)s)")
    parser.add_argument("--quick", action="store_true", help="10 repeats and 10^4 test points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="RMSE sweep -> rmse.csv, summary.json, transforms/")
    _common(run)
    run.add_argument("--workers", type=int, default=1, help="worker processes (default: %(default)s)")
    run.add_argument("--no-transforms", action="store_true", help="skip transforms/<cell>.json")
    run.add_argument("--save-samples", action="store_true", help="also write samples/<cell>.json")

    lines = sub.add_parser("lines", help="1-D slices -> lines_<k>.csv")
    _common(lines)
    lines.add_argument("--line-count", type=int, default=4)
    lines.add_argument("--line-points", type=int, default=200)
    lines.add_argument("--surrogates", type=int, default=1, help="repeats fitted per cell")

    show = sub.add_parser("preset", help="print a preset as spec JSON")
    show.add_argument("name", choices=sorted(PRESETS))
    return parser


def resolve_spec(args) -> ExperimentSpec:
    if args.spec and args.preset:
        raise SpecError("give either a spec file or --preset, not both")
    if args.spec:
        spec = ExperimentSpec.load(args.spec)
    elif args.preset:
        if args.preset in LONG_PRESETS and not args.quick:
            print(f"warning: preset {args.preset} is a long run", file=sys.stderr)
        spec = preset(args.preset)
    else:
        raise SpecError("a spec file or --preset is required")
    if args.seed is not None:
        spec = spec.replace(seed=args.seed)
    if args.quick:
        spec = quick(spec)
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "preset":
        print(json.dumps(preset(args.name).to_dict(), indent=2))
        return EXIT_OK

    try:
        spec = resolve_spec(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC

    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_SPEC

    start = time.perf_counter()
    if args.command == "run":
        result = run_experiment(spec, workers=max(1, args.workers))
        emit(result, out, transforms=not args.no_transforms, samples=args.save_samples)
        print(f"{len(result.records)} records, {result.failures} failures, "
              f"{time.perf_counter() - start:.1f}s -> {out}")
        return EXIT_PARTIAL if result.failures else EXIT_OK

    failed = []
    rows = run_lines(spec, args.line_count, args.line_points, args.surrogates, failed)
    paths = emit_lines(rows, out)
    print(f"{len(paths)} line files, {len(failed)} failed cells, {time.perf_counter() - start:.1f}s -> {out}")
    return EXIT_PARTIAL if failed else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
