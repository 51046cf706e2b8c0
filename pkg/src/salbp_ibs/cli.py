"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 solution fails validation.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from .bench import (
    format_entries_csv,
    format_manifest_csv,
    format_summary_csv,
    load_manifest,
    manifest_from_reference,
    run_benchmark,
)
from .greedy import GreedyWeights
from .ibs import HpSettings, IbsConfig, run_ibs
from .instance import (
    InstanceError,
    ProblemSpec,
    export_ip_model,
    format_instance,
    parse_instance,
    reverse_instance,
)
from .reference import graph_from_filename, kappa_table
from .solution import format_solution, parse_solution, validate_solution
from .tuning import render_heatmap, tune_grid

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed validation here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def write_atomic(path: str | Path, data: str | bytes) -> None:
    """Write via a temp file in the target directory and rename over the target."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode("ascii")
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _load_spec(args) -> ProblemSpec:
    path = Path(args.instance)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read instance: {e}") from None
    inst = parse_instance(data, path.stem)
    m = getattr(args, "stations", None)
    if m is None:
        m = 1
    if m < 1:
        raise UsageError(f"number of stations must be >= 1, got {m}")
    return ProblemSpec(inst, m)


def _weights(args) -> GreedyWeights:
    default = GreedyWeights()
    graph = graph_from_filename(args.instance) if getattr(args, "instance", None) else None
    if graph is not None:
        default = kappa_table().get(graph, default)
    k1 = default.kappa1 if args.kappa1 is None else args.kappa1
    k2 = default.kappa2 if args.kappa2 is None else args.kappa2
    try:
        return GreedyWeights(k1, k2)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _config(args, weights: GreedyWeights | None = None) -> IbsConfig:
    hp = HpSettings()
    limit = args.time_limit
    if args.hp and limit is not None:
        hp = HpSettings(time_limit=limit)
    if limit is None:
        limit = 180.0
    if limit <= 0:
        raise UsageError("--time-limit must be positive")
    if not 0.0 <= args.det_rate <= 1.0:
        raise UsageError("--det-rate must lie in [0, 1]")
    return IbsConfig(
        time_limit_per_c=limit,
        attempt_limit_per_c=args.attempts,
        weights=weights if weights is not None else GreedyWeights(),
        det_rate=args.det_rate,
        seed=args.seed,
        strict=args.strict_alg1,
        hp_mode=args.hp,
        hp=hp,
    )


def _log_stderr(line: str) -> None:
    print(line, file=sys.stderr, flush=True)


def cmd_solve(args) -> int:
    spec = _load_spec(args)
    cfg = _config(args, _weights(args))
    res = run_ibs(spec, cfg, log=_log_stderr if args.verbose else None)
    bad = validate_solution(spec, res.best_solution, res.best_cycle_time)
    if bad:  # would be a solver bug; never report an invalid balance as a result
        for v in bad:
            print(v, file=sys.stderr)
        return EXIT_INVALID
    out = args.output or f"{Path(args.instance).stem}.m{spec.m}.sol"
    write_atomic(out, format_solution(res.best_solution, res.best_cycle_time))
    print(f"cycle_time={res.best_cycle_time}")
    if args.verbose:
        _log_stderr(f"start_bound={res.start_bound} time_to_best={res.time_to_best:.3f}s solution={out}")
    return EXIT_OK


def cmd_tune(args) -> int:
    spec = _load_spec(args)
    base = _config(args)
    grid = tune_grid(spec, seed=args.seed, base=base)
    pgm, csv_text = render_heatmap(grid)
    prefix = args.output or f"{Path(args.instance).stem}.m{spec.m}.tune"
    write_atomic(f"{prefix}.csv", csv_text)
    write_atomic(f"{prefix}.pgm", pgm)
    b, w = grid.best_cell, grid.worst_cell
    print(f"best={b[2]} kappa1={b[0]:.1f} kappa2={b[1]:.1f}")
    print(f"worst={w[2]} kappa1={w[0]:.1f} kappa2={w[1]:.1f}")
    print(f"gap_percent={grid.gap_percent:.2f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if (args.manifest is None) == (args.data_dir is None):
        raise UsageError("give exactly one of --manifest or --data-dir")
    if args.manifest is not None:
        try:
            manifest = load_manifest(args.manifest)
        except OSError as e:
            raise UsageError(f"cannot read manifest: {e}") from None
    else:
        manifest, missing = manifest_from_reference(args.data_dir, args.graphs)
        for g in missing:
            print(f"warning: no instance file for {g} in {args.data_dir}", file=sys.stderr)
        if args.write_manifest:
            write_atomic(args.write_manifest, format_manifest_csv(manifest))
    if not manifest:
        raise UsageError("manifest is empty")
    if args.runs < 1 or args.jobs < 1:
        raise UsageError("--runs and --jobs must be >= 1")
    # explicit weights apply to every entry; otherwise each graph gets its tabulated pair
    cfg = _config(args, _weights(args))
    results, summary = run_benchmark(
        manifest, args.runs, cfg, jobs=args.jobs,
        use_table_weights=args.kappa1 is None and args.kappa2 is None,
    )
    prefix = args.output or "bench"
    write_atomic(f"{prefix}_entries.csv", format_entries_csv(results))
    write_atomic(f"{prefix}_summary.csv", format_summary_csv(summary))
    for r in results:
        if r.error:
            print(f"error: {r.entry.graph} m={r.entry.m}: {r.error}", file=sys.stderr)
    sys.stdout.write(format_summary_csv(summary))
    return EXIT_OK


def cmd_validate(args) -> int:
    spec = _load_spec(args)
    try:
        sol, header_c = parse_solution(Path(args.solution).read_text(encoding="ascii"))
    except (OSError, UnicodeDecodeError) as e:
        raise UsageError(f"cannot read solution: {e}") from None
    C = header_c if args.C is None else args.C
    bad = validate_solution(spec, sol, C)
    if bad:
        for v in bad:
            print(v)
        return EXIT_INVALID
    print(f"ok C={C}")
    return EXIT_OK


def cmd_reverse(args) -> int:
    spec = _load_spec(args)
    text = format_instance(reverse_instance(spec.instance))
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export_ip(args) -> int:
    spec = _load_spec(args)
    text = export_ip_model(spec)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, default=None,
                   help="seconds per cycle time (default 180; 1800 with --hp)")
    p.add_argument("--attempts", type=int, default=None,
                   help="cap on search rounds per cycle time; makes runs independent of machine speed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kappa1", type=float, default=None)
    p.add_argument("--kappa2", type=float, default=None)
    p.add_argument("--det-rate", type=float, default=0.5,
                   help="probability of a deterministic (argmax) task choice")
    p.add_argument("--hp", action="store_true", help="high-intensity variant with randomised parameters")
    p.add_argument("--strict-alg1", action="store_true",
                   help="expand the beam until it empties instead of stopping at the first full balance")
    p.add_argument("--verbose", action="store_true", help="per cycle time log on stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="salbp-ibs", description="Iterative beam search for SALBP-2.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_instance(name, help, stations=True):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--instance", required=True, help="precedence graph file (.IN2 format)")
        if stations:
            p.add_argument("-m", "--stations", type=int, required=True)
        return p

    p = with_instance("solve", "minimise the cycle time for a fixed station count")
    _search_flags(p)
    p.add_argument("-o", "--output", help="solution file (default <instance>.m<m>.sol)")
    p.set_defaults(func=cmd_solve)

    p = with_instance("tune", "sweep the 21x21 greedy weight grid, write CSV and PGM heatmaps")
    _search_flags(p)
    p.add_argument("-o", "--output", help="output prefix (default <instance>.m<m>.tune)")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("bench", help="multi-run statistics against best-known values")
    p.add_argument("--manifest", help="CSV with columns file,graph,m,bks,optimal")
    p.add_argument("--data-dir", help="directory of benchmark graph files; entries come from the bundled table")
    p.add_argument("--graphs", nargs="+", help="restrict --data-dir to these graphs")
    p.add_argument("--write-manifest", help="also save the manifest built from --data-dir")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    _search_flags(p)
    p.add_argument("-o", "--output", help="report prefix (default bench)")
    p.set_defaults(func=cmd_bench)

    p = with_instance("validate", "check a solution file")
    p.add_argument("-C", type=int, default=None, help="cycle time (default: the one in the file header)")
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_validate)

    p = with_instance("reverse", "write the instance with every arc inverted", stations=False)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reverse)

    p = with_instance("export-ip", "write the integer program in LP format")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_ip)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
