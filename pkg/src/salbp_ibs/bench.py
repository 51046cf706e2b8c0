"""Multi-run benchmark statistics against best-known cycle times."""
from __future__ import annotations

import csv
import io
import statistics
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .ibs import IbsConfig, run_ibs
from .instance import Instance, ProblemSpec, parse_instance, starting_cycle_time
from .reference import dataset_of, find_instance_file, kappa_table, reference_results
from .solution import Solution, validate_solution


@dataclass(frozen=True)
class ManifestEntry:
    file: Path
    graph: str
    m: int
    bks: int
    optimal: bool


@dataclass(frozen=True)
class RunStats:
    best: int
    avg: float
    std: float
    time_to_best_avg: float
    time_to_best_std: float
    runs: int

    @classmethod
    def from_runs(cls, values: list[int], times: list[float]) -> "RunStats":
        sd = statistics.stdev if len(values) > 1 else (lambda xs: 0.0)
        return cls(
            best=min(values),
            avg=statistics.fmean(values),
            std=sd(values),
            time_to_best_avg=statistics.fmean(times),
            time_to_best_std=sd(times),
            runs=len(values),
        )


@dataclass
class EntryResult:
    entry: ManifestEntry
    stats: RunStats | None = None
    values: list[int] = field(default_factory=list)
    best_solution: Solution | None = None
    error: str | None = None

    @property
    def flag(self) -> str:
        if self.stats is None:
            return "error"
        if self.stats.best < self.entry.bks:
            return "new_best"
        if self.stats.best > self.entry.bks:
            return "miss"
        return "ok"


@dataclass(frozen=True)
class SummaryRow:
    group: str
    mrd_percent: float
    avg_time: float
    n_best_found: int
    entries: int


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a ``file,graph,m,bks,optimal`` CSV; relative files resolve against the manifest's directory."""
    path = Path(path)
    out = []
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        missing = {"file", "graph", "m", "bks", "optimal"} - set(rd.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: manifest lacks columns {sorted(missing)}")
        for row in rd:
            f = Path(row["file"])
            if not f.is_absolute():
                f = path.parent / f
            bks = int(row["bks"])
            if bks < 1:
                raise ValueError(f"{path}: bks must be >= 1, got {bks}")
            out.append(ManifestEntry(f, row["graph"], int(row["m"]), bks, row["optimal"].strip() == "1"))
    return out


def manifest_from_reference(data_dir: str | Path, graphs=None) -> tuple[list[ManifestEntry], list[str]]:
    """Build a manifest from the bundled best-known table for the graph files found in ``data_dir``.

    Returns the entries and the names of requested graphs whose file is missing.
    """
    entries, missing = [], []
    wanted = None if graphs is None else set(graphs)
    located: dict[str, Path | None] = {}
    for row in reference_results():
        if wanted is not None and row.graph not in wanted:
            continue
        if row.graph not in located:
            located[row.graph] = find_instance_file(data_dir, row.graph)
            if located[row.graph] is None:
                missing.append(row.graph)
        f = located[row.graph]
        if f is not None:
            entries.append(ManifestEntry(f, row.graph, row.m, row.bks, row.optimal))
    return entries, missing


def format_manifest_csv(entries: list[ManifestEntry]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["file", "graph", "m", "bks", "optimal"])
    for e in entries:
        wr.writerow([str(e.file), e.graph, e.m, e.bks, int(e.optimal)])
    return buf.getvalue()


def mrd(results: list[tuple[int, int]]) -> float:
    """Mean relative deviation in percent of (value, bks) pairs."""
    if not results:
        return 0.0
    return statistics.fmean(100.0 * (v - b) / b for v, b in results)


def _load(path: Path) -> Instance:
    return parse_instance(path.read_bytes(), path.stem)


def _run_entry(args) -> EntryResult:
    entry, runs, config, use_table_weights = args
    res = EntryResult(entry)
    try:
        spec = ProblemSpec(_load(entry.file), entry.m)
        if use_table_weights and entry.graph in kappa_table():
            config = replace(config, weights=kappa_table()[entry.graph])
        lb = starting_cycle_time(spec)
        times = []
        for r in range(runs):
            out = run_ibs(spec, replace(config, seed=config.seed + r))
            bad = validate_solution(spec, out.best_solution, out.best_cycle_time)
            if bad or out.best_cycle_time < lb:
                raise AssertionError(f"run {r}: invalid result at C={out.best_cycle_time}: {bad[:3]}")
            if not res.values or out.best_cycle_time < min(res.values):
                res.best_solution = out.best_solution
            res.values.append(out.best_cycle_time)
            times.append(out.time_to_best)
        res.stats = RunStats.from_runs(res.values, times)
    except Exception as e:  # one broken entry must not sink the batch
        res.error = f"{type(e).__name__}: {e}"
    return res


def run_benchmark(
    manifest: list[ManifestEntry],
    runs: int,
    config: IbsConfig,
    jobs: int = 1,
    use_table_weights: bool = True,
) -> tuple[list[EntryResult], list[SummaryRow]]:
    """Run ``runs`` seeded IBS executions per entry (seeds config.seed .. config.seed + runs - 1)."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    args = [(e, runs, config, use_table_weights) for e in manifest]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_entry, args))
    else:
        results = [_run_entry(a) for a in args]
    return results, summarize(results)


def summarize(results: list[EntryResult]) -> list[SummaryRow]:
    groups: dict[str, list[EntryResult]] = defaultdict(list)
    order: list[str] = []
    for r in results:
        if r.stats is None:
            continue
        for g in (r.entry.graph, dataset_of(r.entry.graph), "all"):
            if g not in groups:
                order.append(g)
            groups[g].append(r)
    rows = []
    for g in order:
        rs = groups[g]
        rows.append(SummaryRow(
            group=g,
            mrd_percent=mrd([(r.stats.best, r.entry.bks) for r in rs]),
            avg_time=statistics.fmean(r.stats.time_to_best_avg for r in rs),
            n_best_found=sum(r.stats.best <= r.entry.bks for r in rs),
            entries=len(rs),
        ))
    return rows


def format_entries_csv(results: list[EntryResult]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["graph", "m", "bks", "best", "avg", "std", "time_avg", "time_std", "flag"])
    for r in results:
        s = r.stats
        if s is None:
            wr.writerow([r.entry.graph, r.entry.m, r.entry.bks, "", "", "", "", "", "error"])
            continue
        wr.writerow([
            r.entry.graph, r.entry.m, r.entry.bks, s.best, f"{s.avg:.2f}", f"{s.std:.2f}",
            f"{s.time_to_best_avg:.2f}", f"{s.time_to_best_std:.2f}", r.flag,
        ])
    return buf.getvalue()


def format_summary_csv(rows: list[SummaryRow]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["group", "mrd_percent", "avg_time", "n_best_found", "entries"])
    for s in rows:
        wr.writerow([s.group, f"{s.mrd_percent:.4f}", f"{s.avg_time:.2f}", s.n_best_found, s.entries])
    return buf.getvalue()
