"""Greedy-weight grid sweep and heatmap rendering.

Each of the 21 x 21 (kappa1, kappa2) cells runs a cheap IBS variant: the
usual first phase, followed by one deterministic beam search (k_bw=150,
k_ext=20, every choice by argmax) per cycle time, stopping at the first
cycle time it cannot solve.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .beam import BsParams, beam_search
from .greedy import GreedyTable, GreedyWeights
from .ibs import IbsConfig, _Runner
from .instance import ProblemSpec, starting_cycle_time

KAPPA_AXIS: tuple[float, ...] = tuple(k / 10 for k in range(-10, 11))
TUNE_PARAMS = BsParams(150, 20, det_rate=1.0)


@dataclass(frozen=True)
class TuneGrid:
    """``values[a][b]`` is the cycle time reached with kappa1 = KAPPA_AXIS[a], kappa2 = KAPPA_AXIS[b]."""

    values: tuple[tuple[int, ...], ...]
    name: str
    m: int

    def _cells(self):
        for a, row in enumerate(self.values):
            for b, v in enumerate(row):
                yield KAPPA_AXIS[a], KAPPA_AXIS[b], v

    @property
    def best_cell(self) -> tuple[float, float, int]:
        return min(self._cells(), key=lambda c: c[2])

    @property
    def worst_cell(self) -> tuple[float, float, int]:
        return max(self._cells(), key=lambda c: c[2])

    @property
    def gap_percent(self) -> float:
        best, worst = self.best_cell[2], self.worst_cell[2]
        return 100.0 * (worst - best) / best


def tune_cell(spec: ProblemSpec, kappa1: float, kappa2: float, seed: int = 0, base: IbsConfig = IbsConfig()) -> int:
    weights = GreedyWeights(kappa1, kappa2)
    config = replace(base, weights=weights, seed=seed)
    runner = _Runner(spec, config, False, None)
    C, _ = runner.phase1([])
    lb = starting_cycle_time(spec)
    best = C
    C -= 1
    while C >= lb:
        greedy = GreedyTable.build(spec.instance, C, weights)
        if not beam_search(spec, C, TUNE_PARAMS, greedy=greedy).success:
            break
        best = C
        C -= 1
    return best


def _cell_job(args):
    spec, k1, k2, seed, base = args
    return tune_cell(spec, k1, k2, seed, base)


def cell_seed(seed: int, a: int, b: int) -> int:
    return seed * 441 + a * 21 + b


def tune_grid(spec: ProblemSpec, seed: int = 0, jobs: int = 1, base: IbsConfig = IbsConfig()) -> TuneGrid:
    jobs_args = [
        (spec, KAPPA_AXIS[a], KAPPA_AXIS[b], cell_seed(seed, a, b), base)
        for a in range(len(KAPPA_AXIS))
        for b in range(len(KAPPA_AXIS))
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_cell_job, jobs_args, chunksize=8))
    else:
        flat = [_cell_job(a) for a in jobs_args]
    w = len(KAPPA_AXIS)
    values = tuple(tuple(flat[a * w:(a + 1) * w]) for a in range(w))
    return TuneGrid(values, spec.instance.name, spec.m)


def gray_levels(values) -> list[list[int]]:
    """Linear map: best (smallest) cycle time -> 255 (white), worst -> 0 (black)."""
    flat = [v for row in values for v in row]
    best, worst = min(flat), max(flat)
    if worst == best:
        return [[255] * len(row) for row in values]
    return [[math.floor(255 * (worst - v) / (worst - best) + 0.5) for v in row] for row in values]


def render_pgm(grid: TuneGrid) -> bytes:
    levels = gray_levels(grid.values)
    h, w = len(levels), len(levels[0])
    lines = ["P2", f"{w} {h}", "255"]
    lines += [" ".join(str(g) for g in row) for row in levels]
    return ("\n".join(lines) + "\n").encode("ascii")


def render_csv(grid: TuneGrid) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["kappa1\\kappa2"] + [f"{k:.1f}" for k in KAPPA_AXIS])
    for a, row in enumerate(grid.values):
        wr.writerow([f"{KAPPA_AXIS[a]:.1f}"] + list(row))
    return buf.getvalue()


def render_heatmap(grid: TuneGrid) -> tuple[bytes, str]:
    return render_pgm(grid), render_csv(grid)


def parse_csv(text: str) -> tuple[tuple[int, ...], ...]:
    rows = list(csv.reader(io.StringIO(text)))
    header = [float(x) for x in rows[0][1:]]
    if tuple(header) != KAPPA_AXIS:
        raise ValueError("unexpected kappa2 axis in heatmap CSV")
    out = []
    for a, row in enumerate(rows[1:]):
        if float(row[0]) != KAPPA_AXIS[a]:
            raise ValueError(f"unexpected kappa1 label {row[0]!r} in row {a + 2}")
        out.append(tuple(int(x) for x in row[1:]))
    return tuple(out)
