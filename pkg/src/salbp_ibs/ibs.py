"""Iterative beam search driver for SALBP-2.

Phase 1 raises the cycle time from the trivial lower bound until a cheap beam
search (on the instance or its reverse) finds a feasible balance. Phase 2 then
lowers the cycle time one unit at a time, spending a fixed budget per value on
repeated, alternating beam searches, and stops at the first value that stays
unsolved.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import Callable

from .beam import BsParams, beam_search
from .greedy import GreedyTable, GreedyWeights
from .instance import Instance, ProblemSpec, reverse_instance, starting_cycle_time
from .solution import Solution, reverse_solution


@dataclass(frozen=True)
class HpSettings:
    time_limit: float = 1800.0
    small_fraction: float = 0.01
    k_bw_range: tuple[int, int] = (150, 250)
    k_ext_range: tuple[int, int] = (20, 40)
    random_weight_prob: float = 0.5

    def __post_init__(self):
        for lo, hi in (self.k_bw_range, self.k_ext_range):
            if not 1 <= lo <= hi:
                raise ValueError(f"empty or invalid range [{lo}, {hi}]")
        if not 0.0 < self.small_fraction < 1.0:
            raise ValueError("small_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class IbsConfig:
    time_limit_per_c: float = 180.0
    # optional budget in search rounds (one round = original, then reverse on failure);
    # makes a run independent of machine speed
    attempt_limit_per_c: int | None = None
    phase1_params: BsParams = BsParams(5, 2)
    small_params: BsParams = BsParams(10, 5)
    large_params: BsParams = BsParams(150, 20)
    small_fraction: float = 0.05
    weights: GreedyWeights = GreedyWeights()
    det_rate: float = 0.5
    seed: int = 0
    strict: bool = False
    hp_mode: bool = False
    hp: HpSettings = HpSettings()

    def __post_init__(self):
        if not 0.0 < self.small_fraction < 1.0:
            raise ValueError("small_fraction must lie in (0, 1)")
        if self.attempt_limit_per_c is not None and self.attempt_limit_per_c < 1:
            raise ValueError("attempt_limit_per_c must be >= 1")

    def bs(self, params: BsParams) -> BsParams:
        return replace(params, det_rate=self.det_rate, strict=self.strict)


@dataclass(frozen=True)
class CLogEntry:
    C: int
    attempts: int
    succeeded: bool
    elapsed: float = field(compare=False)
    phase: int = 2

    def line(self) -> str:
        return f"C={self.C} attempts={self.attempts} success={int(self.succeeded)} ms={int(self.elapsed * 1000)}"


@dataclass
class IbsResult:
    best_cycle_time: int
    best_solution: Solution
    time_to_best: float
    per_c_log: list[CLogEntry]
    start_bound: int
    elapsed: float


class _Runner:
    def __init__(self, spec: ProblemSpec, config: IbsConfig, hp: bool, log: Callable[[str], None] | None):
        self.spec = spec
        self.rspec = ProblemSpec(reverse_instance(spec.instance), spec.m)
        self.config = config
        self.hp = hp
        self.log = log
        self.counter = 0
        self._tables: dict[tuple[int, int, GreedyWeights], GreedyTable] = {}

    def _table(self, which: int, inst: Instance, C: int, w: GreedyWeights) -> GreedyTable:
        key = (which, C, w)
        tab = self._tables.get(key)
        if tab is None:
            tab = self._tables[key] = GreedyTable.build(inst, C, w)
        return tab

    def apply(self, which: int, C: int, params: BsParams, weights: GreedyWeights) -> Solution | None:
        """One beam search application; ``which`` is 0 for the original instance, 1 for the reverse."""
        rng = random.Random(f"{self.config.seed}/{self.counter}")
        self.counter += 1
        spec = self.spec if which == 0 else self.rspec
        if weights == self.config.weights:
            greedy = self._table(which, spec.instance, C, weights)
        else:
            greedy = GreedyTable.build(spec.instance, C, weights)
        out = beam_search(spec, C, params, rng=rng, greedy=greedy)
        if not out.success:
            return None
        return out.solution if which == 0 else reverse_solution(out.solution)

    def hp_draw(self) -> tuple[BsParams, GreedyWeights]:
        hp = self.config.hp
        r = random.Random(f"{self.config.seed}/hp/{self.counter}")
        k_bw = r.randint(*hp.k_bw_range)
        k_ext = r.randint(*hp.k_ext_range)
        if r.random() < hp.random_weight_prob:
            w = self.config.weights
        else:
            w = GreedyWeights(r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0))
        return self.config.bs(BsParams(k_bw, k_ext)), w

    def emit(self, entry: CLogEntry, sink: list[CLogEntry]) -> None:
        sink.append(entry)
        if self.log is not None:
            self.log(entry.line())

    def phase1(self, log: list[CLogEntry]) -> tuple[int, Solution]:
        """Raise C from the start bound until the cheap search finds a balance."""
        cfg = self.config
        total = self.spec.instance.total_time
        C = starting_cycle_time(self.spec)
        p1 = cfg.bs(cfg.phase1_params)
        while True:
            tc = time.perf_counter()
            sol = self.apply(0, C, p1, cfg.weights)
            attempts = 1
            if sol is None:
                sol = self.apply(1, C, p1, cfg.weights)
                attempts += 1
            self.emit(CLogEntry(C, attempts, sol is not None, time.perf_counter() - tc, phase=1), log)
            if sol is not None:
                return C, sol
            if C >= total:
                # one station holding everything is always feasible at C = sum of times
                raise RuntimeError(f"no solution found at C={C}; the instance data is inconsistent")
            C += 1

    def run(self) -> IbsResult:
        cfg = self.config
        t0 = time.perf_counter()
        log: list[CLogEntry] = []
        lb = starting_cycle_time(self.spec)
        C, sol = self.phase1(log)
        best_C, best_sol = C, sol
        time_to_best = time.perf_counter() - t0

        # phase 2
        budget = cfg.hp.time_limit if self.hp else cfg.time_limit_per_c
        frac = cfg.hp.small_fraction if self.hp else cfg.small_fraction
        rounds = cfg.attempt_limit_per_c
        small_rounds = math.ceil(frac * rounds) if rounds is not None else None
        small = cfg.bs(cfg.small_params)
        large = cfg.bs(cfg.large_params)
        C -= 1
        while True:
            if C < lb:
                # below the bound no balance exists; searching would only burn the budget
                self.emit(CLogEntry(C, 0, False, 0.0), log)
                break
            tc = time.perf_counter()
            attempts = n_round = 0
            sol = None
            while sol is None:
                spent = time.perf_counter() - tc
                if spent >= budget or (rounds is not None and n_round >= rounds):
                    break
                in_small = n_round < small_rounds if rounds is not None else spent < frac * budget
                for which in (0, 1):
                    params, weights = (small if in_small else large), cfg.weights
                    if self.hp:
                        drawn, weights = self.hp_draw()
                        if not in_small:
                            params = drawn
                    sol = self.apply(which, C, params, weights)
                    attempts += 1
                    if sol is not None:
                        break
                n_round += 1
            self.emit(CLogEntry(C, attempts, sol is not None, time.perf_counter() - tc), log)
            if sol is None:
                break
            best_C, best_sol = C, sol
            time_to_best = time.perf_counter() - t0
            C -= 1
        return IbsResult(best_C, best_sol, time_to_best, log, lb, time.perf_counter() - t0)


def run_ibs(spec: ProblemSpec, config: IbsConfig = IbsConfig(), log: Callable[[str], None] | None = None) -> IbsResult:
    if config.hp_mode:
        return run_ibs_hp(spec, config, log)
    return _Runner(spec, config, False, log).run()


def run_ibs_hp(spec: ProblemSpec, config: IbsConfig = IbsConfig(), log: Callable[[str], None] | None = None) -> IbsResult:
    """High-intensity variant: longer budget per cycle time, shorter cheap phase, and
    per-application random beam width, extension count and (half of the time) weights."""
    return _Runner(spec, config, True, log).run()
