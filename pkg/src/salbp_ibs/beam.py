"""Beam search for the fixed-cycle-time feasibility problem (SALBP-F).

Stations are filled one at a time. Each beam entry is extended ``k_ext`` times
by the randomised greedy station filler; extensions are ranked by the
bin-packing style bound ``ceil(unassigned time / C)`` and the best ``k_bw``
survive into the next beam.
"""
from __future__ import annotations

import random
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from itertools import accumulate
from typing import Callable, Sequence, TypeVar

from .greedy import GreedyTable, GreedyWeights
from .instance import Instance, ProblemSpec
from .solution import PartialSolution, Solution

T = TypeVar("T")


@dataclass(frozen=True)
class BsParams:
    k_bw: int
    k_ext: int
    det_rate: float = 0.5
    # strict: keep expanding until the beam is empty instead of stopping at the first complete solution
    strict: bool = False
    # "ext": an extension is dropped if its new station equals one already in the extension set;
    # "beam": compare against the same-index station of the parent beam instead
    dedup: str = "ext"

    def __post_init__(self):
        if self.k_bw < 1 or self.k_ext < 1:
            raise ValueError(f"k_bw and k_ext must be >= 1, got {self.k_bw}, {self.k_ext}")
        if not 0.0 <= self.det_rate <= 1.0:
            raise ValueError(f"det_rate {self.det_rate} outside [0, 1]")
        if self.dedup not in ("ext", "beam"):
            raise ValueError(f"unknown dedup scope {self.dedup!r}")


@dataclass(frozen=True)
class BsOutcome:
    success: bool
    solution: Solution | None
    extensions: int
    beams: int


class _Node:
    """Beam entry (0-based task indices internally).

    ``waiting[i]`` counts unassigned direct predecessors of task i; ``eligible``
    holds the unassigned tasks with none waiting, encoded as sorted keys
    ``time * n + index`` so the tasks fitting a remaining capacity form a prefix.
    """

    __slots__ = ("filled", "waiting", "eligible", "unassigned_time")

    def __init__(self, filled, waiting, eligible, unassigned_time):
        self.filled: tuple[frozenset[int], ...] = filled
        self.waiting: list[int] = waiting
        self.eligible: list[int] = eligible
        self.unassigned_time: int = unassigned_time


class _Filler:
    """Station filling over one instance, cycle time and greedy table."""

    def __init__(self, instance: Instance, C: int, greedy: GreedyTable, det_rate: float):
        n = self.n = instance.n
        self.C = C
        self.times = instance.times
        self.arcs = instance.arcs
        self.keys = [t * n + i for i, t in enumerate(instance.times)]
        self.succ_keys = [[self.keys[s - 1] for s in succ] for succ in instance.direct_succs]
        self.eta_of = {self.keys[i]: e for i, e in enumerate(greedy.eta)}
        # rank by eta descending, task index ascending: min(rank) is the argmax with lowest-id ties
        order = sorted(range(n), key=lambda i: (-greedy.eta[i], i))
        self.rank_of = {self.keys[i]: r for r, i in enumerate(order)}
        self.det_rate = det_rate

    def root(self, assigned: frozenset[int] = frozenset()) -> tuple[list[int], list[int]]:
        """Initial (waiting, eligible) state given the assigned tasks (1-based ids)."""
        waiting = [0] * self.n
        for i, j in self.arcs:
            if i not in assigned:
                waiting[j - 1] += 1
        eligible = sorted(self.keys[j] for j in range(self.n) if waiting[j] == 0 and j + 1 not in assigned)
        return waiting, eligible

    def fill(self, waiting: list[int], eligible: list[int], rng: random.Random) -> tuple[list[int], int]:
        """Fill one station in place; return its task indices in choice order and its load.

        A task is available while all its predecessors are assigned (the open
        station counts) and it fits the remaining capacity; it saturates the
        station when it fits exactly. The candidate order handed to the choice
        rule is ascending (time, index).
        """
        n, det_rate = self.n, self.det_rate
        c_rem = self.C
        station: list[int] = []
        while eligible:
            k = bisect_right(eligible, c_rem * n + n - 1)
            if k == 0:
                break
            if k == 1:
                pos = 0
            elif det_rate >= 1.0 or rng.random() < det_rate:
                a = bisect_left(eligible, c_rem * n, 0, k)
                pool = eligible[a:k] if a < k else eligible[:k]
                pos = bisect_left(eligible, min(pool, key=self.rank_of.__getitem__), 0, k)
            else:
                acc = list(accumulate(map(self.eta_of.__getitem__, eligible[:k])))
                pos = min(bisect_right(acc, rng.random() * acc[-1]), k - 1)
            key = eligible.pop(pos)
            j = key % n
            c_rem -= self.times[j]
            station.append(j)
            for sk in self.succ_keys[j]:
                s = sk % n
                waiting[s] -= 1
                if waiting[s] == 0:
                    insort(eligible, sk)
        return station, self.C - c_rem


def extend_partial_solution(
    instance: Instance,
    partial: PartialSolution,
    l: int,
    C: int,
    greedy: GreedyTable,
    params: BsParams,
    rng: random.Random,
) -> frozenset[int]:
    """Return the tasks (1-based ids) placed into station ``l`` when extending ``partial``."""
    if l != len(partial.filled) + 1:
        raise ValueError(f"station index {l} does not follow {len(partial.filled)} filled stations")
    filler = _Filler(instance, C, greedy, params.det_rate)
    waiting, eligible = filler.root(partial.assigned)
    station, _ = filler.fill(waiting, eligible, rng)
    return frozenset(j + 1 for j in station)


def lower_bound(partial: PartialSolution, instance: Instance, C: int) -> int:
    return -(-(instance.total_time - partial.assigned_time) // C)


def select_solutions(
    ext: Sequence[T],
    k_bw: int,
    instance: Instance,
    C: int,
    bound: Callable[[T], int] | None = None,
) -> list[T]:
    """Stable sort by lower bound (generation order breaks ties) and keep the first ``k_bw``."""
    if bound is None:
        bound = lambda p: lower_bound(p, instance, C)  # noqa: E731
    return sorted(ext, key=bound)[:k_bw]


def beam_search(
    spec: ProblemSpec,
    C: int,
    params: BsParams,
    weights: GreedyWeights | None = None,
    rng: random.Random | None = None,
    greedy: GreedyTable | None = None,
    on_beam: Callable[[int, list[tuple[frozenset[int], ...]]], None] | None = None,
) -> BsOutcome:
    """Decide feasibility of ``spec`` at cycle time ``C``.

    ``on_beam(l, entries)`` is called after each selection with the surviving
    partial solutions (1-based stations), which makes the beam observable in tests.
    """
    inst, m = spec.instance, spec.m
    if C < max(inst.times):
        return BsOutcome(False, None, 0, 0)
    if greedy is None:
        greedy = GreedyTable.build(inst, C, weights or GreedyWeights())
    if rng is None:
        rng = random.Random(0)
    filler = _Filler(inst, C, greedy, params.det_rate)
    fill = filler.fill
    k_ext = params.k_ext
    if params.det_rate >= 1.0 and params.dedup == "ext":
        # every extension of a parent would be the same station; the copies are discarded anyway
        k_ext = 1

    waiting, eligible = filler.root()
    beam = [_Node((), waiting, eligible, inst.total_time)]
    complete: list[_Node] = []
    n_ext = n_beams = 0
    l = 0
    while beam:
        l += 1
        n_beams += 1
        ext: list[_Node] = []
        seen: set[frozenset[int]] = set()
        if params.dedup == "beam":
            seen = {p.filled[l - 1] if len(p.filled) >= l else frozenset() for p in beam}
        for parent in beam:
            for _ in range(k_ext):
                waiting = parent.waiting[:]
                eligible = parent.eligible[:]
                tasks, load = fill(waiting, eligible, rng)
                n_ext += 1
                station = frozenset(tasks)
                child = _Node(parent.filled + (station,), waiting, eligible, parent.unassigned_time - load)
                if child.unassigned_time == 0:
                    complete.append(child)
                    if not params.strict:
                        return BsOutcome(True, _to_solution(child, inst, m), n_ext, n_beams)
                elif l < m:
                    if station in seen:
                        continue
                    if params.dedup == "ext":
                        seen.add(station)
                    ext.append(child)
        # ceil(unassigned / C) is monotone in unassigned time, so sorting on the time is equivalent
        beam = sorted(ext, key=lambda nd: -(-nd.unassigned_time // C))[: params.k_bw]
        if on_beam is not None:
            on_beam(l, [tuple(frozenset(j + 1 for j in s) for s in nd.filled) for nd in beam])
    if not complete:
        return BsOutcome(False, None, n_ext, n_beams)
    times = inst.times
    best = min(complete, key=lambda nd: max(sum(times[j] for j in s) for s in nd.filled))
    return BsOutcome(True, _to_solution(best, inst, m), n_ext, n_beams)


def _to_solution(node: _Node, instance: Instance, m: int) -> Solution:
    return Solution.from_stations(
        (frozenset(j + 1 for j in s) for s in node.filled), instance.name, m
    )
