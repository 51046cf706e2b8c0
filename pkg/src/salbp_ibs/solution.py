"""Complete and partial line balances, validation and reverse conversion."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .instance import Instance, ProblemSpec


@dataclass(frozen=True)
class Solution:
    """Ordered station contents ``<S_1, ..., S_m>``; trailing stations may be empty."""

    stations: tuple[frozenset[int], ...]
    instance_name: str
    m: int

    @classmethod
    def from_stations(cls, stations: Iterable[Iterable[int]], instance_name: str, m: int | None = None) -> "Solution":
        st = [frozenset(s) for s in stations]
        if m is None:
            m = len(st)
        if len(st) < m:
            st += [frozenset()] * (m - len(st))
        return cls(tuple(st), instance_name, m)

    def loads(self, instance: Instance) -> list[int]:
        return [sum(instance.times[j - 1] for j in s) for s in self.stations]

    def station_of(self) -> dict[int, int]:
        return {j: k for k, s in enumerate(self.stations, start=1) for j in s}


@dataclass(frozen=True)
class PartialSolution:
    filled: tuple[frozenset[int], ...]
    assigned: frozenset[int]
    assigned_time: int

    @classmethod
    def empty(cls) -> "PartialSolution":
        return cls((), frozenset(), 0)

    @classmethod
    def from_stations(cls, stations: Iterable[Iterable[int]], instance: Instance) -> "PartialSolution":
        filled = tuple(frozenset(s) for s in stations)
        assigned = frozenset().union(*filled)
        return cls(filled, assigned, sum(instance.times[j - 1] for j in assigned))

    def extended(self, station: frozenset[int], instance: Instance) -> "PartialSolution":
        return PartialSolution(
            self.filled + (station,),
            self.assigned | station,
            self.assigned_time + sum(instance.times[j - 1] for j in station),
        )


@dataclass(frozen=True)
class Violation:
    kind: str  # "stations" | "partition" | "precedence" | "capacity"
    message: str
    task: int | None = None
    station: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def validate_solution(spec: ProblemSpec, sol: Solution, C: int) -> list[Violation]:
    """Return every violated condition; an empty list means the solution is feasible at cycle time C."""
    inst, m = spec.instance, spec.m
    out: list[Violation] = []
    if len(sol.stations) != m:
        out.append(Violation("stations", f"expected {m} stations, got {len(sol.stations)}"))

    seen: dict[int, int] = {}
    for k, s in enumerate(sol.stations, start=1):
        for j in sorted(s):
            if not 1 <= j <= inst.n:
                out.append(Violation("partition", f"unknown task {j} at station {k}", task=j, station=k))
            elif j in seen:
                out.append(Violation("partition", f"task {j} at stations {seen[j]} and {k}", task=j, station=k))
            else:
                seen[j] = k
    for j in range(1, inst.n + 1):
        if j not in seen:
            out.append(Violation("partition", f"task {j} is not assigned", task=j))

    for j, k in sorted(seen.items()):
        late = sorted(i for i in inst.pred_sets[j - 1] if seen.get(i, m + 1) > k)
        if late:
            out.append(Violation(
                "precedence",
                f"task {j} at station {k} needs {late} at or before station {k}",
                task=j,
                station=k,
            ))

    for k, s in enumerate(sol.stations, start=1):
        load = sum(inst.times[j - 1] for j in s if 1 <= j <= inst.n)
        if load > C:
            out.append(Violation("capacity", f"station {k} load {load} > {C}", station=k))
    return out


def cycle_time(sol: Solution, instance: Instance) -> int:
    return max(sol.loads(instance))


def reverse_solution(sol: Solution) -> Solution:
    """Map a solution of the reversed instance to the original one (station order flipped)."""
    return Solution(tuple(reversed(sol.stations)), sol.instance_name, sol.m)


def format_solution(sol: Solution, C: int) -> str:
    lines = [f"{sol.instance_name} {sol.m} {C}"]
    lines += [" ".join(str(j) for j in sorted(s)) for s in sol.stations]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[Solution, int]:
    """Inverse of :func:`format_solution`; returns the solution and the cycle time from the header."""
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("empty solution file")
    head = lines[0].rsplit(None, 2)
    if len(head) != 3:
        raise ValueError(f"bad header {lines[0]!r}; expected 'name m C'")
    name, m, C = head[0], int(head[1]), int(head[2])
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"header announces {m} stations, file has {len(body)}")
    stations: Sequence[frozenset[int]] = tuple(frozenset(int(tok) for tok in ln.split()) for ln in body)
    return Solution(tuple(stations), name, m), C
