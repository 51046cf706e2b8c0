"""SALBP instances: parsing, derived precedence sets, reversal and IP export.

Instance files follow the precedence-graph format of the public SALBP
benchmark collection::

    <n>
    <t_1>
    ...
    <t_n>
    i,j          (one precedence arc per line, 1-based task ids)
    -1,-1

Trailing whitespace, CRLF line endings and blank lines after the terminator
are tolerated. Everything else is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

_ARC_RE = re.compile(r"(-?\d+),(-?\d+)")
_INT_RE = re.compile(r"-?\d+")


class InstanceError(ValueError):
    """Base class for malformed or invalid instances."""


class InstanceSyntaxError(InstanceError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


class NonPositiveTime(InstanceError):
    pass


class CycleDetected(InstanceError):
    pass


class BadArcEndpoint(InstanceError):
    pass


@dataclass(frozen=True)
class Instance:
    """Immutable SALBP instance. Task ids are 1..n; per-task tuples are indexed by id - 1.

    Build through :meth:`build` (or :func:`parse_instance`) so that the derived
    precedence data is consistent with ``arcs``.
    """

    name: str
    n: int
    times: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]
    pred_sets: tuple[frozenset[int], ...] = field(repr=False)
    succ_all: tuple[frozenset[int], ...] = field(repr=False)
    max_succ_all: int = field(repr=False)
    direct_preds: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    direct_succs: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def build(cls, name: str, times: Iterable[int], arcs: Iterable[tuple[int, int]]) -> "Instance":
        times = tuple(int(t) for t in times)
        n = len(times)
        if n < 1:
            raise InstanceError("instance needs at least one task")
        for i, t in enumerate(times, start=1):
            if t <= 0:
                raise NonPositiveTime(f"task {i} has processing time {t}")
        arcs = frozenset((int(i), int(j)) for i, j in arcs)
        for i, j in arcs:
            if not (1 <= i <= n and 1 <= j <= n):
                raise BadArcEndpoint(f"arc ({i},{j}) outside 1..{n}")
        succ = _closure(n, arcs)
        preds: list[set[int]] = [set() for _ in range(n)]
        for i in range(1, n + 1):
            for j in succ[i - 1]:
                preds[j - 1].add(i)
        dpred: list[list[int]] = [[] for _ in range(n)]
        dsucc: list[list[int]] = [[] for _ in range(n)]
        for i, j in sorted(arcs):
            dsucc[i - 1].append(j)
            dpred[j - 1].append(i)
        return cls(
            name=name,
            n=n,
            times=times,
            arcs=arcs,
            pred_sets=tuple(frozenset(p) for p in preds),
            succ_all=succ,
            max_succ_all=max(len(s) for s in succ),
            direct_preds=tuple(tuple(p) for p in dpred),
            direct_succs=tuple(tuple(s) for s in dsucc),
        )

    @property
    def total_time(self) -> int:
        return sum(self.times)

    def time(self, task: int) -> int:
        return self.times[task - 1]


@dataclass(frozen=True)
class ProblemSpec:
    instance: Instance
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"number of stations must be >= 1, got {self.m}")


def _closure(n: int, arcs: frozenset[tuple[int, int]]) -> tuple[frozenset[int], ...]:
    # Kahn order doubles as cycle detection; reachability is accumulated as int bitsets.
    succs: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i, j in arcs:
        if i == j:
            raise CycleDetected(f"self-loop on task {i}")
        succs[i - 1].append(j - 1)
        indeg[j - 1] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    k = 0
    while k < len(order):
        v = order[k]
        k += 1
        for w in succs[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    if len(order) < n:
        stuck = sorted(v + 1 for v in range(n) if indeg[v] > 0)
        raise CycleDetected(f"precedence graph has a cycle through tasks {stuck}")
    reach = [0] * n
    for v in reversed(order):
        bits = 0
        for w in succs[v]:
            bits |= (1 << w) | reach[w]
        reach[v] = bits
    return tuple(frozenset(w + 1 for w in range(n) if bits >> w & 1) for bits in reach)


def transitive_successors(instance: Instance) -> dict[int, frozenset[int]]:
    """All tasks reachable from each task along precedence arcs (excluding the task itself)."""
    succ = _closure(instance.n, instance.arcs)
    return {i + 1: s for i, s in enumerate(succ)}


def parse_instance(text: Union[bytes, str], name: str) -> Instance:
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as e:
            raise InstanceSyntaxError(1, f"non-ASCII content ({e})") from None
    lines = [ln.rstrip() for ln in text.split("\n")]
    # a final newline leaves one empty element; blank trailing lines are allowed
    # only after the terminator, which is checked below
    pos = 0

    def next_line() -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            raise InstanceSyntaxError(len(lines), "unexpected end of file")
        pos += 1
        return pos, lines[pos - 1]

    lineno, line = next_line()
    if not _INT_RE.fullmatch(line):
        raise InstanceSyntaxError(lineno, f"expected task count, got {line!r}")
    n = int(line)
    if n < 1:
        raise InstanceSyntaxError(lineno, f"task count must be positive, got {n}")
    times = []
    for k in range(1, n + 1):
        lineno, line = next_line()
        if not _INT_RE.fullmatch(line):
            raise InstanceSyntaxError(lineno, f"expected processing time of task {k}, got {line!r}")
        t = int(line)
        if t <= 0:
            raise NonPositiveTime(f"line {lineno}: task {k} has processing time {t}")
        times.append(t)
    arcs = []
    while True:
        lineno, line = next_line()
        m = _ARC_RE.fullmatch(line)
        if not m:
            raise InstanceSyntaxError(lineno, f"expected arc 'i,j' or terminator '-1,-1', got {line!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if (i, j) == (-1, -1):
            break
        if not (1 <= i <= n and 1 <= j <= n):
            raise BadArcEndpoint(f"line {lineno}: arc ({i},{j}) outside 1..{n}")
        arcs.append((i, j))
    for k in range(pos, len(lines)):
        if lines[k]:
            raise InstanceSyntaxError(k + 1, f"content after terminator: {lines[k]!r}")
    return Instance.build(name, times, arcs)


def format_instance(instance: Instance) -> str:
    out = [str(instance.n)]
    out += [str(t) for t in instance.times]
    out += [f"{i},{j}" for i, j in sorted(instance.arcs)]
    out.append("-1,-1")
    return "\n".join(out) + "\n"


def reverse_instance(instance: Instance) -> Instance:
    return Instance.build(instance.name, instance.times, ((j, i) for i, j in instance.arcs))


def starting_cycle_time(spec: ProblemSpec) -> int:
    times = spec.instance.times
    return max(max(times), -(-sum(times) // spec.m))


def _linear(terms: list[tuple[int, str]]) -> str:
    parts = []
    for coef, var in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if not parts:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def export_ip_model(spec: ProblemSpec) -> str:
    """Render the SALBP-2 integer program in CPLEX LP format.

    Variables ``x_i_s`` (task i at station s) are binary, ``z`` is the
    continuous cycle time. One precedence row is written per arc of the graph;
    transitivity makes rows for implied pairs redundant.
    """
    inst, m = spec.instance, spec.m
    x = lambda i, s: f"x_{i}_{s}"  # noqa: E731
    lines = [f"\\ SALBP-2 instance {inst.name}: n={inst.n} m={m}", "Minimize", " obj: z", "Subject To"]
    for i in range(1, inst.n + 1):
        lines.append(f" assign_{i}: {_linear([(1, x(i, s)) for s in range(1, m + 1)])} = 1")
    for i, j in sorted(inst.arcs):
        terms = [(s, x(i, s)) for s in range(1, m + 1)] + [(-s, x(j, s)) for s in range(1, m + 1)]
        lines.append(f" prec_{i}_{j}: {_linear(terms)} <= 0")
    for s in range(1, m + 1):
        terms = [(inst.times[i - 1], x(i, s)) for i in range(1, inst.n + 1)] + [(-1, "z")]
        lines.append(f" cap_{s}: {_linear(terms)} <= 0")
    lines += ["Bounds", " z >= 0", "Binary"]
    lines += [f" {x(i, s)}" for i in range(1, inst.n + 1) for s in range(1, m + 1)]
    lines.append("End")
    return "\n".join(lines) + "\n"
