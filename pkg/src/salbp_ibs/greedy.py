"""Greedy task values and the coin-flip task choice used when filling a station."""
from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate
from typing import Mapping, Sequence, Union

from .instance import Instance

EtaLike = Union[Sequence[float], Mapping[int, float]]


class EmptyAvailable(ValueError):
    pass


@dataclass(frozen=True)
class GreedyWeights:
    """kappa1 weighs relative processing time, kappa2 relative successor count."""

    kappa1: float = 0.0
    kappa2: float = 1.0

    def __post_init__(self):
        for k in (self.kappa1, self.kappa2):
            if not -1.0 <= k <= 1.0:
                raise ValueError(f"greedy weight {k} outside [-1, 1]")


@dataclass(frozen=True)
class GreedyTable:
    gamma: tuple[float, ...]
    eta: tuple[float, ...]
    gamma_min: float
    gamma_max: float

    @classmethod
    def build(cls, instance: Instance, C: int, weights: GreedyWeights) -> "GreedyTable":
        g = gamma_values(instance, C, weights)
        return cls(g, eta_values(g), min(g), max(g))


def gamma_values(instance: Instance, C: int, w: GreedyWeights) -> tuple[float, ...]:
    # with no arcs every successor count is 0 and the second term vanishes
    denom = instance.max_succ_all
    return tuple(
        w.kappa1 * (t / C) + (w.kappa2 * (len(s) / denom) if denom else 0.0)
        for t, s in zip(instance.times, instance.succ_all)
    )


def eta_values(gamma: Sequence[float]) -> tuple[float, ...]:
    """Shift gamma so its minimum maps to 1, then divide by gamma_max.

    gamma_max <= 0 would zero or flip the values, so the divisor falls back to 1
    there, as it does when a tiny gamma_max would overflow the quotient. A common
    positive divisor changes neither argmax nor the sampling distribution.
    """
    if not gamma:
        raise ValueError("gamma is empty")
    lo, hi = min(gamma), max(gamma)
    denom = hi if hi > 0 and math.isfinite((hi - lo + 1.0) / hi) else 1.0
    return tuple((g - lo + 1.0) / denom for g in gamma)


def argmax_task(tasks: Sequence[int], eta: EtaLike) -> int:
    return max(tasks, key=lambda i: (eta[i], -i))


def choice_probabilities(tasks: Sequence[int], eta: EtaLike) -> dict[int, float]:
    """Probabilistic-mode distribution p(i) = eta_i / sum of eta over ``tasks``."""
    total = sum(eta[i] for i in tasks)
    return {i: eta[i] / total for i in tasks}


def sample_task(tasks: Sequence[int], eta: EtaLike, rng: random.Random) -> int:
    acc = list(accumulate(eta[i] for i in tasks))
    k = bisect_right(acc, rng.random() * acc[-1])
    return tasks[min(k, len(tasks) - 1)]


def choose_task(
    avail: Sequence[int],
    sat: Sequence[int],
    eta: EtaLike,
    det_rate: float,
    rng: random.Random,
) -> int:
    """Pick the next task for the open station.

    A coin with ``P(heads) = det_rate`` decides the mode. Deterministic mode
    returns the highest-eta saturating task if any exists, else the highest-eta
    available task (ties go to the lowest id). Probabilistic mode samples from
    ``avail`` proportionally to eta; saturation plays no role there.

    ``avail`` is iterated in the given order, which together with the rng state
    fixes the outcome.
    """
    if not avail:
        raise EmptyAvailable("no available task to choose from")
    if len(avail) == 1:
        return avail[0]
    if det_rate >= 1.0 or rng.random() < det_rate:
        return argmax_task(sat if sat else avail, eta)
    return sample_task(avail, eta, rng)
