"""Greedy derivation schedules and their exact combinatorial bounds.

Given a strictly positive rational weight vector a on the point set, the
schedule picks at each step the point whose visit count lags furthest below
its target share: i_{k+1} minimizes omega_i(k) - k*a_i, ties to the smallest
id.  The deviations omega_i(k) - k*a_i then stay inside [1 - |I|, 1].

All arithmetic is exact; internally the deviations are scaled by the common
denominator of a so the hot loop runs on integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError
from .game import INF, Strategy, rationalize_matrix, _column_payoff


@dataclass(frozen=True)
class Schedule:
    """A derivation sequence with its weight vector and visit counters."""

    ids: tuple
    a: tuple  # strictly positive Fractions summing to 1, aligned with ids
    K: int
    sequence: tuple  # ids, length K

    @property
    def size(self) -> int:
        return len(self.ids)

    def omega_final(self) -> dict:
        counts = {pid: 0 for pid in self.ids}
        for pid in self.sequence:
            counts[pid] += 1
        return counts

    def omega_history(self):
        """Yield (k, counts) for k = 0..K; counts is reused, copy if kept."""
        counts = {pid: 0 for pid in self.ids}
        yield 0, counts
        for k, pid in enumerate(self.sequence, start=1):
            counts[pid] += 1
            yield k, counts

    def to_report(self) -> dict:
        return {"a": list(self.a), "K": self.K, "sequence": list(self.sequence)}


def _validated_weights(a, size: Optional[int] = None) -> tuple:
    weights = tuple(Fraction(v) for v in a)
    if size is not None and len(weights) != size:
        raise PreconditionError("weight vector length does not match the id list")
    if any(w <= 0 for w in weights):
        raise PreconditionError("schedule weights must be strictly positive")
    if sum(weights) != 1:
        raise PreconditionError("schedule weights must sum to 1 exactly")
    return weights


def build_schedule(a, K: int, ids: Optional[Sequence[int]] = None) -> Schedule:
    """Run the greedy rule for K steps (smallest-id tie-break)."""
    if K < 0:
        raise PreconditionError("horizon K must be >= 0")
    if isinstance(a, Strategy):
        a = a.weights
    weights = _validated_weights(a, None if ids is None else len(tuple(ids)))
    m = len(weights)
    id_list = tuple(ids) if ids is not None else tuple(range(1, m + 1))
    if len(set(id_list)) != m:
        raise PreconditionError("schedule ids must be distinct")
    if list(id_list) != sorted(id_list):
        raise PreconditionError("schedule ids must be sorted ascending")

    d = math.lcm(*(w.denominator for w in weights))
    n = [int(w * d) for w in weights]  # a_i = n_i / d
    # v_i tracks d*(omega_i(k) - k*a_i); pick argmin, then advance one step
    v = [0] * m
    seq = []
    rng = range(m)
    for _ in range(K):
        j = v.index(min(v))
        seq.append(id_list[j])
        v = [v[i] - n[i] for i in rng]
        v[j] += d
    return Schedule(ids=id_list, a=weights, K=K, sequence=tuple(seq))


@dataclass(frozen=True)
class BoundsReport:
    max_dev: Fraction
    min_dev: Fraction
    verdict: bool

    def to_report(self) -> dict:
        return {"max_dev": self.max_dev, "min_dev": self.min_dev, "verdict": self.verdict}


def check_bounds(schedule: Schedule) -> BoundsReport:
    """Exact verification of 1 - |I| <= omega_i(k) - k*a_i <= 1 at every step."""
    m = schedule.size
    d = math.lcm(*(w.denominator for w in schedule.a))
    n = [int(w * d) for w in schedule.a]
    pos = {pid: i for i, pid in enumerate(schedule.ids)}
    v = [0] * m
    max_num, min_num = 0, 0
    rng = range(m)
    for pid in schedule.sequence:
        j = pos[pid]
        v = [v[i] - n[i] for i in rng]
        v[j] += d
        hi, lo = max(v), min(v)
        if hi > max_num:
            max_num = hi
        if lo < min_num:
            min_num = lo
    max_dev = Fraction(max_num, d)
    min_dev = Fraction(min_num, d)
    return BoundsReport(
        max_dev=max_dev,
        min_dev=min_dev,
        verdict=(max_dev <= 1 and min_dev >= 1 - m),
    )


@dataclass(frozen=True)
class WeightedFloorReport:
    """Smallest c >= 0 with sum_i omega_i(k) G_ij >= k*v_prime - c throughout."""

    c: Fraction
    precondition_ok: bool
    worst_k: int
    worst_column: int

    def to_report(self) -> dict:
        return {
            "c": self.c,
            "precondition_ok": self.precondition_ok,
            "worst_k": self.worst_k,
            "worst_column": self.worst_column,
        }


def weighted_floor(schedule: Schedule, matrix, v_prime) -> WeightedFloorReport:
    """Exact constant for the schedule/game inequality.

    The schedule is expected to come from a weight vector whose column
    payoffs all exceed v_prime; a violation is reported in the result, not
    raised.  Infinite entries weighted by omega_i = 0 contribute nothing,
    and once touched they satisfy the column constraint outright.
    """
    rows = rationalize_matrix(matrix)
    m = schedule.size
    if len(rows) != m:
        raise PreconditionError("matrix size does not match the schedule")
    v_prime = Fraction(v_prime)
    precondition_ok = all(
        _column_payoff(rows, schedule.a, j) > v_prime for j in range(m)
    )

    pos = {pid: i for i, pid in enumerate(schedule.ids)}
    # running column sums S_j(k) = sum_i omega_i(k) G_ij; INF stays INF
    sums: list = [Fraction(0)] * m
    c = Fraction(0)
    worst_k, worst_j = 0, 0
    for k, pid in enumerate(schedule.sequence, start=1):
        i = pos[pid]
        for j in range(m):
            if sums[j] == INF:
                continue
            entry = rows[i][j]
            sums[j] = INF if entry == INF else sums[j] + entry
            if sums[j] != INF:
                gap = k * v_prime - sums[j]
                if gap > c:
                    c, worst_k, worst_j = gap, k, j
    return WeightedFloorReport(
        c=c, precondition_ok=precondition_ok, worst_k=worst_k, worst_column=worst_j
    )
