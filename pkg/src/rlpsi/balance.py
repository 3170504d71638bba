"""Run splitting so that every run image overlaps fewer than 2d domain heads.

Given a permutation split into runs with heads P and head images Q, we add
heads until, for every pair of consecutive images q < q' (the last image
pairs with n), at most 2d - 1 heads fall in ``[q, q')``.  The number of
heads grows by at most a factor d / (d - 1).

Construction: while some gap ``[q, q')`` holds at least 2d heads, take the
(d+1)-th smallest head x in it and make ``pi^-1(x)`` a head, which puts x
into the image set and cuts the gap after its first d heads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from sortedcontainers import SortedList

from .textcore import PermutationOracle, RunDecomposition


@dataclass(frozen=True)
class BalancedRuns:
    d: int
    p_heads: np.ndarray
    q_values: np.ndarray
    perm: PermutationOracle
    base: RunDecomposition

    @property
    def q_heads_sorted(self) -> np.ndarray:
        return np.sort(self.q_values)

    @property
    def n(self) -> int:
        return self.perm.n

    def as_decomposition(self) -> RunDecomposition:
        return RunDecomposition(p_heads=self.p_heads, q_values=self.q_values, minimal=False)

    def __len__(self) -> int:
        return len(self.p_heads)


@dataclass
class BalanceReport:
    d: int
    base_heads: int
    heads: int
    max_occupancy: int
    worst_gap: Tuple[int, int]
    growth_ratio: float
    growth_ok: bool
    occupancy_ok: bool
    subset_ok: bool
    images_ok: bool

    @property
    def passed(self) -> bool:
        return self.growth_ok and self.occupancy_ok and self.subset_ok and self.images_ok


class BalanceError(RuntimeError):
    pass


def balance_runs(runs: RunDecomposition, perm: PermutationOracle, d: int,
                 inverse: Optional[np.ndarray] = None,
                 limit: Optional[int] = None) -> BalancedRuns:
    """Add heads to ``runs`` until every image gap holds fewer than 2d heads.

    Raises BalanceError if the head count passes ``limit`` (default
    d|P|/(d-1) + 1), which would mean the growth bound no longer holds.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    n = perm.n
    values = perm.values
    inv = perm.inverse() if inverse is None else inverse
    heads = SortedList(int(p) for p in runs.p_heads)
    images = SortedList(int(values[p]) for p in runs.p_heads)
    if limit is None:
        limit = d * len(runs) // (d - 1) + 1

    # only gaps already holding 2d heads need work; splits re-queue what they touch
    q0 = np.fromiter(images, dtype=np.int64, count=len(images))
    occ = gap_occupancy(np.asarray(runs.p_heads), q0, n)
    pending = q0[occ >= 2 * d].tolist()
    while pending:
        q = pending.pop()
        k = images.bisect_left(q)
        q_next = images[k + 1] if k + 1 < len(images) else n
        lo = heads.bisect_left(q)
        if heads.bisect_left(q_next) - lo < 2 * d:
            continue
        x = heads[lo + d]
        h = int(inv[x])
        heads.add(h)
        images.add(x)
        if len(heads) > limit:
            raise BalanceError(
                f"head count {len(heads)} exceeds {limit} (base {len(runs)}, d={d})")
        pending.extend((q, x))
        # the new head h lands in some other gap and may overfill it
        pending.append(images[images.bisect_right(h) - 1])

    p = np.fromiter(heads, dtype=np.int64, count=len(heads))
    return BalancedRuns(d=d, p_heads=p, q_values=values[p], perm=perm, base=runs)


def gap_occupancy(p_heads: np.ndarray, q_values: np.ndarray, n: int) -> np.ndarray:
    """Heads falling in each gap [q_k, q_{k+1}) of the sorted images (last gap ends at n)."""
    q = np.sort(np.asarray(q_values))
    ends = np.append(q[1:], n)
    p = np.sort(np.asarray(p_heads))
    return np.searchsorted(p, ends, side="left") - np.searchsorted(p, q, side="left")


def verify_balanced(b: BalancedRuns) -> BalanceReport:
    n = b.n
    occ = gap_occupancy(b.p_heads, b.q_values, n)
    q = np.sort(np.asarray(b.q_values))
    worst = int(np.argmax(occ)) if len(occ) else 0
    worst_gap = (int(q[worst]), int(q[worst + 1]) if worst + 1 < len(q) else n) if len(q) else (0, n)
    base = len(b.base)
    heads = len(b.p_heads)
    p = np.asarray(b.p_heads)
    strict = bool(np.all(np.diff(p) > 0)) and (len(p) == 0 or (p[0] >= 0 and p[-1] < n))
    return BalanceReport(
        d=b.d,
        base_heads=base,
        heads=heads,
        max_occupancy=int(occ.max()) if len(occ) else 0,
        worst_gap=worst_gap,
        growth_ratio=heads / base if base else float("inf"),
        growth_ok=heads * (b.d - 1) <= b.d * base,
        occupancy_ok=bool(np.all(occ < 2 * b.d)),
        subset_ok=strict and bool(np.all(np.isin(b.base.p_heads, p))),
        images_ok=bool(np.array_equal(np.asarray(b.q_values), b.perm.values[p])),
    )
