"""Move tables: constant-time permutation steps in (sub-run, offset) coordinates.

Each sub-run stores its head h, the image pi(h), and the index of the sub-run
containing pi(h).  A step computes pi(j) = pi(h) + offset and then walks
forward from that target sub-run to the last head <= pi(j).  After
balancing, the walk makes at most 2d head comparisons.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import List, NamedTuple, Tuple

import numpy as np

from .balance import BalancedRuns, balance_runs
from .textcore import (Kind, PermutationOracle, SuffixStructures, bwt_run_decompose,
                       oracle, run_decompose)


class Coords(NamedTuple):
    run: int
    offset: int


class MoveTable:
    def __init__(self, heads, images, n: int, d: int):
        heads = np.asarray(heads, dtype=np.int64)
        images = np.asarray(images, dtype=np.int64)
        if len(heads) == 0 or heads[0] != 0 or np.any(np.diff(heads) <= 0):
            raise ValueError("heads must be strictly increasing and start at 0")
        lengths = np.diff(np.append(heads, n))
        order = np.argsort(images)
        covered = np.append(images[order][1:], n) - images[order]
        if images[order][0] != 0 or not np.array_equal(covered, lengths[order]):
            raise ValueError("head images do not tile [0, n)")
        self.n = n
        self.d = d
        self.heads: List[int] = heads.tolist()
        self.images: List[int] = images.tolist()
        self.lengths: List[int] = lengths.tolist()
        self.target: List[int] = (np.searchsorted(heads, images, side="right") - 1).tolist()

    @classmethod
    def from_balanced(cls, b: BalancedRuns) -> "MoveTable":
        return cls(b.p_heads, b.q_values, b.n, b.d)

    def __len__(self) -> int:
        return len(self.heads)

    @property
    def rows(self) -> List[Tuple[int, int, int]]:
        return list(zip(self.heads, self.images, self.target))

    def _check(self, c: Coords) -> None:
        run, offset = c
        if not 0 <= run < len(self.heads) or not 0 <= offset < self.lengths[run]:
            raise ValueError(f"invalid coordinates {tuple(c)}")

    def step(self, run: int, offset: int) -> Tuple[int, int, int, int]:
        """Unchecked hot path: returns (run', offset', position, probes)."""
        pos = self.images[run] + offset
        k = self.target[run]
        heads = self.heads
        last = len(heads) - 1
        probes = 0
        while k < last:
            probes += 1
            if heads[k + 1] > pos:
                break
            k += 1
        return k, pos - heads[k], pos, probes

    def locate(self, j: int) -> Coords:
        if not 0 <= j < self.n:
            raise ValueError(f"position {j} out of range [0, {self.n})")
        k = bisect_right(self.heads, j) - 1
        return Coords(k, j - self.heads[k])

    def position(self, c: Coords) -> int:
        self._check(c)
        return self.heads[c.run] + c.offset


def build_move(b: BalancedRuns, perm: PermutationOracle = None) -> MoveTable:
    if perm is not None and perm is not b.perm:
        if not np.array_equal(perm.values[b.p_heads], b.q_values):
            raise ValueError("balanced runs were built for a different permutation")
    return MoveTable.from_balanced(b)


def move_step(t: MoveTable, c: Coords) -> Tuple[Coords, int]:
    t._check(c)
    run, offset, pos, _ = t.step(c.run, c.offset)
    return Coords(run, offset), pos


def move_locate(t: MoveTable, j: int) -> Coords:
    return t.locate(j)


def build_move_table(structures: SuffixStructures, kind: Kind, d: int) -> MoveTable:
    """Balanced move table for one of LF, psi, phi, phi^-1 of a text.

    LF and psi use the runs induced by BWT runs; phi and phi^-1 use their
    minimal runs.
    """
    kind = Kind(kind)
    perm = oracle(structures, kind)
    if kind in (Kind.LF, Kind.PSI):
        runs = bwt_run_decompose(structures, kind)
    else:
        runs = run_decompose(perm)
    return build_move(balance_runs(runs, perm, d), perm)


def check_move(t: MoveTable, perm: PermutationOracle) -> Tuple[int, int]:
    """Exhaustive comparison against an explicit permutation.

    Returns (mismatches, max probes); each position is stepped from its
    located coordinates and the result coordinates are checked too.
    """
    mismatches = 0
    max_probes = 0
    heads = t.heads
    for j in range(t.n):
        run, offset = t.locate(j)
        run2, offset2, pos, probes = t.step(run, offset)
        max_probes = max(max_probes, probes)
        if pos != perm.values[j] or heads[run2] + offset2 != pos or offset2 >= t.lengths[run2]:
            mismatches += 1
    return mismatches, max_probes
