"""Constant-time psi over tau plus three bitvectors.

Sub-runs of psi are numbered in F order (by head position).  The index keeps

* ``tau``: for each F sub-run, the rank of its head's psi image among all
  head images, i.e. which L-order sub-run it maps onto;
* ``bf``: sparse vector of F-order sub-run heads;
* ``bl``: sparse vector of head images (L-order sub-run boundaries);
* ``bfl``: 2r' plain bits interleaving the two boundary sets, 0 for an F
  boundary and 1 for an L boundary, 0 first on a tie.

A step from coordinates (i, g) reads ``psi(j) = bl.select1(tau(i)+1) + g``,
gets the first F sub-run overlapping the target L sub-run from ``bfl``
without any rank on a sparse vector, then walks at most 2d F heads forward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .balance import balance_runs, verify_balanced
from .bitvec import PlainBits, SparseBits
from .movetab import Coords, MoveTable, build_move
from .textcore import (Convention, Kind, PermutationOracle, RunDecomposition,
                       SuffixStructures, Text, build_suffix_structures, bwt_run_decompose,
                       oracle)


def _bits_for(values: int) -> int:
    """Bits needed to store integers in [0, values)."""
    return max(1, (values - 1).bit_length())


@dataclass(frozen=True)
class TauPermutation:
    char_of_subrun: List[int]
    block_start: List[int]
    tau_flat: List[int]

    @classmethod
    def from_lists(cls, chars: Sequence[int], tau: Sequence[int], sigma: int) -> "TauPermutation":
        chars = [int(c) for c in chars]
        counts = np.bincount(np.asarray(chars, dtype=np.int64), minlength=sigma) if chars else np.zeros(sigma, int)
        block_start = [0] + np.cumsum(counts).tolist()
        return cls(char_of_subrun=chars, block_start=block_start, tau_flat=[int(t) for t in tau])

    def __len__(self) -> int:
        return len(self.tau_flat)

    def __call__(self, i: int) -> int:
        return self.tau_flat[i]

    def inverse(self) -> List[int]:
        inv = [0] * len(self.tau_flat)
        for i, t in enumerate(self.tau_flat):
            inv[t] = i
        return inv

    def is_permutation(self) -> bool:
        return sorted(self.tau_flat) == list(range(len(self.tau_flat)))

    def blocks_increasing(self) -> bool:
        b = self.block_start
        return all(
            all(self.tau_flat[k] < self.tau_flat[k + 1] for k in range(b[c], b[c + 1] - 1))
            for c in range(len(b) - 1)
        )


@dataclass
class PsiIndex:
    n: int
    sigma: int
    d: int
    tau: TauPermutation
    bl: SparseBits
    bf: SparseBits
    bfl: PlainBits
    convention: Convention = Convention.SUFFIX
    alphabet_map: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.tau_flat = self.tau.tau_flat
        self._last = len(self.tau_flat) - 1

    @property
    def r_prime(self) -> int:
        return len(self.tau)

    @property
    def sentinel(self) -> bool:
        return self.sigma == len(self.alphabet_map) + 1

    def step(self, i: int, g: int) -> Tuple[int, int, int, int]:
        """Unchecked hot path: returns (i', g', psi(j), probes)."""
        t = self.tau_flat[i]
        pos = self.bl.select1(t + 1) + g
        # rank0(select1(t+1)) - 1 with an inclusive rank is select1(t+1) - t - 1
        k = self.bfl.select1(t + 1) - t - 1
        bf = self.bf
        head = bf.select1(k + 1)
        last = self._last
        probes = 0
        while k < last:
            probes += 1
            nxt = bf.select1(k + 2)
            if nxt > pos:
                break
            k += 1
            head = nxt
        return k, pos - head, pos, probes

    def ell(self, i: int) -> int:
        """Index of the first F sub-run overlapping the L sub-run that i maps to."""
        return self.bfl.rank0(self.bfl.select1(self.tau_flat[i] + 1)) - 1

    def run_length(self, run: int) -> int:
        end = self.bf.select1(run + 2) if run + 1 < self.r_prime else self.n
        return end - self.bf.select1(run + 1)

    def check_coords(self, c: Coords) -> None:
        run, offset = c
        if not 0 <= run < self.r_prime or not 0 <= offset < self.run_length(run):
            raise ValueError(f"invalid coordinates {tuple(c)}")


def interleave(f_heads: Sequence[int], l_heads: Sequence[int]) -> List[int]:
    """Merge two sorted boundary lists: 0 per F boundary, 1 per L boundary, 0 first on ties."""
    out = []
    a = b = 0
    while a < len(f_heads) or b < len(l_heads):
        if b == len(l_heads) or (a < len(f_heads) and f_heads[a] <= l_heads[b]):
            out.append(0)
            a += 1
        else:
            out.append(1)
            b += 1
    return out


def build_psi_index(text: Text, d: int,
                    structures: Optional[SuffixStructures] = None) -> PsiIndex:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if structures is None:
        structures = build_suffix_structures(text)
    psi = oracle(structures, Kind.PSI)
    runs = bwt_run_decompose(structures, Kind.PSI)
    balanced = balance_runs(runs, psi, d)
    f_heads = balanced.p_heads
    l_heads = np.sort(balanced.q_values)
    tau = np.searchsorted(l_heads, balanced.q_values)
    chars = text.data[structures.sa[f_heads]]
    n = text.n
    return PsiIndex(
        n=n,
        sigma=text.sigma,
        d=d,
        tau=TauPermutation.from_lists(chars.tolist(), tau.tolist(), text.sigma),
        bl=SparseBits(l_heads.tolist(), n),
        bf=SparseBits(f_heads.tolist(), n),
        bfl=PlainBits(interleave(f_heads.tolist(), l_heads.tolist())),
        convention=text.convention,
        alphabet_map=dict(text.alphabet_map),
    )


def tau_eval(idx: PsiIndex, i: int) -> int:
    if not 0 <= i < idx.r_prime:
        raise IndexError(f"sub-run {i} out of range [0, {idx.r_prime})")
    return idx.tau_flat[i]


def psi_step(idx: PsiIndex, c: Coords) -> Tuple[Coords, int]:
    idx.check_coords(c)
    i, g, pos, _ = idx.step(c.run, c.offset)
    return Coords(i, g), pos


def psi_step_by_rank(idx: PsiIndex, c: Coords) -> Tuple[Coords, int]:
    """Reference step using a rank on the sparse F vector (logarithmic time)."""
    idx.check_coords(c)
    pos = idx.bl.select1(idx.tau_flat[c.run] + 1) + c.offset
    i = idx.bf.rank1(pos) - 1
    return Coords(i, pos - idx.bf.select1(i + 1)), pos


def coords_of_position(idx: PsiIndex, j: int) -> Coords:
    if not 0 <= j < idx.n:
        raise ValueError(f"position {j} out of range [0, {idx.n})")
    ordinal, head = idx.bf.pred(j)
    return Coords(ordinal - 1, j - head)


def position_of_coords(idx: PsiIndex, c: Coords) -> int:
    idx.check_coords(c)
    return idx.bf.select1(c.run + 1) + c.offset


def bwt_runs(idx: PsiIndex) -> int:
    """Number of BWT runs, recovered from the symbols of the L-order sub-runs."""
    inv = idx.tau.inverse()
    chars = idx.tau.char_of_subrun
    return 1 + sum(1 for t in range(1, idx.r_prime) if chars[inv[t]] != chars[inv[t - 1]])


def lf_move_table(idx: PsiIndex) -> MoveTable:
    """Balanced LF move table recovered from the index alone.

    LF runs are the L-order sub-runs, each mapped onto the F sub-run that
    tau sends to it.  Their gaps are not balanced for LF, so the runs are
    rebalanced against an explicit LF built from them.
    """
    n = idx.n
    l_heads = np.asarray(idx.bl.positions(), dtype=np.int64)
    f_heads = np.asarray(idx.bf.positions(), dtype=np.int64)
    images = f_heads[np.asarray(idx.tau.inverse(), dtype=np.int64)]
    lengths = np.diff(np.append(l_heads, n))
    values = np.repeat(images - l_heads, lengths) + np.arange(n)
    perm = PermutationOracle(values=values, kind=Kind.LF)
    runs = RunDecomposition(p_heads=l_heads, q_values=images, minimal=False)
    return build_move(balance_runs(runs, perm, idx.d), perm)


def max_probes(idx: PsiIndex) -> int:
    """Largest scan over all positions; the last offset of each sub-run walks farthest."""
    worst = 0
    for run in range(idx.r_prime):
        worst = max(worst, idx.step(run, idx.run_length(run) - 1)[3])
    return worst


def space_report(idx: PsiIndex) -> Dict[str, float]:
    r = idx.r_prime
    n = idx.n
    tau_bits = r * _bits_for(r)
    label_bits = r * _bits_for(idx.sigma)
    block_bits = (idx.sigma + 1) * _bits_for(r + 1)
    bl = idx.bl.space_bits()
    bf = idx.bf.space_bits()
    bfl = idx.bfl.space_bits()
    report = {
        "n": n,
        "sigma": idx.sigma,
        "d": idx.d,
        "r_prime": r,
        "tau_bits": tau_bits,
        "tau_label_bits": label_bits + block_bits,
        "bl_bits": sum(bl.values()),
        "bl_low_bits": bl["low"],
        "bl_high_bits": bl["high"],
        "bf_bits": sum(bf.values()),
        "bf_low_bits": bf["low"],
        "bf_high_bits": bf["high"],
        "bfl_bits": bfl["payload"],
        "bfl_directory_bits": bfl["directory"],
        "metadata_bits": 4 * 64,
        "ref_r_log_n_over_r": r * np.log2(n / r),
        "ref_r_log_sigma": r * np.log2(idx.sigma) if idx.sigma > 1 else 0.0,
        "ref_r_log_r": r * np.log2(r) if r > 1 else 0.0,
    }
    report["total_bits"] = (tau_bits + report["tau_label_bits"] + report["bl_bits"]
                            + report["bf_bits"] + bfl["payload"] + bfl["directory"]
                            + report["metadata_bits"])
    report["sparse_bound_c"] = ((report["bl_bits"] + report["bf_bits"])
                                / (r * (2 + np.log2(n / r))))
    return {k: (float(v) if isinstance(v, (float, np.floating)) else int(v))
            for k, v in report.items()}


@dataclass
class IndexReport:
    n: int
    r_prime: int
    d: int
    mismatches: int = 0
    coord_errors: int = 0
    max_probes: int = 0
    ell_violations: int = 0
    head_alignment: bool = True
    bfl_merge: bool = True
    tau_permutation: bool = True
    tau_blocks_increasing: bool = True
    balanced: bool = True
    cycle: bool = True
    require_blocks: bool = True

    @property
    def passed(self) -> bool:
        return (self.mismatches == 0 and self.coord_errors == 0 and self.ell_violations == 0
                and self.max_probes <= 2 * self.d and self.head_alignment
                and self.bfl_merge and self.tau_permutation and self.balanced and self.cycle
                and (self.tau_blocks_increasing or not self.require_blocks))


def verify_index(idx: PsiIndex, psi: PermutationOracle,
                 require_blocks: Optional[bool] = None) -> IndexReport:
    """Exhaustive check of every step and structural invariant against the oracle.

    ``require_blocks`` makes per-symbol increase of tau a pass condition; by
    default it is required only for indexes built with a unique terminator
    (see ``textcore.psi_monotone_by_symbol``).
    """
    n, r = idx.n, idx.r_prime
    rep = IndexReport(n=n, r_prime=r, d=idx.d)
    if psi.n != n:
        rep.mismatches = n
        return rep
    values = psi.values
    f_heads = idx.bf.positions()
    l_heads = idx.bl.positions()
    rep.tau_permutation = idx.tau.is_permutation() and len(f_heads) == r == len(l_heads)
    if not rep.tau_permutation:
        return rep
    rep.head_alignment = all(l_heads[idx.tau_flat[i]] == values[f_heads[i]] for i in range(r))
    rep.bfl_merge = idx.bfl.to01() == "".join(map(str, interleave(f_heads, l_heads)))
    rep.tau_blocks_increasing = idx.tau.blocks_increasing()
    rep.require_blocks = idx.sentinel if require_blocks is None else require_blocks
    occupancy = np.searchsorted(f_heads, np.append(l_heads[1:], n)) - np.searchsorted(f_heads, l_heads)
    rep.balanced = bool(np.all(occupancy < 2 * idx.d))

    ell = [idx.ell(i) for i in range(r)]
    for run in range(r):
        head = f_heads[run]
        end = f_heads[run + 1] if run + 1 < r else n
        for g in range(end - head):
            i2, g2, pos, probes = idx.step(run, g)
            rep.max_probes = max(rep.max_probes, probes)
            if pos != values[head + g]:
                rep.mismatches += 1
            if not (0 <= i2 < r and f_heads[i2] + g2 == pos
                    and (i2 + 1 == r or f_heads[i2 + 1] > pos)):
                rep.coord_errors += 1
            if not (ell[run] <= i2 and i2 - ell[run] < 2 * idx.d):
                rep.ell_violations += 1
    rep.cycle = cycle_length(idx, 0) == n
    return rep


def cycle_length(idx: PsiIndex, start: int) -> int:
    """Steps until psi returns to ``start``, or -1 if a position repeats first."""
    run, g = coords_of_position(idx, start)
    seen = bytearray(idx.n)
    step = idx.step
    pos = start
    for count in range(1, idx.n + 1):
        seen[pos] = 1
        run, g, pos, _ = step(run, g)
        if pos == start:
            return count
        if seen[pos]:
            return -1
    return -1


def balance_check(structures: SuffixStructures, d: int):
    """Balance report for the psi runs of a text, straight from the oracle."""
    psi = oracle(structures, Kind.PSI)
    return verify_balanced(balance_runs(bwt_run_decompose(structures, Kind.PSI), psi, d))
