"""Text ingestion, suffix structures, and brute-force permutation oracles.

Everything here favours clarity over space: arrays are plain numpy
``int64`` vectors of length n.  The compressed structures in
:mod:`rlpsi.psidx` and :mod:`rlpsi.movetab` are checked against these.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np


class Convention(enum.IntEnum):
    """How suffixes are ordered when building the suffix array.

    ``SUFFIX``: plain lexicographic order of suffixes; a suffix that is a
    proper prefix of another sorts first.
    ``ROTATION``: lexicographic order of cyclic rotations, ties broken by
    starting position.
    """

    SUFFIX = 0
    ROTATION = 1


class Kind(enum.Enum):
    LF = "lf"
    PHI = "phi"
    PHI_INV = "phi-inv"
    PSI = "psi"


@dataclass(frozen=True)
class Text:
    data: np.ndarray
    sigma: int
    alphabet_map: Dict[int, int]
    convention: Convention = Convention.SUFFIX
    sentinel: bool = False

    @property
    def n(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class SuffixStructures:
    text: Text
    sa: np.ndarray
    isa: np.ndarray
    bwt: np.ndarray
    r: int

    @property
    def n(self) -> int:
        return len(self.sa)


@dataclass(frozen=True)
class PermutationOracle:
    values: np.ndarray
    kind: Optional[Kind] = None

    @property
    def n(self) -> int:
        return len(self.values)

    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.values)
        inv[self.values] = np.arange(len(self.values), dtype=self.values.dtype)
        return inv

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class RunDecomposition:
    """Run heads of a permutation and their images, aligned index-wise."""

    p_heads: np.ndarray
    q_values: np.ndarray
    minimal: bool = field(default=True)

    def __len__(self) -> int:
        return len(self.p_heads)


def ingest_text(raw: bytes, convention: Convention = Convention.SUFFIX,
                append_sentinel: bool = False) -> Text:
    """Remap the bytes of ``raw`` onto a dense, order-preserving alphabet.

    With ``append_sentinel`` a fresh symbol 0, smaller than every byte, is
    appended; byte symbols then start at 1.
    """
    if len(raw) == 0:
        raise ValueError("empty text")
    buf = np.frombuffer(bytes(raw), dtype=np.uint8)
    used = np.flatnonzero(np.bincount(buf, minlength=256))
    offset = 1 if append_sentinel else 0
    if append_sentinel and len(used) > 254:
        # keeps sigma <= 255 so the on-disk byte map can mark unused bytes with 0xFF
        raise ValueError("cannot append sentinel: more than 254 distinct byte values")
    lut = np.zeros(256, dtype=np.int64)
    lut[used] = np.arange(len(used)) + offset
    data = lut[buf]
    if append_sentinel:
        data = np.append(data, 0)
    alphabet_map = {int(b): int(lut[b]) for b in used}
    return Text(data=data, sigma=len(used) + offset, alphabet_map=alphabet_map,
                convention=Convention(convention), sentinel=append_sentinel)


def _dense_ranks(keys1: np.ndarray, keys2: np.ndarray):
    order = np.lexsort((keys2, keys1))
    a, b = keys1[order], keys2[order]
    step = np.empty(len(order), dtype=np.int64)
    step[0] = 0
    step[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.cumsum(step)
    return order, rank


def suffix_array(data, convention: Convention = Convention.SUFFIX) -> np.ndarray:
    """Prefix-doubling suffix array, O(n log^2 n)."""
    data = np.asarray(data, dtype=np.int64)
    n = len(data)
    idx = np.arange(n)
    rank = _dense_ranks(data, np.zeros(n, dtype=np.int64))[1]
    k = 1
    while rank.max() < n - 1 and k < n:
        if convention == Convention.SUFFIX:
            second = np.full(n, -1, dtype=np.int64)
            second[: n - k] = rank[k:]
        else:
            second = rank[(idx + k) % n]
        rank = _dense_ranks(rank, second)[1]
        k <<= 1
    # equal ranks only survive for periodic rotations: tie-break by position
    return np.lexsort((idx, rank))


def naive_suffix_array(data, convention: Convention = Convention.SUFFIX) -> np.ndarray:
    """Comparison-sort oracle for small inputs."""
    seq = [int(c) for c in data]
    n = len(seq)
    if convention == Convention.SUFFIX:
        key = lambda i: seq[i:]
    else:
        key = lambda i: (seq[i:] + seq[:i], i)
    return np.array(sorted(range(n), key=key), dtype=np.int64)


def build_suffix_structures(text: Text) -> SuffixStructures:
    n = text.n
    sa = suffix_array(text.data, text.convention)
    isa = np.empty(n, dtype=np.int64)
    isa[sa] = np.arange(n)
    bwt = text.data[(sa - 1) % n]
    r = 1 + int(np.count_nonzero(bwt[1:] != bwt[:-1]))
    return SuffixStructures(text=text, sa=sa, isa=isa, bwt=bwt, r=r)


def oracle(structures: SuffixStructures, kind: Kind) -> PermutationOracle:
    sa, isa, n = structures.sa, structures.isa, structures.n
    kind = Kind(kind)
    if kind is Kind.LF:
        values = isa[(sa - 1) % n]
    elif kind is Kind.PSI:
        values = isa[(sa + 1) % n]
    elif kind is Kind.PHI:
        values = sa[(isa - 1) % n]
    else:
        values = sa[(isa + 1) % n]
    return PermutationOracle(values=values, kind=kind)


def minimal_heads(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values)
    breaks = np.flatnonzero(values[1:] != values[:-1] + 1) + 1
    return np.concatenate(([0], breaks)).astype(np.int64)


def run_decompose(perm: PermutationOracle,
                  extra_heads: Optional[Iterable[int]] = None) -> RunDecomposition:
    """Minimal run heads of ``perm``, optionally refined by ``extra_heads``."""
    heads = minimal_heads(perm.values)
    minimal = True
    if extra_heads is not None:
        extra = np.asarray(list(extra_heads), dtype=np.int64)
        merged = np.union1d(heads, extra)
        minimal = len(merged) == len(heads)
        heads = merged
    return RunDecomposition(p_heads=heads, q_values=perm.values[heads], minimal=minimal)


def bwt_run_heads(structures: SuffixStructures) -> np.ndarray:
    bwt = structures.bwt
    return np.concatenate(([0], np.flatnonzero(bwt[1:] != bwt[:-1]) + 1)).astype(np.int64)


def bwt_run_decompose(structures: SuffixStructures, kind: Kind) -> RunDecomposition:
    """Runs of LF or psi induced by the runs of the BWT.

    LF heads are the BWT run heads (plus any minimal LF head they miss, which
    only happens at the row of suffix 0 under suffix order); psi heads are
    their LF images, since psi inverts LF run by run.  This is generally not
    the minimal decomposition: psi may continue across a BWT run boundary.
    """
    kind = Kind(kind)
    lf = oracle(structures, Kind.LF)
    lf_runs = run_decompose(lf, bwt_run_heads(structures))
    if kind is Kind.LF:
        return lf_runs
    if kind is not Kind.PSI:
        raise ValueError("BWT-induced runs are defined for LF and psi only")
    psi = oracle(structures, Kind.PSI)
    return run_decompose(psi, lf.values[lf_runs.p_heads])


def is_primitive(data) -> bool:
    """True unless the sequence is a proper power u^k, k >= 2."""
    seq = np.asarray(data).tolist()
    n = len(seq)
    fail = [0] * (n + 1)
    fail[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and seq[k] != seq[i]:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    period = n - fail[n]
    return period == n or n % period != 0


def psi_monotone_by_symbol(text: Text) -> bool:
    """Whether psi must increase inside each F-column symbol block.

    Holds with a unique terminator, or under rotation order for a primitive
    text; otherwise the wrap-around suffix (suffix order) or equal rotations
    (periodic text) can break it.
    """
    if text.sentinel:
        return True
    return text.convention == Convention.ROTATION and is_primitive(text.data)


def is_valid_decomposition(perm: PermutationOracle, runs: RunDecomposition) -> bool:
    heads = np.asarray(runs.p_heads)
    if len(heads) == 0 or heads[0] != 0 or np.any(np.diff(heads) <= 0):
        return False
    if not np.all(np.isin(minimal_heads(perm.values), heads)):
        return False
    return bool(np.array_equal(np.asarray(runs.q_values), perm.values[heads]))
