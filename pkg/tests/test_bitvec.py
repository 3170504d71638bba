import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import WORKED_BF, WORKED_BFL, WORKED_BL
from rlpsi.bitvec import PlainBits, SparseBits


def scan_rank(bits, b, p):
    return sum(1 for x in bits[: p + 1] if x == b)


def scan_select(bits, b, x):
    return [i for i, v in enumerate(bits) if v == b][x - 1]


def ones(s):
    return [i for i, c in enumerate(s) if c == "1"]


def test_worked_bfl():
    v = PlainBits(WORKED_BFL)
    assert len(v) == 26 and v.ones == 13 and v.zeros == 13
    assert v.rank0(18) == 10
    assert v.select1(9) == 18
    assert v.to01() == WORKED_BFL


def test_trivial_plain():
    v = PlainBits("0" * 8)
    assert v.rank1(7) == 0 and v.rank0(7) == 8
    assert PlainBits("1011").select1(1) == 0
    assert PlainBits("0110").select0(1) == 0


def test_plain_errors():
    v = PlainBits("0110")
    with pytest.raises(IndexError):
        v.rank1(4)
    with pytest.raises(IndexError):
        v.select1(3)
    with pytest.raises(IndexError):
        v.select0(0)


@pytest.mark.parametrize("density", [0.01, 0.5, 0.97])
def test_plain_random_vs_scan(density):
    rng = np.random.default_rng(int(density * 100))
    bits = (rng.random(10_000) < density).astype(int).tolist()
    v = PlainBits(bits)
    prefix = np.cumsum(bits)
    for p in rng.integers(0, len(bits), 500):
        assert v.rank1(int(p)) == prefix[p]
        assert v.rank0(int(p)) == p + 1 - prefix[p]
    one_pos = np.flatnonzero(bits)
    zero_pos = np.flatnonzero(np.array(bits) == 0)
    for x in range(1, len(one_pos) + 1):
        assert v.select1(x) == one_pos[x - 1]
    for x in range(1, len(zero_pos) + 1):
        assert v.select0(x) == zero_pos[x - 1]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=700))
def test_plain_properties(bits):
    v = PlainBits(bits)
    m = len(bits)
    if m:
        assert v.rank1(m - 1) + v.rank0(m - 1) == m
    for p in range(0, m, 7):
        assert v.rank1(p) == scan_rank(bits, 1, p)
    for b in (0, 1):
        count = v.ones if b else v.zeros
        for x in range(1, count + 1):
            pos = v.select(b, x)
            assert pos == scan_select(bits, b, x)
            assert v.rank(b, pos) == x
        for p in range(m):
            r = v.rank(b, p)
            if r:
                assert v.select(b, r) <= p
    for x in range(1, v.ones + 1):
        # the inclusive-rank form of the rank0/select1 identity
        assert v.rank0(v.select1(x)) == v.select1(x) + 1 - x


def test_from_words_roundtrip():
    v = PlainBits("1" * 70 + "0" * 5 + "1")
    w = PlainBits.from_words(v.words, len(v))
    assert w == v and w.select1(71) == 75
    with pytest.raises(ValueError):
        PlainBits.from_words([1 << 10], 5)


def test_sparse_worked_vectors():
    bl = SparseBits(ones(WORKED_BL), 45)
    bf = SparseBits(ones(WORKED_BF), 45)
    assert bl.positions() == [0, 2, 3, 11, 12, 15, 22, 28, 32, 37, 38, 40, 42]
    assert bl.select1(9) == 32
    assert bf.select1(11) == 34
    assert bf.pred(15) == (5, 12)
    assert bf.pred(0) == (1, 0)
    assert bl.to01() == WORKED_BL and bf.to01() == WORKED_BF


def test_sparse_empty_and_errors():
    v = SparseBits([], 10)
    assert len(v) == 0
    with pytest.raises(IndexError):
        v.select1(1)
    with pytest.raises(ValueError):
        v.pred(3)
    with pytest.raises(ValueError):
        SparseBits([3, 3], 10)
    with pytest.raises(ValueError):
        SparseBits([1, 10], 10)
    with pytest.raises(ValueError):
        SparseBits([4, 2, 8], 10)
    with pytest.raises(ValueError):
        SparseBits([5, 8], 10).pred(4)


def test_sparse_roundtrip_large():
    rng = np.random.default_rng(3)
    universe = 10**7
    pos = np.unique(rng.integers(0, universe, 100_000))
    v = SparseBits(pos.tolist(), universe)
    assert v.positions() == pos.tolist()
    assert v.width == (universe // len(pos)).bit_length() - 1
    for p in rng.integers(pos[0], universe, 300):
        k = int(np.searchsorted(pos, p, side="right"))
        assert v.pred(int(p)) == (k, int(pos[k - 1]))


@settings(max_examples=300, deadline=None)
@given(st.sets(st.integers(0, 2000), max_size=200), st.integers(0, 3000))
def test_sparse_properties(pos_set, extra):
    pos = sorted(pos_set)
    universe = (pos[-1] + 1 if pos else 1) + extra
    v = SparseBits(pos, universe)
    assert v.positions() == pos
    bits = v.space_bits()
    assert bits["low"] == len(pos) * v.width
    assert bits["high"] == len(pos) + (universe >> v.width) + 1
    for p in range(0, universe, max(1, universe // 50)):
        assert v.rank1(p) == sum(1 for q in pos if q <= p)
