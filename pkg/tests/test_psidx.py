import numpy as np
import pytest

from conftest import WORKED_BF, WORKED_BFL, WORKED_BL, WORKED_TAU, random_text
from rlpsi.bitvec import PlainBits, SparseBits
from rlpsi.movetab import Coords
from rlpsi.psidx import (PsiIndex, TauPermutation, build_psi_index, bwt_runs, coords_of_position,
                         cycle_length, interleave, lf_move_table, max_probes, position_of_coords,
                         psi_step, psi_step_by_rank, space_report, tau_eval, verify_index)
from rlpsi.movetab import check_move
from rlpsi.textcore import (Convention, Kind, build_suffix_structures, ingest_text, oracle,
                            psi_monotone_by_symbol)


def ones(s):
    return [i for i, c in enumerate(s) if c == "1"]


@pytest.fixture(scope="module")
def worked_index(worked_rotation):
    return build_psi_index(worked_rotation.text, 2, worked_rotation)


@pytest.fixture(scope="module")
def literal_index():
    """Index assembled directly from the printed bit strings and tau table."""
    chars = [0] * 2 + [1] * 5 + [2] + [3] + [4] * 4
    return PsiIndex(n=45, sigma=5, d=2, tau=TauPermutation.from_lists(chars, WORKED_TAU, 5),
                    bl=SparseBits(ones(WORKED_BL), 45), bf=SparseBits(ones(WORKED_BF), 45),
                    bfl=PlainBits(WORKED_BFL))


def test_worked_bitvectors(worked_index):
    assert worked_index.r_prime == 13
    assert worked_index.bl.to01() == WORKED_BL
    assert worked_index.bf.to01() == WORKED_BF
    assert worked_index.bfl.to01() == WORKED_BFL
    assert worked_index.tau.tau_flat == WORKED_TAU
    assert worked_index.tau.block_start == [0, 2, 7, 8, 9, 13]


def test_worked_tau(worked_index):
    assert tau_eval(worked_index, 4) == 8
    assert tau_eval(worked_index, 9) == 0
    with pytest.raises(IndexError):
        tau_eval(worked_index, 13)


def test_worked_query(literal_index, worked_index):
    for idx in (literal_index, worked_index):
        assert coords_of_position(idx, 15) == Coords(4, 3)
        assert position_of_coords(idx, Coords(4, 3)) == 15
        assert idx.ell(4) == 9
        assert psi_step(idx, Coords(4, 3)) == (Coords(10, 1), 35)
        assert psi_step_by_rank(idx, Coords(4, 3)) == (Coords(10, 1), 35)


def test_coords_roundtrip(worked_index):
    assert coords_of_position(worked_index, 0) == Coords(0, 0)
    assert position_of_coords(worked_index, Coords(0, 0)) == 0
    for j in range(45):
        assert position_of_coords(worked_index, coords_of_position(worked_index, j)) == j
    with pytest.raises(ValueError):
        coords_of_position(worked_index, 45)
    with pytest.raises(ValueError):
        position_of_coords(worked_index, Coords(0, 1))  # sub-run 0 has length 1
    with pytest.raises(ValueError):
        psi_step(worked_index, Coords(13, 0))


def test_worked_exhaustive(worked_index, worked_rotation):
    psi = oracle(worked_rotation, Kind.PSI).values
    for j in range(45):
        c, pos = psi_step(worked_index, coords_of_position(worked_index, j))
        assert pos == psi[j]
        assert position_of_coords(worked_index, c) == pos
    rep = verify_index(worked_index, oracle(worked_rotation, Kind.PSI), require_blocks=True)
    assert rep.passed and rep.max_probes <= 4 and rep.tau_blocks_increasing


def test_suffix_order_worked_example(worked_suffix):
    # suffix order gives a different but equally correct index
    idx = build_psi_index(worked_suffix.text, 2, worked_suffix)
    assert idx.bl.to01() != WORKED_BL
    rep = verify_index(idx, oracle(worked_suffix, Kind.PSI))
    assert rep.passed and not rep.require_blocks


def test_interleave_tie_rule():
    assert interleave([0, 5], [0, 3]) == [0, 1, 1, 0]
    assert interleave(ones(WORKED_BF), ones(WORKED_BL)) == [int(b) for b in WORKED_BFL]


def test_degenerate_inputs():
    idx = build_psi_index(ingest_text(b"x"), 2)
    assert idx.r_prime == 1 and idx.tau.tau_flat == [0] and idx.bfl.to01() == "01"
    assert psi_step(idx, Coords(0, 0)) == (Coords(0, 0), 0)
    s = build_suffix_structures(ingest_text(b"zzzz"))
    idx = build_psi_index(s.text, 3, s)
    assert idx.tau.block_start == [0, idx.r_prime] and idx.tau.is_permutation()
    assert tau_eval(build_psi_index(ingest_text(b"q"), 2), 0) == 0
    assert verify_index(idx, oracle(s, Kind.PSI)).passed
    with pytest.raises(ValueError):
        build_psi_index(ingest_text(b"ab"), 1)


def test_unary_with_terminator_constant_runs():
    sizes = []
    for n in (10, 100, 1000, 5000):
        s = build_suffix_structures(ingest_text(b"a" * n, append_sentinel=True))
        idx = build_psi_index(s.text, 2, s)
        assert verify_index(idx, oracle(s, Kind.PSI)).passed
        sizes.append(idx.r_prime)
    assert len(set(sizes)) == 1


@pytest.mark.parametrize("conv", list(Convention))
def test_random_texts(conv):
    rng = np.random.default_rng(17 + conv)
    for t in range(40):
        sentinel = t % 2 == 0
        sigma = [2, 3, 4, 16, 96][t % 5]
        s = build_suffix_structures(ingest_text(random_text(rng, int(rng.integers(1, 900)), sigma),
                                                conv, sentinel))
        for d in (2, 3, 8):
            idx = build_psi_index(s.text, d, s)
            rep = verify_index(idx, oracle(s, Kind.PSI), psi_monotone_by_symbol(s.text))
            assert rep.passed, rep
            assert rep.max_probes <= max_probes(idx) <= 2 * d
            assert bwt_runs(idx) == s.r
            if psi_monotone_by_symbol(s.text):
                assert idx.r_prime * (d - 1) <= d * s.r
                assert rep.tau_blocks_increasing


def test_stable_sort_property():
    rng = np.random.default_rng(4)
    for _ in range(20):
        s = build_suffix_structures(ingest_text(random_text(rng, 400, 4), append_sentinel=True))
        idx = build_psi_index(s.text, 2, s)
        l_syms = [int(s.bwt[p]) for p in idx.bl.positions()]
        inv = idx.tau.inverse()
        # placing each L sub-run symbol at tau^-1 of its rank sorts them stably
        f_order = [None] * idx.r_prime
        for t, sym in enumerate(l_syms):
            f_order[inv[t]] = (sym, t)
        assert f_order == sorted(f_order)
        assert [sym for sym, _ in f_order] == idx.tau.char_of_subrun


def test_lf_table_from_index():
    rng = np.random.default_rng(8)
    for conv in Convention:
        s = build_suffix_structures(ingest_text(random_text(rng, 600, 4), conv))
        idx = build_psi_index(s.text, 3, s)
        mismatches, probes = check_move(lf_move_table(idx), oracle(s, Kind.LF))
        assert mismatches == 0 and probes <= 6


def test_cycle_and_report(worked_index):
    assert cycle_length(worked_index, 0) == 45
    assert cycle_length(worked_index, 17) == 45
    rep = space_report(worked_index)
    assert rep["r_prime"] == 13 and rep["bfl_bits"] == 26
    assert rep["bl_low_bits"] == 13 * worked_index.bl.width


def test_verify_index_detects_corruption(worked_rotation):
    idx = build_psi_index(worked_rotation.text, 2, worked_rotation)
    tau = list(idx.tau.tau_flat)
    tau[0], tau[1] = tau[1], tau[0]
    bad = PsiIndex(n=idx.n, sigma=idx.sigma, d=2,
                   tau=TauPermutation(idx.tau.char_of_subrun, idx.tau.block_start, tau),
                   bl=idx.bl, bf=idx.bf, bfl=idx.bfl, convention=idx.convention)
    rep = verify_index(bad, oracle(worked_rotation, Kind.PSI))
    assert not rep.passed and rep.mismatches > 0 and not rep.head_alignment


def test_periodic_rotation_breaks_block_order():
    s = build_suffix_structures(ingest_text(b"abab", Convention.ROTATION))
    idx = build_psi_index(s.text, 2, s)
    assert not psi_monotone_by_symbol(s.text)
    rep = verify_index(idx, oracle(s, Kind.PSI))
    assert rep.passed and rep.mismatches == 0
