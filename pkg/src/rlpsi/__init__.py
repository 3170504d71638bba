"""Run-length compressed psi index with constant-time steps."""

from .balance import BalancedRuns, balance_runs, verify_balanced
from .bitvec import PlainBits, SparseBits
from .movetab import Coords, MoveTable, build_move, build_move_table, move_locate, move_step
from .psidx import (PsiIndex, build_psi_index, coords_of_position, position_of_coords,
                    psi_step, space_report, tau_eval, verify_index)
from .textcore import (Convention, Kind, Text, build_suffix_structures, ingest_text, oracle,
                       run_decompose)

__version__ = "0.1.0"
