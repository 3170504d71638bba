"""Command-line front end: build, query, verify, stats, bench.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional

import numpy as np

from . import fileformat
from .fileformat import IndexFormatError
from .movetab import Coords, build_move_table, check_move
from .psidx import (build_psi_index, bwt_runs, coords_of_position, lf_move_table, max_probes,
                    space_report, verify_index)
from .textcore import (Convention, Kind, build_suffix_structures, ingest_text, oracle,
                       psi_monotone_by_symbol)

OK, FAILED, USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    try:
        return fileformat.load(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    except IndexFormatError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _print_report(report: dict, kv: bool = False) -> None:
    if kv:
        for key, value in report.items():
            print(f"{key}={value}")
        return
    width = max(len(k) for k in report)
    for key, value in report.items():
        if isinstance(value, float):
            value = f"{value:.2f}"
        print(f"{key:<{width}}  {value}")


def stats_report(idx) -> dict:
    report = space_report(idx)
    report["r"] = bwt_runs(idx)
    report["max_probes"] = max_probes(idx)
    report["probe_bound"] = 2 * idx.d
    report["convention"] = Convention(idx.convention).name.lower()
    return report


def cmd_build(args) -> int:
    raw = _read(args.input)
    try:
        text = ingest_text(raw, Convention[args.convention.upper()], args.append_sentinel)
        idx = build_psi_index(text, args.d)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    try:
        size = fileformat.save(idx, args.output)
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc.strerror}") from exc
    report = stats_report(idx)
    report["file_bytes"] = size
    _print_report(report)
    return OK


def _parse_coords(value: str) -> Coords:
    try:
        run, offset = (int(x) for x in value.split(","))
    except ValueError:
        raise CliError(f"coords must look like I,G, got {value!r}")
    return Coords(run, offset)


def cmd_query(args) -> int:
    idx = _load(args.index)
    op = Kind(args.op)
    if args.steps < 0:
        raise CliError("--steps must be >= 0")
    if op is Kind.PSI:
        if args.coords is not None:
            start = _parse_coords(args.coords)
            try:
                idx.check_coords(start)
            except ValueError as exc:
                raise CliError(str(exc)) from exc
        else:
            if not 0 <= args.pos < idx.n:
                raise CliError(f"position {args.pos} out of range [0, {idx.n})")
            start = coords_of_position(idx, args.pos)
        step = idx.step
    else:
        if op is Kind.LF:
            table = lf_move_table(idx)
        else:
            if args.text is None:
                raise CliError(f"--op {op.value} needs --text (the index stores no SA samples)")
            text = _text_for(idx, _read(args.text))
            table = build_move_table(build_suffix_structures(text), op, idx.d)
        try:
            if args.coords is not None:
                start = _parse_coords(args.coords)
                table.position(start)
            else:
                start = table.locate(args.pos)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        step = table.step
    run, offset = start
    for _ in range(args.steps):
        run, offset, pos, _ = step(run, offset)
        print(f"{op.value}={pos} coords=({run},{offset})")
    return OK


def _text_for(idx, raw: bytes):
    try:
        text = ingest_text(raw, idx.convention, idx.sentinel)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if text.n != idx.n or text.sigma != idx.sigma or text.alphabet_map != idx.alphabet_map:
        raise CliError("text does not match index (length or alphabet differ)")
    return text


def cmd_verify(args) -> int:
    try:
        idx = fileformat.load(args.index)
    except IndexFormatError as exc:
        print(f"FAIL index: {exc}")
        return FAILED
    except OSError as exc:
        raise CliError(f"cannot read {args.index}: {exc.strerror}") from exc
    raw = _read(args.input)
    try:
        text = _text_for(idx, raw)
    except CliError as exc:
        print(f"FAIL {exc}")
        return FAILED
    structures = build_suffix_structures(text)
    ok = True

    rep = verify_index(idx, oracle(structures, Kind.PSI), psi_monotone_by_symbol(text))
    print(f"{'PASS' if rep.passed else 'FAIL'} psi: mismatches={rep.mismatches} "
          f"coord_errors={rep.coord_errors} max_probes={rep.max_probes} bound={2 * idx.d} "
          f"cycle={rep.cycle} tau_blocks_increasing={rep.tau_blocks_increasing}")
    ok &= rep.passed

    tables = [(Kind.LF, lf_move_table(idx))]
    tables += [(k, build_move_table(structures, k, idx.d)) for k in (Kind.PHI, Kind.PHI_INV)]
    for kind, table in tables:
        mismatches, probes = check_move(table, oracle(structures, kind))
        passed = mismatches == 0 and probes <= 2 * idx.d
        print(f"{'PASS' if passed else 'FAIL'} {kind.value}: mismatches={mismatches} "
              f"max_probes={probes} rows={len(table)}")
        ok &= passed
    return OK if ok else FAILED


def cmd_stats(args) -> int:
    idx = _load(args.index)
    report = stats_report(idx)
    _print_report(report, kv=args.kv)
    if args.strict and report["r_prime"] * (idx.d - 1) > idx.d * report["r"]:
        print(f"FAIL r'={report['r_prime']} exceeds d*r/(d-1) for r={report['r']}", file=sys.stderr)
        return FAILED
    return OK


def run_bench(idx, queries: int, seed: int) -> dict:
    """Time iterated psi and LF steps from a seeded start; no entry lookups in the loop."""
    if queries <= 0:
        return {}
    rng = np.random.default_rng(seed)
    report = {"queries": queries}
    start = int(rng.integers(idx.n))

    run, g = coords_of_position(idx, start)
    step = idx.step
    worst = 0
    t0 = time.perf_counter_ns()
    for _ in range(queries):
        run, g, _, probes = step(run, g)
        if probes > worst:
            worst = probes
    report["psi_ns_per_step"] = (time.perf_counter_ns() - t0) / queries
    report["psi_max_probes"] = worst

    table = lf_move_table(idx)
    run, g = table.locate(start)
    step = table.step
    worst = 0
    t0 = time.perf_counter_ns()
    for _ in range(queries):
        run, g, _, probes = step(run, g)
        if probes > worst:
            worst = probes
    report["lf_ns_per_step"] = (time.perf_counter_ns() - t0) / queries
    report["lf_max_probes"] = worst
    report["probe_bound"] = 2 * idx.d
    return report


def cmd_bench(args) -> int:
    idx = _load(args.index)
    report = run_bench(idx, args.queries, args.seed)
    if not report:
        print("queries=0")
        return OK
    _print_report(report)
    bound = 2 * idx.d
    if report["psi_max_probes"] > bound or report["lf_max_probes"] > bound:
        print(f"FAIL scan probes exceeded {bound}", file=sys.stderr)
        return FAILED
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rlpsi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index from a text file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--convention", choices=["suffix", "rotation"], default="suffix")
    p.add_argument("--append-sentinel", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="evaluate psi, lf, phi or phi-inv")
    p.add_argument("index")
    p.add_argument("--op", choices=[k.value for k in Kind], default="psi")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--pos", type=int)
    where.add_argument("--coords")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--text", help="source text, required for phi and phi-inv")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="check an index against its source text")
    p.add_argument("index")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="print space accounting")
    p.add_argument("index")
    p.add_argument("--kv", action="store_true", help="key=value lines")
    p.add_argument("--strict", action="store_true", help="fail if r' > d r / (d - 1)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="time iterated psi and LF steps")
    p.add_argument("index")
    p.add_argument("--queries", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
