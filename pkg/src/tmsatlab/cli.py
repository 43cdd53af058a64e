"""Command-line surface.

Thin adapters over the core modules: parse arguments, dispatch, render.
Exit codes: 0 success / agreement, 1 failed boolean check, 2 usage,
3 file or input-format errors, 10/20 sat/unsat for `solve`, 70 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import argument, parity
from .corpus import run_corpus_checks
from .machine import (
    MachineError,
    accepts_within,
    extract_particular_table,
    merge_tables,
    parse_machine,
)
from .reduction import (
    ReductionError,
    encode_history,
    input_part,
    reduce_machine,
    run_part,
)
from .sat import DimacsError, from_dimacs, solve_dpll, to_dimacs

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_FILE = 3
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_INTERNAL = 70


class _FileError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _FileError(f"cannot read {path}: {exc}") from exc


def _load_machine(path: str):
    try:
        return parse_machine(_read_text(path), name=Path(path).stem)
    except MachineError as exc:
        raise _FileError(f"{path}: {exc}") from exc


def _emit(text: str, out_path):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_reduce(args) -> int:
    m = _load_machine(args.machine)
    f = reduce_machine(m, args.input, args.bound)
    if args.part == "input":
        f = input_part(f)
    elif args.part == "run":
        f = run_part(f)
    _emit(to_dimacs(f), args.output)
    return EXIT_OK


def _cmd_solve(args) -> int:
    try:
        f = from_dimacs(_read_text(args.file))
    except DimacsError as exc:
        raise _FileError(f"{args.file}: {exc}") from exc
    result = solve_dpll(f)
    if result.satisfiable:
        lits = [v if result.assignment[v] else -v for v in sorted(result.assignment)]
        print("s SATISFIABLE")
        print("v " + " ".join(str(l) for l in lits) + " 0")
        return EXIT_SAT
    print("s UNSATISFIABLE")
    return EXIT_UNSAT


def _cmd_verify(args) -> int:
    m = _load_machine(args.machine)
    accepted, _ = accepts_within(m, args.input, args.bound)
    from .sat import to_cnf
    result = solve_dpll(to_cnf(reduce_machine(m, args.input, args.bound)))
    oracle = "accept" if accepted else "reject"
    verdict = "SAT" if result.satisfiable else "UNSAT"
    agree = accepted == result.satisfiable
    print(f"oracle={oracle}, sat={verdict}, {'agree' if agree else 'DISAGREE'}")
    return EXIT_OK if agree else EXIT_CHECK_FAILED


def _cmd_history(args) -> int:
    m = _load_machine(args.machine)
    accepted, witness = accepts_within(m, args.input, args.bound)
    if not accepted:
        print(f"{m.name} does not accept {args.input!r} within {args.bound} "
              "transitions", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if args.action == "encode":
        f, assignment = encode_history(m, witness, args.bound)
        text = to_dimacs(f)
        lits = " ".join(str(v if assignment[v] else -v) for v in sorted(assignment))
        text += f"c induced-assignment: {lits}\n"
        _emit(text, args.output)
    else:  # extract
        t = extract_particular_table(witness, m)
        for state, symbol, nxt, write, move in t.rules():
            print(f"rule: {state} {symbol} -> {nxt} {write} {move}")
    return EXIT_OK


def _cmd_merge(args) -> int:
    ma = _load_machine(args.table_a)
    mb = _load_machine(args.table_b)
    merged = merge_tables(ma.table, mb.table, ma.start, mb.start)
    print(f"selector: {merged.selector_state} -> "
          f"{merged.selector[0]} | {merged.selector[1]}")
    for state, symbol, nxt, write, move in merged.rules():
        print(f"rule: {state} {symbol} -> {nxt} {write} {move}")
    return EXIT_OK


def _load_library(dir_path: str, bound: int, base):
    """A library directory holds one `<name>.tm` per entry, with the
    witness input in a sibling `<name>.in` (missing file = empty input).
    Entries are taken in sorted filename order."""
    directory = Path(dir_path)
    if not directory.is_dir():
        raise _FileError(f"{dir_path} is not a directory")
    histories = []
    names = []
    for tm_path in sorted(directory.glob("*.tm")):
        m = _load_machine(str(tm_path))
        in_path = tm_path.with_suffix(".in")
        y = in_path.read_text().strip() if in_path.exists() else ""
        accepted, witness = accepts_within(m, y, bound)
        if not accepted:
            raise _FileError(
                f"{tm_path.name}: machine does not accept {y!r} within {bound} "
                "transitions; cannot encode a run part")
        histories.append((m, witness))
        names.append(tm_path.stem)
    return histories, names


def _cmd_kim(args) -> int:
    base = _load_machine(args.base)
    histories, names = _load_library(args.library, args.bound, base)
    pm = parity.build_parity_machine(histories, args.bound, base)
    if args.action == "build":
        info = {
            "entries": [
                {
                    "index": idx,
                    "name": names[idx],
                    "clauses": entry.clause_count,
                    "compatible": idx not in pm.incompatible_indices,
                }
                for idx, entry in enumerate(pm.library)
            ],
            "bound": pm.bound,
            "base": base.name,
        }
        if args.json:
            print(json.dumps(info, indent=2))
        else:
            for entry in info["entries"]:
                compat = "compatible" if entry["compatible"] else "grid-incompatible"
                print(f"entry {entry['index']} ({entry['name']}): "
                      f"{entry['clauses']} run-part clauses, {compat}")
        return EXIT_OK

    report = parity.run_parity_machine(pm, args.input)
    if args.action == "run":
        if args.json:
            print(parity.report_to_json(report))
        else:
            for inst in report.instances:
                verdict = "sat" if inst.satisfiable else "unsat"
                print(f"instance {inst.index} ({names[inst.index]}): "
                      f"{inst.clause_count} clauses, {verdict}")
            print(f"counter={report.counter} accept={report.accept} "
                  f"cost={report.cost}")
        return EXIT_OK

    # metrics
    chosen = args.chosen if args.chosen is not None else report.designated
    if chosen is None:
        print("no satisfiable instance to take metrics from", file=sys.stderr)
        return EXIT_CHECK_FAILED
    metrics = parity.transition_metrics(report, chosen)
    claims = parity.check_counting_claims(metrics)
    payload = {
        "chosen": chosen,
        "metrics": {"i": metrics.i, "j": metrics.j, "k": metrics.k},
        "claims": {"i_gt_j": claims.i_gt_j, "j_gt_k": claims.j_gt_k,
                   "i_eq_k": claims.i_eq_k},
    }
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"chosen={chosen} i={metrics.i} j={metrics.j} k={metrics.k}")
        print(f"i>j: {claims.i_gt_j}  j>k: {claims.j_gt_k}  i=k: {claims.i_eq_k}")
    return EXIT_OK


def _cmd_argue(args) -> int:
    if args.schema:
        arg = argument.parse_argument_file(_read_text(args.schema))
        report = argument.analyze_argument(arg)
    else:
        report = argument.analyze_modus_tollens_schema()
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, value in report.items():
            if key == "schema":
                for premise in value["premises"]:
                    print(f"premise: {premise}")
                if "axiom" in value:
                    print(f"axiom: {value['axiom']}")
                print(f"conclusion: {value['conclusion']}")
            else:
                print(f"{key}={json.dumps(value)}")
    return EXIT_OK


def _cmd_corpus_test(args) -> int:
    lines, ok = run_corpus_checks()
    for line in lines:
        print(line)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmsatlab",
        description="Turing machine to CNF reduction laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_machine_args(p):
        p.add_argument("-m", "--machine", required=True, help="machine file")
        p.add_argument("-i", "--input", default="", help="input string")
        p.add_argument("-T", "--bound", type=int, required=True,
                       help="transition bound")

    p = sub.add_parser("reduce", help="machine + input + bound -> DIMACS CNF")
    add_machine_args(p)
    p.add_argument("-o", "--output", help="write DIMACS here instead of stdout")
    p.add_argument("--part", choices=["all", "input", "run"], default="all")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("solve", help="solve a DIMACS file (exit 10 sat / 20 unsat)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check simulator vs reduction agreement")
    add_machine_args(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("history", help="encode or extract an accepting history")
    p.add_argument("action", choices=["encode", "extract"])
    add_machine_args(p)
    p.add_argument("-o", "--output", help="write DIMACS here (encode only)")
    p.set_defaults(func=_cmd_history)

    p = sub.add_parser("merge", help="merge two machines' transition tables")
    p.add_argument("-a", "--table-a", required=True, help="first machine file")
    p.add_argument("-b", "--table-b", required=True, help="second machine file")
    p.set_defaults(func=_cmd_merge)

    p = sub.add_parser("kim", help="library machine: build, run, or metrics")
    p.add_argument("action", choices=["build", "run", "metrics"])
    p.add_argument("--library", required=True,
                   help="directory of <name>.tm (+ optional <name>.in) entries")
    p.add_argument("--base", required=True, help="base machine file")
    p.add_argument("-T", "--bound", type=int, required=True)
    p.add_argument("-i", "--input", default="", help="input string (run/metrics)")
    p.add_argument("--chosen", type=int, help="instance index for metrics")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_kim)

    p = sub.add_parser("argue", help="analyze an argument schema")
    p.add_argument("--schema", help="schema file (defaults to the built-in one)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_argue)

    p = sub.add_parser("corpus-test", help="run the fixture property suite")
    p.set_defaults(func=_cmd_corpus_test)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _FileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except (MachineError, ReductionError, argument.ArgumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
