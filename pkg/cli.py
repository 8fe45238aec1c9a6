"""Command-line interface: check, metrics, table, sim, gen and report.

Exit status is 0 on success, 1 when a check fails and 2 on usage, parse or
input errors. Circuit sources are a netlist path, ``-`` for standard input,
or ``gen:<cell>`` for a catalog cell.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, TextIO

import pandas as pd

from services.netlist_io import emit_netlist, load_circuit_source, read_stimulus
from services.netlist_service import metrics
from services.report_service import ReportService
from services.simulator import Simulator
from services.stdcells import CELL_NAMES, build_cell, parse_bits, register_contents, register_state
from services.vcd_service import emit_vcd
from services.verifier_service import STRATEGIES, Verifier, check_report, invalid_report
from utils.exceptions import NetlistSemanticError, RevSeqError, UnknownCellError
from utils.logging_config import setup_logging

logger = logging.getLogger("revseq.cli")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _pairs(text: str, what: str) -> Dict[str, str]:
    pairs = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise argparse.ArgumentTypeError(f"{what} entries look like name=value, got '{item}'")
        pairs[name.strip()] = value.strip()
    return pairs


def _init_map(text: str) -> Dict[str, int]:
    values = {}
    for name, value in _pairs(text, "--init").items():
        if value not in ("0", "1"):
            raise argparse.ArgumentTypeError(f"--init {name} must be 0 or 1, got '{value}'")
        values[name] = int(value)
    return values


def _load_map(text: str) -> Dict[str, str]:
    return _pairs(text, "--load")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revseq", description="Reversible sequential circuit toolkit")
    parser.add_argument("--log-level", default=None, help="Logging level (default from REVSEQ_LOG_LEVEL)")
    verbs = parser.add_subparsers(dest="verb", metavar="verb")
    verbs.required = True

    def source_verb(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = verbs.add_parser(name, help=help_text)
        sub.add_argument("source", help="netlist path, '-' for stdin, or gen:<cell>")
        sub.add_argument("-n", type=int, default=None, help="width for gen: sources")
        return sub

    check = source_verb("check", "validate and check reversibility and conservativity")
    check.add_argument("--strategy", choices=STRATEGIES, default="auto")
    check.add_argument("--cap", type=int, default=None, help="enumeration cap")

    metrics_verb = source_verb("metrics", "print gate, garbage and ancilla counts")
    metrics_verb.add_argument("--json", action="store_true", help="machine-readable output")

    table = source_verb("table", "print the behavior table")
    table.add_argument("--cap", type=int, default=None, help="enumeration cap")

    sim = source_verb("sim", "simulate a stimulus")
    sim.add_argument("--stimulus", required=True, help="stimulus CSV path or '-'")
    sim.add_argument("--vcd", default=None, help="write a VCD dump to this path")
    sim.add_argument("--init", type=_init_map, default={}, help="state overrides, name=bit,...")
    sim.add_argument("--load", type=_load_map, default={}, help="register contents, prefix=bits,...")

    gen = verbs.add_parser("gen", help="emit a catalog cell as a netlist")
    gen.add_argument("cell", help=f"one of: {', '.join(CELL_NAMES)}")
    gen.add_argument("-n", type=int, default=None, help="width of register-like cells")

    report = verbs.add_parser("report", help="write the catalog cost report")
    report.add_argument("--format", choices=("csv", "xlsx"), default="csv")
    report.add_argument("-n", type=int, default=None, help="width of register-like cells")
    report.add_argument("--out", default=None, help="report directory")
    return parser


def cmd_check(args, out: TextIO) -> int:
    try:
        report = check_report(load_circuit_source(args.source, args.n), args.strategy, args.cap)
    except NetlistSemanticError as exc:
        report = invalid_report(exc)
    if not report.valid:
        out.write("invalid circuit\n")
        for issue in report.issues:
            out.write(f"  line {issue.line}: {issue.message}\n")
        return EXIT_FAILED
    out.write(f"{report.circuit_name}: valid\n")
    for result in (report.reversible, report.conservative):
        verdict = "ok" if result.ok else "FAILED"
        out.write(f"{result.check}: {verdict} ({result.strategy})\n")
        if not result.ok:
            out.write(f"  {result.detail}\n")
            for witness in result.witnesses:
                out.write(f"  witness {' '.join(f'{k}={v}' for k, v in witness.items())}\n")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_metrics(args, out: TextIO) -> int:
    result = metrics(load_circuit_source(args.source, args.n))
    if args.json:
        out.write(result.model_dump_json() + "\n")
    else:
        data = result.model_dump()
        width = max(len(k) for k in data)
        for key, value in data.items():
            out.write(f"{key.ljust(width)}  {value}\n")
    return EXIT_OK


def cmd_table(args, out: TextIO) -> int:
    table = Verifier(args.cap).behavior_table(load_circuit_source(args.source, args.n))
    frame = table.to_dataframe()
    frame.columns = [name for _, name in frame.columns]
    out.write(f"inputs: {' '.join(table.input_nets)}\n")
    out.write(frame.to_string(index=False) + "\n")
    return EXIT_OK


def cmd_sim(args, out: TextIO) -> int:
    simulator = Simulator(load_circuit_source(args.source, args.n))
    source = sys.stdin if args.stimulus == "-" else args.stimulus
    stimulus = read_stimulus(source, simulator.input_names)

    initial: Dict[str, int] = {}
    loaded: Dict[str, int] = {}
    for prefix, bits in args.load.items():
        values = parse_bits(bits, prefix)
        initial.update(register_state(prefix, values))
        loaded[prefix] = len(values)
    initial.update(args.init)

    trace = simulator.run(stimulus, initial)
    rows = [
        {"step": s.step_index, **s.inputs, **s.outputs, "warnings": "; ".join(s.warnings)}
        for s in trace.steps
    ]
    if rows:
        out.write(pd.DataFrame(rows).to_string(index=False) + "\n")
    final = trace.final_state
    for prefix, width in loaded.items():
        out.write(f"register {prefix}: {register_contents(final, prefix, width)}\n")
    out.write("final state: " + " ".join(f"{k}={v}" for k, v in final.items()) + "\n")
    if args.vcd:
        with open(args.vcd, "w", encoding="utf-8") as handle:
            handle.write(emit_vcd(trace))
        logger.info("wrote %s", args.vcd)
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    out.write(emit_netlist(build_cell(args.cell, args.n)))
    return EXIT_OK


def cmd_report(args, out: TextIO) -> int:
    service = ReportService(args.out)
    if args.format == "xlsx":
        filename = service.generate_excel_report(args.n)
    else:
        filename = service.generate_csv_report(args.n)
    out.write(service.get_report_path(filename) + "\n")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "metrics": cmd_metrics,
    "table": cmd_table,
    "sim": cmd_sim,
    "gen": cmd_gen,
    "report": cmd_report,
}


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    setup_logging(args.log_level)

    try:
        return COMMANDS[args.verb](args, out)
    except UnknownCellError as exc:
        err.write(parser.format_usage())
        err.write(f"revseq: error: {exc}\n")
        return EXIT_USAGE
    except RevSeqError as exc:
        err.write(f"revseq: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        path = getattr(exc, "filename", None)
        err.write(f"revseq: error: {path + ': ' if path else ''}{exc.strerror or exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
