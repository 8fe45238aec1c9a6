"""Netlist text format, stimulus CSV files and circuit source resolution.

Grammar (one declaration per line, ``#`` starts a comment)::

    circuit <name>
    input <id>...
    const0 <id>...
    const1 <id>...
    state <fb> init <0|1> next <next>
    gate <gid> F <x1> <x2> <x3> -> <y1> <y2> <y3>
    output <id>...
    garbage <id>...
    forbid <id>...
    end

Sections appear in this order; any of them may repeat, and all except
``circuit`` and ``end`` may be absent. A gate-less body is a plain
wire bundle.
"""
import io
import logging
import re
import sys
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import pandas as pd

from models import (
    IDENTIFIER,
    Circuit,
    GateInstance,
    SequentialCircuit,
    SinkRole,
    SourceRole,
    StateElement,
    as_sequential,
)
from schemas import Stimulus, ViolationKind
from services.netlist_service import AnyCircuit, require_valid, validate
from utils.exceptions import NetlistSemanticError, NetlistSyntaxError, StimulusError

logger = logging.getLogger("revseq.netlist_io")

TOKEN = re.compile(r"\S+")

SECTION_RANK = {
    "circuit": 0, "input": 1, "const0": 2, "const1": 3, "state": 4,
    "gate": 5, "output": 6, "garbage": 7, "forbid": 8, "end": 9,
}
SOURCE_SECTIONS = {
    "input": SourceRole.PRIMARY_INPUT,
    "const0": SourceRole.CONST0,
    "const1": SourceRole.CONST1,
}
SINK_SECTIONS = {"output": SinkRole.PRIMARY_OUTPUT, "garbage": SinkRole.GARBAGE}

Token = Tuple[str, int]


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.name: Optional[str] = None
        self.sources: Dict[str, SourceRole] = {}
        self.sinks: Dict[str, SinkRole] = {}
        self.gates: List[GateInstance] = []
        self.states: List[StateElement] = []
        self.forbidden: List[Tuple[str, ...]] = []
        self.issues: List[Tuple[int, str]] = []
        # provenance for semantic errors
        self.first_seen: Dict[str, int] = {}
        self.driver_line: Dict[str, int] = {}
        self.gate_line: Dict[str, int] = {}
        self.rank = -1

    def _expected_next(self) -> List[str]:
        if self.rank < 0:
            return ["circuit"]
        return [k for k, r in SECTION_RANK.items() if r >= max(self.rank, 1)]

    def _ident(self, token: Token, line: int) -> str:
        text, column = token
        if not IDENTIFIER.match(text):
            raise NetlistSyntaxError(line, column, ["identifier"], text)
        self.first_seen.setdefault(text, line)
        return text

    def _keyword(self, token: Token, line: int, word: str) -> None:
        if token[0] != word:
            raise NetlistSyntaxError(line, token[1], [word], token[0])

    def _arity(self, tokens: List[Token], line: int, count: int, expected: str) -> None:
        if len(tokens) < count:
            end_column = len(self.lines[line - 1].split("#", 1)[0].rstrip()) + 1
            raise NetlistSyntaxError(line, end_column, [expected], "end of line")
        if len(tokens) > count:
            raise NetlistSyntaxError(line, tokens[count][1], ["end of line"], tokens[count][0])

    def _declare_source(self, net: str, role: SourceRole, line: int) -> None:
        if net in self.sources:
            self.issues.append((line, f"net '{net}' is declared twice (first on line {self.driver_line[net]})"))
            return
        self.sources[net] = role
        self.driver_line[net] = line

    def _tag_sink(self, net: str, role: SinkRole, line: int) -> None:
        if net in self.sinks:
            self.issues.append((line, f"net '{net}' is tagged more than once"))
            return
        self.sinks[net] = role

    def parse(self) -> SequentialCircuit:
        ended = False
        for line, raw in enumerate(self.lines, start=1):
            body = raw.split("#", 1)[0]
            tokens = [(m.group(0), m.start() + 1) for m in TOKEN.finditer(body)]
            if not tokens:
                continue
            keyword, column = tokens[0]
            if ended:
                raise NetlistSyntaxError(line, column, ["end of input"], keyword)
            if keyword not in SECTION_RANK or keyword not in self._expected_next():
                raise NetlistSyntaxError(line, column, self._expected_next(), keyword)
            self.rank = SECTION_RANK[keyword]
            self._statement(keyword, tokens, line)
            ended = keyword == "end"
        if not ended:
            raise NetlistSyntaxError(len(self.lines) + 1, 1, self._expected_next(), "end of input")
        return self._finish()

    def _statement(self, keyword: str, tokens: List[Token], line: int) -> None:
        args = tokens[1:]
        if keyword == "circuit":
            self._arity(tokens, line, 2, "circuit name")
            self.name = self._ident(args[0], line)
        elif keyword == "end":
            self._arity(tokens, line, 1, "end of line")
        elif keyword == "state":
            self._arity(tokens, line, 6, "state declaration")
            feedback = self._ident(args[0], line)
            self._keyword(args[1], line, "init")
            if args[2][0] not in ("0", "1"):
                raise NetlistSyntaxError(line, args[2][1], ["0", "1"], args[2][0])
            self._keyword(args[3], line, "next")
            next_net = self._ident(args[4], line)
            self._declare_source(feedback, SourceRole.STATE_FEEDBACK, line)
            self.states.append(StateElement(feedback=feedback, next=next_net, init=int(args[2][0])))
        elif keyword == "gate":
            self._arity(tokens, line, 10, "gate declaration")
            gate_id = self._ident(args[0], line)
            self._keyword(args[1], line, "F")
            inputs = tuple(self._ident(t, line) for t in args[2:5])
            self._keyword(args[5], line, "->")
            outputs = tuple(self._ident(t, line) for t in args[6:9])
            self.gates.append(GateInstance(id=gate_id, inputs=inputs, outputs=outputs))
            self.gate_line.setdefault(gate_id, line)
            for net in outputs:
                self.driver_line.setdefault(net, line)
        else:
            if not args:
                end_column = len(self.lines[line - 1].split("#", 1)[0].rstrip()) + 1
                raise NetlistSyntaxError(line, end_column, ["identifier"], "end of line")
            nets = [self._ident(t, line) for t in args]
            if keyword in SOURCE_SECTIONS:
                for net in nets:
                    self._declare_source(net, SOURCE_SECTIONS[keyword], line)
            elif keyword in SINK_SECTIONS:
                for net in nets:
                    self._tag_sink(net, SINK_SECTIONS[keyword], line)
            else:
                self.forbidden.append(tuple(nets))

    def _line_of(self, net: Optional[str], gate: Optional[str]) -> int:
        if gate is not None and gate in self.gate_line:
            return self.gate_line[gate]
        if net is not None:
            return self.driver_line.get(net, self.first_seen.get(net, 1))
        return 1

    def _finish(self) -> SequentialCircuit:
        for state in self.states:
            if state.next in self.sinks:
                self.issues.append((self.first_seen[state.next], f"net '{state.next}' is tagged more than once"))
            else:
                self.sinks[state.next] = SinkRole.STATE_NEXT
        core = Circuit(name=self.name, sources=self.sources, gates=self.gates, sinks=self.sinks)
        circuit = SequentialCircuit(core=core, states=self.states, forbidden=self.forbidden)
        for violation in validate(circuit):
            if violation.kind is ViolationKind.UNDECLARED_NET and violation.net is not None:
                line = self.first_seen.get(violation.net, 1)
            else:
                line = self._line_of(violation.net, violation.gate)
            self.issues.append((line, f"{violation.kind.value}: {violation.message}"))
        if self.issues:
            raise NetlistSemanticError(self.issues, self.name)
        return circuit


def parse_netlist(text: str) -> SequentialCircuit:
    try:
        return _Parser(text).parse()
    except (NetlistSyntaxError, NetlistSemanticError) as exc:
        logger.info("rejected netlist: %s", exc)
        raise


def emit_netlist(circuit: AnyCircuit) -> str:
    """Canonical text of a valid circuit"""
    circuit = as_sequential(circuit)
    require_valid(circuit)
    core = circuit.core
    lines = [f"circuit {core.name}"]
    for section, role in SOURCE_SECTIONS.items():
        nets = core.sources_with(role)
        if nets:
            lines.append(f"{section} {' '.join(nets)}")
    for state in circuit.states:
        lines.append(f"state {state.feedback} init {state.init} next {state.next}")
    for gate in core.gates:
        lines.append(f"gate {gate.id} F {' '.join(gate.inputs)} -> {' '.join(gate.outputs)}")
    for section, role in SINK_SECTIONS.items():
        nets = core.sinks_with(role)
        if nets:
            lines.append(f"{section} {' '.join(nets)}")
    for group in circuit.forbidden:
        lines.append(f"forbid {' '.join(group)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def read_stimulus(source: Union[str, TextIO], input_names: Optional[Sequence[str]] = None) -> Stimulus:
    """Read a stimulus CSV: a header of input names, then one row of bits per step"""
    try:
        frame = pd.read_csv(source, header=None, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise StimulusError("stimulus file is empty")
    except pd.errors.ParserError as exc:
        raise StimulusError(f"malformed stimulus: {exc}")
    header = [str(name).strip() for name in frame.iloc[0].tolist()]
    if len(set(header)) != len(header):
        raise StimulusError("stimulus header repeats an input name", line=1)
    if input_names is not None and set(header) != set(input_names):
        raise StimulusError(
            f"stimulus header {', '.join(header)} does not match inputs {', '.join(input_names)}", line=1
        )
    steps = []
    for offset, row in enumerate(frame.iloc[1:].itertuples(index=False), start=2):
        vector = []
        for name, value in zip(header, row):
            value = "" if pd.isna(value) else str(value).strip()
            if value not in ("0", "1"):
                raise StimulusError(f"value {value!r} for '{name}' is not 0 or 1", line=offset)
            vector.append(int(value))
        steps.append(vector)
    return Stimulus(input_names=header, steps=steps)


def load_circuit_source(source: str, n: Optional[int] = None, stdin: Optional[TextIO] = None) -> SequentialCircuit:
    """Resolve a circuit source: a file path, '-' for standard input, or gen:<cell>"""
    if source.startswith("gen:"):
        from services.stdcells import build_cell

        return as_sequential(build_cell(source[len("gen:"):], n))
    if source == "-":
        return parse_netlist((stdin or sys.stdin).read())
    with open(source, "r", encoding="utf-8") as handle:
        return parse_netlist(handle.read())


def stimulus_from_text(text: str, input_names: Optional[Sequence[str]] = None) -> Stimulus:
    return read_stimulus(io.StringIO(text), input_names)
