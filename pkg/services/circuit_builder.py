"""Incremental construction of Fredkin netlists.

The builder hands out fresh net names, accepts forward references (a net may
be read before the gate driving it is added), and orders the gates
topologically when the circuit is built. Every circuit it returns has passed
validation.
"""
import logging
from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from models import Circuit, GateInstance, SequentialCircuit, SinkRole, SourceRole, StateElement
from services.netlist_service import validate
from utils.exceptions import InvalidCircuitError

logger = logging.getLogger("revseq.builder")

Outputs = Optional[Sequence[Optional[str]]]


class CircuitBuilder:
    def __init__(self, name: str):
        self.name = name
        self._prefix = ""
        self._sources: Dict[str, SourceRole] = {}
        self._sinks: Dict[str, SinkRole] = {}
        self._gates: List[GateInstance] = []
        self._states: List[StateElement] = []
        self._forbidden: List[Tuple[str, ...]] = []
        self._names = set()
        self._driven = set()
        self._counters: Dict[str, int] = {}
        self._gate_count = 0

    # -- naming -----------------------------------------------------------

    @contextmanager
    def scope(self, prefix: str) -> Iterator["CircuitBuilder"]:
        """Prefix every fresh net and gate id created inside the block"""
        outer = self._prefix
        self._prefix = outer + prefix
        try:
            yield self
        finally:
            self._prefix = outer

    def _fresh(self, hint: str) -> str:
        stem = f"{self._prefix}{hint}"
        while True:
            self._counters[stem] = self._counters.get(stem, 0) + 1
            name = f"{stem}{self._counters[stem]}"
            if name not in self._names:
                self._names.add(name)
                return name

    def _drive(self, name: Optional[str], hint: str) -> str:
        if name is None:
            name = self._fresh(hint)
        elif name in self._driven:
            raise ValueError(f"net '{name}' already has a driver")
        self._names.add(name)
        self._driven.add(name)
        return name

    def net(self, hint: str = "w") -> str:
        """Reserve a name for a net whose driver is added later"""
        return self._fresh(hint)

    # -- sources ----------------------------------------------------------

    def input(self, name: str) -> str:
        self._sources[self._drive(name, "i")] = SourceRole.PRIMARY_INPUT
        return name

    def constant(self, value: int, name: Optional[str] = None) -> str:
        role = SourceRole.CONST1 if value else SourceRole.CONST0
        name = self._drive(name, "o" if value else "z")
        self._sources[name] = role
        return name

    def state(self, feedback: str, next_net: str, init: int = 0) -> str:
        self._sources[self._drive(feedback, "s")] = SourceRole.STATE_FEEDBACK
        self._names.add(next_net)
        self._states.append(StateElement(feedback=feedback, next=next_net, init=init))
        return feedback

    # -- gates ------------------------------------------------------------

    def fredkin(self, x1: str, x2: str, x3: str, outputs: Outputs = None,
                gate_id: Optional[str] = None) -> Tuple[str, str, str]:
        wanted = tuple(outputs) if outputs is not None else (None, None, None)
        if len(wanted) != 3:
            raise ValueError("a Fredkin gate has exactly three outputs")
        outs = tuple(self._drive(name, "w") for name in wanted)
        self._gate_count += 1
        gate_id = gate_id or f"{self._prefix}g{self._gate_count}"
        self._gates.append(GateInstance(id=gate_id, inputs=(x1, x2, x3), outputs=outs))
        return outs

    def copy(self, a: str, outputs: Outputs = None) -> Tuple[str, str, str]:
        """F(a, 0, 1) -> (a, a, not a)"""
        return self.fredkin(a, self.constant(0), self.constant(1), outputs)

    def negate(self, a: str, out: Optional[str] = None) -> str:
        first, second, result = self.copy(a, (None, None, out))
        self.garbage(first, second)
        return result

    def and_(self, a: str, b: str, out: Optional[str] = None) -> str:
        first, inhibited, result = self.fredkin(a, b, self.constant(0), (None, None, out))
        self.garbage(first, inhibited)
        return result

    def or_(self, a: str, b: str, out: Optional[str] = None) -> str:
        first, result, implied = self.fredkin(a, b, self.constant(1), (None, out, None))
        self.garbage(first, implied)
        return result

    def inhibit(self, a: str, b: str, out: Optional[str] = None) -> str:
        """not a and b"""
        first, result, conj = self.fredkin(a, b, self.constant(0), (None, out, None))
        self.garbage(first, conj)
        return result

    def xor(self, a: str, b: str, out: Optional[str] = None) -> str:
        b1, b2, nb = self.copy(b)
        first, result, xnor = self.fredkin(a, b1, nb, (None, out, None))
        self.garbage(b2, first, xnor)
        return result

    # -- sinks ------------------------------------------------------------

    def output(self, *nets: str) -> None:
        for net in nets:
            self._sinks[net] = SinkRole.PRIMARY_OUTPUT

    def garbage(self, *nets: str) -> None:
        for net in nets:
            self._sinks[net] = SinkRole.GARBAGE

    def forbid(self, *nets: str) -> None:
        self._forbidden.append(tuple(nets))

    # -- result -----------------------------------------------------------

    def _ordered_gates(self) -> List[GateInstance]:
        driver = {net: i for i, gate in enumerate(self._gates) for net in gate.outputs}
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self._gates)))
        for i, gate in enumerate(self._gates):
            for net in gate.inputs:
                if net in driver:
                    graph.add_edge(driver[net], i)
        try:
            order = list(nx.lexicographical_topological_sort(graph))
        except nx.NetworkXUnfeasible:
            # left as added; validation reports the cycle
            return list(self._gates)
        return [self._gates[i] for i in order]

    def build(self) -> SequentialCircuit:
        sinks = dict(self._sinks)
        for state in self._states:
            sinks[state.next] = SinkRole.STATE_NEXT
        core = Circuit(name=self.name, sources=dict(self._sources), gates=self._ordered_gates(), sinks=sinks)
        circuit = SequentialCircuit(core=core, states=list(self._states), forbidden=list(self._forbidden))
        violations = validate(circuit)
        if violations:
            raise InvalidCircuitError(violations, self.name)
        logger.debug("built '%s' with %d gates", self.name, len(core.gates))
        return circuit

    def build_combinational(self) -> Circuit:
        if self._states:
            raise ValueError(f"'{self.name}' has state elements")
        return self.build().core
