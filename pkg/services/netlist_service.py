"""Structural rules, evaluation and cost metrics of Fredkin netlists."""
import logging
from collections import defaultdict
from typing import Dict, List, Mapping, Union

import networkx as nx
import numpy as np

from models import (
    CONSTANT_VALUES,
    Circuit,
    SequentialCircuit,
    SinkRole,
    SourceRole,
    core_of,
)
from schemas import Metrics, Violation, ViolationKind
from services.fredkin import check_bit, fredkin_eval
from utils.exceptions import InputArityError, InvalidCircuitError

logger = logging.getLogger("revseq.netlist")

AnyCircuit = Union[Circuit, SequentialCircuit]


def validate(circuit: AnyCircuit) -> List[Violation]:
    """Return every structural violation; an empty list means the circuit is valid.

    State pairing and forbidden-input rules are only checked when a
    SequentialCircuit is given, since a bare core carries unpaired state roles.
    """
    core = core_of(circuit)
    violations: List[Violation] = []

    def add(kind: ViolationKind, message: str, net: str = None, gate: str = None):
        violations.append(Violation(kind=kind, message=message, net=net, gate=gate))

    drivers: Dict[str, List[str]] = defaultdict(list)
    for net, role in core.sources.items():
        drivers[net].append(f"{role.value} declaration")

    driver_gate: Dict[str, int] = {}
    readers: Dict[str, List[int]] = defaultdict(list)
    seen_ids = set()
    for index, gate in enumerate(core.gates):
        if gate.id in seen_ids:
            add(ViolationKind.DUPLICATE_GATE_ID, f"gate id '{gate.id}' is used more than once", gate=gate.id)
        seen_ids.add(gate.id)
        if len(set(gate.pins)) != len(gate.pins):
            add(ViolationKind.DUPLICATE_PIN, f"gate '{gate.id}' binds the same net to several pins", gate=gate.id)
        for net in gate.outputs:
            drivers[net].append(f"gate {gate.id}")
            driver_gate.setdefault(net, index)
        for net in gate.inputs:
            readers[net].append(index)

    for net, found in drivers.items():
        if len(found) > 1:
            add(ViolationKind.DUPLICATE_DRIVER, f"net '{net}' is driven by {', '.join(found)}", net=net)

    for net, found in readers.items():
        if len(found) > 1:
            gate_ids = ", ".join(core.gates[i].id for i in found)
            add(ViolationKind.MULTIPLE_READERS, f"net '{net}' is read by gates {gate_ids}", net=net)
        if net not in drivers:
            add(ViolationKind.UNDECLARED_NET, f"net '{net}' is read but never declared or driven", net=net)

    for net, role in core.sinks.items():
        if net not in drivers:
            add(ViolationKind.UNDECLARED_NET, f"{role.value} net '{net}' is never declared or driven", net=net)
        elif net in readers:
            add(ViolationKind.CONSUMED_AND_TAGGED, f"net '{net}' is read by a gate and also tagged {role.value}", net=net)

    for net in drivers:
        if net not in readers and net not in core.sinks:
            add(ViolationKind.DANGLING_NET, f"net '{net}' is neither read nor tagged", net=net)

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(core.gates)))
    for net, found in readers.items():
        if net in driver_gate:
            for reader in found:
                graph.add_edge(driver_gate[net], reader)
    if not nx.is_directed_acyclic_graph(graph):
        loop = [core.gates[u].id for u, _ in nx.find_cycle(graph)]
        add(ViolationKind.CYCLE, f"gate wiring is cyclic: {' -> '.join(loop + loop[:1])}", gate=loop[0])
    else:
        for u, v in graph.edges:
            if u >= v:
                add(
                    ViolationKind.OUT_OF_ORDER,
                    f"gate '{core.gates[v].id}' reads a net driven by later gate '{core.gates[u].id}'",
                    gate=core.gates[v].id,
                )

    if isinstance(circuit, SequentialCircuit):
        violations.extend(_state_violations(circuit))
    return violations


def _state_violations(circuit: SequentialCircuit) -> List[Violation]:
    core = circuit.core
    found: List[Violation] = []
    feedback_seen, next_seen = set(), set()
    for state in circuit.states:
        if core.sources.get(state.feedback) is not SourceRole.STATE_FEEDBACK:
            found.append(Violation(
                kind=ViolationKind.UNPAIRED_STATE, net=state.feedback,
                message=f"state feedback '{state.feedback}' is not declared as a state source",
            ))
        if core.sinks.get(state.next) is not SinkRole.STATE_NEXT:
            found.append(Violation(
                kind=ViolationKind.UNPAIRED_STATE, net=state.next,
                message=f"state next '{state.next}' is not tagged as a state sink",
            ))
        if state.feedback in feedback_seen or state.next in next_seen:
            found.append(Violation(
                kind=ViolationKind.UNPAIRED_STATE, net=state.feedback,
                message=f"state '{state.feedback}' -> '{state.next}' reuses a paired net",
            ))
        feedback_seen.add(state.feedback)
        next_seen.add(state.next)

    for net in core.sources_with(SourceRole.STATE_FEEDBACK):
        if net not in feedback_seen:
            found.append(Violation(kind=ViolationKind.UNPAIRED_STATE, net=net,
                                   message=f"state source '{net}' has no state element"))
    for net in core.sinks_with(SinkRole.STATE_NEXT):
        if net not in next_seen:
            found.append(Violation(kind=ViolationKind.UNPAIRED_STATE, net=net,
                                   message=f"state sink '{net}' has no state element"))

    for group in circuit.forbidden:
        for net in group:
            if core.sources.get(net) is not SourceRole.PRIMARY_INPUT:
                found.append(Violation(kind=ViolationKind.UNDECLARED_NET, net=net,
                                       message=f"forbidden-input rule names '{net}', which is not a primary input"))
    return found


def require_valid(circuit: AnyCircuit) -> None:
    violations = validate(circuit)
    if violations:
        raise InvalidCircuitError(violations, core_of(circuit).name)


class CircuitEvaluator:
    """Validated, index-compiled form of a circuit for repeated evaluation"""

    def __init__(self, circuit: AnyCircuit):
        core = core_of(circuit)
        require_valid(core)
        self.circuit = core
        self.nets = list(core.sources) + [net for gate in core.gates for net in gate.outputs]
        self._index = {net: i for i, net in enumerate(self.nets)}
        self._plan = [tuple(self._index[net] for net in gate.pins) for gate in core.gates]
        self._constants = [
            (self._index[net], CONSTANT_VALUES[role])
            for net, role in core.sources.items()
            if role in CONSTANT_VALUES
        ]
        self.input_nets = core.input_nets
        self._inputs = frozenset(self.input_nets)
        self._sources = frozenset(core.sources)

    def _propagate(self, values: list) -> list:
        for a, b, c, p, q, r in self._plan:
            values[p], values[q], values[r] = fredkin_eval(values[a], values[b], values[c])
        return values

    def evaluate(self, assignment: Mapping[str, int]) -> Dict[str, int]:
        """Constants pinned; assignment covers primary inputs and state feedback"""
        keys = set(assignment)
        if keys != self._inputs:
            raise InputArityError(self._inputs - keys, keys - self._inputs)
        values = [0] * len(self.nets)
        for net, bit in assignment.items():
            values[self._index[net]] = check_bit(net, bit)
        for index, bit in self._constants:
            values[index] = bit
        return dict(zip(self.nets, self._propagate(values)))

    def evaluate_columns(self, columns: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
        """Vectorised evaluation: one uint8 column per source, one entry per assignment"""
        keys = set(columns)
        if keys != self._sources:
            raise InputArityError(self._sources - keys, keys - self._sources, what="source columns")
        values: list = [None] * len(self.nets)
        for net, column in columns.items():
            values[self._index[net]] = np.asarray(column, dtype=np.uint8)
        return dict(zip(self.nets, self._propagate(values)))


def eval_combinational(circuit: AnyCircuit, assignment: Mapping[str, int]) -> Dict[str, int]:
    return CircuitEvaluator(circuit).evaluate(assignment)


def metrics(circuit: AnyCircuit) -> Metrics:
    require_valid(circuit)
    core = core_of(circuit)
    return Metrics(
        gate_count=len(core.gates),
        garbage_count=len(core.garbage),
        ancilla_count=len(core.sources_with(SourceRole.CONST0, SourceRole.CONST1)),
        primary_input_count=len(core.primary_inputs),
        primary_output_count=len(core.primary_outputs),
        state_count=len(core.sources_with(SourceRole.STATE_FEEDBACK)),
    )
