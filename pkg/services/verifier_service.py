"""Exhaustive semantic checks: reversibility, conservativity, oracle equivalence.

Assignments are enumerated as numpy columns (one uint8 entry per assignment,
ascending binary order with the first net as the most significant bit), so a
2^20 enumeration is a handful of array operations per gate.

Reversibility and conservativity are judged at full wire width: constants are
freed, because they are properties of the gate network. Equivalence pins the
constants, because that is the behaviour the circuit computes.
"""
import inspect
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from models import CONSTANT_VALUES, core_of
from schemas import CheckReport, CheckResult, NetlistIssue
from services.fredkin import gate_is_conservative, gate_is_reversible
from services.netlist_service import AnyCircuit, CircuitEvaluator, validate
from utils.exceptions import (
    EnumerationTooLargeError,
    InvalidCircuitError,
    NetlistSemanticError,
    OracleArityError,
    UnknownNetError,
)

logger = logging.getLogger("revseq.verifier")

ColumnEvaluator = Callable[[CircuitEvaluator, Dict[str, np.ndarray]], Dict[str, np.ndarray]]

STRATEGIES = ("exhaustive", "compositional", "auto")


def _default_evaluator(evaluator: CircuitEvaluator, columns: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    return evaluator.evaluate_columns(columns)


def enumerate_columns(nets: Sequence[str]) -> Dict[str, np.ndarray]:
    width = len(nets)
    rows = np.arange(1 << width, dtype=np.int64)
    return {
        net: ((rows >> (width - 1 - position)) & 1).astype(np.uint8)
        for position, net in enumerate(nets)
    }


@dataclass(frozen=True)
class BehaviorTable:
    input_nets: List[str]
    terminal_nets: List[str]
    inputs: np.ndarray
    terminals: np.ndarray

    def __len__(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def rows(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return list(self.iter_rows())

    def iter_rows(self) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        for inp, out in zip(self.inputs.tolist(), self.terminals.tolist()):
            yield tuple(inp), tuple(out)

    def lookup(self, assignment: Mapping[str, int]) -> Dict[str, int]:
        index = 0
        for net in self.input_nets:
            index = (index << 1) | int(assignment[net])
        return dict(zip(self.terminal_nets, (int(b) for b in self.terminals[index])))

    def to_dataframe(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            np.hstack([self.inputs, self.terminals]) if len(self) else [],
            columns=self.input_nets + self.terminal_nets,
        )
        frame.columns = pd.MultiIndex.from_tuples(
            [("in", n) for n in self.input_nets] + [("out", n) for n in self.terminal_nets]
        )
        return frame


class Verifier:
    def __init__(self, cap: Optional[int] = None, evaluator: Optional[ColumnEvaluator] = None):
        self.cap = config.ENUMERATION_CAP if cap is None else cap
        self._evaluate = evaluator or _default_evaluator

    def _compile(self, circuit: AnyCircuit) -> CircuitEvaluator:
        return CircuitEvaluator(core_of(circuit))

    def _require_width(self, width: int) -> None:
        if width > self.cap:
            raise EnumerationTooLargeError(width, self.cap)

    def _pinned_columns(self, compiled: CircuitEvaluator) -> Dict[str, np.ndarray]:
        core = compiled.circuit
        self._require_width(len(core.input_nets))
        columns = enumerate_columns(core.input_nets)
        size = 1 << len(core.input_nets)
        for net, role in core.sources.items():
            if role in CONSTANT_VALUES:
                columns[net] = np.full(size, CONSTANT_VALUES[role], dtype=np.uint8)
        return columns

    def behavior_table(self, circuit: AnyCircuit) -> BehaviorTable:
        compiled = self._compile(circuit)
        core = compiled.circuit
        columns = self._pinned_columns(compiled)
        values = self._evaluate(compiled, columns)
        size = 1 << len(core.input_nets)
        return BehaviorTable(
            input_nets=core.input_nets,
            terminal_nets=core.terminal_nets,
            inputs=_stack(columns, core.input_nets, size),
            terminals=_stack(values, core.terminal_nets, size),
        )

    def _resolve(self, circuit: AnyCircuit, strategy: str) -> str:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy '{strategy}', expected one of {', '.join(STRATEGIES)}")
        if strategy == "auto":
            width = len(core_of(circuit).free_nets)
            strategy = "exhaustive" if width <= self.cap else "compositional"
        return strategy

    def _full_width(self, circuit: AnyCircuit):
        compiled = self._compile(circuit)
        core = compiled.circuit
        free = core.free_nets
        self._require_width(len(free))
        logger.info("enumerating %d free nets of '%s'", len(free), core.name)
        columns = enumerate_columns(free)
        values = self._evaluate(compiled, columns)
        size = 1 << len(free)
        return core, columns, _stack(values, core.terminal_nets, size)

    def check_reversible(self, circuit: AnyCircuit, strategy: str = "exhaustive") -> CheckResult:
        strategy = self._resolve(circuit, strategy)
        if strategy == "compositional":
            return self._compositional(circuit, "reversible", gate_is_reversible())
        core, columns, terminals = self._full_width(circuit)
        codes = _pack(terminals)
        unique, first, counts = np.unique(codes, return_index=True, return_counts=True)
        if len(unique) == len(codes):
            return CheckResult(check="reversible", ok=True, strategy=strategy)
        clash = unique[np.argmax(counts > 1)]
        a, b = np.flatnonzero(codes == clash)[:2]
        witnesses = [_assignment(columns, core.free_nets, int(a)), _assignment(columns, core.free_nets, int(b))]
        return CheckResult(
            check="reversible", ok=False, strategy=strategy, witnesses=witnesses,
            detail=f"{len(codes) - len(unique)} terminal vectors are reached more than once",
        )

    def check_conservative(self, circuit: AnyCircuit, strategy: str = "exhaustive") -> CheckResult:
        strategy = self._resolve(circuit, strategy)
        if strategy == "compositional":
            return self._compositional(circuit, "conservative", gate_is_conservative())
        core, columns, terminals = self._full_width(circuit)
        source_weight = _stack(columns, core.free_nets, len(terminals)).sum(axis=1, dtype=np.int64)
        terminal_weight = terminals.sum(axis=1, dtype=np.int64)
        broken = np.flatnonzero(source_weight != terminal_weight)
        if len(broken) == 0:
            return CheckResult(check="conservative", ok=True, strategy=strategy)
        row = int(broken[0])
        return CheckResult(
            check="conservative", ok=False, strategy=strategy,
            witnesses=[_assignment(columns, core.free_nets, row)],
            detail=f"weight {int(source_weight[row])} in, {int(terminal_weight[row])} out",
        )

    def _compositional(self, circuit: AnyCircuit, check: str, gate_holds: bool) -> CheckResult:
        # Each gate is checked on its own 8 rows; a valid single-driver,
        # single-reader DAG composes them into a map on the whole wire set.
        violations = validate(core_of(circuit))
        if violations:
            raise InvalidCircuitError(violations, core_of(circuit).name)
        logger.info("checking '%s' %s gate by gate", core_of(circuit).name, check)
        detail = "" if gate_holds else "the Fredkin gate table fails this property"
        return CheckResult(check=check, ok=gate_holds, strategy="compositional", detail=detail)

    def check_equivalence(
        self,
        circuit: AnyCircuit,
        oracle: Callable[..., object],
        observed: Sequence[str],
    ) -> CheckResult:
        """Compare observed terminal nets with oracle(*bits) over every input assignment.

        The oracle receives one positional bit per input net (primary inputs,
        then state feedback) and returns a bit or a tuple of bits, one per
        observed net.
        """
        compiled = self._compile(circuit)
        core = compiled.circuit
        terminals = set(core.terminal_nets)
        for net in observed:
            if net not in terminals:
                raise UnknownNetError(net, "terminal net")
        arity = len(core.input_nets)
        try:
            inspect.signature(oracle).bind(*([0] * arity))
        except TypeError as exc:
            raise OracleArityError(f"oracle does not accept {arity} inputs: {exc}") from exc
        except ValueError:
            pass

        columns = self._pinned_columns(compiled)
        values = self._evaluate(compiled, columns)
        size = 1 << arity
        inputs = _stack(columns, core.input_nets, size).tolist()
        actual = _stack(values, list(observed), size).tolist()
        for row, (bits, got) in enumerate(zip(inputs, actual)):
            expected = oracle(*bits)
            expected = (expected,) if isinstance(expected, (int, np.integer)) else tuple(expected)
            if len(expected) != len(observed):
                raise OracleArityError(f"oracle returned {len(expected)} bits for {len(observed)} observed nets")
            if list(expected) != got:
                witness = dict(zip(core.input_nets, bits))
                return CheckResult(
                    check="equivalence", ok=False, strategy="exhaustive", witnesses=[witness],
                    detail=f"expected {dict(zip(observed, (int(b) for b in expected)))}, "
                           f"observed {dict(zip(observed, got))}",
                )
        return CheckResult(check="equivalence", ok=True, strategy="exhaustive")


def _stack(columns: Mapping[str, np.ndarray], nets: Sequence[str], size: int) -> np.ndarray:
    if not nets:
        return np.zeros((size, 0), dtype=np.uint8)
    return np.stack([np.broadcast_to(columns[net], (size,)) for net in nets], axis=1).astype(np.uint8)


def _pack(matrix: np.ndarray) -> np.ndarray:
    codes = np.zeros(matrix.shape[0], dtype=np.int64)
    for position in range(matrix.shape[1]):
        codes = (codes << 1) | matrix[:, position].astype(np.int64)
    return codes


def _assignment(columns: Mapping[str, np.ndarray], nets: Sequence[str], row: int) -> Dict[str, int]:
    return {net: int(columns[net][row]) for net in nets}


def behavior_table(circuit: AnyCircuit, cap: Optional[int] = None) -> BehaviorTable:
    return Verifier(cap).behavior_table(circuit)


def check_reversible(circuit: AnyCircuit, strategy: str = "exhaustive", cap: Optional[int] = None) -> CheckResult:
    return Verifier(cap).check_reversible(circuit, strategy)


def check_conservative(circuit: AnyCircuit, strategy: str = "exhaustive", cap: Optional[int] = None) -> CheckResult:
    return Verifier(cap).check_conservative(circuit, strategy)


def check_equivalence(circuit: AnyCircuit, oracle: Callable[..., object], observed: Sequence[str],
                      cap: Optional[int] = None) -> CheckResult:
    return Verifier(cap).check_equivalence(circuit, oracle, observed)


def check_report(circuit: AnyCircuit, strategy: str = "auto", cap: Optional[int] = None) -> CheckReport:
    """Reversibility and conservativity of a valid circuit in one report"""
    verifier = Verifier(cap)
    return CheckReport(
        circuit_name=core_of(circuit).name,
        valid=True,
        reversible=verifier.check_reversible(circuit, strategy),
        conservative=verifier.check_conservative(circuit, strategy),
    )


def invalid_report(error: NetlistSemanticError) -> CheckReport:
    return CheckReport(
        circuit_name=error.circuit_name,
        valid=False,
        issues=[NetlistIssue(line=line, message=message) for line, message in error.issues],
    )
