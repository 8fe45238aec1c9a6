"""Synchronous simulation of sequential Fredkin circuits.

One step evaluates the combinational core once with the state feedback nets
set to the present state, then commits every state element at the same time.
Master-slave behaviour comes from the circuit structure alone.
"""
import logging
from typing import Dict, List, Mapping, Optional, Sequence

from models import SequentialCircuit, as_sequential
from schemas import Stimulus, Trace, TraceStep
from services.fredkin import check_bit
from services.netlist_service import AnyCircuit, CircuitEvaluator, require_valid
from utils.exceptions import InputArityError, StimulusError, UnknownNetError

logger = logging.getLogger("revseq.simulator")


class Simulator:
    def __init__(self, circuit: AnyCircuit):
        self.circuit: SequentialCircuit = as_sequential(circuit)
        require_valid(self.circuit)
        self._evaluator = CircuitEvaluator(self.circuit.core)
        core = self.circuit.core
        self.input_names = core.primary_inputs
        self.output_names = core.primary_outputs
        self.state_names = self.circuit.state_names

    def initial_state(self, overrides: Optional[Mapping[str, int]] = None) -> Dict[str, int]:
        """StateElement inits with overrides merged on top"""
        state = self.circuit.initial_state
        for name, bit in (overrides or {}).items():
            if name not in state:
                raise UnknownNetError(name, "state net")
            state[name] = check_bit(name, bit)
        return state

    def _forbidden_warnings(self, inputs: Mapping[str, int], step_index: int) -> List[str]:
        warnings = []
        for group in self.circuit.forbidden:
            if all(inputs[net] for net in group):
                message = (f"step {step_index}: forbidden input {'='.join(group)}=1 "
                           f"on '{self.circuit.name}'")
                logger.warning(message)
                warnings.append(message)
        return warnings

    def step(self, state: Mapping[str, int], inputs: Mapping[str, int], step_index: int = 0) -> TraceStep:
        state_keys, input_keys = set(state), set(inputs)
        if state_keys != set(self.state_names):
            raise InputArityError(set(self.state_names) - state_keys, state_keys - set(self.state_names), "state")
        if input_keys != set(self.input_names):
            raise InputArityError(set(self.input_names) - input_keys, input_keys - set(self.input_names), "inputs")
        values = self._evaluator.evaluate({**inputs, **state})
        return TraceStep(
            step_index=step_index,
            inputs={name: int(inputs[name]) for name in self.input_names},
            outputs={name: values[name] for name in self.output_names},
            state_before={name: int(state[name]) for name in self.state_names},
            state_after={s.feedback: values[s.next] for s in self.circuit.states},
            warnings=self._forbidden_warnings(inputs, step_index),
        )

    def run(self, stimulus: Stimulus, initial_state: Optional[Mapping[str, int]] = None) -> Trace:
        if sorted(stimulus.input_names) != sorted(self.input_names):
            names = set(stimulus.input_names)
            raise InputArityError(set(self.input_names) - names, names - set(self.input_names), "stimulus")
        state = self.initial_state(initial_state)
        trace_start = dict(state)
        steps = []
        for index, vector in enumerate(stimulus.vectors()):
            result = self.step(state, vector, index)
            steps.append(result)
            state = result.state_after
        logger.debug("simulated '%s' for %d steps", self.circuit.name, len(steps))
        return Trace(
            circuit_name=self.circuit.name,
            input_names=list(self.input_names),
            output_names=list(self.output_names),
            state_names=list(self.state_names),
            initial_state=trace_start,
            steps=steps,
        )

    def settles(self, result: TraceStep) -> bool:
        """Re-evaluating a step with its committed state reproduces the same values"""
        again = self.step(result.state_after, result.inputs, result.step_index)
        return again.state_after == result.state_after and again.outputs == result.outputs


def step(circuit: AnyCircuit, state: Mapping[str, int], inputs: Mapping[str, int]) -> TraceStep:
    return Simulator(circuit).step(state, inputs)


def run(circuit: AnyCircuit, stimulus: Stimulus, initial_state: Optional[Mapping[str, int]] = None) -> Trace:
    return Simulator(circuit).run(stimulus, initial_state)


def pulse_stimulus(input_names: Sequence[str], pulses: Sequence[Sequence[int]], clock: str = "cp") -> Stimulus:
    """Expand per-pulse data vectors into (CP=1, CP=0) step pairs.

    input_names lists the clock and the data inputs; each pulse vector gives
    the data inputs in order, held across both steps.
    """
    data_names = [name for name in input_names if name != clock]
    steps = []
    for vector in pulses:
        if len(vector) != len(data_names):
            raise StimulusError(f"pulse of {len(vector)} bits for {len(data_names)} data inputs")
        data = dict(zip(data_names, vector))
        for level in (1, 0):
            data[clock] = level
            steps.append([data[name] for name in input_names])
    return Stimulus(input_names=list(input_names), steps=steps)
