"""Value Change Dump output for simulation traces"""
import io
import logging
from typing import Dict, List

from vcd import VCDWriter

from schemas import Trace, TraceStep
from utils.exceptions import EmptyTraceError

logger = logging.getLogger("revseq.vcd")


def _values(step: TraceStep) -> Dict[str, int]:
    values = dict(step.inputs)
    values.update(step.outputs)
    values.update(step.state_after)
    return values


def traced_names(trace: Trace) -> List[str]:
    return trace.input_names + trace.output_names + trace.state_names


def emit_vcd(trace: Trace) -> str:
    """One timestamp per step; after the initial dump only changed values are written.

    State variables carry the value committed at the end of each step.
    """
    if not trace.steps:
        raise EmptyTraceError()
    buffer = io.StringIO()
    first = _values(trace.steps[0])
    with VCDWriter(buffer, timescale="1 ns") as writer:
        variables = {
            name: writer.register_var(trace.circuit_name, name, "wire", size=1, init=first[name])
            for name in traced_names(trace)
        }
        writer.flush(0)
        previous = first
        for step in trace.steps[1:]:
            current = _values(step)
            for name, var in variables.items():
                if current[name] != previous[name]:
                    writer.change(var, step.step_index, current[name])
            writer.flush(step.step_index)
            previous = current
    logger.debug("dumped %d steps of '%s'", len(trace.steps), trace.circuit_name)
    return buffer.getvalue()
