import re

import pytest

from schemas import Stimulus, Trace
from services.simulator import pulse_stimulus, run
from services.stdcells import build_latch, build_shift_register, register_state
from services.vcd_service import emit_vcd, traced_names
from utils.exceptions import EmptyTraceError


def read_vcd(text):
    """Variable names by id and (time, name, value) changes, tolerant of layout"""
    names = {}
    for match in re.finditer(r"\$var\s+\w+\s+1\s+(\S+)\s+(\S+)\s+\$end", text):
        names[match.group(1)] = match.group(2)
    body = text.split("$enddefinitions", 1)[1].split("$end", 1)[1]
    time, changes = 0, []
    for token in body.split():
        if token.startswith("#"):
            time = int(token[1:])
        elif token[0] in "01" and token[1:] in names:
            changes.append((time, names[token[1:]], int(token[0])))
    return names, changes


def latest_values(changes, names, until):
    values = {}
    for time, name, value in changes:
        if time <= until:
            values[name] = value
    return values


def d_latch_trace():
    stimulus = Stimulus(input_names=["e", "d"], steps=[[1, 1], [0, 0], [0, 1], [1, 0]])
    return run(build_latch("D"), stimulus)


def test_header_declares_every_traced_net():
    trace = d_latch_trace()
    text = emit_vcd(trace)
    assert "1ns" in re.search(r"\$timescale(.*?)\$end", text, re.S).group(1).replace(" ", "")
    assert re.search(r"\$scope\s+module\s+d_latch\s+\$end", text)
    assert "$dumpvars" in text
    names, _ = read_vcd(text)
    assert sorted(names.values()) == sorted(traced_names(trace))
    assert traced_names(trace) == ["e", "d", "q", "qn", "st"]


def test_values_follow_the_trace():
    trace = d_latch_trace()
    names, changes = read_vcd(emit_vcd(trace))
    for step in trace.steps:
        values = latest_values(changes, names, step.step_index)
        expected = {**step.inputs, **step.outputs, **step.state_after}
        assert values == expected


def test_only_changes_are_written():
    trace = d_latch_trace()
    names, changes = read_vcd(emit_vcd(trace))
    later = [(time, name) for time, name, _ in changes if time > 0]
    # step 1 drops e and d; step 2 raises d; step 3 raises e, drops d and clears the latch
    assert sorted(later) == sorted([
        (1, "e"), (1, "d"), (2, "d"), (3, "e"), (3, "d"), (3, "q"), (3, "qn"), (3, "st"),
    ])


def test_shift_register_state_changes_on_falling_clock():
    circuit = build_shift_register(4)
    trace = run(circuit, pulse_stimulus(["cp", "sin"], [[1], [0], [1], [1]]), register_state("r", "0110"))
    names, changes = read_vcd(emit_vcd(trace))
    clock = {s.step_index: s.inputs["cp"] for s in trace.steps}
    slave_changes = [(t, n) for t, n, _ in changes if t > 0 and n.endswith("_s_st")]
    assert slave_changes
    assert all(clock[t] == 0 for t, _ in slave_changes)


def test_empty_trace_is_rejected():
    trace = run(build_latch("D"), Stimulus(input_names=["e", "d"], steps=[]))
    assert isinstance(trace, Trace)
    with pytest.raises(EmptyTraceError):
        emit_vcd(trace)


def test_dump_is_complete_after_the_last_step():
    text = emit_vcd(d_latch_trace())
    assert "#3" in text.split()
    _, changes = read_vcd(text)
    assert max(time for time, _, _ in changes) == 3
