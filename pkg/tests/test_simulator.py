import random
from itertools import product

import pytest

from schemas import Stimulus
from services.simulator import Simulator, pulse_stimulus, run, step
from services.stdcells import (
    build_latch,
    build_ms_flipflop,
    build_serial_adder,
    build_serial_transfer,
    build_shift_register,
    latch_next_state,
    register_contents,
    register_state,
)
from utils.exceptions import InputArityError, UnknownNetError


def bits(value: int, n: int) -> str:
    return format(value, f"0{n}b")


def test_d_latch_steps():
    latch = build_latch("D")
    result = step(latch, {"st": 0}, {"e": 1, "d": 1})
    assert result.outputs["q"] == 1
    assert result.state_after == {"st": 1}
    held = step(latch, {"st": 1}, {"e": 0, "d": 0})
    assert held.outputs["q"] == 1
    assert held.state_after == {"st": 1}


def test_sr_forbidden_input_warns():
    result = step(build_latch("SR"), {"st": 0}, {"e": 1, "s": 1, "r": 1})
    assert result.state_after == {"st": 1}
    assert len(result.warnings) == 1
    quiet = step(build_latch("SR"), {"st": 0}, {"e": 0, "s": 1, "r": 1})
    assert quiet.warnings == []


def test_step_arity_errors():
    latch = build_latch("D")
    with pytest.raises(InputArityError):
        step(latch, {"st": 0}, {"e": 1})
    with pytest.raises(InputArityError):
        step(latch, {}, {"e": 1, "d": 0})


def test_empty_stimulus_gives_empty_trace():
    trace = run(build_latch("D", init=1), Stimulus(input_names=["e", "d"], steps=[]))
    assert trace.steps == []
    assert trace.final_state == {"st": 1}


def test_trace_chaining_and_determinism():
    rng = random.Random(7)
    stimulus = Stimulus(input_names=["e", "t"], steps=[[rng.randint(0, 1), rng.randint(0, 1)] for _ in range(30)])
    latch = build_latch("T")
    first = run(latch, stimulus)
    second = run(latch, stimulus)
    assert first == second
    assert [s.step_index for s in first.steps] == list(range(30))
    for before, after in zip(first.steps, first.steps[1:]):
        assert before.state_after == after.state_before


def test_unknown_initial_state_name():
    with pytest.raises(UnknownNetError):
        run(build_latch("D"), Stimulus(input_names=["e", "d"], steps=[[1, 1]]), {"nope": 1})


def test_stimulus_must_match_inputs():
    with pytest.raises(InputArityError):
        run(build_latch("D"), Stimulus(input_names=["e"], steps=[[1]]))


def test_ms_d_example():
    trace = run(build_ms_flipflop("D"), Stimulus(input_names=["cp", "d"], steps=[[1, 1], [0, 0]]))
    assert trace.steps[-1].outputs["q"] == 1


def test_ms_t_toggles_once_per_pulse():
    sim = Simulator(build_ms_flipflop("T"))
    for pulses in range(1, 6):
        trace = sim.run(pulse_stimulus(["cp", "t"], [[1]] * pulses))
        assert trace.final_state["s_st"] == pulses % 2


def test_ms_hold_when_clock_low():
    for kind in ("D", "SR", "JK", "T"):
        sim = Simulator(build_ms_flipflop(kind))
        names = sim.input_names
        rng = random.Random(kind)
        steps = [[0] + [rng.randint(0, 1) for _ in names[1:]] for _ in range(12)]
        trace = sim.run(Stimulus(input_names=names, steps=steps), {"m_st": 1, "s_st": 1})
        assert {s.outputs["q"] for s in trace.steps} == {1}


@pytest.mark.parametrize("kind", ["D", "SR", "JK", "T"])
def test_ms_output_changes_only_on_falling_clock(kind):
    sim = Simulator(build_ms_flipflop(kind))
    data_names = sim.input_names[1:]
    rng = random.Random(1000 + len(kind))
    for _ in range(1000):
        pulses = [[rng.randint(0, 1) for _ in data_names] for _ in range(20)]
        trace = sim.run(pulse_stimulus(sim.input_names, pulses))
        q = trace.initial_state["s_st"]
        expected = trace.initial_state["m_st"]
        for s in trace.steps:
            if s.outputs["q"] != q:
                assert s.inputs["cp"] == 0
            q = s.outputs["q"]
            if s.inputs["cp"] == 1:
                expected = latch_next_state(kind, 1, s.inputs, expected)
            else:
                assert q == expected


def test_d_family_steps_settle():
    for circuit in (build_latch("D"), build_ms_flipflop("D"), build_shift_register(3)):
        sim = Simulator(circuit)
        rng = random.Random(3)
        steps = [[rng.randint(0, 1) for _ in sim.input_names] for _ in range(25)]
        trace = sim.run(Stimulus(input_names=sim.input_names, steps=steps))
        assert all(sim.settles(s) for s in trace.steps)


def test_pulse_stimulus_layout():
    stimulus = pulse_stimulus(["cp", "sin"], [[1], [0]])
    assert stimulus.steps == [[1, 1], [0, 1], [1, 0], [0, 0]]


def shift(sim, contents, serial_bits):
    n = len(contents)
    trace = sim.run(pulse_stimulus(["cp", "sin"], [[b] for b in serial_bits]), register_state("r", contents))
    return register_contents(trace.final_state, "r", n), trace


def test_shift_register_one_pulse():
    sim = Simulator(build_shift_register(4))
    contents, _ = shift(sim, "1011", [0])
    assert contents == "0101"


def test_shift_register_empties_and_emits_lsb_first():
    sim = Simulator(build_shift_register(4))
    contents, trace = shift(sim, "1011", [0, 0, 0, 0])
    assert contents == "0000"
    emitted = [s.outputs["sout"] for s in trace.steps if s.inputs["cp"] == 1]
    assert emitted == [1, 1, 0, 1]


def test_shift_register_exhaustive_single_pulse():
    sim = Simulator(build_shift_register(4))
    for value, serial_in in product(range(16), (0, 1)):
        contents, _ = shift(sim, bits(value, 4), [serial_in])
        assert contents == str(serial_in) + bits(value, 4)[:3]


def test_shift_register_exhaustive_fill():
    sim = Simulator(build_shift_register(4))
    for start, word in product(range(16), range(16)):
        serial = [int(b) for b in reversed(bits(word, 4))]
        contents, _ = shift(sim, bits(start, 4), serial)
        assert contents == bits(word, 4)


def test_shift_register_matches_right_shift_after_every_pulse():
    sim = Simulator(build_shift_register(4))
    for k in range(1, 5):
        for start, serial in product(range(16), product((0, 1), repeat=k)):
            contents, _ = shift(sim, bits(start, 4), list(serial))
            expected = "".join(str(b) for b in reversed(serial)) + bits(start, 4)[:4 - k]
            assert contents == expected


def test_shift_register_of_one():
    sim = Simulator(build_shift_register(1))
    for start, serial_in in product("01", (0, 1)):
        contents, _ = shift(sim, start, [serial_in])
        assert contents == str(serial_in)


def transfer(n, a, b, pulses):
    sim = Simulator(build_serial_transfer(n))
    state = {**register_state("a", a), **register_state("b", b)}
    trace = sim.run(pulse_stimulus(["cp"], [[]] * pulses), state)
    return register_contents(trace.final_state, "a", n), register_contents(trace.final_state, "b", n)


def test_serial_transfer_examples():
    assert transfer(4, "1001", "0110", 4) == ("1001", "1001")
    assert transfer(4, "0000", "0000", 3) == ("0000", "0000")
    a, b = transfer(4, "1001", "0110", 2)
    assert b[:2] == "01"
    assert a == "0110"


def test_serial_transfer_all_pairs():
    for a, b in product(range(16), repeat=2):
        assert transfer(4, bits(a, 4), bits(b, 4), 4) == (bits(a, 4), bits(a, 4))


def add(n, a, b):
    sim = Simulator(build_serial_adder(n))
    state = {**register_state("a", a), **register_state("b", b)}
    trace = sim.run(pulse_stimulus(["cp"], [[]] * n), state)
    final = trace.final_state
    return register_contents(final, "a", n), register_contents(final, "b", n), final["c_s_st"]


def test_serial_adder_examples():
    assert add(4, "0101", "0011") == ("1000", "0011", 0)
    assert add(4, "1111", "0001") == ("0000", "0001", 1)


def test_serial_adder_all_pairs():
    for a, b in product(range(16), repeat=2):
        total = a + b
        assert add(4, bits(a, 4), bits(b, 4)) == (bits(total % 16, 4), bits(b, 4), total >> 4)
