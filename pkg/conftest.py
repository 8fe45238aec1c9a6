import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from models import Circuit, GateInstance, SequentialCircuit, SinkRole, SourceRole, StateElement  # noqa: E402


def make_random_circuit(seed: int, inputs: int = 3, constants: int = 2, gates: int = 4,
                        states: int = 0) -> SequentialCircuit:
    """A random valid circuit: every gate reads three unread nets, leftovers become sinks"""
    rng = random.Random(seed)
    sources = {}
    for i in range(inputs):
        sources[f"i{i}"] = SourceRole.PRIMARY_INPUT
    for i in range(constants):
        sources[f"k{i}"] = rng.choice([SourceRole.CONST0, SourceRole.CONST1])
    for i in range(states):
        sources[f"s{i}"] = SourceRole.STATE_FEEDBACK
    pool = list(sources)
    gate_list = []
    for g in range(gates):
        if len(pool) < 3:
            break
        picked = rng.sample(pool, 3)
        for net in picked:
            pool.remove(net)
        outs = (f"n{g}_1", f"n{g}_2", f"n{g}_3")
        gate_list.append(GateInstance(id=f"g{g}", inputs=tuple(picked), outputs=outs))
        pool.extend(outs)
    rng.shuffle(pool)
    state_elements = []
    sinks = {}
    for i in range(states):
        state_elements.append(StateElement(feedback=f"s{i}", next=pool[i], init=rng.randint(0, 1)))
        sinks[pool[i]] = SinkRole.STATE_NEXT
    for net in pool[states:]:
        sinks[net] = rng.choice([SinkRole.PRIMARY_OUTPUT, SinkRole.GARBAGE])
    core = Circuit(name=f"random{seed}", sources=sources, gates=gate_list, sinks=sinks)
    return SequentialCircuit(core=core, states=state_elements)


@pytest.fixture
def random_circuit():
    return make_random_circuit


@pytest.fixture
def single_gate():
    return Circuit(
        name="single",
        sources={"x1": SourceRole.PRIMARY_INPUT, "x2": SourceRole.PRIMARY_INPUT, "x3": SourceRole.PRIMARY_INPUT},
        gates=[GateInstance(id="g1", inputs=("x1", "x2", "x3"), outputs=("y1", "y2", "y3"))],
        sinks={"y1": SinkRole.PRIMARY_OUTPUT, "y2": SinkRole.PRIMARY_OUTPUT, "y3": SinkRole.PRIMARY_OUTPUT},
    )


@pytest.fixture
def identity_circuit():
    return Circuit(
        name="wire",
        sources={"a": SourceRole.PRIMARY_INPUT, "b": SourceRole.PRIMARY_INPUT},
        sinks={"a": SinkRole.PRIMARY_OUTPUT, "b": SinkRole.PRIMARY_OUTPUT},
    )


COPY_NETLIST = """circuit copy
input a
const0 z
const1 o
gate g1 F a z o -> a1 a2 na
output a1 a2 na
end
"""


@pytest.fixture
def copy_netlist():
    return COPY_NETLIST
