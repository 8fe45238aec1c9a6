import re
from enum import Enum
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def check_identifier(value: str) -> str:
    if not IDENTIFIER.match(value):
        raise ValueError(f"'{value}' is not a valid identifier")
    return value


class SourceRole(str, Enum):
    PRIMARY_INPUT = "input"
    CONST0 = "const0"
    CONST1 = "const1"
    STATE_FEEDBACK = "state"


class SinkRole(str, Enum):
    PRIMARY_OUTPUT = "output"
    GARBAGE = "garbage"
    STATE_NEXT = "next"


CONSTANT_VALUES = {SourceRole.CONST0: 0, SourceRole.CONST1: 1}


class LatchKind(str, Enum):
    D = "D"
    SR = "SR"
    JK = "JK"
    T = "T"


class GateInstance(BaseModel):
    """One Fredkin gate: inputs bind (x1, x2, x3), outputs bind (y1, y2, y3)"""

    model_config = ConfigDict(frozen=True)

    id: str
    inputs: Tuple[str, str, str]
    outputs: Tuple[str, str, str]

    @field_validator("id")
    @classmethod
    def _id_is_identifier(cls, value: str) -> str:
        return check_identifier(value)

    @field_validator("inputs", "outputs")
    @classmethod
    def _pins_are_identifiers(cls, value: Tuple[str, str, str]) -> Tuple[str, str, str]:
        for name in value:
            check_identifier(name)
        return value

    @property
    def pins(self) -> Tuple[str, ...]:
        return self.inputs + self.outputs


class Circuit(BaseModel):
    """Combinational Fredkin network over named nets with role-tagged sources and sinks"""

    model_config = ConfigDict(frozen=True)

    name: str
    sources: Dict[str, SourceRole] = {}
    gates: List[GateInstance] = []
    sinks: Dict[str, SinkRole] = {}

    @field_validator("name")
    @classmethod
    def _name_is_identifier(cls, value: str) -> str:
        return check_identifier(value)

    @field_validator("sources", "sinks")
    @classmethod
    def _nets_are_identifiers(cls, value: dict) -> dict:
        for name in value:
            check_identifier(name)
        return value

    def sources_with(self, *roles: SourceRole) -> List[str]:
        return [net for role in roles for net, r in self.sources.items() if r is role]

    def sinks_with(self, *roles: SinkRole) -> List[str]:
        return [net for role in roles for net, r in self.sinks.items() if r is role]

    @property
    def primary_inputs(self) -> List[str]:
        return self.sources_with(SourceRole.PRIMARY_INPUT)

    @property
    def primary_outputs(self) -> List[str]:
        return self.sinks_with(SinkRole.PRIMARY_OUTPUT)

    @property
    def garbage(self) -> List[str]:
        return self.sinks_with(SinkRole.GARBAGE)

    @property
    def input_nets(self) -> List[str]:
        """Nets an assignment must cover: primary inputs, then state feedback"""
        return self.sources_with(SourceRole.PRIMARY_INPUT, SourceRole.STATE_FEEDBACK)

    @property
    def free_nets(self) -> List[str]:
        """Every source, constants included, for full-width checks"""
        return self.sources_with(
            SourceRole.PRIMARY_INPUT, SourceRole.CONST0, SourceRole.CONST1, SourceRole.STATE_FEEDBACK
        )

    @property
    def terminal_nets(self) -> List[str]:
        return self.sinks_with(SinkRole.PRIMARY_OUTPUT, SinkRole.GARBAGE, SinkRole.STATE_NEXT)


class StateElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    feedback: str
    next: str
    init: int = 0

    @field_validator("init")
    @classmethod
    def _init_is_bit(cls, value: int) -> int:
        if value not in (0, 1):
            raise ValueError(f"state init must be 0 or 1, got {value}")
        return value


class SequentialCircuit(BaseModel):
    """A combinational core plus the state elements closing its feedback loops"""

    model_config = ConfigDict(frozen=True)

    core: Circuit
    states: List[StateElement] = []
    # input groups that must not all be high in the same step
    forbidden: List[Tuple[str, ...]] = []

    @property
    def name(self) -> str:
        return self.core.name

    @property
    def state_names(self) -> List[str]:
        return [s.feedback for s in self.states]

    @property
    def initial_state(self) -> Dict[str, int]:
        return {s.feedback: s.init for s in self.states}


def as_sequential(circuit) -> SequentialCircuit:
    if isinstance(circuit, SequentialCircuit):
        return circuit
    return SequentialCircuit(core=circuit)


def core_of(circuit) -> Circuit:
    return circuit.core if isinstance(circuit, SequentialCircuit) else circuit
