from enum import Enum
from pydantic import BaseModel, Field, model_validator
from typing import List, Optional, Dict, Any


class Metrics(BaseModel):
    gate_count: int
    garbage_count: int
    ancilla_count: int
    primary_input_count: int
    primary_output_count: int
    state_count: int


class ViolationKind(str, Enum):
    DUPLICATE_DRIVER = "DuplicateDriver"
    MULTIPLE_READERS = "MultipleReaders"
    DANGLING_NET = "DanglingNet"
    UNDECLARED_NET = "UndeclaredNet"
    CONSUMED_AND_TAGGED = "ConsumedAndTagged"
    DUPLICATE_GATE_ID = "DuplicateGateId"
    DUPLICATE_PIN = "DuplicatePin"
    CYCLE = "Cycle"
    OUT_OF_ORDER = "OutOfOrder"
    UNPAIRED_STATE = "UnpairedState"


class Violation(BaseModel):
    kind: ViolationKind
    message: str
    net: Optional[str] = None
    gate: Optional[str] = None


class CheckResult(BaseModel):
    check: str
    ok: bool
    strategy: str = "exhaustive"
    witnesses: List[Dict[str, int]] = []
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class Stimulus(BaseModel):
    input_names: List[str]
    steps: List[List[int]] = []

    @model_validator(mode="after")
    def _steps_match_inputs(self):
        width = len(self.input_names)
        if len(set(self.input_names)) != width:
            raise ValueError("stimulus input names must be distinct")
        for index, vector in enumerate(self.steps):
            if len(vector) != width:
                raise ValueError(f"step {index} has {len(vector)} values, expected {width}")
            if any(bit not in (0, 1) for bit in vector):
                raise ValueError(f"step {index} holds a value other than 0 or 1")
        return self

    def vectors(self) -> List[Dict[str, int]]:
        return [dict(zip(self.input_names, vector)) for vector in self.steps]


class TraceStep(BaseModel):
    step_index: int
    inputs: Dict[str, int]
    outputs: Dict[str, int]
    state_before: Dict[str, int]
    state_after: Dict[str, int]
    warnings: List[str] = []


class Trace(BaseModel):
    circuit_name: str
    input_names: List[str]
    output_names: List[str]
    state_names: List[str]
    initial_state: Dict[str, int] = {}
    steps: List[TraceStep] = []

    @property
    def final_state(self) -> Dict[str, int]:
        return dict(self.steps[-1].state_after) if self.steps else dict(self.initial_state)


class NetlistIssue(BaseModel):
    line: int
    message: str


class CheckReport(BaseModel):
    circuit_name: Optional[str] = None
    valid: bool
    issues: List[NetlistIssue] = []
    reversible: Optional[CheckResult] = None
    conservative: Optional[CheckResult] = None

    @property
    def passed(self) -> bool:
        return self.valid and bool(self.reversible) and bool(self.conservative)


class NetlistRequest(BaseModel):
    netlist: str = Field(..., description="Circuit in the netlist text format")


class CheckRequest(NetlistRequest):
    strategy: str = Field("auto", description="exhaustive, compositional or auto")
    cap: Optional[int] = Field(None, description="Override of the enumeration cap")


class TableRequest(NetlistRequest):
    cap: Optional[int] = None


class TableResponse(BaseModel):
    input_nets: List[str]
    terminal_nets: List[str]
    rows: List[List[List[int]]]


class CellSummary(BaseModel):
    name: str
    metrics: Metrics


class CellResponse(CellSummary):
    netlist: str


class SimulationRequest(NetlistRequest):
    input_names: List[str]
    steps: List[List[int]] = []
    initial_state: Optional[Dict[str, int]] = None
    vcd: bool = False


class SimulationResponse(BaseModel):
    trace: Trace
    final_state: Dict[str, int]
    vcd: Optional[str] = None


class ReportResponse(BaseModel):
    report_url: str
