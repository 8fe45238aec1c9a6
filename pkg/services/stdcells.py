"""Builders for the standard Fredkin cells: logic primitives, latches,
master-slave flip-flops, registers, serial transfer and the serial adder.

Every builder returns a validated circuit. Catalog entries pair a cell with a
reference model of one evaluation step, used by the verifier's equivalence
check and by the report service.

Naming used throughout:
  * a latch with prefix ``p`` stores its bit in ``<p>st`` / ``<p>st_next``;
  * a master-slave stage with prefix ``p`` has latches ``<p>m_`` and ``<p>s_``;
  * register stages are prefixed ``l<i>_`` (register), ``r<i>_`` (shift
    register), ``a<i>_`` / ``b<i>_`` (transfer and adder), ``c_`` (carry).
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import config
from models import Circuit, LatchKind, SequentialCircuit
from schemas import Metrics
from services.circuit_builder import CircuitBuilder
from services.netlist_service import metrics
from utils.exceptions import CellParameterError, InvalidBitError, UnknownCellError

logger = logging.getLogger("revseq.stdcells")

AnyCell = Union[Circuit, SequentialCircuit]
StepModel = Callable[[Dict[str, int]], Dict[str, int]]

LOGIC_KINDS = ("COPY", "NOT", "AND", "OR", "XOR")

DATA_INPUTS: Dict[LatchKind, Tuple[str, ...]] = {
    LatchKind.D: ("d",),
    LatchKind.SR: ("s", "r"),
    LatchKind.JK: ("j", "k"),
    LatchKind.T: ("t",),
}


def latch_next_state(kind: Union[LatchKind, str], enable: int, data: Mapping[str, int], q: int) -> int:
    """Characteristic function of a level-sensitive latch"""
    kind = LatchKind(kind)
    if not enable:
        return q
    if kind is LatchKind.D:
        return data["d"]
    if kind is LatchKind.SR:
        return data["s"] | ((1 - data["r"]) & q)
    if kind is LatchKind.JK:
        return (data["j"] & (1 - q)) | ((1 - data["k"]) & q)
    return data["t"] ^ q


# -- logic primitives -------------------------------------------------------

def build_logic_primitive(kind: str) -> Circuit:
    kind = kind.upper()
    if kind not in LOGIC_KINDS:
        raise UnknownCellError(kind.lower(), [k.lower() for k in LOGIC_KINDS])
    b = CircuitBuilder(kind.lower())
    b.input("a")
    if kind == "COPY":
        b.constant(0, "z")
        b.constant(1, "o")
        b.fredkin("a", "z", "o", ("a1", "a2", "na"))
        b.output("a1", "a2", "na")
    elif kind == "NOT":
        b.constant(0, "z")
        b.constant(1, "o")
        b.fredkin("a", "z", "o", ("a1", "a2", "y"))
        b.output("y")
        b.garbage("a1", "a2")
    elif kind == "AND":
        b.input("b")
        b.constant(0, "z")
        b.fredkin("a", "b", "z", ("a1", "nab", "y"))
        b.output("y")
        b.garbage("a1", "nab")
    elif kind == "OR":
        b.input("b")
        b.constant(1, "o")
        b.fredkin("a", "b", "o", ("a1", "y", "w"))
        b.output("y")
        b.garbage("a1", "w")
    else:
        b.input("b")
        b.constant(0, "z")
        b.constant(1, "o")
        b.fredkin("b", "z", "o", ("b1", "b2", "nb"))
        b.fredkin("a", "b1", "nb", ("a1", "y", "xn"))
        b.output("y")
        b.garbage("b2", "a1", "xn")
    return b.build_combinational()


# -- latches and flip-flops -------------------------------------------------

def _latch(b: CircuitBuilder, kind: LatchKind, enable: str, data: Mapping[str, str], prefix: str,
           init: int = 0, q: Optional[str] = None, qn: Optional[str] = None,
           tap: bool = False) -> Tuple[str, str, Optional[str]]:
    """Wire one latch and return its (q, qn, tap) nets.

    The latch gate F(E, Q, D) yields Q+ on y2; a copy of Q+ becomes both the
    state-next line and the outputs. Other kinds derive D from their inputs.
    ``tap`` exposes a copy of the stored bit (D latches only).
    """
    kind = LatchKind(kind)
    fb = b.state(f"{prefix}st", f"{prefix}st_next", init)
    tapped = None
    with b.scope(prefix):
        if kind is LatchKind.D:
            hold = fb
            if tap:
                hold, tapped, spare = b.copy(fb)
                b.garbage(spare)
            d = data["d"]
        elif tap:
            raise ValueError("only D latches expose a state tap")
        else:
            qa, hold, nq = b.copy(fb)
            if kind is LatchKind.SR:
                b.garbage(nq)
                d = b.or_(data["s"], b.inhibit(data["r"], qa))
            elif kind is LatchKind.JK:
                b.garbage(nq)
                y1, d, y3 = b.fredkin(qa, data["j"], b.negate(data["k"]))
                b.garbage(y1, y3)
            else:
                y1, d, y3 = b.fredkin(data["t"], qa, nq)
                b.garbage(y1, y3)
        passed, qplus, other = b.fredkin(enable, hold, d)
        b.garbage(passed, other)
        _, q, qn = b.copy(qplus, (f"{prefix}st_next", q, qn))
    return q, qn, tapped


def _ms_stage(b: CircuitBuilder, kind: LatchKind, clock: str, data: Mapping[str, str], prefix: str,
              init: int = 0, q: Optional[str] = None, qn: Optional[str] = None,
              tap: bool = False) -> Tuple[str, str, str, Optional[str]]:
    """Master enabled by CP, D slave by not CP; returns (q, qn, clock_out, tap)"""
    with b.scope(prefix):
        cp_master, clock_out, ncp = b.copy(clock)
    master_q, master_qn, _ = _latch(b, kind, cp_master, data, f"{prefix}m_", init)
    b.garbage(master_qn)
    q, qn, tapped = _latch(b, LatchKind.D, ncp, {"d": master_q}, f"{prefix}s_", init, q, qn, tap)
    return q, qn, clock_out, tapped


def build_latch(kind: Union[LatchKind, str], init: int = 0) -> SequentialCircuit:
    kind = LatchKind(kind)
    b = CircuitBuilder(f"{kind.value.lower()}_latch")
    b.input("e")
    for name in DATA_INPUTS[kind]:
        b.input(name)
    _latch(b, kind, "e", {n: n for n in DATA_INPUTS[kind]}, "", init, q="q", qn="qn")
    b.output("q", "qn")
    if kind is LatchKind.SR:
        b.forbid("e", "s", "r")
    return b.build()


def build_ms_flipflop(kind: Union[LatchKind, str], init: int = 0) -> SequentialCircuit:
    kind = LatchKind(kind)
    b = CircuitBuilder(f"ms_{kind.value.lower()}")
    b.input("cp")
    for name in DATA_INPUTS[kind]:
        b.input(name)
    _, _, clock_out, _ = _ms_stage(b, kind, "cp", {n: n for n in DATA_INPUTS[kind]}, "", init, q="q", qn="qn")
    b.output("q", "qn")
    b.garbage(clock_out)
    if kind is LatchKind.SR:
        b.forbid("cp", "s", "r")
    return b.build()


# -- registers --------------------------------------------------------------

def _check_width(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise CellParameterError(f"register width must be a positive integer, got {n!r}")
    return n


def _distribute(b: CircuitBuilder, line: str, count: int) -> List[str]:
    """Breadth-first copy tree: count - 1 copy gates, complements discarded"""
    lines = [line]
    with b.scope("clk_"):
        while len(lines) < count:
            first, second, complement = b.copy(lines.pop(0))
            b.garbage(complement)
            lines.extend([first, second])
    return lines


def build_register(n: int, init: int = 0) -> SequentialCircuit:
    _check_width(n)
    b = CircuitBuilder("register")
    b.input("e")
    for i in range(n):
        b.input(f"d{i}")
    for i, enable in enumerate(_distribute(b, "e", n)):
        _latch(b, LatchKind.D, enable, {"d": f"d{i}"}, f"l{i}_", init, q=f"q{i}", qn=f"qn{i}")
        b.output(f"q{i}", f"qn{i}")
    return b.build()


def _shift_chain(b: CircuitBuilder, clock: str, serial_in: str, stage: str, n: int, last_q: str,
                 tap: bool = False) -> Tuple[str, Optional[str]]:
    """n MS-D stages, stage 0 first; returns the clock after the chain and the tap"""
    d, tapped = serial_in, None
    for i in range(n):
        last = i == n - 1
        q, qn, clock, tapped = _ms_stage(b, LatchKind.D, clock, {"d": d}, f"{stage}{i}_",
                                         q=last_q if last else None, tap=tap and last)
        b.garbage(qn)
        d = q
    return clock, tapped


def build_shift_register(n: int) -> SequentialCircuit:
    _check_width(n)
    b = CircuitBuilder("shift_register")
    b.input("cp")
    b.input("sin")
    clock, _ = _shift_chain(b, "cp", "sin", "r", n, "sout")
    b.output("sout")
    b.garbage(clock)
    return b.build()


def build_serial_transfer(n: int) -> SequentialCircuit:
    """Registers A and B; A's outgoing bit shifts into B and recirculates into A.

    The loop is closed from A's last stored bit, so the core stays acyclic.
    """
    _check_width(n)
    b = CircuitBuilder("serial_transfer")
    b.input("cp")
    clock, tapped = _shift_chain(b, "cp", "a_in", "a", n, "a_sout", tap=True)
    _, _, spare = b.copy(tapped, ("a_in", "b_in", None))
    b.garbage(spare)
    clock, _ = _shift_chain(b, clock, "b_in", "b", n, "b_sout")
    b.output("a_sout", "b_sout")
    b.garbage(clock)
    return b.build()


def _full_adder(b: CircuitBuilder, a: str, bb: str, cin: str,
                sum_out: Optional[str] = None, cout_out: Optional[str] = None) -> Tuple[str, str]:
    b1, b2, nb = b.copy(bb)
    a1, p, xnor = b.fredkin(a, b1, nb)
    c1, c2, nc = b.copy(cin)
    p1, total, spare = b.fredkin(p, c1, nc, (None, sum_out, None))
    # a xor b selects between a (equal bits) and cin
    control, carry, rest = b.fredkin(p1, a1, c2, (None, cout_out, None))
    b.garbage(b2, xnor, spare, control, rest)
    return total, carry


def build_full_adder() -> Circuit:
    b = CircuitBuilder("full_adder")
    for name in ("a", "b", "cin"):
        b.input(name)
    _full_adder(b, "a", "b", "cin", "sum", "cout")
    b.output("sum", "cout")
    return b.build_combinational()


def build_serial_adder(n: int) -> SequentialCircuit:
    """A + B accumulated into A one bit per pulse, least significant bit first.

    B recirculates; the carry flip-flop starts at 0 and ends with the carry out.
    """
    _check_width(n)
    b = CircuitBuilder("serial_adder")
    b.input("cp")
    clock, a_tap = _shift_chain(b, "cp", "sum", "a", n, "a_sout", tap=True)
    clock, b_tap = _shift_chain(b, clock, "b_rec", "b", n, "b_sout", tap=True)
    _, qn, clock, c_tap = _ms_stage(b, LatchKind.D, clock, {"d": "cout"}, "c_", q="carry", tap=True)
    b.garbage(qn, clock)
    with b.scope("fa_"):
        b_add, _, spare = b.copy(b_tap, (None, "b_rec", None))
        b.garbage(spare)
        _full_adder(b, a_tap, b_add, c_tap, "sum", "cout")
    b.output("a_sout", "b_sout", "carry")
    return b.build()


# -- register contents ------------------------------------------------------

def parse_bits(text: str, what: str = "bits") -> List[int]:
    bits = []
    for char in text.strip():
        if char not in "01":
            raise InvalidBitError(what, char)
        bits.append(int(char))
    return bits


def register_state(prefix: str, bits: Union[str, Sequence[int]]) -> Dict[str, int]:
    """State map loading an MS register; bit 0 (MSB) goes to stage 0"""
    if isinstance(bits, str):
        bits = parse_bits(bits, prefix)
    state = {}
    for i, bit in enumerate(bits):
        state[f"{prefix}{i}_m_st"] = bit
        state[f"{prefix}{i}_s_st"] = bit
    return state


def register_contents(state: Mapping[str, int], prefix: str, n: int) -> str:
    return "".join(str(state[f"{prefix}{i}_s_st"]) for i in range(n))


# -- reference models -------------------------------------------------------

def _chain_model(values: Mapping[str, int], cp: int, serial_in: int, stage: str, n: int,
                 out: Dict[str, int]) -> int:
    d = serial_in
    for i in range(n):
        p = f"{stage}{i}_"
        master = d if cp else values[f"{p}m_st"]
        slave = values[f"{p}s_st"] if cp else master
        out[f"{p}m_st_next"] = master
        out[f"{p}s_st_next"] = slave
        d = slave
    return d


def _latch_model(kind: LatchKind) -> StepModel:
    def model(v):
        q = latch_next_state(kind, v["e"], v, v["st"])
        return {"q": q, "qn": 1 - q, "st_next": q}
    return model


def _ms_model(kind: LatchKind) -> StepModel:
    def model(v):
        master = latch_next_state(kind, v["cp"], v, v["m_st"])
        slave = v["s_st"] if v["cp"] else master
        return {"q": slave, "qn": 1 - slave, "m_st_next": master, "s_st_next": slave}
    return model


def _register_model(n: int) -> StepModel:
    def model(v):
        out = {}
        for i in range(n):
            q = v[f"d{i}"] if v["e"] else v[f"l{i}_st"]
            out.update({f"q{i}": q, f"qn{i}": 1 - q, f"l{i}_st_next": q})
        return out
    return model


def _shift_model(n: int) -> StepModel:
    def model(v):
        out = {}
        out["sout"] = _chain_model(v, v["cp"], v["sin"], "r", n, out)
        return out
    return model


def _transfer_model(n: int) -> StepModel:
    def model(v):
        out = {}
        bit = v[f"a{n - 1}_s_st"]
        out["a_sout"] = _chain_model(v, v["cp"], bit, "a", n, out)
        out["b_sout"] = _chain_model(v, v["cp"], bit, "b", n, out)
        return out
    return model


def _adder_model(n: int) -> StepModel:
    def model(v):
        out = {}
        a, bb, c = v[f"a{n - 1}_s_st"], v[f"b{n - 1}_s_st"], v["c_s_st"]
        out["a_sout"] = _chain_model(v, v["cp"], a ^ bb ^ c, "a", n, out)
        out["b_sout"] = _chain_model(v, v["cp"], bb, "b", n, out)
        carry = (a & bb) | (a & c) | (bb & c)
        master = carry if v["cp"] else v["c_m_st"]
        slave = v["c_s_st"] if v["cp"] else master
        out.update({"c_m_st_next": master, "c_s_st_next": slave, "carry": slave})
        return out
    return model


_LOGIC_MODELS: Dict[str, StepModel] = {
    "copy": lambda v: {"a1": v["a"], "a2": v["a"], "na": 1 - v["a"]},
    "not": lambda v: {"y": 1 - v["a"]},
    "and": lambda v: {"y": v["a"] & v["b"]},
    "or": lambda v: {"y": v["a"] | v["b"]},
    "xor": lambda v: {"y": v["a"] ^ v["b"]},
}


def _full_adder_model(v):
    total = v["a"] + v["b"] + v["cin"]
    return {"sum": total & 1, "cout": total >> 1}


# -- catalog ----------------------------------------------------------------

_LATCHES = {f"{k.value.lower()}_latch": k for k in LatchKind}
_FLIPFLOPS = {f"ms_{k.value.lower()}": k for k in LatchKind}
_WIDE = ("register", "shift_register", "serial_transfer", "serial_adder")

CELL_NAMES: List[str] = (
    ["copy", "not", "and", "or", "xor"]
    + list(_LATCHES)
    + list(_FLIPFLOPS)
    + ["register", "shift_register", "serial_transfer", "full_adder", "serial_adder"]
)


def is_parameterised(name: str) -> bool:
    return name in _WIDE


def _width_for(name: str, n: Optional[int]) -> Optional[int]:
    """Width of a register-like cell; other cells ignore n"""
    if not is_parameterised(name):
        return n
    return _check_width(config.DEFAULT_WIDTH if n is None else n)


def _cell_and_model(name: str, n: Optional[int]) -> Tuple[AnyCell, StepModel]:
    if name in _LOGIC_MODELS:
        return build_logic_primitive(name), _LOGIC_MODELS[name]
    if name in _LATCHES:
        return build_latch(_LATCHES[name]), _latch_model(_LATCHES[name])
    if name in _FLIPFLOPS:
        return build_ms_flipflop(_FLIPFLOPS[name]), _ms_model(_FLIPFLOPS[name])
    if name == "full_adder":
        return build_full_adder(), _full_adder_model
    if name == "register":
        return build_register(n), _register_model(n)
    if name == "shift_register":
        return build_shift_register(n), _shift_model(n)
    if name == "serial_transfer":
        return build_serial_transfer(n), _transfer_model(n)
    if name == "serial_adder":
        return build_serial_adder(n), _adder_model(n)
    raise UnknownCellError(name, CELL_NAMES)


def build_cell(name: str, n: Optional[int] = None) -> AnyCell:
    """Build a catalog cell by name; n is the width of register-like cells"""
    if name not in CELL_NAMES:
        raise UnknownCellError(name, CELL_NAMES)
    n = _width_for(name, n)
    logger.debug("building cell '%s' (n=%s)", name, n)
    return _cell_and_model(name, n)[0]


def _oracle(input_nets: List[str], observed: List[str], model: StepModel) -> Callable[..., Tuple[int, ...]]:
    """Positional-bit oracle over input_nets returning the observed nets in order"""
    def oracle(*bits):
        out = model(dict(zip(input_nets, bits)))
        return tuple(out[net] for net in observed)
    return oracle


@dataclass
class CellCatalogEntry:
    name: str
    circuit: AnyCell
    metrics: Metrics
    input_nets: List[str] = field(default_factory=list)
    observed: List[str] = field(default_factory=list)
    oracle: Callable[..., Tuple[int, ...]] = None


def catalog_entry(name: str, n: Optional[int] = None) -> CellCatalogEntry:
    if name not in CELL_NAMES:
        raise UnknownCellError(name, CELL_NAMES)
    n = _width_for(name, n)
    circuit, model = _cell_and_model(name, n)
    core = circuit.core if isinstance(circuit, SequentialCircuit) else circuit
    states = circuit.states if isinstance(circuit, SequentialCircuit) else []
    observed = core.primary_outputs + [s.next for s in states]
    return CellCatalogEntry(
        name=name,
        circuit=circuit,
        metrics=metrics(circuit),
        input_nets=core.input_nets,
        observed=observed,
        oracle=_oracle(core.input_nets, observed, model),
    )


def catalog(n: Optional[int] = None) -> List[CellCatalogEntry]:
    return [catalog_entry(name, n) for name in CELL_NAMES]
