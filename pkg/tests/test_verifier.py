import numpy as np
import pytest

from models import Circuit, GateInstance, SinkRole, SourceRole
from services.stdcells import build_logic_primitive, build_register, build_shift_register
from services.verifier_service import Verifier, check_report, enumerate_columns, invalid_report
from utils.exceptions import EnumerationTooLargeError, NetlistSemanticError, OracleArityError, UnknownNetError

PI, C0, C1 = SourceRole.PRIMARY_INPUT, SourceRole.CONST0, SourceRole.CONST1
PO, GB = SinkRole.PRIMARY_OUTPUT, SinkRole.GARBAGE


def test_enumeration_order_first_net_is_msb():
    columns = enumerate_columns(["a", "b"])
    assert columns["a"].tolist() == [0, 0, 1, 1]
    assert columns["b"].tolist() == [0, 1, 0, 1]


def test_behavior_table_of_single_gate(single_gate):
    table = Verifier().behavior_table(single_gate)
    assert len(table) == 8
    assert table.rows[5] == ((1, 0, 1), (1, 1, 0))
    assert table.lookup({"x1": 1, "x2": 1, "x3": 0}) == {"y1": 1, "y2": 0, "y3": 1}


def test_behavior_table_dataframe(single_gate):
    frame = Verifier().behavior_table(single_gate).to_dataframe()
    assert frame.shape == (8, 6)
    assert list(frame["out"].columns) == ["y1", "y2", "y3"]


def test_single_gate_is_reversible_and_conservative(single_gate):
    verifier = Verifier()
    assert verifier.check_reversible(single_gate).ok
    assert verifier.check_conservative(single_gate).ok


def test_identity_circuit(identity_circuit):
    verifier = Verifier()
    assert verifier.check_reversible(identity_circuit).ok
    assert verifier.check_conservative(identity_circuit).ok
    assert verifier.check_equivalence(identity_circuit, lambda a, b: (a, b), ["a", "b"]).ok


def test_random_circuits_pass_full_width_checks(random_circuit):
    verifier = Verifier()
    for seed in range(15):
        circuit = random_circuit(seed, states=seed % 2)
        assert verifier.check_reversible(circuit).ok
        assert verifier.check_conservative(circuit).ok


def test_dropped_output_fails_reversibility():
    # forcing a1 low merges rows that differ only in a
    core = Circuit(
        name="lossy", sources={"a": PI, "b": PI, "z": C0},
        gates=[GateInstance(id="g1", inputs=("a", "b", "z"), outputs=("a1", "nab", "y"))],
        sinks={"y": PO, "a1": GB, "nab": GB},
    )
    assert Verifier().check_reversible(core).ok

    def collapse(evaluator, columns):
        values = evaluator.evaluate_columns(columns)
        values["a1"] = np.zeros_like(values["a1"])
        return values

    result = Verifier(evaluator=collapse).check_reversible(core)
    assert not result.ok
    assert len(result.witnesses) == 2
    first, second = result.witnesses
    assert first != second


def test_conservativity_negative_control(single_gate):
    def flip(evaluator, columns):
        values = evaluator.evaluate_columns(columns)
        values["y1"] = values["y1"] ^ 1
        return values

    result = Verifier(evaluator=flip).check_conservative(single_gate)
    assert not result.ok
    assert len(result.witnesses) == 1


def test_and_against_or_oracle_gives_witness():
    circuit = build_logic_primitive("AND")
    result = Verifier().check_equivalence(circuit, lambda a, b: a | b, ["y"])
    assert not result.ok
    witness = result.witnesses[0]
    assert (witness["a"], witness["b"]) in {(0, 1), (1, 0)}


def test_equivalence_accepts_and_oracle():
    circuit = build_logic_primitive("AND")
    assert Verifier().check_equivalence(circuit, lambda a, b: a & b, ["y"]).ok


def test_equivalence_rejects_bad_arguments():
    circuit = build_logic_primitive("AND")
    verifier = Verifier()
    with pytest.raises(OracleArityError):
        verifier.check_equivalence(circuit, lambda a: a, ["y"])
    with pytest.raises(OracleArityError):
        verifier.check_equivalence(circuit, lambda a, b: (a, b), ["y"])
    with pytest.raises(UnknownNetError):
        verifier.check_equivalence(circuit, lambda a, b: a & b, ["a"])


def test_cap_is_enforced(single_gate):
    with pytest.raises(EnumerationTooLargeError):
        Verifier(cap=2).check_reversible(single_gate)
    with pytest.raises(EnumerationTooLargeError):
        Verifier(cap=2).behavior_table(single_gate)


def test_auto_strategy_switches_above_cap():
    register = build_register(4)
    assert len(register.core.free_nets) == 23
    result = Verifier(cap=20).check_reversible(register, "auto")
    assert result.ok
    assert result.strategy == "compositional"

    shift = build_shift_register(4)
    assert len(shift.core.free_nets) == 34
    assert Verifier(cap=20).check_conservative(shift, "auto").strategy == "compositional"


def test_strategies_agree_within_cap():
    circuit = build_register(2)
    verifier = Verifier()
    for check in (verifier.check_reversible, verifier.check_conservative):
        exhaustive = check(circuit, "exhaustive")
        compositional = check(circuit, "compositional")
        assert exhaustive.ok == compositional.ok
        assert exhaustive.strategy == "exhaustive"
        assert compositional.strategy == "compositional"


def test_unknown_strategy(single_gate):
    with pytest.raises(ValueError):
        Verifier().check_reversible(single_gate, "guess")


def test_check_report(single_gate):
    report = check_report(single_gate)
    assert report.valid and report.passed
    assert report.circuit_name == "single"
    assert report.reversible.strategy == "exhaustive"


def test_invalid_report_carries_issues():
    report = invalid_report(NetlistSemanticError([(4, "dangling"), (2, "undeclared")], "loose"))
    assert not report.valid and not report.passed
    assert [issue.line for issue in report.issues] == [2, 4]
    assert report.circuit_name == "loose"
