from slco_lts.model import (
    BindVar,
    IntLit,
    MatchExpr,
    SlcoType,
    VarRef,
    classify_reception_arg,
    default_initial_value,
    format_value,
    transition_identifier,
)
from conftest import load_model


def test_default_initial_values():
    assert default_initial_value(SlcoType.INTEGER) == 0
    assert default_initial_value(SlcoType.BOOLEAN) is True
    assert default_initial_value(SlcoType.STRING) == ""


def test_format_value():
    assert format_value(7) == "7"
    assert format_value(-3) == "-3"
    assert format_value(True) == "true"
    assert format_value(False) == "false"
    assert format_value('say "hi"') == '"say \\"hi\\""'


def test_classify_reception_arg():
    scope = {"n", "m"}
    assert classify_reception_arg(VarRef("n"), scope) == BindVar("n")
    assert classify_reception_arg(VarRef("other"), scope) == MatchExpr(VarRef("other"))
    assert classify_reception_arg(IntLit(2), scope) == MatchExpr(IntLit(2))


def test_transition_identifier_is_declaration_index():
    m = load_model("running_example.slco")
    sm_p = m.class_by_name("P").machines[0]
    by_name = {t.name: t for t in sm_p.transitions}
    assert transition_identifier(sm_p, by_name["Start"]) == 0
    assert transition_identifier(sm_p, by_name["Receive"]) == 1
    assert transition_identifier(sm_p, by_name["Finish"]) == 2


def test_state_enumeration_and_finality():
    m = load_model("running_example.slco")
    sm_p = m.class_by_name("P").machines[0]
    assert sm_p.states[0] == sm_p.initial_state
    assert sm_p.is_final("Final")
    assert not sm_p.is_final(sm_p.initial_state)
    # Outgoing transitions keep machine-wide identifiers.
    ids = [i for i, _ in sm_p.outgoing("State")]
    assert ids == [1, 2]
