import pytest

from slco_lts.model import ChannelKind, Model
from slco_lts.parser import parse_model, pretty_print
from conftest import BOUNDED_MODELS, MODELS_DIR, load_model


@pytest.mark.parametrize("name", sorted(p.name for p in MODELS_DIR.glob("*.slco")))
def test_corpus_round_trip(name):
    m = load_model(name) if name in BOUNDED_MODELS else parse_model((MODELS_DIR / name).read_text())
    assert isinstance(m, Model)
    text = pretty_print(m)
    again = parse_model(text)
    assert isinstance(again, Model), f"pretty-printed {name} failed to reparse: {again}"
    assert again == m
    # Pretty printing is a fixpoint after one pass.
    assert pretty_print(again) == text


def test_empty_model_parses():
    m = parse_model("model Empty { classes objects channels }")
    assert isinstance(m, Model)
    assert m.name == "Empty"
    assert m.classes == () and m.objects == () and m.channels == ()
    assert parse_model(pretty_print(m)) == m


def test_structure_of_running_example(running_example):
    m = running_example
    assert [c.name for c in m.classes] == ["P", "Q"]
    assert [(o.name, o.class_name) for o in m.objects] == [("p", "P"), ("q", "Q")]
    assert [ch.kind for ch in m.channels] == [
        ChannelKind.SYNC,
        ChannelKind.ASYNC_LOSSLESS,
        ChannelKind.ASYNC_LOSSY,
    ]
    sm = m.class_by_name("P").machines[0]
    assert sm.initial_state == "Initial"
    assert [t.name for t in sm.transitions] == ["Start", "Receive", "Finish"]


def test_unbalanced_brace_reports_eof_location():
    text = "model Broken {\n  classes\n  objects\n  channels\n"
    result = parse_model(text)
    assert isinstance(result, list) and result
    diag = result[0]
    assert diag.severity == "error"
    assert diag.loc.line >= 4


def test_comments_are_ignored():
    commented = (MODELS_DIR / "single_final.slco").read_text()
    plain = parse_model(commented)
    with_comments = parse_model("// leading comment\n" + commented.replace("{", "{ // opener", 1))
    assert isinstance(plain, Model)
    assert with_comments == plain


def test_keywords_are_reserved():
    result = parse_model("model guard { classes objects channels }")
    assert isinstance(result, list) and result[0].severity == "error"


def test_bidirectional_channel_shape():
    m = load_model("bidir_sync.slco")
    ch = m.channels[0]
    assert ch.bidirectional
    assert ch.kind is ChannelKind.SYNC


def test_parse_error_has_position():
    result = parse_model("model M { classes objects channels broken(Integer) }")
    assert isinstance(result, list)
    assert all(d.loc.line >= 1 and d.loc.col >= 1 for d in result)
    rendered = result[0].render("m.slco")
    assert rendered.startswith("m.slco:")
