import io

import pytest

from slco_lts.cli import run
from slco_lts.export import emit_aut, emit_dot
from slco_lts.lts import cs_to_lts, emit_lts_text, parse_lts_text
from slco_lts.reduction import HideSpec, hide_labels, reduce_lts
from slco_lts.semantics import explore
from conftest import MODELS_DIR, load_model


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def model_path(name):
    return str(MODELS_DIR / name)


@pytest.fixture
def example_lts(tmp_path):
    code, _, err = cli(
        "explore", model_path("running_example.slco"), "-o", str(tmp_path / "m.lts")
    )
    assert code == 0, err
    return tmp_path / "m.lts"


def test_validate_ok():
    code, out, err = cli("validate", model_path("running_example.slco"))
    assert code == 0
    assert err == ""


def test_validate_reports_diagnostics(tmp_path):
    bad = tmp_path / "bad.slco"
    bad.write_text(
        "model M {\n"
        "  classes C { state machines SM { initial I transitions"
        " T from I to Nowhere { } } }\n"
        "  objects a:C\n  channels\n}\n"
    )
    code, _, err = cli("validate", str(bad))
    assert code == 1
    assert "Nowhere" in err


def test_explore_matches_library(example_lts):
    graph = explore(load_model("running_example.slco"))
    assert example_lts.read_text() == emit_lts_text(cs_to_lts(graph))


def test_explore_cs_dump(tmp_path):
    cs_path = tmp_path / "m.cs"
    code, out, _ = cli(
        "explore", model_path("running_example.slco"), "--cs", str(cs_path)
    )
    assert code == 0
    from slco_lts.csformat import emit_cs, parse_cs

    assert cs_path.read_text() == emit_cs(explore(load_model("running_example.slco")))
    configs, steps = parse_cs(cs_path.read_text())
    assert len(configs) == 15 and len(steps) == 29
    # LTS went to stdout
    assert out.startswith("states\n")


def test_explore_hits_limit():
    code, _, err = cli(
        "explore", model_path("unbounded_counter.slco"), "--max-configs", "100"
    )
    assert code == 3
    assert err.startswith("error: limit:")


def test_dot_and_aut_match_library(example_lts, tmp_path):
    l = parse_lts_text(example_lts.read_text())
    code, out, _ = cli("dot", str(example_lts))
    assert code == 0 and out == emit_dot(l)
    code, out, err = cli("aut", str(example_lts))
    assert code == 0
    aut_text, diags = emit_aut(l)
    assert out == aut_text
    assert diags and "warning" in err


def test_reduce_matches_library(example_lts):
    code, out, _ = cli(
        "reduce", str(example_lts), "--relation", "branching", "--keep", "receiving V()"
    )
    assert code == 0
    l = parse_lts_text(example_lts.read_text())
    expected = reduce_lts(
        hide_labels(l, HideSpec("keep", frozenset({"receiving V()"}))), "branching"
    )
    assert out == emit_lts_text(expected)
    back = parse_lts_text(out)
    assert back.num_states == 4


def test_compare_equivalent(tmp_path):
    paths = {}
    for name in ("protocol_a.slco", "protocol_b.slco", "protocol_broken.slco"):
        target = tmp_path / (name + ".lts")
        code, _, err = cli("explore", model_path(name), "-o", str(target))
        assert code == 0, err
        paths[name] = str(target)
    code, out, _ = cli(
        "compare",
        paths["protocol_a.slco"],
        paths["protocol_b.slco"],
        "--relation",
        "branching",
        "--keep",
        "receiving Done(1)",
    )
    assert code == 0 and out.strip() == "equivalent"
    code, out, _ = cli(
        "compare",
        paths["protocol_a.slco"],
        paths["protocol_broken.slco"],
        "--relation",
        "branching",
        "--keep",
        "receiving Done(1)",
    )
    assert code == 1 and out.strip() == "not equivalent"


def test_usage_errors():
    code, _, err = cli("reduce")  # missing arguments
    assert code == 2
    code, _, err = cli("frobnicate")
    assert code == 2
    code, _, err = cli()
    assert code == 2


def test_keep_and_hide_are_mutually_exclusive(example_lts):
    code, _, err = cli(
        "reduce", str(example_lts), "--relation", "strong", "--keep", "a", "--hide", "b"
    )
    assert code == 2
    assert "error:" in err


def test_missing_file_reports_category():
    code, _, err = cli("validate", "/nonexistent/nope.slco")
    assert code == 1
    assert err.startswith("error: ")


def test_version():
    code, out, _ = cli("--version")
    assert code == 0
    assert "0.1.0" in out
