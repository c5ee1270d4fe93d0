import pathlib
import sys

import pytest

from slco_lts.model import Model
from slco_lts.parser import parse_model
from slco_lts.validate import validate_model

sys.path.insert(0, str(pathlib.Path(__file__).parent))

MODELS_DIR = pathlib.Path(__file__).parent.parent / "models"

# Models whose state space is finite under the default buffer capacity.
BOUNDED_MODELS = sorted(
    p.name for p in MODELS_DIR.glob("*.slco") if p.name != "unbounded_counter.slco"
)


def load_model(name: str) -> Model:
    text = (MODELS_DIR / name).read_text()
    m = parse_model(text)
    assert isinstance(m, Model), f"{name} failed to parse: {m}"
    diags = validate_model(m)
    assert not diags, f"{name} has diagnostics: {diags}"
    return m


@pytest.fixture
def models_dir() -> pathlib.Path:
    return MODELS_DIR


@pytest.fixture
def running_example() -> Model:
    return load_model("running_example.slco")
