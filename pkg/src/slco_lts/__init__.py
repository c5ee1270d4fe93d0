"""SLCO model exploration toolkit.

Pipeline: parse an SLCO model, explore its state space into configurations
and steps, convert to a labeled transition system, then reduce, compare, or
export (LTS text, DOT, AUT).
"""

__version__ = "0.1.0"

from .model import (
    Diagnostic,
    Model,
    SlcoType,
    default_initial_value,
    transition_identifier,
)
from .parser import parse_model, pretty_print
from .validate import validate_model
from .semantics import (
    Configuration,
    CsGraph,
    ExploreLimits,
    ExplorationError,
    LimitExceededError,
    PartialState,
    PlainState,
    SignalInstance,
    Step,
    canonicalize_configuration,
    evaluate_expression,
    explore,
    initial_configuration,
    successors,
    take_step_partial,
    take_step_plain,
)
from .csformat import emit_cs, parse_cs
from .lts import Lts, LtsError, cs_to_lts, emit_lts_text, parse_lts_text
from .export import DotOptions, emit_aut, emit_dot
from .reduction import HideSpec, equivalent, hide_labels, reduce_lts

__all__ = [
    "Configuration",
    "CsGraph",
    "Diagnostic",
    "DotOptions",
    "ExplorationError",
    "ExploreLimits",
    "HideSpec",
    "LimitExceededError",
    "Lts",
    "LtsError",
    "Model",
    "PartialState",
    "PlainState",
    "SignalInstance",
    "SlcoType",
    "Step",
    "canonicalize_configuration",
    "cs_to_lts",
    "default_initial_value",
    "emit_aut",
    "emit_cs",
    "emit_dot",
    "emit_lts_text",
    "equivalent",
    "evaluate_expression",
    "explore",
    "hide_labels",
    "initial_configuration",
    "parse_cs",
    "parse_lts_text",
    "parse_model",
    "pretty_print",
    "reduce_lts",
    "successors",
    "take_step_partial",
    "take_step_plain",
    "transition_identifier",
    "validate_model",
]
