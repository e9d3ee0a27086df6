"""revint — a reversible interpreter for a concurrent imperative language.

Programs run forward while banking, per interleaving step, the identifier
that ordered it and whatever data the step destroyed. Inverting the
program and consuming that bank runs the same computation backward to the
exact initial state, leaving nothing behind.

Typical use::

    from revint import parse, prepare, Engine, make_scheduler

    prepared = prepare(parse(source))
    engine = Engine(prepared)
    engine.run(make_scheduler("seeded", seed=7))
    engine.flip()
    engine.run(make_scheduler("leftmost"))   # back at the start
"""

from .engine import Engine, ReplayScheduler, StepEvent
from .generate import generate_source
from .harness import (
    RoundTrip,
    Snapshot,
    TwinReport,
    replay,
    round_trip,
    run_forward,
    run_twins,
    take_snapshot,
)
from .lang import invert, erase_annotations, annotate
from .parser import ParseError, parse
from .preprocess import Prepared, StaticError, prepare
from .render import render_config, render_program, stmt_text
from .scheduler import (
    IdentifierScript,
    LeftmostScheduler,
    SeededScheduler,
    make_scheduler,
)
from .serde import canonical_json, program_to_data, state_to_data, trace_document
from .state import ExecError

__all__ = [
    "Engine",
    "ExecError",
    "IdentifierScript",
    "LeftmostScheduler",
    "ParseError",
    "Prepared",
    "ReplayScheduler",
    "RoundTrip",
    "SeededScheduler",
    "Snapshot",
    "StaticError",
    "StepEvent",
    "TwinReport",
    "annotate",
    "canonical_json",
    "erase_annotations",
    "generate_source",
    "invert",
    "make_scheduler",
    "parse",
    "prepare",
    "program_to_data",
    "render_config",
    "render_program",
    "replay",
    "round_trip",
    "run_forward",
    "run_twins",
    "state_to_data",
    "stmt_text",
    "take_snapshot",
    "trace_document",
]

__version__ = "0.1.0"
