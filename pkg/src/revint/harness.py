"""Checking runs against each other: snapshots, equivalences, round trips.

Two configurations agree when the data a program can observe agrees:
the same names bound in the same scopes with the same kinds, every scalar
holding the same value, every array holding the same elements. Full state
equality additionally compares raw store contents, stored copies (modulo
annotations), the reversal store and the sequencer.

The drivers here run a program forward under a policy, optionally stop
after a prefix, turn around, run backward to exhaustion and report what
was restored. They are the substance behind both the test suite and the
command-line ``reverse`` and ``check`` commands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .engine import Engine, ReplayScheduler, StepEvent
from .lang import erase_annotations
from .preprocess import Prepared
from .serde import canonical_json, program_to_data
from .state import State


@dataclass(frozen=True)
class Snapshot:
    """Comparable view of a state."""

    data: Tuple[Tuple[str, str, str, object], ...]  # (name, scope, kind, value(s))
    store: Tuple[Tuple[int, int], ...]
    loops: Tuple[Tuple[str, str], ...]  # key, canonical erased body
    procs: Tuple[Tuple[str, str, str], ...]  # key, name, canonical erased body
    seq: int


def take_snapshot(state: State) -> Snapshot:
    data = []
    for (name, scope), b in sorted(state.env.items()):
        if b.kind == "var":
            value: object = state.store.read(b.loc)
        elif b.kind == "arr":
            base = state.store.read(b.loc)
            value = tuple(state.store.read(base + i) for i in range(b.size))
        else:
            value = b.ref
        data.append((name, scope, b.kind, value))
    loops = tuple(
        (k, canonical_json(program_to_data(erase_annotations(v))))
        for k, v in sorted(state.loops.items())
    )
    procs = tuple(
        (k, e.name, canonical_json(program_to_data(erase_annotations(e.body))))
        for k, e in sorted(state.procs.items())
    )
    return Snapshot(
        data=tuple(data),
        store=tuple(sorted(state.store.value_map().items())),
        loops=loops,
        procs=procs,
        seq=state.seq,
    )


def data_equal(a: Snapshot, b: Snapshot) -> bool:
    """Observable agreement: bindings and their values."""
    return a.data == b.data


def full_equal(a: Snapshot, b: Snapshot) -> bool:
    return a == b


# --------------------------------------------------------------------------
# drivers


@dataclass
class RoundTrip:
    forward_steps: int
    reverse_steps: int
    initial: Snapshot
    turned: Snapshot
    restored: Snapshot
    reversal_empty: bool
    sequencer_zero: bool
    forward_trace: List[StepEvent] = field(default_factory=list)
    reverse_trace: List[StepEvent] = field(default_factory=list)

    @property
    def restored_exactly(self) -> bool:
        return (
            full_equal(self.initial, self.restored)
            and self.reversal_empty
            and self.sequencer_zero
        )


def run_forward(
    prepared: Prepared,
    scheduler,
    *,
    init: Optional[Dict[str, int]] = None,
    max_steps: Optional[int] = None,
) -> Engine:
    engine = Engine(prepared, init=init)
    engine.run(scheduler, max_steps=max_steps)
    return engine


def round_trip(
    prepared: Prepared,
    scheduler,
    *,
    init: Optional[Dict[str, int]] = None,
    stop_after: Optional[int] = None,
    max_steps: Optional[int] = None,
) -> RoundTrip:
    """Run forward (all the way or ``stop_after`` steps), flip, run back."""
    engine = Engine(prepared, init=init)
    initial = take_snapshot(engine.state)
    if stop_after is None:
        forward = engine.run(scheduler, max_steps=max_steps)
    else:
        forward = []
        while len(forward) < stop_after:
            redexes = engine.enabled()
            if not redexes:
                break
            forward.append(engine.step(scheduler.choose(engine, redexes)))
    turned = take_snapshot(engine.state)
    engine.flip()
    backward = engine.run(scheduler, max_steps=max_steps)
    return RoundTrip(
        forward_steps=len(forward),
        reverse_steps=len(backward),
        initial=initial,
        turned=turned,
        restored=take_snapshot(engine.state),
        reversal_empty=engine.state.aux.is_empty(),
        sequencer_zero=engine.state.seq == 0,
        forward_trace=forward,
        reverse_trace=backward,
    )


@dataclass
class TwinReport:
    """An annotated run against its unannotated twin on the same schedule."""

    annotated: Snapshot
    plain: Snapshot

    @property
    def agrees(self) -> bool:
        return (
            self.annotated.data == self.plain.data
            and self.annotated.store == self.plain.store
            and self.annotated.loops == self.plain.loops
            and self.annotated.procs == self.plain.procs
            and self.annotated.seq == self.plain.seq
        )


def run_twins(
    prepared: Prepared,
    scheduler,
    *,
    init: Optional[Dict[str, int]] = None,
    max_steps: Optional[int] = None,
) -> TwinReport:
    """Run annotated, then re-enact the same schedule without annotations."""
    annotated = Engine(prepared, init=init)
    events = annotated.run(scheduler, max_steps=max_steps)
    plain = Engine(prepared, annotated=False, init=init)
    plain.run(ReplayScheduler(events), max_steps=max_steps)
    return TwinReport(
        annotated=take_snapshot(annotated.state), plain=take_snapshot(plain.state)
    )


def replay(
    prepared: Prepared,
    events: List[StepEvent],
    *,
    init: Optional[Dict[str, int]] = None,
) -> Engine:
    """Re-enact a recorded trace exactly, turning around where it does."""
    engine = Engine(prepared, init=init)
    scheduler = ReplayScheduler(events)
    for event in events:
        if event.direction != engine.direction:
            engine.flip()
        redexes = engine.enabled()
        if not redexes:
            break
        engine.step(scheduler.choose(engine, redexes))
    return engine
