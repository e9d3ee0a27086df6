"""The stepping engine: configurations, traces, direction changes.

An Engine holds a running configuration (program tree plus state) and
applies one identifier step at a time, forward or backward. It maintains:

* a trace of every identifier step taken, for replay and for rebuilding
  the forward configuration after a backward excursion;
* the newest identifier stack ever seen per source statement (keyed by the
  statement's origin uid), used to redress the program when turning around;
* mirrors of statement annotations into the stored loop and procedure
  copies, so those copies always carry the full body shape with current
  stacks even though executed statements vanish from the configuration.

Turning around mid-run ("flip") inverts only the executed part of the
configuration: finished statements are recovered from the redressed source
(or from the stored copies, inside loop and procedure bodies), statements
that never ran are dropped, and in-progress constructs keep their place
with the branch that actually ran. Flipping back to forward replays the
surviving trace prefix from the start, which rebuilds the exact
configuration including everything a backward run had pruned.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace as dreplace
from typing import Dict, List, Optional, Tuple

from .forward import apply_forward
from .lang import (
    Block,
    Empty,
    IdStack,
    If,
    Par,
    Program,
    Runc,
    Seq,
    Single,
    Skip,
    While,
    annotate,
    erase_annotations,
    invert,
    seq_from_list,
    seq_to_list,
)
from .preprocess import Prepared
from .redex import (
    Redex,
    enabled_forward,
    enabled_reverse,
    enclosing_copies,
    is_done,
    normalize,
    prenormalize,
    replace_stmt,
)
from .reverse import apply_reverse
from .state import ExecError, ProcEntry, State
from .transform import CopyAllocator

FORWARD = "forward"
REVERSE = "reverse"

DEFAULT_MAX_STEPS = 1_000_000


def max_steps_default() -> int:
    value = os.environ.get("REVINT_MAX_STEPS")
    if value:
        try:
            return int(value)
        except ValueError:
            pass
    return DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class StepEvent:
    """One identifier step as recorded in the trace."""

    index: int
    ident: int
    direction: str
    rule: str
    uid: int
    origin: int
    address: Tuple[str, ...]
    detail: str
    delta_ops: Tuple = ()  # ("push"|"pop", stack, ident, payload) per mutation


class Engine:
    """A program mid-execution, steppable in either direction."""

    def __init__(
        self,
        prepared: Prepared,
        *,
        annotated: bool = True,
        init: Optional[Dict[str, int]] = None,
    ):
        base = prenormalize(prepared.program)
        self.prepared = prepared
        self.annotated = annotated
        self.init = dict(init or {})
        self.base_program = annotate(base) if annotated else erase_annotations(base)
        self.program = self.base_program
        self.state = State()
        self.state.bind_globals(prepared.globals, self.init)
        self.alloc = CopyAllocator(prepared.next_uid)
        self.alloc.seed_versions(base)
        self.direction = FORWARD
        self.trace: List[StepEvent] = []
        self.final_stacks: Dict[int, IdStack] = {}

    # -- stepping

    def enabled(self) -> List[Redex]:
        if self.direction == FORWARD:
            return enabled_forward(self.program, self.state)
        return enabled_reverse(self.program, self.state)

    def step(self, redex: Redex) -> StepEvent:
        copies = enclosing_copies(self.program, redex.address)
        apply = apply_forward if self.direction == FORWARD else apply_reverse
        self.state.aux.drain_journal()
        new_stmt, stack, marker, ident, detail = apply(self, redex)
        if self.annotated:
            if stack is not None:
                self.final_stacks[redex.origin] = stack
            self._mirror(copies, redex.uid, stack, marker)
        self.program = normalize(replace_stmt(self.program, redex.address, new_stmt))
        event = StepEvent(
            index=len(self.trace),
            ident=ident,
            direction=self.direction,
            rule=redex.rule,
            uid=redex.uid,
            origin=redex.origin,
            address=redex.address,
            detail=detail,
            delta_ops=tuple(self.state.aux.drain_journal()),
        )
        self.trace.append(event)
        return event

    def run(self, scheduler, max_steps: Optional[int] = None) -> List[StepEvent]:
        """Step with a scheduler until no step is enabled."""
        budget = max_steps if max_steps is not None else max_steps_default()
        events: List[StepEvent] = []
        while True:
            redexes = self.enabled()
            if not redexes:
                return events
            if len(events) >= budget:
                raise ExecError(f"stopped after {budget} steps without finishing")
            events.append(self.step(scheduler.choose(self, redexes)))

    def done(self) -> bool:
        return not self.enabled()

    # -- annotation mirroring into stored copies

    def _mirror(
        self,
        copies: List[Tuple[str, str]],
        uid: int,
        stack: Optional[IdStack],
        marker: Optional[bool],
    ) -> None:
        for kind, key in copies:
            if kind == "loop":
                tree = self.state.loops.get(key)
                if tree is None:
                    continue
                new_tree, found = _update_annotation(tree, uid, stack, marker)
                if found:
                    self.state.loops[key] = new_tree
            else:
                entry = self.state.procs.get(key)
                if entry is None:
                    continue
                new_tree, found = _update_annotation(entry.body, uid, stack, marker)
                if found:
                    self.state.procs[key] = ProcEntry(entry.name, new_tree)

    # -- turning around

    def flip(self) -> None:
        """Change direction without moving.

        Forward to backward inverts the executed part of the configuration;
        backward to forward replays the surviving trace prefix from the
        start.
        """
        if self.direction == FORWARD:
            if not self.annotated:
                raise ExecError("an unannotated run cannot be reversed")
            reference = self._dressed_reference()
            self.program = normalize(self._invcfg(self.program, reference))
            self.state.loops = {k: invert(v) for k, v in self.state.loops.items()}
            self.state.procs = {
                k: ProcEntry(e.name, invert(e.body)) for k, e in self.state.procs.items()
            }
            self.direction = REVERSE
            return

        target = self.state.seq
        latest: Dict[int, StepEvent] = {}
        for event in self.trace:
            if event.direction == FORWARD and event.ident < target:
                latest[event.ident] = event
        script = [latest[i] for i in range(target)]
        fresh = Engine(self.prepared, annotated=self.annotated, init=self.init)
        scheduler = ReplayScheduler(script)
        for _ in script:
            redexes = fresh.enabled()
            if not redexes:
                break
            fresh.step(scheduler.choose(fresh, redexes))
        if fresh.state.seq != target:
            raise ExecError(
                f"replaying {len(script)} steps reached identifier"
                f" {fresh.state.seq}, expected {target}"
            )
        self.program = fresh.program
        self.state = fresh.state
        self.alloc = fresh.alloc
        self.final_stacks = fresh.final_stacks
        self.direction = FORWARD

    def _dressed_reference(self) -> Program:
        def dress(p: Program) -> Program:
            if isinstance(p, Empty):
                return p
            if isinstance(p, Seq):
                return Seq(dress(p.head), dress(p.tail))
            if isinstance(p, Par):
                return Par(dress(p.left), dress(p.right))
            s = p.stmt
            newest = self.final_stacks.get(s.uid)
            if isinstance(s, If):
                s = dreplace(s, then=dress(s.then), els=dress(s.els))
            elif isinstance(s, (While, Block, Runc)):
                s = dreplace(s, body=dress(s.body))
            elif hasattr(s, "body") and s.body is not None:
                s = dreplace(s, body=dress(s.body))
            if newest is not None:
                s = dreplace(s, stack=newest)
            return Single(s)

        return dress(self.base_program)

    def _invcfg(self, cur: Program, ref: Program) -> Program:
        """Inverse configuration of ``cur``, whose unexecuted residue it is.

        ``ref`` carries the same statements (by uid) with their newest
        annotations: the redressed source at top level, the stored copies
        inside loop and procedure bodies.
        """
        if is_done(cur) or isinstance(cur, Empty):
            return invert(ref)
        ref_items = seq_to_list(ref)
        cur_items = seq_to_list(cur)
        dropped = len(ref_items) - len(cur_items)
        if dropped < 0:
            raise ExecError("configuration does not match its source")
        units: List[Program] = []
        if cur_items and self._unit_touched(cur_items[0], ref_items[dropped]):
            units.append(self._inv_unit(cur_items[0], ref_items[dropped]))
        for i in range(dropped - 1, -1, -1):
            units.append(invert(ref_items[i]))
        if not units:
            return Empty()
        return seq_from_list(units)

    def _touched(self, cur: Program, ref: Program) -> bool:
        """Has anything inside ``cur`` already executed?

        Annotations cannot tell: statements keep stacks from earlier loop
        iterations, and stored mirrors carry the same annotations as the
        live configuration. Progress shows structurally — vanished units,
        a marked conditional, a live working copy, a body in flight.
        """
        if is_done(cur) or isinstance(cur, Empty):
            return not (is_done(ref) or isinstance(ref, Empty))
        cur_items = seq_to_list(cur)
        ref_items = seq_to_list(ref)
        if len(cur_items) < len(ref_items):
            return True
        return bool(cur_items) and self._unit_touched(cur_items[0], ref_items[0])

    def _unit_touched(self, cur: Program, ref: Program) -> bool:
        if isinstance(cur, Par) and isinstance(ref, Par):
            return self._touched(cur.left, ref.left) or self._touched(
                cur.right, ref.right
            )
        if not (isinstance(cur, Single) and isinstance(ref, Single)):
            return False
        s, r = cur.stmt, ref.stmt
        if isinstance(s, If):
            return s.marker is not None
        if isinstance(s, While):
            return s.cid.text() in self.state.loops
        if isinstance(s, Runc):
            return True
        if isinstance(s, Block) and isinstance(r, Block):
            return self._touched(s.body, r.body)
        return False

    def _inv_unit(self, cur: Program, ref: Program) -> Program:
        if isinstance(cur, Par):
            if not isinstance(ref, Par):
                raise ExecError("configuration does not match its source")
            return Par(self._invcfg(cur.left, ref.left), self._invcfg(cur.right, ref.right))
        if not (isinstance(cur, Single) and isinstance(ref, Single)):
            raise ExecError("configuration does not match its source")
        s, r = cur.stmt, ref.stmt
        if s.uid != r.uid:
            raise ExecError(f"statement {s.uid} out of place (expected {r.uid})")
        if isinstance(s, If):
            if s.marker is None:
                raise ExecError("conditional in progress has no branch marker")
            branch_cur = s.then if s.marker else s.els
            branch_ref = r.then if s.marker else r.els
            inverted = self._invcfg(branch_cur, branch_ref)
            pruned = Single(Skip())
            if s.marker:
                return Single(dreplace(s, then=inverted, els=pruned))
            return Single(dreplace(s, then=pruned, els=inverted))
        if isinstance(s, While):
            mirror = self.state.loops.get(s.cid.text())
            if mirror is None:
                raise ExecError(f"loop {s.cid.text()} has no working copy")
            return Single(dreplace(s, body=self._invcfg(s.body, mirror)))
        if isinstance(s, Runc):
            entry = self.state.procs.get(s.cid.text())
            if entry is None:
                raise ExecError(f"procedure body {s.cid.text()} has no stored copy")
            return Single(dreplace(s, body=self._invcfg(s.body, entry.body)))
        if isinstance(s, Block):
            return Single(dreplace(s, body=self._invcfg(s.body, r.body)))
        raise ExecError(
            f"{type(s).__name__} cannot be both started and unfinished"
        )


def _update_annotation(
    p: Program, uid: int, stack: Optional[IdStack], marker: Optional[bool]
) -> Tuple[Program, bool]:
    """Rewrite the statement with this uid (stack and, for ifs, marker)."""
    if isinstance(p, Empty):
        return p, False
    if isinstance(p, Seq):
        head, found = _update_annotation(p.head, uid, stack, marker)
        if found:
            return Seq(head, p.tail), True
        tail, found = _update_annotation(p.tail, uid, stack, marker)
        return (Seq(p.head, tail), True) if found else (p, False)
    if isinstance(p, Par):
        left, found = _update_annotation(p.left, uid, stack, marker)
        if found:
            return Par(left, p.right), True
        right, found = _update_annotation(p.right, uid, stack, marker)
        return (Par(p.left, right), True) if found else (p, False)
    if isinstance(p, Single):
        s = p.stmt
        if s.uid == uid:
            if isinstance(s, If):
                return Single(dreplace(s, stack=stack, marker=marker)), True
            return Single(dreplace(s, stack=stack)), True
        if isinstance(s, If):
            then, found = _update_annotation(s.then, uid, stack, marker)
            if found:
                return Single(dreplace(s, then=then)), True
            els, found = _update_annotation(s.els, uid, stack, marker)
            return (Single(dreplace(s, els=els)), True) if found else (p, False)
        if isinstance(s, (While, Block, Runc)):
            body, found = _update_annotation(s.body, uid, stack, marker)
            return (Single(dreplace(s, body=body)), True) if found else (p, False)
        return p, False
    raise TypeError(f"unknown program node {p!r}")


class ReplayScheduler:
    """Re-applies a recorded list of steps, verifying each one is enabled."""

    def __init__(self, events: List[StepEvent]):
        self.events = list(events)
        self.pos = 0

    def choose(self, engine: Engine, redexes: List[Redex]) -> Redex:
        if self.pos >= len(self.events):
            raise ExecError("script exhausted but steps are still enabled")
        want = self.events[self.pos]
        for r in redexes:
            if (
                r.origin == want.origin
                and r.address == tuple(want.address)
                and r.rule == want.rule
            ):
                self.pos += 1
                return r
        raise ExecError(
            f"scripted step {want.index} ({want.rule} at {'/'.join(want.address)})"
            " is not enabled"
        )
