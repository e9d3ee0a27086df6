"""Backward identifier steps.

The engine runs the inverted program, and each step undoes exactly one
forward step: the statement's newest identifier must be the last one the
sequencer issued; the step pops it (from the statement and the sequencer)
and consumes whatever the forward step banked:

* destructive assignment   pops the name's stack and writes the value back
* constructive assignment  executes as written (inversion swapped + and -)
* conditional entry        pops "B" to re-mark the branch that had run
* conditional exit         just pops the identifier that opened it
* loop entry               pops "W"; if a copy had existed, pops "WI" and
                           rebuilds the working copy with its exact
                           construct ids and stacks, inverted
* loop boundary            pops "W"; T rolls back one more iteration on a
                           fresh renaming, F drops the working copy
* declarations             (inverted removals) reallocate and restore the
                           saved value(s) from the name's stack
* removals                 (inverted declarations) free and unbind, saving
                           nothing
* call entry               pops "Pr" and rebuilds the procedure body in
                           flight, inverted, with exact ids and stacks
* call exit                drops the in-flight copy

Because identifiers are popped newest-first and the sequencer retreats one
identifier per step, at most one backward identifier step is enabled at any
time, and a full backward run ends with the sequencer at zero and the
reversal store empty.
"""

from __future__ import annotations

from dataclasses import replace as dreplace
from typing import Optional, Tuple

from .lang import (
    Assign,
    ArrDecl,
    ArrRemove,
    Call,
    IdStack,
    If,
    ProcDecl,
    ProcRemove,
    Runc,
    Skip,
    Stmt,
    VarDecl,
    VarRemove,
    While,
    invert,
)
from .redex import Redex, stmt_at
from .state import Binding, ExecError, ProcEntry
from .transform import rename_copy, set_annotation_ids

_SKIP = Skip()


def _popped(s: Stmt, state) -> Tuple[IdStack, int]:
    if s.stack is None or len(s.stack) == 0:
        raise ExecError(f"statement {type(s).__name__} has nothing to undo")
    ident, rest = s.stack.pop()
    state.unstep_id(ident)
    return rest, ident


def _pop_matching(state, key: str, ident: int):
    got_ident, payload = state.aux.pop(key)
    if got_ident != ident:
        raise ExecError(
            f"reversal stack {key!r} holds identifier {got_ident}, expected {ident}"
        )
    return payload


def apply_reverse(engine, redex: Redex) -> Tuple[Stmt, Optional[IdStack], Optional[bool], int, str]:
    """Undo one forward step. Returns the same commit tuple as apply_forward."""
    state = engine.state
    s = stmt_at(engine.program, redex.address)
    rule = redex.rule
    stack, ident = _popped(s, state)

    if rule == "assign":
        assert isinstance(s, Assign)
        _undo_assign(engine, s, ident)
        return _SKIP, stack, None, ident, s.name

    if rule == "if-open":
        # undoes the forward exit: re-enter the branch that had run
        assert isinstance(s, If) and s.marker is None
        value = _pop_matching(state, "B", ident)
        new = dreplace(s, marker=value, stack=stack)
        return new, stack, value, ident, "T" if value else "F"

    if rule == "if-close":
        # undoes the forward entry: nothing was banked
        assert isinstance(s, If) and s.marker is not None
        return _SKIP, stack, None, ident, "T" if s.marker else "F"

    if rule == "loop-enter":
        # no working copy: undoes the forward exit (or a zero-iteration run)
        assert isinstance(s, While)
        key = s.cid.text()
        assert key not in state.loops
        had_copy = _pop_matching(state, "W", ident)
        if not had_copy:
            return _SKIP, stack, None, ident, "F"
        record = _pop_matching(state, "WI", ident)
        forward_shape = invert(s.body)
        working = invert(set_annotation_ids(forward_shape, record, engine.alloc))
        state.loops[key] = working
        new = dreplace(s, body=working, stack=stack)
        return new, stack, None, ident, "T"

    if rule == "loop-boundary":
        # working copy fully undone: step back over an iteration boundary
        assert isinstance(s, While)
        key = s.cid.text()
        had_copy = _pop_matching(state, "W", ident)
        if had_copy:
            working = rename_copy(state.loops[key], engine.alloc)
            state.loops[key] = working
            new = dreplace(s, body=working, stack=stack)
            return new, stack, None, ident, "T"
        del state.loops[key]
        return _SKIP, stack, None, ident, "F"

    if rule == "var-decl":
        # inverted removal: undoes it by rebinding and restoring the value
        assert isinstance(s, VarDecl)
        loc = state.store.alloc()
        state.bind(s.name, s.path[0].text(), Binding("var", loc))
        value = _pop_matching(state, s.name, ident)
        state.store.write(loc, value)
        return _SKIP, stack, None, ident, s.name

    if rule == "arr-decl":
        # inverted removal: restore every element, highest index first
        assert isinstance(s, ArrDecl)
        ptr = state.store.alloc()
        base = state.store.alloc_block(s.size)
        state.store.write(ptr, base)
        state.bind(s.name, s.path[0].text(), Binding("arr", ptr, s.size))
        for i in range(s.size - 1, -1, -1):
            state.store.write(base + i, _pop_matching(state, s.name, ident))
        return _SKIP, stack, None, ident, s.name

    if rule == "proc-decl":
        # inverted removal: re-install the (inverted) body
        assert isinstance(s, ProcDecl)
        state.bind(s.name, s.path[0].text(), Binding("proc", -1, ref=s.cid.text()))
        state.procs[s.cid.text()] = ProcEntry(s.name, s.body)
        return _SKIP, stack, None, ident, s.name

    if rule == "var-remove":
        # inverted declaration: free the cell, saving nothing
        assert isinstance(s, VarRemove)
        binding, scope = state.resolve(s.name, s.path)
        state.store.free(binding.loc)
        state.unbind(s.name, scope)
        return _SKIP, stack, None, ident, s.name

    if rule == "arr-remove":
        assert isinstance(s, ArrRemove)
        binding, scope = state.resolve(s.name, s.path)
        base = state.store.read(binding.loc)
        for i in range(binding.size):
            state.store.free(base + i)
        state.store.free(binding.loc)
        state.unbind(s.name, scope)
        return _SKIP, stack, None, ident, s.name

    if rule == "proc-remove":
        assert isinstance(s, ProcRemove)
        binding, scope = state.resolve(s.name, s.path)
        state.unbind(s.name, scope)
        state.procs.pop(binding.ref, None)
        return _SKIP, stack, None, ident, s.name

    if rule == "call-open":
        # undoes the forward return: rebuild the body in flight, inverted
        assert isinstance(s, Call)
        binding, _ = state.resolve(s.name, s.path)
        record = _pop_matching(state, "Pr", ident)
        forward_shape = invert(state.procs[binding.ref].body)
        working = invert(set_annotation_ids(forward_shape, record, engine.alloc))
        state.procs[s.cid.text()] = ProcEntry(s.name, working)
        new = Runc(
            uid=s.uid,
            origin=s.origin,
            path=s.path,
            stack=stack,
            span=s.span,
            cid=s.cid,
            name=s.name,
            body=working,
        )
        return new, stack, None, ident, s.name

    if rule == "call-close":
        # undoes the forward call entry: drop the in-flight copy
        assert isinstance(s, Runc)
        del state.procs[s.cid.text()]
        return _SKIP, stack, None, ident, s.name

    raise ExecError(f"unknown backward rule {rule!r}")


def _undo_assign(engine, s: Assign, ident: int) -> None:
    state = engine.state
    if s.op == "=":
        if s.index is None:
            state.write_var(s.name, s.path, _pop_matching(state, s.name, ident))
        else:
            index = state.eval_a(s.index, s.path)
            state.write_elem(
                s.name, s.path, index, _pop_matching(state, s.name, ident)
            )
        return
    # constructive: the inversion already swapped the operator
    value = state.eval_a(s.expr, s.path)
    if s.index is None:
        current = state.read_var(s.name, s.path)
        state.write_var(
            s.name, s.path, current + value if s.op == "+=" else current - value
        )
        return
    index = state.eval_a(s.index, s.path)
    current = state.read_elem(s.name, s.path, index)
    state.write_elem(
        s.name, s.path, index, current + value if s.op == "+=" else current - value
    )
