"""Forward identifier steps.

Each step consumes one interleaving identifier from the sequencer. When the
engine is annotating, the identifier is pushed onto the statement's stack
and whatever the step destroys is banked in the reversal store:

* destructive assignment        the overwritten value, on the name's stack
* leaving a conditional         the branch taken, on "B"
* every loop guard decision     whether a working copy already existed, on "W"
* leaving a loop                the accumulated body annotations, on "WI"
* removing a variable           its final value, on the name's stack
* removing an array             all element values, lowest index first,
                                under one identifier, on the name's stack
* returning from a procedure    the accumulated body annotations, on "Pr"

Constructive assignments, declarations and procedure-call entry save
nothing: inverting the statement is enough to undo them.

Statements vanish from the configuration once fully executed; stored loop
and procedure copies (updated through the engine's mirror) retain their
shape and accumulated annotations for later inversion.
"""

from __future__ import annotations

from dataclasses import replace as dreplace
from typing import Optional, Tuple

from .lang import (
    Assign,
    ArrDecl,
    ArrRemove,
    Call,
    If,
    IdStack,
    ProcDecl,
    ProcRemove,
    Runc,
    Skip,
    Stmt,
    VarDecl,
    VarRemove,
    While,
)
from .redex import Redex, stmt_at
from .state import Binding, ExecError, ProcEntry
from .transform import get_annotation_ids, rename_copy

_SKIP = Skip()


def _pushed(stmt: Stmt, ident: int, annotated: bool) -> Optional[IdStack]:
    if not annotated:
        return stmt.stack
    if stmt.stack is None:
        raise ExecError(f"statement {type(stmt).__name__} has no identifier stack")
    return stmt.stack.push(ident)


def apply_forward(engine, redex: Redex) -> Tuple[Stmt, Optional[IdStack], Optional[bool], int, str]:
    """Perform one forward step.

    Returns (replacement statement, new stack, new marker, identifier,
    detail) for the engine to commit.
    """
    state = engine.state
    annotated = engine.annotated
    s = stmt_at(engine.program, redex.address)
    rule = redex.rule
    ident = state.next_id()
    stack = _pushed(s, ident, annotated)

    if rule == "assign":
        assert isinstance(s, Assign)
        _do_assign(engine, s, ident, annotated)
        return _SKIP, stack, None, ident, s.name

    if rule == "if-open":
        assert isinstance(s, If) and s.marker is None
        value = state.eval_b(s.cond, s.path)
        new = dreplace(s, marker=value, stack=stack)
        return new, stack, value, ident, "T" if value else "F"

    if rule == "if-close":
        assert isinstance(s, If) and s.marker is not None
        if annotated:
            state.aux.push("B", ident, s.marker)
        return _SKIP, stack, None, ident, "T" if s.marker else "F"

    if rule == "loop-enter":
        assert isinstance(s, While)
        key = s.cid.text()
        assert key not in state.loops
        value = state.eval_b(s.cond, s.path)
        if annotated:
            state.aux.push("W", ident, False)  # no working copy existed
        if not value:
            return _SKIP, stack, None, ident, "F"
        working = rename_copy(s.body, engine.alloc)
        state.loops[key] = working
        new = dreplace(s, body=working, stack=stack)
        return new, stack, None, ident, "T"

    if rule == "loop-boundary":
        assert isinstance(s, While)
        key = s.cid.text()
        stored = state.loops[key]
        value = state.eval_b(s.cond, s.path)
        if annotated:
            state.aux.push("W", ident, True)  # a working copy existed
        if value:
            working = rename_copy(stored, engine.alloc)
            state.loops[key] = working
            new = dreplace(s, body=working, stack=stack)
            return new, stack, None, ident, "T"
        if annotated:
            state.aux.push("WI", ident, get_annotation_ids(stored))
        del state.loops[key]
        return _SKIP, stack, None, ident, "F"

    if rule == "var-decl":
        assert isinstance(s, VarDecl)
        loc = state.store.alloc()
        value = state.eval_a(s.expr, s.path)
        state.bind(s.name, s.path[0].text(), Binding("var", loc))
        state.store.write(loc, value)
        return _SKIP, stack, None, ident, s.name

    if rule == "arr-decl":
        assert isinstance(s, ArrDecl)
        ptr = state.store.alloc()
        base = state.store.alloc_block(s.size)
        state.store.write(ptr, base)
        state.bind(s.name, s.path[0].text(), Binding("arr", ptr, s.size))
        return _SKIP, stack, None, ident, s.name

    if rule == "proc-decl":
        assert isinstance(s, ProcDecl)
        state.bind(s.name, s.path[0].text(), Binding("proc", -1, ref=s.cid.text()))
        state.procs[s.cid.text()] = ProcEntry(s.name, s.body)
        return _SKIP, stack, None, ident, s.name

    if rule == "var-remove":
        assert isinstance(s, VarRemove)
        binding, scope = state.resolve(s.name, s.path)
        if binding.kind != "var":
            raise ExecError(f"{s.name!r} is not a variable")
        if annotated:
            state.aux.push(s.name, ident, state.store.read(binding.loc))
        state.store.free(binding.loc)
        state.unbind(s.name, scope)
        return _SKIP, stack, None, ident, s.name

    if rule == "arr-remove":
        assert isinstance(s, ArrRemove)
        binding, scope = state.resolve(s.name, s.path)
        if binding.kind != "arr":
            raise ExecError(f"{s.name!r} is not an array")
        base = state.store.read(binding.loc)
        if annotated:
            for i in range(binding.size):  # lowest index first
                state.aux.push(s.name, ident, state.store.read(base + i))
        for i in range(binding.size):
            state.store.free(base + i)
        state.store.free(binding.loc)
        state.unbind(s.name, scope)
        return _SKIP, stack, None, ident, s.name

    if rule == "proc-remove":
        assert isinstance(s, ProcRemove)
        binding, scope = state.resolve(s.name, s.path)
        if binding.kind != "proc":
            raise ExecError(f"{s.name!r} is not a procedure")
        state.unbind(s.name, scope)
        state.procs.pop(binding.ref, None)
        return _SKIP, stack, None, ident, s.name

    if rule == "call-open":
        assert isinstance(s, Call)
        binding, _ = state.resolve(s.name, s.path)
        if binding.kind != "proc":
            raise ExecError(f"{s.name!r} is not a procedure")
        entry = state.procs[binding.ref]
        working = rename_copy(entry.body, engine.alloc)
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
        assert isinstance(s, Runc)
        key = s.cid.text()
        if annotated:
            state.aux.push("Pr", ident, get_annotation_ids(state.procs[key].body))
        del state.procs[key]
        return _SKIP, stack, None, ident, s.name

    raise ExecError(f"unknown forward rule {rule!r}")


def _do_assign(engine, s: Assign, ident: int, annotated: bool) -> None:
    state = engine.state
    value = state.eval_a(s.expr, s.path)
    if s.index is None:
        if s.op == "=":
            if annotated:
                state.aux.push(s.name, ident, state.read_var(s.name, s.path))
            state.write_var(s.name, s.path, value)
        elif s.op == "+=":
            state.write_var(s.name, s.path, state.read_var(s.name, s.path) + value)
        else:
            state.write_var(s.name, s.path, state.read_var(s.name, s.path) - value)
        return
    index = state.eval_a(s.index, s.path)
    if s.op == "=":
        if annotated:
            state.aux.push(s.name, ident, state.read_elem(s.name, s.path, index))
        state.write_elem(s.name, s.path, index, value)
    elif s.op == "+=":
        state.write_elem(
            s.name, s.path, index, state.read_elem(s.name, s.path, index) + value
        )
    else:
        state.write_elem(
            s.name, s.path, index, state.read_elem(s.name, s.path, index) - value
        )
