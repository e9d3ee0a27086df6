"""Locating and addressing the steps a configuration can take.

A program configuration is a tree of sequences, parallel compositions and
statements. An address is a tuple of moves from the root:

    "H" / "T"        head / tail of a sequence
    "L" / "R"        left / right arm of a parallel composition
    "S"              into the statement of a leaf
    "then" / "else"  into a conditional's branches
    "body"           into a loop, block or in-flight procedure body

Identifier-free housekeeping ("skip steps") is folded into ``normalize``:
a finished first statement lets the rest of the sequence through, a
parallel composition of finished arms finishes, a block whose body is done
becomes skip. Everything else is an identifier step, found by ``enabled``.

Each identifier step is a ``Redex``.  Running forward every active
statement is enabled, so scheduling choices exist wherever parallel arms
overlap.  Running backward a statement is enabled only when its newest
recorded identifier is the most recently issued one overall, which makes
at most one identifier step available at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .lang import (
    Assign,
    ArrDecl,
    ArrRemove,
    Block,
    Call,
    Empty,
    If,
    Par,
    ProcDecl,
    ProcRemove,
    Program,
    Runc,
    Seq,
    Single,
    Skip,
    Stmt,
    VarDecl,
    VarRemove,
    While,
)
from .state import State

Address = Tuple[str, ...]


@dataclass(frozen=True)
class Redex:
    """One enabled identifier step: where it is and what kind it is."""

    address: Address
    rule: str  # stable step-kind name shared by both directions
    uid: int
    origin: int
    label: str  # short human-readable description


# --------------------------------------------------------------------------
# tree surgery


def is_done(p: Program) -> bool:
    """True for a fully finished (all-skip) fragment, assuming normal form."""
    if isinstance(p, Empty):
        return True
    if isinstance(p, Single):
        return isinstance(p.stmt, Skip)
    return False


def stmt_at(p: Program, addr: Address) -> Stmt:
    node: object = p
    for move in addr:
        if move == "H":
            node = node.head  # type: ignore[union-attr]
        elif move == "T":
            node = node.tail  # type: ignore[union-attr]
        elif move == "L":
            node = node.left  # type: ignore[union-attr]
        elif move == "R":
            node = node.right  # type: ignore[union-attr]
        elif move == "S":
            node = node.stmt  # type: ignore[union-attr]
        elif move == "then":
            node = node.then  # type: ignore[union-attr]
        elif move == "else":
            node = node.els  # type: ignore[union-attr]
        elif move == "body":
            node = node.body  # type: ignore[union-attr]
        else:
            raise ValueError(f"bad address move {move!r}")
    if not isinstance(node, Stmt):
        raise ValueError(f"address {addr!r} does not name a statement")
    return node


def replace_stmt(p: Program, addr: Address, new: Stmt) -> Program:
    if not addr:
        raise ValueError("empty address")
    move, rest = addr[0], addr[1:]
    if move == "H":
        assert isinstance(p, Seq)
        return Seq(replace_stmt(p.head, rest, new), p.tail)
    if move == "T":
        assert isinstance(p, Seq)
        return Seq(p.head, replace_stmt(p.tail, rest, new))
    if move == "L":
        assert isinstance(p, Par)
        return Par(replace_stmt(p.left, rest, new), p.right)
    if move == "R":
        assert isinstance(p, Par)
        return Par(p.left, replace_stmt(p.right, rest, new))
    if move == "S":
        assert isinstance(p, Single)
        if not rest:
            return Single(new)
        return Single(_replace_in_stmt(p.stmt, rest, new))
    raise ValueError(f"bad address move {move!r}")


def _replace_in_stmt(s: Stmt, addr: Address, new: Stmt) -> Stmt:
    from dataclasses import replace as dreplace

    move, rest = addr[0], addr[1:]
    if move == "then":
        assert isinstance(s, If)
        return dreplace(s, then=replace_stmt(s.then, rest, new))
    if move == "else":
        assert isinstance(s, If)
        return dreplace(s, els=replace_stmt(s.els, rest, new))
    if move == "body":
        assert isinstance(s, (While, Block, ProcDecl, Runc))
        return dreplace(s, body=replace_stmt(s.body, rest, new))
    raise ValueError(f"bad statement move {move!r}")


def enclosing_copies(p: Program, addr: Address) -> List[Tuple[str, str]]:
    """Stored-copy keys ("loop"/"proc", construct id) wrapping an address.

    Only loops that are mid-iteration and procedure bodies in flight keep
    stored copies, so only those appear.
    """
    out: List[Tuple[str, str]] = []
    node: object = p
    for move in addr:
        if isinstance(node, Stmt):
            if isinstance(node, While) and move == "body":
                out.append(("loop", node.cid.text()))
            elif isinstance(node, Runc) and move == "body":
                out.append(("proc", node.cid.text()))
        if move == "H":
            node = node.head  # type: ignore[union-attr]
        elif move == "T":
            node = node.tail  # type: ignore[union-attr]
        elif move == "L":
            node = node.left  # type: ignore[union-attr]
        elif move == "R":
            node = node.right  # type: ignore[union-attr]
        elif move == "S":
            node = node.stmt  # type: ignore[union-attr]
        elif move == "then":
            node = node.then  # type: ignore[union-attr]
        elif move == "else":
            node = node.els  # type: ignore[union-attr]
        elif move == "body":
            node = node.body  # type: ignore[union-attr]
    return out


# --------------------------------------------------------------------------
# identifier-free housekeeping


def normalize(p: Program) -> Program:
    """Exhaustively apply skip steps everywhere in the tree.

    Deterministic and confluent: finished sequence heads are dropped,
    finished parallel arms collapse, blocks over finished bodies finish.
    Applied after parsing and after every identifier step, so enabledness
    checks can rely on normal form.
    """
    if isinstance(p, Empty):
        return p
    if isinstance(p, Seq):
        head = normalize(p.head)
        if is_done(head):
            return normalize(p.tail)
        tail = normalize(p.tail)
        if isinstance(tail, Empty):
            return head
        return Seq(head, tail)
    if isinstance(p, Par):
        left = normalize(p.left)
        right = normalize(p.right)
        if is_done(left) and is_done(right):
            return Single(Skip())
        return Par(left, right)
    if isinstance(p, Single):
        s = p.stmt
        if isinstance(s, If) and s.marker is not None:
            from dataclasses import replace as dreplace

            if s.marker:
                return Single(dreplace(s, then=normalize(s.then)))
            return Single(dreplace(s, els=normalize(s.els)))
        if isinstance(s, (While, Runc)):
            from dataclasses import replace as dreplace

            return Single(dreplace(s, body=normalize(s.body)))
        if isinstance(s, Block):
            from dataclasses import replace as dreplace

            body = normalize(s.body)
            if is_done(body):
                return Single(Skip())
            return Single(dreplace(s, body=body))
        return p
    raise TypeError(f"unknown program node {p!r}")


def prenormalize(p: Program) -> Program:
    """Normal form for a program that has not run yet.

    Identical to ``normalize`` except that unentered conditional branches,
    loop bodies and declaration bodies are also brought to normal form, so
    later copies of them start out normalized too.
    """
    from dataclasses import replace as dreplace

    if isinstance(p, Empty):
        return p
    if isinstance(p, Seq):
        head = prenormalize(p.head)
        tail = prenormalize(p.tail)
        if is_done(head) and not isinstance(tail, Empty):
            return tail
        if isinstance(tail, Empty):
            return head
        return Seq(head, tail)
    if isinstance(p, Par):
        left = prenormalize(p.left)
        right = prenormalize(p.right)
        if is_done(left) and is_done(right):
            return Single(Skip())
        return Par(left, right)
    if isinstance(p, Single):
        s = p.stmt
        if isinstance(s, If):
            return Single(
                dreplace(s, then=prenormalize(s.then), els=prenormalize(s.els))
            )
        if isinstance(s, (While, ProcDecl, ProcRemove, Runc)):
            return Single(dreplace(s, body=prenormalize(s.body)))
        if isinstance(s, Block):
            body = prenormalize(s.body)
            if is_done(body):
                return Single(Skip())
            return Single(dreplace(s, body=body))
        return p
    raise TypeError(f"unknown program node {p!r}")


# --------------------------------------------------------------------------
# enabled identifier steps

_RULE_LABEL = {
    "assign": "assignment",
    "if-open": "evaluate condition",
    "if-close": "leave conditional",
    "loop-enter": "evaluate loop guard",
    "loop-boundary": "loop iteration boundary",
    "var-decl": "declare variable",
    "arr-decl": "declare array",
    "proc-decl": "declare procedure",
    "var-remove": "remove variable",
    "arr-remove": "remove array",
    "proc-remove": "remove procedure",
    "call-open": "call procedure",
    "call-close": "return from procedure",
}


def _mk(addr: Address, rule: str, s: Stmt, extra: str = "") -> Redex:
    label = _RULE_LABEL[rule] + (f" {extra}" if extra else "")
    return Redex(address=addr, rule=rule, uid=s.uid, origin=s.origin, label=label)


def enabled_forward(p: Program, state: State) -> List[Redex]:
    """All identifier steps the configuration offers, left to right."""
    out: List[Redex] = []
    _walk_forward(p, (), state, out)
    return out


def _walk_forward(p: Program, addr: Address, state: State, out: List[Redex]) -> None:
    if isinstance(p, Empty):
        return
    if isinstance(p, Seq):
        _walk_forward(p.head, addr + ("H",), state, out)
        return
    if isinstance(p, Par):
        _walk_forward(p.left, addr + ("L",), state, out)
        _walk_forward(p.right, addr + ("R",), state, out)
        return
    if not isinstance(p, Single):
        raise TypeError(f"unknown program node {p!r}")
    s = p.stmt
    here = addr + ("S",)
    if isinstance(s, Skip):
        return
    if isinstance(s, Assign):
        out.append(_mk(here, "assign", s, s.name))
        return
    if isinstance(s, If):
        if s.marker is None:
            out.append(_mk(here, "if-open", s, s.cid.text()))
        else:
            branch, move = (s.then, "then") if s.marker else (s.els, "else")
            if is_done(branch):
                out.append(_mk(here, "if-close", s, s.cid.text()))
            else:
                _walk_forward(branch, here + (move,), state, out)
        return
    if isinstance(s, While):
        if s.cid.text() not in state.loops:
            out.append(_mk(here, "loop-enter", s, s.cid.text()))
        elif is_done(s.body):
            out.append(_mk(here, "loop-boundary", s, s.cid.text()))
        else:
            _walk_forward(s.body, here + ("body",), state, out)
        return
    if isinstance(s, Block):
        _walk_forward(s.body, here + ("body",), state, out)
        return
    if isinstance(s, Runc):
        if is_done(s.body):
            out.append(_mk(here, "call-close", s, s.name))
        else:
            _walk_forward(s.body, here + ("body",), state, out)
        return
    if isinstance(s, VarDecl):
        out.append(_mk(here, "var-decl", s, s.name))
        return
    if isinstance(s, ArrDecl):
        out.append(_mk(here, "arr-decl", s, s.name))
        return
    if isinstance(s, ProcDecl):
        out.append(_mk(here, "proc-decl", s, s.name))
        return
    if isinstance(s, VarRemove):
        out.append(_mk(here, "var-remove", s, s.name))
        return
    if isinstance(s, ArrRemove):
        out.append(_mk(here, "arr-remove", s, s.name))
        return
    if isinstance(s, ProcRemove):
        out.append(_mk(here, "proc-remove", s, s.name))
        return
    if isinstance(s, Call):
        out.append(_mk(here, "call-open", s, s.name))
        return
    raise TypeError(f"no forward step for {type(s).__name__}")


def enabled_reverse(p: Program, state: State) -> List[Redex]:
    """Identifier steps available running backward.

    A statement may undo only the most recently issued identifier, so this
    returns at most one entry.
    """
    out: List[Redex] = []
    _walk_reverse(p, (), state, out)
    return out


def _head_ready(s: Stmt, state: State) -> bool:
    return s.stack is not None and len(s.stack) > 0 and s.stack.head == state.prev_id()


def _walk_reverse(p: Program, addr: Address, state: State, out: List[Redex]) -> None:
    if isinstance(p, Empty):
        return
    if isinstance(p, Seq):
        _walk_reverse(p.head, addr + ("H",), state, out)
        return
    if isinstance(p, Par):
        _walk_reverse(p.left, addr + ("L",), state, out)
        _walk_reverse(p.right, addr + ("R",), state, out)
        return
    if not isinstance(p, Single):
        raise TypeError(f"unknown program node {p!r}")
    s = p.stmt
    here = addr + ("S",)
    if isinstance(s, Skip):
        return
    if isinstance(s, If):
        if s.marker is not None:
            branch, move = (s.then, "then") if s.marker else (s.els, "else")
            if is_done(branch):
                if _head_ready(s, state):
                    out.append(_mk(here, "if-close", s, s.cid.text()))
            else:
                _walk_reverse(branch, here + (move,), state, out)
        elif _head_ready(s, state):
            out.append(_mk(here, "if-open", s, s.cid.text()))
        return
    if isinstance(s, While):
        if s.cid.text() in state.loops:
            if is_done(s.body):
                if _head_ready(s, state):
                    out.append(_mk(here, "loop-boundary", s, s.cid.text()))
            else:
                _walk_reverse(s.body, here + ("body",), state, out)
        elif _head_ready(s, state):
            out.append(_mk(here, "loop-enter", s, s.cid.text()))
        return
    if isinstance(s, Block):
        _walk_reverse(s.body, here + ("body",), state, out)
        return
    if isinstance(s, Runc):
        if is_done(s.body):
            if _head_ready(s, state):
                out.append(_mk(here, "call-close", s, s.name))
        else:
            _walk_reverse(s.body, here + ("body",), state, out)
        return
    if not _head_ready(s, state):
        return
    if isinstance(s, Assign):
        out.append(_mk(here, "assign", s, s.name))
    elif isinstance(s, VarDecl):
        out.append(_mk(here, "var-decl", s, s.name))
    elif isinstance(s, ArrDecl):
        out.append(_mk(here, "arr-decl", s, s.name))
    elif isinstance(s, ProcDecl):
        out.append(_mk(here, "proc-decl", s, s.name))
    elif isinstance(s, VarRemove):
        out.append(_mk(here, "var-remove", s, s.name))
    elif isinstance(s, ArrRemove):
        out.append(_mk(here, "arr-remove", s, s.name))
    elif isinstance(s, ProcRemove):
        out.append(_mk(here, "proc-remove", s, s.name))
    elif isinstance(s, Call):
        out.append(_mk(here, "call-open", s, s.name))
    else:
        raise TypeError(f"no backward step for {type(s).__name__}")
