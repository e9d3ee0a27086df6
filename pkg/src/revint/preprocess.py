"""Static preparation of parsed programs for execution.

Responsibilities:

* number every construct per kind (blocks b1, b2, ...; conditionals i1, ...;
  loops w1, ...; procedure declarations p1, ...; calls c1, ...) in
  depth-first source order, version 0;
* record each statement's enclosing-block chain (innermost first) so
  declarations can be resolved after bodies are copied and renamed;
* enforce block shape: variable declarations, then array declarations, then
  procedure declarations, then the body, then removals mirroring the
  declarations in exactly inverted order -- missing removals are appended,
  present ones are checked against the declarations they undo;
* reject duplicate declarations in one block, assignments through a name
  bound to the wrong kind, calls to unknown procedures, indexed access to
  undeclared names, and constructive assignments whose target name appears
  in their own right-hand side or index;
* assign a stable uid to every statement in depth-first order and collect
  the free scalar names that the runtime must bind as globals.

Preprocessing is idempotent: feeding its output back in reproduces it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from .lang import (
    AExpr,
    ArrDecl,
    ArrRead,
    ArrRemove,
    Assign,
    BExpr,
    And,
    BinOp,
    Block,
    BoolLit,
    Call,
    Cmp,
    ConstructId,
    If,
    Not,
    Num,
    Par,
    ProcDecl,
    ProcRemove,
    Program,
    Empty,
    Seq,
    Single,
    Skip,
    Stmt,
    StmtPath,
    Var,
    VarDecl,
    VarRemove,
    While,
    Runc,
    expr_names,
    seq_from_list,
    seq_to_list,
    structural_eq_stmt,
)

KIND_LETTER = {If: "i", While: "w", Block: "b", ProcDecl: "p", Call: "c"}


class StaticError(ValueError):
    """A program rejected before execution."""

    def __init__(self, message: str, stmt: Optional[Stmt] = None):
        if stmt is not None and stmt.span is not None:
            message = f"{stmt.span.line}:{stmt.span.col}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Prepared:
    """A program ready to run, plus what the runtime needs to set it up."""

    program: Program
    globals: Tuple[str, ...]  # free scalar names, sorted
    next_uid: int


# --------------------------------------------------------------------------
# numbering, paths and uids


class _Numberer:
    def __init__(self) -> None:
        self.counts: Dict[str, int] = {}
        self.next_uid = 0

    def fresh(self, letter: str) -> ConstructId:
        self.counts[letter] = self.counts.get(letter, 0) + 1
        return ConstructId(f"{letter}{self.counts[letter]}", 0)

    def uid(self) -> int:
        u = self.next_uid
        self.next_uid += 1
        return u

    def program(self, p: Program, path: StmtPath) -> Program:
        if isinstance(p, Empty):
            return p
        if isinstance(p, Single):
            return Single(self.stmt(p.stmt, path))
        if isinstance(p, Seq):
            head = self.program(p.head, path)
            tail = self.program(p.tail, path)
            return Seq(head, tail)
        if isinstance(p, Par):
            return Par(self.program(p.left, path), self.program(p.right, path))
        raise TypeError(f"unknown program node {p!r}")

    def stmt(self, s: Stmt, path: StmtPath) -> Stmt:
        u = self.uid()
        base = replace(s, uid=u, origin=u, path=path)
        if isinstance(s, Block):
            cid = self.fresh("b")
            inner = (cid,) + path
            return replace(base, cid=cid, body=self.program(s.body, inner))
        if isinstance(s, If):
            return replace(
                base,
                cid=self.fresh("i"),
                then=self.program(s.then, path),
                els=self.program(s.els, path),
            )
        if isinstance(s, While):
            return replace(base, cid=self.fresh("w"), body=self.program(s.body, path))
        if isinstance(s, ProcDecl):
            return replace(base, cid=self.fresh("p"), body=self.program(s.body, path))
        if isinstance(s, ProcRemove):
            # The body mirrors the declaration's and is installed afterwards;
            # number it only so every node has a uid.
            return replace(base, body=self.program(s.body, path))
        if isinstance(s, Call):
            return replace(base, cid=self.fresh("c"))
        if isinstance(s, Runc):
            raise StaticError("procedure-in-flight nodes cannot appear in source", s)
        return base


def _renumber_uids(p: Program, numberer: _Numberer) -> Program:
    """Give fresh uids to a subtree (used for synthesized removal bodies)."""
    if isinstance(p, Empty):
        return p
    if isinstance(p, Single):
        s = p.stmt
        s2 = replace(s, uid=numberer.uid())
        s2 = replace(s2, origin=s2.uid)
        if isinstance(s, Block):
            s2 = replace(s2, body=_renumber_uids(s.body, numberer))
        elif isinstance(s, If):
            s2 = replace(
                s2,
                then=_renumber_uids(s.then, numberer),
                els=_renumber_uids(s.els, numberer),
            )
        elif isinstance(s, (While, ProcDecl, ProcRemove, Runc)):
            s2 = replace(s2, body=_renumber_uids(s.body, numberer))
        return Single(s2)
    if isinstance(p, Seq):
        head = _renumber_uids(p.head, numberer)
        return Seq(head, _renumber_uids(p.tail, numberer))
    if isinstance(p, Par):
        return Par(_renumber_uids(p.left, numberer), _renumber_uids(p.right, numberer))
    raise TypeError(f"unknown program node {p!r}")


# --------------------------------------------------------------------------
# block discipline

_DECL_KINDS = (VarDecl, ArrDecl, ProcDecl)
_REMOVE_KINDS = (VarRemove, ArrRemove, ProcRemove)


def _expected_removals(decls: List[Stmt]) -> List[Stmt]:
    out: List[Stmt] = []
    for d in reversed([d for d in decls if isinstance(d, ProcDecl)]):
        out.append(ProcRemove(span=d.span, cid=d.cid, name=d.name, body=d.body))
    for d in reversed([d for d in decls if isinstance(d, ArrDecl)]):
        out.append(ArrRemove(span=d.span, name=d.name, size=d.size))
    for d in reversed([d for d in decls if isinstance(d, VarDecl)]):
        out.append(VarRemove(span=d.span, name=d.name, expr=d.expr))
    return out


def _removal_matches(got: Stmt, want: Stmt) -> bool:
    if type(got) is not type(want):
        return False
    if got.name != want.name:  # type: ignore[attr-defined]
        return False
    if isinstance(got, VarRemove):
        return got.expr == want.expr  # type: ignore[union-attr]
    if isinstance(got, ArrRemove):
        return got.size == want.size  # type: ignore[union-attr]
    if isinstance(got, ProcRemove):
        return structural_eq_stmt(got, want)
    return False


def _check_block_shape(block: Block) -> Block:
    """Validate decl/body/removal layout and complete missing removals."""
    items = seq_to_list(block.body)
    i = 0
    seen: Dict[str, str] = {}
    order = {"var": 0, "arr": 1, "proc": 2}
    last = -1
    decls: List[Stmt] = []
    while i < len(items):
        node = items[i]
        if not (isinstance(node, Single) and isinstance(node.stmt, _DECL_KINDS)):
            break
        s = node.stmt
        kind = {"VarDecl": "var", "ArrDecl": "arr", "ProcDecl": "proc"}[type(s).__name__]
        if order[kind] < last:
            raise StaticError(
                "declarations must be ordered: variables, then arrays, then procedures",
                s,
            )
        last = order[kind]
        if s.name in seen:  # type: ignore[attr-defined]
            raise StaticError(f"{s.name!r} declared twice in the same block", s)  # type: ignore[attr-defined]
        seen[s.name] = kind  # type: ignore[attr-defined]
        decls.append(s)
        i += 1

    # trailing removals
    j = len(items)
    while j > i and isinstance(items[j - 1], Single) and isinstance(items[j - 1].stmt, _REMOVE_KINDS):  # type: ignore[union-attr]
        j -= 1
    middle = items[i:j]
    removals = [n.stmt for n in items[j:]]  # type: ignore[union-attr]

    for node in middle:
        for sub in _toplevel_stmts(node):
            if isinstance(sub, _DECL_KINDS):
                raise StaticError("declarations are only allowed at the start of a block", sub)
            if isinstance(sub, _REMOVE_KINDS):
                raise StaticError("removals are only allowed at the end of a block", sub)

    expected = _expected_removals(decls)
    if len(removals) > len(expected):
        raise StaticError("more removals than declarations in block", removals[len(expected)])
    for got, want in zip(removals, expected):
        if not _removal_matches(got, want):
            raise StaticError(
                f"removal of {getattr(got, 'name', '?')!r} does not mirror its declaration"
                " (removals must undo declarations in exactly inverted order)",
                got,
            )
    completed = removals + expected[len(removals) :]
    # Use the declaration's own payload for every removal so the pair stays
    # textually inverse even when the source spelled the removal by hand.
    body = seq_from_list(
        [Single(d) for d in decls]
        + list(middle)
        + [Single(r) for r in completed]
    )
    return replace(block, body=body)


def _toplevel_stmts(p: Program):
    """Statements of a program fragment, not descending into nested blocks."""
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Empty):
            continue
        if isinstance(node, Seq):
            stack.append(node.tail)
            stack.append(node.head)
            continue
        if isinstance(node, Par):
            stack.append(node.right)
            stack.append(node.left)
            continue
        if isinstance(node, Single):
            s = node.stmt
            yield s
            if isinstance(s, If):
                stack.append(s.els)
                stack.append(s.then)
            elif isinstance(s, (While, ProcDecl)):
                stack.append(s.body)
            # Block: do not descend; it has its own discipline.


def _apply_block_discipline(p: Program) -> Program:
    if isinstance(p, Empty):
        return p
    if isinstance(p, Single):
        s = p.stmt
        if isinstance(s, Block):
            s = _check_block_shape(s)
            return Single(replace(s, body=_apply_block_discipline(s.body)))
        if isinstance(s, If):
            return Single(
                replace(
                    s,
                    then=_apply_block_discipline(s.then),
                    els=_apply_block_discipline(s.els),
                )
            )
        if isinstance(s, (While, ProcDecl, ProcRemove)):
            return Single(replace(s, body=_apply_block_discipline(s.body)))
        return p
    if isinstance(p, Seq):
        return Seq(_apply_block_discipline(p.head), _apply_block_discipline(p.tail))
    if isinstance(p, Par):
        return Par(_apply_block_discipline(p.left), _apply_block_discipline(p.right))
    raise TypeError(f"unknown program node {p!r}")


def _install_removal_bodies(p: Program, numberer: _Numberer) -> Program:
    """Replace each procedure removal body with its declaration's numbered body."""
    def walk(prog: Program, procs: Dict[str, ProcDecl]) -> Program:
        if isinstance(prog, Empty):
            return prog
        if isinstance(prog, Single):
            s = prog.stmt
            if isinstance(s, Block):
                scope = dict(procs)
                items = seq_to_list(s.body)
                out: List[Program] = []
                for node in items:
                    st = node.stmt if isinstance(node, Single) else None
                    if isinstance(st, ProcDecl):
                        scope[st.name] = st
                        out.append(Single(replace(st, body=walk(st.body, scope))))
                        scope[st.name] = out[-1].stmt  # type: ignore[union-attr]
                    elif isinstance(st, ProcRemove):
                        decl = scope.get(st.name)
                        if decl is None:
                            raise StaticError(f"removal of undeclared procedure {st.name!r}", st)
                        body = _renumber_uids(decl.body, numberer)
                        out.append(Single(replace(st, cid=decl.cid, body=body)))
                    else:
                        out.append(walk(node, scope))
                return Single(replace(s, body=seq_from_list(out)))
            if isinstance(s, If):
                return Single(
                    replace(s, then=walk(s.then, procs), els=walk(s.els, procs))
                )
            if isinstance(s, (While, ProcDecl)):
                return Single(replace(s, body=walk(s.body, procs)))
            return prog
        if isinstance(prog, Seq):
            return Seq(walk(prog.head, procs), walk(prog.tail, procs))
        if isinstance(prog, Par):
            return Par(walk(prog.left, procs), walk(prog.right, procs))
        raise TypeError(f"unknown program node {prog!r}")

    return walk(p, {})


# --------------------------------------------------------------------------
# name resolution and static checks


class _Scope:
    def __init__(self) -> None:
        self.frames: List[Dict[str, str]] = []  # name -> "var" | "arr" | "proc"
        self.globals: Dict[str, bool] = {}

    def push(self, names: Dict[str, str]) -> None:
        self.frames.append(names)

    def pop(self) -> None:
        self.frames.pop()

    def kind_of(self, name: str) -> Optional[str]:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None

    def use(self, name: str, as_kind: str, stmt: Stmt) -> None:
        kind = self.kind_of(name)
        if kind is None:
            if as_kind == "arr":
                raise StaticError(f"indexed access to undeclared name {name!r}", stmt)
            if as_kind == "proc":
                raise StaticError(f"call to undeclared procedure {name!r}", stmt)
            self.globals[name] = True
            return
        if kind != as_kind:
            raise StaticError(
                f"{name!r} is declared as {kind} but used as {as_kind}", stmt
            )


def _check_aexpr(e: AExpr, scope: _Scope, stmt: Stmt) -> None:
    if isinstance(e, Num):
        return
    if isinstance(e, Var):
        scope.use(e.name, "var", stmt)
        return
    if isinstance(e, ArrRead):
        scope.use(e.name, "arr", stmt)
        _check_aexpr(e.index, scope, stmt)
        return
    if isinstance(e, BinOp):
        _check_aexpr(e.left, scope, stmt)
        _check_aexpr(e.right, scope, stmt)
        return
    raise TypeError(f"unknown expression {e!r}")


def _check_bexpr(b: BExpr, scope: _Scope, stmt: Stmt) -> None:
    if isinstance(b, BoolLit):
        return
    if isinstance(b, Not):
        _check_bexpr(b.inner, scope, stmt)
        return
    if isinstance(b, And):
        _check_bexpr(b.left, scope, stmt)
        _check_bexpr(b.right, scope, stmt)
        return
    if isinstance(b, Cmp):
        _check_aexpr(b.left, scope, stmt)
        _check_aexpr(b.right, scope, stmt)
        return
    raise TypeError(f"unknown boolean expression {b!r}")


def _block_frame(block: Block) -> Dict[str, str]:
    frame: Dict[str, str] = {}
    for node in seq_to_list(block.body):
        if not isinstance(node, Single):
            break
        s = node.stmt
        if isinstance(s, VarDecl):
            frame[s.name] = "var"
        elif isinstance(s, ArrDecl):
            frame[s.name] = "arr"
        elif isinstance(s, ProcDecl):
            frame[s.name] = "proc"
        else:
            break
    return frame


def _check_names(p: Program, scope: _Scope) -> None:
    if isinstance(p, Empty):
        return
    if isinstance(p, Seq):
        _check_names(p.head, scope)
        _check_names(p.tail, scope)
        return
    if isinstance(p, Par):
        _check_names(p.left, scope)
        _check_names(p.right, scope)
        return
    if not isinstance(p, Single):
        raise TypeError(f"unknown program node {p!r}")
    s = p.stmt
    if isinstance(s, Skip):
        return
    if isinstance(s, Assign):
        if s.index is not None:
            scope.use(s.name, "arr", s)
            _check_aexpr(s.index, scope, s)
        else:
            scope.use(s.name, "var", s)
        _check_aexpr(s.expr, scope, s)
        if s.op in ("+=", "-="):
            used = expr_names(s.expr)
            if s.index is not None:
                used |= expr_names(s.index)
            if s.name in used:
                raise StaticError(
                    f"cumulative assignment to {s.name!r} reads {s.name!r}; "
                    "such updates cannot be undone by applying the opposite"
                    " operation, so they are rejected",
                    s,
                )
        return
    if isinstance(s, If):
        _check_bexpr(s.cond, scope, s)
        _check_names(s.then, scope)
        _check_names(s.els, scope)
        return
    if isinstance(s, While):
        _check_bexpr(s.cond, scope, s)
        _check_names(s.body, scope)
        return
    if isinstance(s, Block):
        scope.push(_block_frame(s))
        _check_names(s.body, scope)
        scope.pop()
        return
    if isinstance(s, (VarDecl, VarRemove)):
        _check_aexpr(s.expr, scope, s)
        return
    if isinstance(s, (ArrDecl, ArrRemove)):
        return
    if isinstance(s, ProcDecl):
        _check_names(s.body, scope)
        return
    if isinstance(s, ProcRemove):
        return  # mirrors a declaration already checked
    if isinstance(s, Call):
        scope.use(s.name, "proc", s)
        return
    raise StaticError(f"statement not allowed in source: {type(s).__name__}", s)


# --------------------------------------------------------------------------
# entry point


def prepare(parsed: Program) -> Prepared:
    """Number, validate and uid-stamp a parsed program."""
    disciplined = _apply_block_discipline(parsed)
    numberer = _Numberer()
    numbered = numberer.program(disciplined, ())
    numbered = _install_removal_bodies(numbered, numberer)
    scope = _Scope()
    _check_names(numbered, scope)
    return Prepared(
        program=numbered,
        globals=tuple(sorted(scope.globals)),
        next_uid=numberer.next_uid,
    )
