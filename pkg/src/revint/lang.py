"""Core syntax: expressions, statements, programs, and their annotations.

Programs are immutable trees. Every statement carries:

- ``uid``: a tree-unique node number. Runtime copies of loop bodies and
  procedure bodies get fresh uids; rewrites of a statement in place (marker
  set, stack push, replacement by ``skip``) keep the uid.
- ``origin``: the uid of the source statement this node descends from
  (uid == origin for nodes created by the preprocessor).
- ``path``: the chain of enclosing block ids, innermost first.
- ``stack``: the interleaving-identifier stack, or None before annotation.
  ``skip`` keeps None when produced by a step that records no identifier.

Structural equality and annotation erasure deliberately ignore uids; they are
bookkeeping, not syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Tuple, Union


# --------------------------------------------------------------------------
# identifiers and stacks


@dataclass(frozen=True)
class ConstructId:
    """Identity of a block/if/while/proc/call construct, e.g. b2.0."""

    base: str  # kind letter + number, e.g. "b2", "i1", "w1", "p1", "c1"
    version: int = 0  # 0 for originals; runtime copies bump the version

    def text(self) -> str:
        return f"{self.base}.{self.version}"

    @property
    def kind(self) -> str:
        return self.base[0]


StmtPath = Tuple[ConstructId, ...]  # innermost block first


@dataclass(frozen=True)
class IdStack:
    """Stack of interleaving identifiers, head first, descending."""

    ids: Tuple[int, ...] = ()

    def push(self, m: int) -> "IdStack":
        return IdStack((m,) + self.ids)

    def pop(self) -> Tuple[int, "IdStack"]:
        if not self.ids:
            raise ValueError("pop from empty identifier stack")
        return self.ids[0], IdStack(self.ids[1:])

    @property
    def head(self) -> Optional[int]:
        return self.ids[0] if self.ids else None

    def __len__(self) -> int:
        return len(self.ids)

    def __bool__(self) -> bool:
        return bool(self.ids)


EMPTY_STACK = IdStack(())


# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class ArrRead:
    name: str
    index: "AExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+" or "-"
    left: "AExpr"
    right: "AExpr"


AExpr = Union[Num, Var, ArrRead, BinOp]


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Not:
    inner: "BExpr"


@dataclass(frozen=True)
class Cmp:
    op: str  # "==" or ">"
    left: AExpr
    right: AExpr


@dataclass(frozen=True)
class And:
    left: "BExpr"
    right: "BExpr"


BExpr = Union[BoolLit, Not, Cmp, And]


def expr_names(e: Union[AExpr, BExpr]) -> set:
    """All variable and array names read by an expression."""
    if isinstance(e, Num) or isinstance(e, BoolLit):
        return set()
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, ArrRead):
        return {e.name} | expr_names(e.index)
    if isinstance(e, BinOp) or isinstance(e, Cmp) or isinstance(e, And):
        return expr_names(e.left) | expr_names(e.right)
    if isinstance(e, Not):
        return expr_names(e.inner)
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# statements


@dataclass(frozen=True)
class Span:
    line: int
    col: int


@dataclass(frozen=True)
class Stmt:
    uid: int = field(default=-1, compare=False)
    origin: int = field(default=-1, compare=False)
    path: StmtPath = ()
    stack: Optional[IdStack] = None
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Skip(Stmt):
    pass


@dataclass(frozen=True)
class Assign(Stmt):
    """Assignment to a variable or array element.

    op "=" is destructive (old value saved on the name's stack in the
    reversal store); "+=" / "-=" are constructive (nothing saved).
    """

    name: str = ""
    index: Optional[AExpr] = None  # None for plain variables
    op: str = "="
    expr: AExpr = Num(0)


@dataclass(frozen=True)
class If(Stmt):
    cid: ConstructId = ConstructId("i0")
    cond: BExpr = BoolLit(True)
    marker: Optional[bool] = None  # condition value once evaluated
    then: "Program" = None  # type: ignore[assignment]
    els: "Program" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class While(Stmt):
    cid: ConstructId = ConstructId("w0")
    cond: BExpr = BoolLit(False)
    marker: Optional[bool] = None
    body: "Program" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Block(Stmt):
    cid: ConstructId = ConstructId("b0")
    body: "Program" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class VarDecl(Stmt):
    name: str = ""
    expr: AExpr = Num(0)


@dataclass(frozen=True)
class ArrDecl(Stmt):
    name: str = ""
    size: int = 0


@dataclass(frozen=True)
class ProcDecl(Stmt):
    cid: ConstructId = ConstructId("p0")
    name: str = ""
    body: "Program" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class VarRemove(Stmt):
    name: str = ""
    expr: AExpr = Num(0)


@dataclass(frozen=True)
class ArrRemove(Stmt):
    name: str = ""
    size: int = 0


@dataclass(frozen=True)
class ProcRemove(Stmt):
    cid: ConstructId = ConstructId("p0")
    name: str = ""
    body: "Program" = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Call(Stmt):
    cid: ConstructId = ConstructId("c0")
    name: str = ""


@dataclass(frozen=True)
class Runc(Stmt):
    """A procedure body in flight; exists only at runtime."""

    cid: ConstructId = ConstructId("c0")
    name: str = ""
    body: "Program" = None  # type: ignore[assignment]


# --------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Single:
    stmt: Stmt


@dataclass(frozen=True)
class Seq:
    """head ; tail — head is Single or Par, never Seq/Empty."""

    head: "Program"
    tail: "Program"


@dataclass(frozen=True)
class Par:
    left: "Program"
    right: "Program"


Program = Union[Empty, Single, Seq, Par]

EMPTY = Empty()


def seq_from_list(items: list) -> Program:
    """Right-nested sequence from a list of Single/Par nodes."""
    if not items:
        return EMPTY
    out: Program = items[-1]
    for item in reversed(items[:-1]):
        out = Seq(item, out)
    return out


def seq_to_list(p: Program) -> list:
    """Flatten a program into its top-level Single/Par elements."""
    out = []
    while isinstance(p, Seq):
        out.append(p.head)
        p = p.tail
    if not isinstance(p, Empty):
        out.append(p)
    return out


def is_skip(p: Program) -> bool:
    """True when the program is a lone skip statement."""
    return isinstance(p, Single) and isinstance(p.stmt, Skip)


SKIP_BARE = Single(Skip())


# --------------------------------------------------------------------------
# traversal


def stmt_children(s: Stmt) -> list:
    """Interior programs of a statement, canonical (left-first) order."""
    if isinstance(s, If):
        return [s.then, s.els]
    if isinstance(s, (While, Block, ProcDecl, ProcRemove, Runc)):
        return [s.body]
    return []


def iter_statements(p: Program) -> Iterator[Stmt]:
    """All statements, canonical depth-first order, parents first."""
    if isinstance(p, Empty):
        return
    if isinstance(p, Single):
        yield p.stmt
        for child in stmt_children(p.stmt):
            yield from iter_statements(child)
    elif isinstance(p, Seq):
        yield from iter_statements(p.head)
        yield from iter_statements(p.tail)
    elif isinstance(p, Par):
        yield from iter_statements(p.left)
        yield from iter_statements(p.right)


def rebuild_stmt_children(s: Stmt, children: list) -> Stmt:
    """Statement with interior programs replaced, same order as stmt_children."""
    if isinstance(s, If):
        return replace(s, then=children[0], els=children[1])
    if isinstance(s, (While, Block, ProcDecl, ProcRemove, Runc)):
        return replace(s, body=children[0])
    return s


def map_statements(p: Program, fn) -> Program:
    """Rebuild a program applying fn to every statement, children first."""
    if isinstance(p, Empty):
        return p
    if isinstance(p, Single):
        s = p.stmt
        kids = [map_statements(c, fn) for c in stmt_children(s)]
        return Single(fn(rebuild_stmt_children(s, kids)))
    if isinstance(p, Seq):
        return Seq(map_statements(p.head, fn), map_statements(p.tail, fn))
    if isinstance(p, Par):
        return Par(map_statements(p.left, fn), map_statements(p.right, fn))
    raise TypeError(f"not a program: {p!r}")


# --------------------------------------------------------------------------
# structural operations


def erase_annotations(p: Program) -> Program:
    """Strip identifier stacks and evaluated-condition markers."""

    def strip(s: Stmt) -> Stmt:
        s = replace(s, stack=None)
        if isinstance(s, (If, While)) and s.marker is not None:
            s = replace(s, marker=None)
        return s

    return map_statements(p, strip)


def annotate(p: Program) -> Program:
    """Give every statement a fresh empty identifier stack.

    skip statements keep stack=None unless one is already present: some skip
    forms never record an identifier.
    """

    def dress(s: Stmt) -> Stmt:
        if isinstance(s, Skip):
            return s
        if s.stack is None:
            return replace(s, stack=EMPTY_STACK)
        return s

    return map_statements(p, dress)


def invert(p: Program) -> Program:
    """Mechanical inversion: reverse composition order, swap constructive
    operators, swap declarations with removals. Stacks, paths, construct ids
    and uids are preserved; applying it twice is the identity."""
    if isinstance(p, Empty):
        return p
    if isinstance(p, Seq):
        items = seq_to_list(p)
        return seq_from_list([invert_unit(u) for u in reversed(items)])
    return invert_unit(p)


def invert_unit(p: Program) -> Program:
    if isinstance(p, Par):
        return Par(invert(p.left), invert(p.right))
    if isinstance(p, Single):
        return Single(invert_stmt(p.stmt))
    if isinstance(p, Seq):
        return invert(p)
    return p


def invert_stmt(s: Stmt) -> Stmt:
    if isinstance(s, Skip):
        return s
    if isinstance(s, Assign):
        if s.op == "+=":
            return replace(s, op="-=")
        if s.op == "-=":
            return replace(s, op="+=")
        return s
    if isinstance(s, If):
        return replace(s, then=invert(s.then), els=invert(s.els))
    if isinstance(s, While):
        return replace(s, body=invert(s.body))
    if isinstance(s, Block):
        return replace(s, body=invert(s.body))
    if isinstance(s, VarDecl):
        return VarRemove(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                         span=s.span, name=s.name, expr=s.expr)
    if isinstance(s, VarRemove):
        return VarDecl(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                       span=s.span, name=s.name, expr=s.expr)
    if isinstance(s, ArrDecl):
        return ArrRemove(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                         span=s.span, name=s.name, size=s.size)
    if isinstance(s, ArrRemove):
        return ArrDecl(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                       span=s.span, name=s.name, size=s.size)
    if isinstance(s, ProcDecl):
        return ProcRemove(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                          span=s.span, cid=s.cid, name=s.name, body=invert(s.body))
    if isinstance(s, ProcRemove):
        return ProcDecl(uid=s.uid, origin=s.origin, path=s.path, stack=s.stack,
                        span=s.span, cid=s.cid, name=s.name, body=invert(s.body))
    if isinstance(s, Call):
        return s
    if isinstance(s, Runc):
        return replace(s, body=invert(s.body))
    raise TypeError(f"not a statement: {s!r}")


def structural_eq(a: Program, b: Program) -> bool:
    """Tree equality including stacks, paths and construct ids; uids ignored."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Empty):
        return True
    if isinstance(a, Single):
        return _stmt_eq(a.stmt, b.stmt)
    if isinstance(a, Seq):
        return structural_eq(a.head, b.head) and structural_eq(a.tail, b.tail)
    if isinstance(a, Par):
        return structural_eq(a.left, b.left) and structural_eq(a.right, b.right)
    return False


def _stmt_eq(a: Stmt, b: Stmt) -> bool:
    if type(a) is not type(b):
        return False
    ka = stmt_children(a)
    kb = stmt_children(b)
    if len(ka) != len(kb) or any(not structural_eq(x, y) for x, y in zip(ka, kb)):
        return False
    # dataclass equality already skips uid/origin/span (compare=False) but
    # includes interior programs; compare shallow copies with interiors zeroed
    return rebuild_stmt_children(a, [EMPTY] * len(ka)) == rebuild_stmt_children(b, [EMPTY] * len(kb))


def structural_eq_stmt(a: Stmt, b: Stmt) -> bool:
    """Statement equality on the same terms as structural_eq."""
    return _stmt_eq(a, b)


def max_uid(p: Program) -> int:
    return max((s.uid for s in iter_statements(p)), default=-1)


# --------------------------------------------------------------------------
# copy records


@dataclass(frozen=True)
class CopyEntry:
    """Construct id (if any) and stack (if any) of one statement in a copy."""

    cid: Optional[ConstructId]
    stack: Optional[IdStack]


@dataclass(frozen=True)
class CopyRecord:
    """Canonical depth-first harvest of a loop/procedure copy's annotations."""

    entries: Tuple[CopyEntry, ...]
