"""Turning trees back into source text.

``render_program`` emits parseable source for any tree without in-flight
procedure bodies; parsing it back and preparing it reproduces the tree
(modulo uids and spans). ``stmt_text`` gives a one-line header per
statement for traces, logs and the stepping UI.
"""

from __future__ import annotations

from typing import List

from .lang import (
    AExpr,
    And,
    ArrDecl,
    ArrRead,
    ArrRemove,
    Assign,
    BExpr,
    BinOp,
    Block,
    BoolLit,
    Call,
    Cmp,
    Empty,
    If,
    Not,
    Num,
    Par,
    ProcDecl,
    ProcRemove,
    Program,
    Runc,
    Single,
    Skip,
    Stmt,
    Var,
    VarDecl,
    VarRemove,
    While,
    is_skip,
    seq_to_list,
)

_INDENT = "  "


def render_aexpr(e: AExpr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, ArrRead):
        return f"{e.name}[{render_aexpr(e.index)}]"
    if isinstance(e, BinOp):
        left = render_aexpr(e.left)
        right = render_aexpr(e.right)
        if isinstance(e.right, BinOp):
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an arithmetic expression: {e!r}")


def render_bexpr(b: BExpr) -> str:
    if isinstance(b, BoolLit):
        return "T" if b.value else "F"
    if isinstance(b, Not):
        inner = render_bexpr(b.inner)
        if isinstance(b.inner, (And, Cmp)):
            return f"!({inner})"
        return f"!{inner}"
    if isinstance(b, And):
        left = render_bexpr(b.left)
        right = render_bexpr(b.right)
        if isinstance(b.right, And):
            right = f"({right})"
        return f"{left} && {right}"
    if isinstance(b, Cmp):
        return f"{render_aexpr(b.left)} {b.op} {render_aexpr(b.right)}"
    raise TypeError(f"not a boolean expression: {b!r}")


def stmt_text(s: Stmt) -> str:
    """One-line header for a statement (no bodies)."""
    if isinstance(s, Skip):
        return "skip"
    if isinstance(s, Assign):
        target = s.name if s.index is None else f"{s.name}[{render_aexpr(s.index)}]"
        return f"{target} {s.op} {render_aexpr(s.expr)}"
    if isinstance(s, If):
        return f"if {render_bexpr(s.cond)} then"
    if isinstance(s, While):
        return f"while {render_bexpr(s.cond)} do"
    if isinstance(s, Block):
        return "begin"
    if isinstance(s, VarDecl):
        return f"var {s.name} = {render_aexpr(s.expr)}"
    if isinstance(s, ArrDecl):
        return f"arr[{s.size}] {s.name}"
    if isinstance(s, ProcDecl):
        return f"proc {s.name} is"
    if isinstance(s, VarRemove):
        return f"remove {s.name} = {render_aexpr(s.expr)}"
    if isinstance(s, ArrRemove):
        return f"remove arr[{s.size}] {s.name}"
    if isinstance(s, ProcRemove):
        return f"remove proc {s.name} is"
    if isinstance(s, Call):
        return f"call {s.name}"
    if isinstance(s, Runc):
        return f"call {s.name} (running)"
    raise TypeError(f"not a statement: {s!r}")


def render_program(p: Program, indent: int = 0) -> str:
    """Parseable source text for a program tree."""
    return "\n".join(_program_lines(p, indent, False))


def render_config(p: Program, indent: int = 0) -> str:
    """Display text for a mid-run configuration.

    Unlike ``render_program`` this tolerates procedure bodies in flight,
    printing them as ``call name is ... end``; the result is for reading,
    not for parsing back.
    """
    return "\n".join(_program_lines(p, indent, True))


def _program_lines(p: Program, depth: int, tolerant: bool) -> List[str]:
    units = seq_to_list(p)
    out: List[str] = []
    for i, unit in enumerate(units):
        lines = _unit_lines(unit, depth, tolerant)
        if i < len(units) - 1:
            lines[-1] += ";"
        out.extend(lines)
    if not out:
        out.append(_INDENT * depth + "skip")
    return out


def _unit_lines(p: Program, depth: int, tolerant: bool) -> List[str]:
    pad = _INDENT * depth
    if isinstance(p, Par):
        out = [pad + "par {"]
        out.extend(_program_lines(p.left, depth + 1, tolerant))
        out.append(pad + "} {")
        out.extend(_program_lines(p.right, depth + 1, tolerant))
        out.append(pad + "}")
        return out
    if isinstance(p, Single):
        return _stmt_lines(p.stmt, depth, tolerant)
    if isinstance(p, Empty):
        return [pad + "skip"]
    raise TypeError(f"not a sequence unit: {p!r}")


def _stmt_lines(s: Stmt, depth: int, tolerant: bool) -> List[str]:
    pad = _INDENT * depth
    if isinstance(s, If):
        out = [pad + stmt_text(s)]
        out.extend(_program_lines(s.then, depth + 1, tolerant))
        if not is_skip(s.els):
            out.append(pad + "else")
            out.extend(_program_lines(s.els, depth + 1, tolerant))
        out.append(pad + "end")
        return out
    if isinstance(s, While):
        out = [pad + stmt_text(s)]
        out.extend(_program_lines(s.body, depth + 1, tolerant))
        out.append(pad + "end")
        return out
    if isinstance(s, Block):
        out = [pad + "begin"]
        out.extend(_program_lines(s.body, depth + 1, tolerant))
        out.append(pad + "end")
        return out
    if isinstance(s, (ProcDecl, ProcRemove)):
        out = [pad + stmt_text(s)]
        out.extend(_program_lines(s.body, depth + 1, tolerant))
        out.append(pad + "end")
        return out
    if isinstance(s, Runc):
        if not tolerant:
            raise ValueError("a procedure body in flight has no source form")
        out = [pad + f"call {s.name} is"]
        out.extend(_program_lines(s.body, depth + 1, tolerant))
        out.append(pad + "end")
        return out
    return [pad + stmt_text(s)]
