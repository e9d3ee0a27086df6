"""Seeded random program generator for property testing.

Produces source text that always parses, passes the static checks and
terminates: every loop counts a dedicated counter variable down to zero,
procedure bodies only call procedures declared strictly before them, and
array indexes stay in range by construction. Shared globals may race
between parallel arms on purpose; any interleaving remains reversible.

Each generator method returns one statement as a single string (possibly
multi-line); sequences join statements with ``;`` on the closing line.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple


def _indent(text: str, pad: str = "  ") -> str:
    return "\n".join(pad + line for line in text.split("\n"))


def _seq(units: List[str]) -> str:
    """Join rendered statements into a sequence with ``;`` separators."""
    parts = []
    for i, unit in enumerate(units):
        parts.append(unit + ";" if i < len(units) - 1 else unit)
    return "\n".join(parts)


class _Scope:
    def __init__(self, parent: Optional["_Scope"] = None):
        self.parent = parent
        self.vars: List[str] = []
        self.consts: List[str] = []  # readable but never assigned (loop counters)
        self.arrs: List[Tuple[str, int]] = []
        self.procs: List[str] = []

    def all_vars(self) -> List[str]:
        out = list(self.vars)
        if self.parent:
            out.extend(self.parent.all_vars())
        return out

    def all_reads(self) -> List[str]:
        out = list(self.vars) + list(self.consts)
        if self.parent:
            out.extend(self.parent.all_reads())
        return out

    def all_arrs(self) -> List[Tuple[str, int]]:
        out = list(self.arrs)
        if self.parent:
            out.extend(self.parent.all_arrs())
        return out

    def all_procs(self) -> List[str]:
        out = list(self.procs)
        if self.parent:
            out.extend(self.parent.all_procs())
        return out


class _Gen:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.counter = 0
        self.globals = [f"g{i}" for i in range(self.rng.randint(1, 3))]

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    # -- expressions

    def aexpr(self, scope: _Scope, depth: int = 0, avoid: Optional[str] = None) -> str:
        rng = self.rng
        choices = ["num", "var"]
        arrs = [a for a in scope.all_arrs() if a[0] != avoid]
        if arrs:
            choices.append("arr")
        if depth < 2:
            choices.extend(["add", "sub"])
        kind = rng.choice(choices)
        if kind == "num":
            return str(rng.randint(-5, 9))
        if kind == "var":
            names = [v for v in scope.all_reads() + self.globals if v != avoid]
            if not names:
                return str(rng.randint(0, 9))
            return rng.choice(names)
        if kind == "arr":
            name, size = rng.choice(arrs)
            return f"{name}[{rng.randrange(size)}]"
        op = "+" if kind == "add" else "-"
        left = self.aexpr(scope, depth + 1, avoid)
        right = self.aexpr(scope, depth + 1, avoid)
        if " " in right:
            right = f"({right})"
        return f"{left} {op} {right}"

    def bexpr(self, scope: _Scope, depth: int = 0) -> str:
        rng = self.rng
        kinds = ["cmp", "cmp", "cmp", "lit"]
        if depth < 2:
            kinds.extend(["and", "not"])
        kind = rng.choice(kinds)
        if kind == "lit":
            return rng.choice(["T", "F"])
        if kind == "not":
            return f"!({self.bexpr(scope, depth + 1)})"
        if kind == "and":
            return f"{self.bexpr(scope, depth + 1)} && {self.bexpr(scope, depth + 1)}"
        op = rng.choice(["==", ">", "<"])
        return f"{self.aexpr(scope)} {op} {self.aexpr(scope)}"

    # -- statements (each returns one rendered statement)

    def assign(self, scope: _Scope) -> str:
        rng = self.rng
        arrs = scope.all_arrs()
        op = rng.choice(["=", "+=", "-="])
        if arrs and rng.random() < 0.4:
            name, size = rng.choice(arrs)
            avoid = name if op != "=" else None
            return f"{name}[{rng.randrange(size)}] {op} {self.aexpr(scope, avoid=avoid)}"
        names = scope.all_vars() + self.globals
        name = rng.choice(names)
        avoid = name if op != "=" else None
        return f"{name} {op} {self.aexpr(scope, avoid=avoid)}"

    def stmts(self, scope: _Scope, depth: int, budget: int) -> List[str]:
        rng = self.rng
        out: List[str] = []
        n = rng.randint(1, max(1, budget))
        for _ in range(n):
            roll = rng.random()
            if depth >= 3 or roll < 0.5:
                out.append(self.assign(scope))
            elif roll < 0.62:
                out.append(self.if_stmt(scope, depth))
            elif roll < 0.72:
                out.append(self.while_stmt(scope, depth))
            elif roll < 0.84:
                out.append(self.block(scope, depth))
            elif roll < 0.94 and depth < 2:
                out.append(self.par(scope, depth))
            else:
                procs = scope.all_procs()
                if procs:
                    out.append(f"call {rng.choice(procs)}")
                else:
                    out.append(self.assign(scope))
        return out

    def if_stmt(self, scope: _Scope, depth: int) -> str:
        lines = [f"if {self.bexpr(scope)} then"]
        lines.append(_indent(_seq(self.stmts(scope, depth + 1, 2))))
        if self.rng.random() < 0.5:
            lines.append("else")
            lines.append(_indent(_seq(self.stmts(scope, depth + 1, 2))))
        lines.append("end")
        return "\n".join(lines)

    def while_stmt(self, scope: _Scope, depth: int) -> str:
        """A block declaring a countdown counter driving a bounded loop."""
        counter = self.fresh("k")
        rounds = self.rng.randint(1, 3)
        inner = _Scope(scope)
        inner.consts.append(counter)
        body = self.stmts(inner, depth + 1, 2)
        body.append(f"{counter} -= 1")
        loop = "\n".join(
            [f"while {counter} > 0 do", _indent(_seq(body)), "end"]
        )
        return "\n".join(
            ["begin", f"  var {counter} = {rounds};", _indent(loop), "end"]
        )

    def block(self, scope: _Scope, depth: int) -> str:
        rng = self.rng
        inner = _Scope(scope)
        decls: List[str] = []
        for _ in range(rng.randint(1, 2)):
            name = self.fresh("v")
            decls.append(f"var {name} = {self.aexpr(scope)}")
            inner.vars.append(name)
        if rng.random() < 0.4:
            name = self.fresh("a")
            size = rng.randint(2, 4)
            decls.append(f"arr[{size}] {name}")
            inner.arrs.append((name, size))
        if rng.random() < 0.3 and depth < 2:
            name = self.fresh("p")
            proc_body = _seq(self.stmts(inner, depth + 1, 2))
            decls.append("\n".join([f"proc {name} is", _indent(proc_body), "end"]))
            inner.procs.append(name)
        body = self.stmts(inner, depth + 1, 3)
        return "\n".join(["begin", _indent(_seq(decls + body)), "end"])

    def par(self, scope: _Scope, depth: int) -> str:
        left = _seq(self.stmts(scope, depth + 1, 2))
        right = _seq(self.stmts(scope, depth + 1, 2))
        return "\n".join(
            ["par {", _indent(left), "} {", _indent(right), "}"]
        )

    def program(self, budget: Optional[int] = None) -> str:
        scope = _Scope()
        units: List[str] = []
        count = self.rng.randint(2, 4)
        if budget is not None:
            count = min(count, budget)
        for _ in range(count):
            roll = self.rng.random()
            if roll < 0.45:
                units.append(self.block(scope, 0))
            elif roll < 0.6:
                units.append(self.par(scope, 0))
            elif roll < 0.75:
                units.append(self.while_stmt(scope, 0))
            else:
                units.append(self.assign(scope))
        return _seq(units)


def generate_source(seed: int, budget: Optional[int] = None) -> str:
    """Deterministic random program text for a seed.

    ``budget`` caps the number of top-level units; 0 gives the empty
    program. The default (no cap) picks 2-4 units.
    """
    return _Gen(seed).program(budget)
