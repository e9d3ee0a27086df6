"""Runtime state: data store, name bindings, stored copies, reversal store.

The state has five parts:

* ``Store``       integer memory with a lowest-free-location allocator;
                  locations never written (or freed back to zero) read as 0;
* ``env``         bindings from (name, declaring block) to locations; the
                  pseudo-block "GLOBAL" holds free names bound at startup;
* ``loops``       working copies of loop bodies, keyed by the loop's
                  construct id (taken while a loop iterates);
* ``procs``       procedure bodies, keyed by declaration id, plus bodies in
                  flight keyed by the call's id;
* ``Aux``         the reversal store: one stack per bare data name holding
                  (identifier, overwritten value), plus control stacks "B"
                  (conditional outcomes), "W" (loop outcomes), "WI" (loop
                  copy annotations) and "Pr" (call annotations).

A single sequencer hands out interleaving identifiers; forward steps
consume ``next_id`` and reverse steps require a statement's newest
identifier to equal ``prev_id`` before they may fire.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .lang import (
    AExpr,
    And,
    ArrRead,
    BExpr,
    BinOp,
    BoolLit,
    Cmp,
    Not,
    Num,
    Program,
    StmtPath,
    Var,
)

GLOBAL_SCOPE = "GLOBAL"

AuxValue = object  # int | bool | CopyRecord depending on the stack


class ExecError(RuntimeError):
    """Raised when a program step cannot be performed sensibly."""


@dataclass(frozen=True)
class Binding:
    """Where a declared name lives: a scalar cell or an array handle cell."""

    kind: str  # "var" | "arr" | "proc"
    loc: int  # scalar cell, or the cell holding the array's base location
    size: int = 0  # number of elements, arrays only
    ref: str = ""  # procedures: construct id of the stored body


@dataclass(frozen=True)
class ProcEntry:
    """A procedure body at rest (declaration) or in flight (call copy)."""

    name: str
    body: Program


class Store:
    """Integer memory with lowest-free allocation and zero-on-free."""

    def __init__(self) -> None:
        self._values: Dict[int, int] = {}  # zeros are never stored
        self._allocated: set = set()

    # -- values

    def read(self, loc: int) -> int:
        return self._values.get(loc, 0)

    def write(self, loc: int, value: int) -> None:
        if value == 0:
            self._values.pop(loc, None)
        else:
            self._values[loc] = value

    def value_map(self) -> Dict[int, int]:
        return dict(self._values)

    # -- allocation

    def alloc(self) -> int:
        loc = 0
        while loc in self._allocated:
            loc += 1
        self._allocated.add(loc)
        return loc

    def alloc_block(self, n: int) -> int:
        base = 0
        while any(base + k in self._allocated for k in range(n)):
            base += 1
        for k in range(n):
            self._allocated.add(base + k)
        return base

    def free(self, loc: int) -> None:
        self._allocated.discard(loc)
        self._values.pop(loc, None)

    def allocated(self) -> set:
        return set(self._allocated)


class Aux:
    """The reversal store: named stacks of (identifier, payload).

    Payloads are integers on data stacks, booleans on "B" and "W", and
    copy annotations on "WI" and "Pr". Stacks are stored newest-last and
    vanish when empty, so an empty store compares equal to a fresh one.
    """

    DATA_CONTROL = ("B", "W", "WI", "Pr")

    def __init__(self) -> None:
        self._stacks: Dict[str, List[Tuple[int, AuxValue]]] = {}
        self.journal: List[Tuple[str, str, int, AuxValue]] = []

    def push(self, key: str, ident: int, payload: AuxValue) -> None:
        self._stacks.setdefault(key, []).append((ident, payload))
        self.journal.append(("push", key, ident, payload))

    def pop(self, key: str) -> Tuple[int, AuxValue]:
        stack = self._stacks.get(key)
        if not stack:
            raise ExecError(f"reversal stack {key!r} is empty")
        entry = stack.pop()
        if not stack:
            del self._stacks[key]
        self.journal.append(("pop", key, entry[0], entry[1]))
        return entry

    def drain_journal(self) -> List[Tuple[str, str, int, AuxValue]]:
        """Mutations since the last drain, oldest first."""
        out, self.journal = self.journal, []
        return out

    def head(self, key: str) -> Optional[Tuple[int, AuxValue]]:
        stack = self._stacks.get(key)
        return stack[-1] if stack else None

    def is_empty(self) -> bool:
        return not self._stacks

    def keys(self) -> List[str]:
        return sorted(self._stacks)

    def entries(self, key: str) -> List[Tuple[int, AuxValue]]:
        """Entries newest-first, the order stacks are written out."""
        return list(reversed(self._stacks.get(key, [])))

    def total_entries(self) -> int:
        return sum(len(s) for s in self._stacks.values())

    def snapshot(self) -> Dict[str, List[Tuple[int, AuxValue]]]:
        return {k: self.entries(k) for k in self.keys()}


class State:
    """Everything a running program reads and writes."""

    def __init__(self) -> None:
        self.store = Store()
        self.env: Dict[Tuple[str, str], Binding] = {}
        self.loops: Dict[str, Program] = {}
        self.procs: Dict[str, ProcEntry] = {}
        self.aux = Aux()
        self.seq = 0

    # -- sequencer

    def next_id(self) -> int:
        ident = self.seq
        self.seq += 1
        return ident

    def prev_id(self) -> int:
        return self.seq - 1

    def unstep_id(self, ident: int) -> None:
        if ident != self.seq - 1:
            raise ExecError(
                f"identifier {ident} is not the most recent ({self.seq - 1})"
            )
        self.seq -= 1

    # -- bindings

    def bind(self, name: str, scope: str, binding: Binding) -> None:
        key = (name, scope)
        if key in self.env:
            raise ExecError(f"{name!r} is already bound in {scope}")
        self.env[key] = binding

    def unbind(self, name: str, scope: str) -> Binding:
        try:
            return self.env.pop((name, scope))
        except KeyError:
            raise ExecError(f"{name!r} is not bound in {scope}") from None

    def resolve(self, name: str, path: StmtPath) -> Tuple[Binding, str]:
        """Innermost declaration of ``name`` visible from ``path``."""
        for cid in path:
            binding = self.env.get((name, cid.text()))
            if binding is not None:
                return binding, cid.text()
        binding = self.env.get((name, GLOBAL_SCOPE))
        if binding is not None:
            return binding, GLOBAL_SCOPE
        raise ExecError(f"{name!r} is not bound along {[c.text() for c in path]}")

    # -- data access through bindings

    def read_var(self, name: str, path: StmtPath) -> int:
        binding, _ = self.resolve(name, path)
        if binding.kind != "var":
            raise ExecError(f"{name!r} is an array, not a variable")
        return self.store.read(binding.loc)

    def write_var(self, name: str, path: StmtPath, value: int) -> None:
        binding, _ = self.resolve(name, path)
        if binding.kind != "var":
            raise ExecError(f"{name!r} is an array, not a variable")
        self.store.write(binding.loc, value)

    def element_loc(self, name: str, path: StmtPath, index: int) -> int:
        binding, _ = self.resolve(name, path)
        if binding.kind != "arr":
            raise ExecError(f"{name!r} is a variable, not an array")
        if not 0 <= index < binding.size:
            raise ExecError(
                f"index {index} outside {name!r} of {binding.size} elements"
            )
        return self.store.read(binding.loc) + index

    def read_elem(self, name: str, path: StmtPath, index: int) -> int:
        return self.store.read(self.element_loc(name, path, index))

    def write_elem(self, name: str, path: StmtPath, index: int, value: int) -> None:
        self.store.write(self.element_loc(name, path, index), value)

    # -- expression evaluation

    def eval_a(self, e: AExpr, path: StmtPath) -> int:
        if isinstance(e, Num):
            return e.value
        if isinstance(e, Var):
            return self.read_var(e.name, path)
        if isinstance(e, ArrRead):
            return self.read_elem(e.name, path, self.eval_a(e.index, path))
        if isinstance(e, BinOp):
            left = self.eval_a(e.left, path)
            right = self.eval_a(e.right, path)
            return left + right if e.op == "+" else left - right
        raise ExecError(f"cannot evaluate {e!r}")

    def eval_b(self, b: BExpr, path: StmtPath) -> bool:
        if isinstance(b, BoolLit):
            return b.value
        if isinstance(b, Not):
            return not self.eval_b(b.inner, path)
        if isinstance(b, And):
            return self.eval_b(b.left, path) and self.eval_b(b.right, path)
        if isinstance(b, Cmp):
            left = self.eval_a(b.left, path)
            right = self.eval_a(b.right, path)
            return left == right if b.op == "==" else left > right
        raise ExecError(f"cannot evaluate {b!r}")

    # -- global setup

    def bind_globals(self, names, init: Optional[Dict[str, int]] = None) -> None:
        """Bind free names to fresh cells, optionally with starting values."""
        init = init or {}
        unknown = sorted(set(init) - set(names))
        if unknown:
            raise ExecError(
                "initial values given for names the program never uses freely: "
                + ", ".join(unknown)
            )
        for name in sorted(names):
            loc = self.store.alloc()
            self.bind(name, GLOBAL_SCOPE, Binding("var", loc))
            self.store.write(loc, init.get(name, 0))
