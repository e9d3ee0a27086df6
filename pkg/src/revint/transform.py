"""Runtime copy machinery: renaming, annotation harvest and install.

Loop iterations and procedure calls execute on renamed copies of the stored
body. A copy keeps every identifier stack (so earlier iterations' identifiers
survive) but gets fresh construct-id versions, fresh uids, and paths rewritten
through the renaming. When a loop or call closes, the copy's construct ids and
stacks are harvested into a CopyRecord; reversal installs the record onto the
inverted body to rebuild the copy exactly.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Callable, Dict, List, Optional, Tuple

from .lang import (
    Block,
    Call,
    ConstructId,
    CopyEntry,
    CopyRecord,
    Empty,
    If,
    Par,
    ProcDecl,
    ProcRemove,
    Program,
    Runc,
    Seq,
    Single,
    Stmt,
    While,
    iter_statements,
    rebuild_stmt_children,
    stmt_children,
)


class CopyAllocator:
    """Fresh uids and fresh construct-id versions for runtime copies."""

    def __init__(self, next_uid: int, versions: Optional[Dict[str, int]] = None):
        self._next_uid = next_uid
        self._versions = dict(versions or {})

    def seed_versions(self, p: Program) -> None:
        """Record the versions already in use by a program."""
        for s in iter_statements(p):
            cid = stmt_cid(s)
            if cid is not None:
                prev = self._versions.get(cid.base, -1)
                if cid.version > prev:
                    self._versions[cid.base] = cid.version

    def fresh_uid(self) -> int:
        uid = self._next_uid
        self._next_uid += 1
        return uid

    def fresh_version(self, base: str) -> int:
        v = self._versions.get(base, 0) + 1
        self._versions[base] = v
        return v

    def snapshot(self) -> Tuple[int, Dict[str, int]]:
        return self._next_uid, dict(self._versions)


def stmt_cid(s: Stmt) -> Optional[ConstructId]:
    if isinstance(s, (If, While, Block, ProcDecl, ProcRemove, Call, Runc)):
        return s.cid
    return None


def with_cid(s: Stmt, cid: ConstructId) -> Stmt:
    return replace(s, cid=cid)


def rename_copy(p: Program, alloc: CopyAllocator,
                on_new: Optional[Callable[[Stmt], None]] = None) -> Program:
    """Copy a program with fresh construct-id versions and fresh uids.

    Identifier stacks and origins carry over. Paths are rewritten through the
    renaming (blocks enclosing the copy stay as they are). on_new is called
    with every statement of the copy.
    """
    cid_map: Dict[ConstructId, ConstructId] = {}

    def go_stmt(s: Stmt) -> Stmt:
        cid = stmt_cid(s)
        if cid is not None:
            new_cid = ConstructId(cid.base, alloc.fresh_version(cid.base))
            cid_map[cid] = new_cid
            s = with_cid(s, new_cid)
        new_path = tuple(cid_map.get(c, c) for c in s.path)
        s = replace(s, uid=alloc.fresh_uid(), path=new_path)
        kids = [go_program(c) for c in stmt_children(s)]
        s = rebuild_stmt_children(s, kids)
        if on_new is not None:
            on_new(s)
        return s

    def go_program(q: Program) -> Program:
        if isinstance(q, Empty):
            return q
        if isinstance(q, Single):
            return Single(go_stmt(q.stmt))
        if isinstance(q, Seq):
            return Seq(go_program(q.head), go_program(q.tail))
        if isinstance(q, Par):
            return Par(go_program(q.left), go_program(q.right))
        raise TypeError(f"not a program: {q!r}")

    return go_program(p)


def get_annotation_ids(p: Program) -> CopyRecord:
    """Harvest (construct id, stack) per statement, canonical order."""
    entries: List[CopyEntry] = []
    for s in iter_statements(p):
        entries.append(CopyEntry(stmt_cid(s), s.stack))
    return CopyRecord(tuple(entries))


def set_annotation_ids(p: Program, record: CopyRecord, alloc: CopyAllocator,
                       on_new: Optional[Callable[[Stmt], None]] = None) -> Program:
    """Install a CopyRecord onto a structurally identical program.

    Construct ids and stacks come from the record; uids are fresh; paths are
    rewritten through the implied renaming. Raises ValueError on any shape
    mismatch.
    """
    entries = list(record.entries)
    pos = 0
    cid_map: Dict[ConstructId, ConstructId] = {}

    def go_stmt(s: Stmt) -> Stmt:
        nonlocal pos
        if pos >= len(entries):
            raise ValueError("copy record shorter than program")
        entry = entries[pos]
        pos += 1
        cid = stmt_cid(s)
        if (cid is None) != (entry.cid is None):
            raise ValueError("copy record does not match program shape")
        if cid is not None and entry.cid is not None:
            if cid.base != entry.cid.base:
                raise ValueError(
                    f"copy record construct {entry.cid.text()} does not match {cid.text()}")
            cid_map[cid] = entry.cid
            s = with_cid(s, entry.cid)
        new_path = tuple(cid_map.get(c, c) for c in s.path)
        s = replace(s, uid=alloc.fresh_uid(), path=new_path, stack=entry.stack)
        kids = [go_program(c) for c in stmt_children(s)]
        s = rebuild_stmt_children(s, kids)
        if on_new is not None:
            on_new(s)
        return s

    def go_program(q: Program) -> Program:
        if isinstance(q, Empty):
            return q
        if isinstance(q, Single):
            return Single(go_stmt(q.stmt))
        if isinstance(q, Seq):
            return Seq(go_program(q.head), go_program(q.tail))
        if isinstance(q, Par):
            return Par(go_program(q.left), go_program(q.right))
        raise TypeError(f"not a program: {q!r}")

    out = go_program(p)
    if pos != len(entries):
        raise ValueError("copy record longer than program")
    return out
