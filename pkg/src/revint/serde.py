"""JSON views of programs, state, traces and replay bundles.

Conventions, shared with the stepping UI:

* every integer that is program data (store cells, saved values, sequencer,
  interleaving identifiers) travels as a decimal string, so clients never
  lose precision on big values;
* booleans that are program data (branch outcomes, loop records) travel as
  "1" / "0";
* structural counters (uids, sizes, trace indexes, array sizes) stay JSON
  numbers.

Programs serialize one-way (tree out); programs come back in as source
text. Traces serialize both ways so a run can be re-enacted exactly; the
canonical byte form of any value here is ``canonical_json``.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional

from .engine import StepEvent
from .lang import (
    Block,
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
    seq_to_list,
)
from .render import stmt_text
from .state import Binding, State
from .transform import stmt_cid


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------------------------
# programs


def _stack_data(stack) -> Optional[List[str]]:
    if stack is None:
        return None
    return [str(i) for i in stack.ids]


def stmt_to_data(s: Stmt) -> Dict[str, Any]:
    cid = stmt_cid(s)
    data: Dict[str, Any] = {
        "kind": type(s).__name__,
        "uid": s.uid,
        "origin": s.origin,
        "text": stmt_text(s),
        "stack": _stack_data(s.stack),
    }
    if cid is not None:
        data["cid"] = cid.text()
    if isinstance(s, If):
        data["marker"] = None if s.marker is None else ("1" if s.marker else "0")
        data["then"] = program_to_data(s.then)
        data["else"] = program_to_data(s.els)
    elif isinstance(s, (While, Block, ProcDecl, ProcRemove, Runc)):
        data["body"] = program_to_data(s.body)
    return data


def program_to_data(p: Program) -> Dict[str, Any]:
    if isinstance(p, Empty):
        return {"node": "empty", "items": []}
    if isinstance(p, Par):
        return {
            "node": "par",
            "left": program_to_data(p.left),
            "right": program_to_data(p.right),
        }
    if isinstance(p, (Seq, Single)):
        items: List[Any] = []
        for unit in seq_to_list(p):
            if isinstance(unit, Par):
                items.append(program_to_data(unit))
            else:
                items.append({"node": "stmt", "stmt": stmt_to_data(unit.stmt)})
        return {"node": "seq", "items": items}
    raise TypeError(f"not a program: {p!r}")


# --------------------------------------------------------------------------
# state


def _aux_value_data(value) -> Any:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, CopyRecord):
        return {
            "record": [
                [
                    entry.cid.text() if entry.cid is not None else None,
                    _stack_data(entry.stack),
                ]
                for entry in value.entries
            ]
        }
    raise TypeError(f"cannot serialize reversal payload {value!r}")


def _binding_values(state: State, binding: Binding) -> Any:
    if binding.kind == "var":
        return str(state.store.read(binding.loc))
    if binding.kind == "arr":
        base = state.store.read(binding.loc)
        return [str(state.store.read(base + i)) for i in range(binding.size)]
    return None


def state_to_data(state: State) -> Dict[str, Any]:
    bindings = []
    for (name, scope), b in sorted(state.env.items()):
        entry: Dict[str, Any] = {"name": name, "scope": scope, "kind": b.kind}
        if b.kind == "arr":
            entry["size"] = b.size
        if b.kind == "proc":
            entry["ref"] = b.ref
        else:
            entry["value"] = _binding_values(state, b)
            entry["location"] = str(b.loc)
        bindings.append(entry)
    return {
        "sequencer": str(state.seq),
        "store": {str(k): str(v) for k, v in sorted(state.store.value_map().items())},
        "bindings": bindings,
        "loops": {k: program_to_data(v) for k, v in sorted(state.loops.items())},
        "procs": {
            k: {"name": e.name, "body": program_to_data(e.body)}
            for k, e in sorted(state.procs.items())
        },
        "reversal": reversal_to_data(state),
    }


# --------------------------------------------------------------------------
# traces and bundles


TRACE_VERSION = "1"


def _delta_op_data(op) -> Dict[str, Any]:
    action, key, ident, payload = op
    return {
        "op": action,
        "stack": key,
        "id": str(ident),
        "value": _aux_value_data(payload),
    }


def event_to_data(e: StepEvent) -> Dict[str, Any]:
    return {
        "rule": e.rule,
        "id": str(e.ident),
        "direction": e.direction,
        "redex": {
            "address": list(e.address),
            "uid": e.uid,
            "origin": e.origin,
            "detail": e.detail,
        },
        "delta_ops": [_delta_op_data(op) for op in e.delta_ops],
    }


def event_from_data(index: int, data: Dict[str, Any]) -> StepEvent:
    redex = data.get("redex", {})
    return StepEvent(
        index=index,
        ident=int(data["id"]),
        direction=data.get("direction", "forward"),
        rule=data["rule"],
        uid=int(redex.get("uid", -1)),
        origin=int(redex.get("origin", -1)),
        address=tuple(redex.get("address", ())),
        detail=redex.get("detail", ""),
    )


def trace_to_data(events: List[StepEvent]) -> List[Dict[str, Any]]:
    return [event_to_data(e) for e in events]


def trace_from_data(data: List[Dict[str, Any]]) -> List[StepEvent]:
    return [event_from_data(i, d) for i, d in enumerate(data)]


def reversal_to_data(state: State) -> Dict[str, Any]:
    return {
        key: [
            {"ident": str(ident), "value": _aux_value_data(value)}
            for ident, value in state.aux.entries(key)
        ]
        for key in state.aux.keys()
    }


def trace_document(
    source: str,
    events: List[StepEvent],
    state: State,
    *,
    init: Optional[Dict[str, int]] = None,
    policy: str = "leftmost",
    seed: Optional[int] = None,
) -> Dict[str, Any]:
    """The trace file: enough to replay, plus where the run ended up.

    The same document doubles as a resumable bundle: replaying ``steps``
    over ``program_source`` reconstructs the live configuration.
    """
    return {
        "version": TRACE_VERSION,
        "program_source": source,
        "init": {k: str(v) for k, v in sorted((init or {}).items())},
        "policy": policy,
        "seed": None if seed is None else str(seed),
        "steps": trace_to_data(events),
        "final_state": state_to_data(state),
        "delta": reversal_to_data(state),
        "next_id": str(state.seq),
    }


def trace_document_from_data(data: Dict[str, Any]) -> Dict[str, Any]:
    """Parse the replay-relevant parts of a trace document."""
    return {
        "source": data["program_source"],
        "init": {k: int(v) for k, v in data.get("init", {}).items()},
        "policy": data.get("policy", "leftmost"),
        "seed": None if data.get("seed") in (None, "") else int(data["seed"]),
        "events": trace_from_data(data.get("steps", [])),
        "delta": data.get("delta", {}),
        "final_state": data.get("final_state"),
        "next_id": data.get("next_id"),
    }
