"""Command-line front end.

Commands:

* ``run`` — execute a source file forward under a scheduling policy,
  optionally dumping final bindings, the reversal store, or a trace file.
* ``invert`` — turn a trace file into a reverse-ready bundle holding the
  inverted program.
* ``reverse`` — take a bundle back to the start, verifying that nothing
  is left over.
* ``check`` — forward/backward round trips across seeds with a
  machine- or human-readable report.
* ``serve`` — host the stepping service over HTTP.

Diagnostics go to standard error, data to standard output. Exit codes:
0 success, 1 failed run or check, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from typing import Dict, List, Optional, Tuple

from .engine import Engine
from .harness import replay, round_trip
from .lang import CopyRecord
from .parser import ParseError, parse
from .preprocess import Prepared, StaticError, prepare
from .render import render_config
from .scheduler import make_scheduler
from .serde import (
    canonical_json,
    program_to_data,
    reversal_to_data,
    trace_document,
    trace_document_from_data,
)
from .state import ExecError, State


def _fail(message: str, code: int = 2) -> int:
    print(message, file=sys.stderr)
    return code


def _load_source(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _prepare_source(source: str) -> Prepared:
    return prepare(parse(source))


def _parse_init(pairs: List[str]) -> Dict[str, int]:
    init: Dict[str, int] = {}
    for pair in pairs:
        name, eq, value = pair.partition("=")
        if not eq or not name:
            raise ValueError(f"expected NAME=VALUE, got {pair!r}")
        init[name.strip()] = int(value.strip())
    return init


# --------------------------------------------------------------------------
# dumps


def _value_text(payload) -> str:
    if isinstance(payload, bool):
        return "T" if payload else "F"
    if isinstance(payload, int):
        return str(payload)
    if isinstance(payload, CopyRecord):
        return f"copy[{len(payload.entries)}]"
    return str(payload)


def state_lines(state: State) -> List[str]:
    """Deterministic ``name = value`` lines for every live binding."""
    out = []
    for (name, scope), b in sorted(state.env.items()):
        if b.kind == "var":
            out.append(f"{name} = {state.store.read(b.loc)}")
        elif b.kind == "arr":
            base = state.store.read(b.loc)
            elems = ",".join(str(state.store.read(base + i)) for i in range(b.size))
            out.append(f"{name} = [{elems}]")
        else:
            out.append(f"{name} = <proc>")
    return out


def delta_lines(state: State) -> List[str]:
    """One line per reversal stack, entries newest first."""
    out = []
    for key in state.aux.keys():
        pairs = " ".join(
            f"({ident},{_value_text(value)})" for ident, value in state.aux.entries(key)
        )
        out.append(f"{key} : {pairs}")
    return out


def _dump_document(doc: dict, out_path: Optional[str]) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# run


def _pick_scheduler(args, events):
    if getattr(args, "script", None):
        from .engine import ReplayScheduler

        return ReplayScheduler(events), "replay", None
    if getattr(args, "uniform", False):
        seed = int.from_bytes(os.urandom(8), "big")
        print(f"picked scheduling seed {seed}", file=sys.stderr)
        return make_scheduler("seeded", seed=seed), "seeded", seed
    if getattr(args, "seed", None) is not None:
        return make_scheduler("seeded", seed=args.seed), "seeded", args.seed
    return make_scheduler("leftmost"), "leftmost", None


def cmd_run(args) -> int:
    try:
        source = _load_source(args.file)
        prepared = _prepare_source(source)
        init = _parse_init(args.init)
    except (OSError, ValueError, ParseError, StaticError) as exc:
        return _fail(str(exc))

    script_events = []
    if args.script:
        try:
            with open(args.script, "r", encoding="utf-8") as fh:
                script_events = trace_document_from_data(json.load(fh))["events"]
        except (OSError, ValueError, KeyError) as exc:
            return _fail(f"cannot read script {args.script}: {exc}")

    scheduler, policy, seed = _pick_scheduler(args, script_events)
    try:
        engine = Engine(prepared, annotated=not args.traditional, init=init)
    except ExecError as exc:
        return _fail(str(exc))
    try:
        engine.run(scheduler, max_steps=args.max_steps)
    except ExecError as exc:
        return _fail(f"run failed: {exc}", 1)

    if args.dump_state:
        for line in state_lines(engine.state):
            print(line)
    if args.dump_delta:
        for line in delta_lines(engine.state):
            print(line)
    if args.trace:
        doc = trace_document(
            source, engine.trace, engine.state, init=init, policy=policy, seed=seed
        )
        _dump_document(doc, args.trace)
    return 0


# --------------------------------------------------------------------------
# invert / reverse


def _rebuild(doc: dict) -> Tuple[Engine, Prepared, dict]:
    parsed = trace_document_from_data(doc)
    prepared = _prepare_source(parsed["source"])
    engine = replay(prepared, parsed["events"], init=parsed["init"])
    return engine, prepared, parsed


def cmd_invert(args) -> int:
    try:
        with open(args.trace, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        engine, _, _ = _rebuild(doc)
    except (OSError, ValueError, KeyError, ParseError, StaticError, ExecError) as exc:
        return _fail(f"cannot rebuild trace: {exc}")
    want = doc.get("direction", engine.direction)
    if engine.direction != want:
        engine.flip()
    engine.flip()
    bundle = dict(doc)
    bundle["direction"] = engine.direction
    bundle["inverted_listing"] = render_config(engine.program)
    bundle["inverted_program"] = program_to_data(engine.program)
    _dump_document(bundle, args.output)
    return 0


def _first_delta_mismatch(recorded: dict, live: dict) -> Optional[str]:
    """Identifier at the head of the first stack that disagrees."""
    for key in sorted(set(recorded) | set(live)):
        a = recorded.get(key, [])
        b = live.get(key, [])
        if canonical_json(a) == canonical_json(b):
            continue
        for got, want in zip(b, a):
            if canonical_json(got) != canonical_json(want):
                return str(got.get("ident", "?"))
        if len(b) > len(a):
            return str(b[len(a)].get("ident", "?"))
        if a:
            return str(a[len(b)].get("ident", "?"))
        return "?"
    return None


def cmd_reverse(args) -> int:
    try:
        with open(args.bundle, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        engine, _, parsed = _rebuild(doc)
    except (OSError, ValueError, KeyError, ParseError, StaticError, ExecError) as exc:
        return _fail(f"cannot rebuild bundle: {exc}")

    recorded = parsed["delta"]
    live = reversal_to_data(engine.state)
    if canonical_json(recorded) != canonical_json(live):
        ident = _first_delta_mismatch(recorded, live)
        return _fail(
            f"reversal store disagrees with the bundle at identifier {ident}", 1
        )

    if engine.direction == "forward":
        engine.flip()
    try:
        engine.run(make_scheduler("leftmost"), max_steps=args.max_steps)
    except ExecError as exc:
        return _fail(f"reverse run stuck: {exc}", 1)

    for line in state_lines(engine.state):
        print(line)
    if not engine.state.aux.is_empty():
        return _fail("reversal store is not empty after reversing", 1)
    if engine.state.seq != 0:
        return _fail(f"sequencer stopped at {engine.state.seq}, not 0", 1)
    return 0


# --------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    try:
        source = _load_source(args.file)
        prepared = _prepare_source(source)
    except (OSError, ParseError, StaticError) as exc:
        return _fail(str(exc))

    digest = hashlib.sha256(source.encode("utf-8")).hexdigest()
    reports = []
    ok = True
    for i in range(args.runs):
        seed = args.seed + i
        try:
            result = round_trip(prepared, make_scheduler("seeded", seed=seed))
            passed = {
                "state": result.restored_exactly,
                "delta_empty": result.reversal_empty,
                "id_conservation": result.sequencer_zero
                and [e.ident for e in result.reverse_trace]
                == [e.ident for e in reversed(result.forward_trace)],
            }
            report = {
                "program_hash": digest,
                "seed": str(seed),
                "steps_fwd": result.forward_steps,
                "steps_rev": result.reverse_steps,
                "pass": passed,
            }
            if not all(passed.values()):
                report["failure_detail"] = "restored state differs from the initial one"
        except ExecError as exc:
            report = {
                "program_hash": digest,
                "seed": str(seed),
                "steps_fwd": 0,
                "steps_rev": 0,
                "pass": {"state": False, "delta_empty": False, "id_conservation": False},
                "failure_detail": str(exc),
            }
        reports.append(report)
        ok = ok and all(report["pass"].values())

    if args.json:
        print(json.dumps(reports, indent=1, sort_keys=True))
    else:
        print(f"{'seed':>8} {'fwd':>6} {'rev':>6} {'state':>6} {'delta':>6} {'ids':>6}")
        for r in reports:
            p = r["pass"]
            print(
                f"{r['seed']:>8} {r['steps_fwd']:>6} {r['steps_rev']:>6} "
                f"{'ok' if p['state'] else 'FAIL':>6} "
                f"{'ok' if p['delta_empty'] else 'FAIL':>6} "
                f"{'ok' if p['id_conservation'] else 'FAIL':>6}"
            )
    return 0 if ok else 1


# --------------------------------------------------------------------------
# serve


def cmd_serve(args) -> int:
    from .service import build_server

    try:
        server = build_server(args.host, args.port, root=args.root)
    except OSError as exc:
        return _fail(f"cannot listen on {args.host}:{args.port}: {exc}", 1)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# --------------------------------------------------------------------------
# argument wiring


def build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="revint", description="Reversible interpreter tools."
    )
    sub = top.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a program forward")
    run.add_argument("file")
    run.add_argument("--seed", type=int, default=None, help="seeded scheduling policy")
    run.add_argument("--script", default=None, help="replay choices from a trace file")
    run.add_argument(
        "--uniform", action="store_true", help="random seed (printed to stderr)"
    )
    run.add_argument(
        "--traditional",
        action="store_true",
        help="run without recording reversal information",
    )
    run.add_argument("--trace", default=None, help="write the trace file here")
    run.add_argument("--max-steps", type=int, default=None)
    run.add_argument("--dump-state", action="store_true")
    run.add_argument("--dump-delta", action="store_true")
    run.add_argument(
        "--init",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="initial value for a global (default 0)",
    )
    run.set_defaults(func=cmd_run)

    inv = sub.add_parser("invert", help="turn a trace into a reverse-ready bundle")
    inv.add_argument("trace")
    inv.add_argument("-o", "--output", default=None)
    inv.set_defaults(func=cmd_invert)

    rev = sub.add_parser("reverse", help="run a bundle back to the start")
    rev.add_argument("bundle")
    rev.add_argument("--max-steps", type=int, default=None)
    rev.set_defaults(func=cmd_reverse)

    chk = sub.add_parser("check", help="forward/backward round-trip checks")
    chk.add_argument("file")
    chk.add_argument("--runs", type=int, default=20)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--json", action="store_true")
    chk.set_defaults(func=cmd_check)

    srv = sub.add_parser("serve", help="host the stepping service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--root", default=None, help="directory of static UI assets")
    srv.set_defaults(func=cmd_serve)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    args = build_argparser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
