"""Stepping behavior: one rule family at a time, then the racing fixtures."""

import pytest

from revint import (
    Engine,
    ExecError,
    LeftmostScheduler,
    parse,
    prepare,
)


def engine_for(src, **kw):
    return Engine(prepare(parse(src)), **kw)


def run_leftmost(src, **kw):
    e = engine_for(src, **kw)
    e.run(LeftmostScheduler())
    return e


def reverse_all(e):
    e.flip()
    return e.run(LeftmostScheduler())


class PickArm:
    """Schedule steps by which side of the outermost fork they sit on."""

    def __init__(self, arms):
        self.arms = list(arms)

    def choose(self, engine, redexes):
        want = self.arms.pop(0)
        for r in redexes:
            if r.address and r.address[0] == want:
                return r
        raise AssertionError(f"no enabled step on arm {want!r}")


# -- plain assignment


def test_overwrite_banks_the_old_value():
    e = run_leftmost("x = 5", init={"x": 2})
    assert e.state.read_var("x", ()) == 5
    assert e.state.aux.entries("x") == [(0, 2)]
    reverse_all(e)
    assert e.state.read_var("x", ()) == 2
    assert e.state.aux.is_empty()
    assert e.state.seq == 0


def test_additive_updates_bank_nothing():
    e = run_leftmost("x += 3; x -= 1", init={"x": 4})
    assert e.state.read_var("x", ()) == 6
    assert e.state.aux.is_empty()  # nothing destroyed, nothing saved
    reverse_all(e)
    assert e.state.read_var("x", ()) == 4
    assert e.state.seq == 0


def test_array_element_assignment():
    e = run_leftmost("begin arr[2] a; a[0] = 4; a[1] = a[0] + 1; a[0] = 9 end")
    # the block's auto-removal banked the final elements under one identifier
    entries = e.state.aux.entries("a")
    final_ident = entries[0][0]
    banked = [v for i, v in entries if i == final_ident]
    assert banked == [5, 9]  # element 1 on top, element 0 below
    reverse_all(e)
    assert e.state.aux.is_empty() and e.state.seq == 0


def test_assignment_to_missing_name_fails():
    e = engine_for("begin var v = 0; v = 1 end")
    # runs fine; but a raw state lookup for an unbound name must fail
    e.run(LeftmostScheduler())
    with pytest.raises(ExecError):
        e.state.read_var("v", ())  # removed again by the block epilogue


# -- conditionals


def test_conditional_records_branch_outcomes():
    e = run_leftmost("if x > 0 then y = 1 else y = 2 end", init={"x": 1})
    assert e.state.read_var("y", ()) == 1
    assert e.state.aux.entries("B") == [(2, True)]
    reverse_all(e)
    assert e.state.read_var("y", ()) == 0
    assert e.state.aux.is_empty()


def test_conditional_false_branch():
    e = run_leftmost("if x > 0 then y = 1 else y = 2 end", init={"x": 0})
    assert e.state.read_var("y", ()) == 2
    assert e.state.aux.entries("B") == [(2, False)]
    reverse_all(e)
    assert e.state.read_var("y", ()) == 0


def test_reverse_does_not_reevaluate_guards():
    # Forward takes the true branch, then the branch variable changes so the
    # guard would now pick the other arm. Reverse must still undo the true
    # branch, using the recorded outcome.
    e = run_leftmost("if x > 0 then y = 1 end; x = 0 - 5", init={"x": 3})
    assert e.state.read_var("y", ()) == 1
    assert e.state.read_var("x", ()) == -5
    reverse_all(e)
    assert e.state.read_var("x", ()) == 3
    assert e.state.read_var("y", ()) == 0
    assert e.state.seq == 0


# -- loops


def test_loop_that_never_runs_records_one_entry():
    e = run_leftmost("while x > 0 do x -= 1 end", init={"x": 0})
    assert e.state.aux.entries("W") == [(0, False)]
    reverse_all(e)
    assert e.state.aux.is_empty() and e.state.seq == 0


def test_loop_iterations_record_boundaries():
    e = run_leftmost("while x > 0 do x -= 1 end", init={"x": 2})
    assert e.state.read_var("x", ()) == 0
    # first entry, then one boundary per guard re-check
    assert e.state.aux.entries("W") == [(4, True), (2, True), (0, False)]
    # the close also archived the final body copy's identifiers for reverse
    assert e.state.aux.keys() == ["W", "WI"]
    reverse_all(e)
    assert e.state.read_var("x", ()) == 2
    assert e.state.seq == 0


def test_loop_copies_leave_no_residue():
    e = run_leftmost("while x > 0 do x -= 1 end", init={"x": 3})
    assert e.state.loops == {}
    reverse_all(e)
    assert e.state.loops == {}


# -- blocks, declarations, scoping


def test_block_shadows_global_of_same_name():
    e = run_leftmost("x = 5; begin var x = 1; x = 2 end; y = x", init={})
    # the inner x vanished with the block; y saw the global
    assert e.state.read_var("y", ()) == 5
    reverse_all(e)
    assert e.state.read_var("x", ()) == 0
    assert e.state.read_var("y", ()) == 0


def test_nested_blocks_reuse_store_cells():
    e = engine_for("begin var v = 7; v = 8 end; begin var w = 3; w = 4 end")
    e.run(LeftmostScheduler())
    # both blocks are gone; only the reversal store remembers them
    assert e.state.store.value_map() == {}
    assert set(e.state.aux.keys()) == {"v", "w"}
    reverse_all(e)
    assert e.state.aux.is_empty()


# -- procedures


def test_procedure_calls_and_their_undo():
    e = run_leftmost(
        "begin proc p is x += 2; x -= 1 end; call p; call p end", init={}
    )
    assert e.state.read_var("x", ()) == 2
    assert e.state.procs == {}
    reverse_all(e)
    assert e.state.read_var("x", ()) == 0
    assert e.state.seq == 0
    assert e.state.aux.is_empty()


def test_nested_procedure_calls():
    src = (
        "begin proc q is x += 1 end; proc p is call q; call q end; "
        "call p end"
    )
    e = run_leftmost(src)
    assert e.state.read_var("x", ()) == 2
    reverse_all(e)
    assert e.state.read_var("x", ()) == 0
    assert e.state.aux.is_empty() and e.state.seq == 0


# -- parallel composition


def test_par_interleaving_is_schedulable():
    e = engine_for("par { x = 1 } { x = 2 }")
    redexes = e.enabled()
    assert {r.address[0] for r in redexes} == {"L", "R"}


def test_racing_writes_last_one_wins_and_both_reverse():
    # both orders of the same two racing writes
    for arms, final in ((["L", "R"], 2), (["R", "L"], 1)):
        e = engine_for("par { x = 1 } { x = 2 }")
        e.run(PickArm(list(arms)))
        assert e.state.read_var("x", ()) == final
        reverse_all(e)
        assert e.state.read_var("x", ()) == 0
        assert e.state.aux.is_empty() and e.state.seq == 0


def test_racing_fixture_two_writes():
    # two parallel writes to one variable, scheduled left before right
    e = engine_for("par { X = 3 } { X = 5 }", init={"X": 1})
    e.run(PickArm(["L", "R"]))
    assert e.state.read_var("X", ()) == 5
    assert e.state.aux.entries("X") == [(1, 3), (0, 1)]
    reverse_all(e)
    assert e.state.read_var("X", ()) == 1
    assert e.state.aux.is_empty() and e.state.seq == 0


def test_racing_fixture_interfering_conditionals():
    src = (
        "par { if Z > 3 then Z = 2 else Y = 6 end } "
        "{ if Y > 3 then Y = 4 else Z = 5 end }"
    )
    e = engine_for(src, init={"Y": 2, "Z": 4})
    # left guard reads Z=4 (true) before the right arm clobbers Z; the right
    # guard reads Y=2 (false); then the bodies race, left writing last
    e.run(PickArm(["L", "R", "R", "L", "L", "R"]))
    assert e.state.read_var("Y", ()) == 2
    assert e.state.read_var("Z", ()) == 2
    assert e.state.aux.entries("B") == [(5, False), (4, True)]
    assert e.state.aux.entries("Z") == [(3, 5), (2, 4)]
    reverse_all(e)
    assert e.state.read_var("Y", ()) == 2
    assert e.state.read_var("Z", ()) == 4
    assert e.state.aux.is_empty() and e.state.seq == 0


# -- error paths


def test_whole_array_assignment_is_rejected():
    from revint import StaticError

    with pytest.raises(StaticError):
        engine_for("begin arr[2] a; a = 5 end")


def test_step_budget_guards_against_runaway_runs():
    e = engine_for("while T do x += 1 end")
    with pytest.raises(ExecError):
        e.run(LeftmostScheduler(), max_steps=100)


def test_trace_records_each_step():
    e = run_leftmost("x = 1; y = 2")
    assert [ev.ident for ev in e.trace] == [0, 1]
    assert [ev.direction for ev in e.trace] == ["forward", "forward"]
    assert all(ev.rule for ev in e.trace)
    # destructive writes journal their reversal-store pushes
    assert e.trace[0].delta_ops[0][:2] == ("push", "x")
