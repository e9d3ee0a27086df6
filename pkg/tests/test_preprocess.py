import pytest

from revint import StaticError, parse, prepare
from revint.lang import (
    ArrRemove,
    ProcRemove,
    VarRemove,
    iter_statements,
    seq_to_list,
)


def prep(src):
    return prepare(parse(src))


def block_of(prepared):
    return seq_to_list(prepared.program)[0].stmt


def test_construct_ids_number_per_kind_from_one():
    p = prep(
        "begin var v = 0; if v > 1 then v = 1 end; "
        "while v > 0 do v -= 1 end; remove v = 0 end; "
        "begin var w = 0; remove w = 0 end"
    )
    cids = sorted(
        s.cid.text() for s in iter_statements(p.program) if getattr(s, "cid", None)
    )
    assert cids == ["b1.0", "b2.0", "i1.0", "w1.0"]


def test_uids_are_unique_and_dense():
    p = prep("x = 1; if x > 0 then y = 1 else y = 2 end")
    uids = [s.uid for s in iter_statements(p.program)]
    assert len(set(uids)) == len(uids)
    assert p.next_uid > max(uids)


def test_missing_removals_are_appended_in_mirror_order():
    p = prep("begin var v = 0; arr[2] a; proc q is v += 1 end; v = 1 end")
    tail = [type(u.stmt) for u in seq_to_list(block_of(p).body)][-3:]
    assert tail == [ProcRemove, ArrRemove, VarRemove]


def test_explicit_removals_are_kept_not_duplicated():
    p = prep("begin var v = 0; v = 1; remove v = 0 end")
    kinds = [type(u.stmt) for u in seq_to_list(block_of(p).body)]
    assert kinds.count(VarRemove) == 1


def test_preprocessing_is_idempotent_on_rendered_output():
    from revint import render_program

    src = "begin var v = 0; arr[2] a; v = 1 end"
    once = render_program(prep(src).program)
    twice = render_program(prep(once).program)
    assert once == twice


def test_declarations_must_precede_body():
    with pytest.raises(StaticError):
        prep("begin x = 1; var y = 0 end")


def test_removals_out_of_order_rejected():
    with pytest.raises(StaticError):
        prep("begin var v = 0; arr[2] a; remove arr[2] a; remove v = 0; v = 1 end")


def test_duplicate_declaration_rejected():
    with pytest.raises(StaticError):
        prep("begin var v = 0; var v = 1 end")


def test_call_to_undeclared_procedure_rejected():
    with pytest.raises(StaticError):
        prep("call nowhere")
    with pytest.raises(StaticError):
        # declared later in the same block: still not callable
        prep("begin call p; proc p is x = 1 end end")


def test_constructive_self_reference_rejected():
    with pytest.raises(StaticError):
        prep("x += x")
    with pytest.raises(StaticError):
        prep("x -= 1 + x")
    with pytest.raises(StaticError):
        prep("begin arr[2] a; a[a[0]] += 1 end")
    # plain overwrite of self is fine: the old value is banked
    prep("x = x + 1")


def test_free_scalar_names_become_globals_sorted():
    p = prep("y = x; z += y")
    assert p.globals == ("x", "y", "z")
    p = prep("begin var v = 0; v = 1 end")
    assert p.globals == ()


def test_array_and_procedure_names_are_not_globals():
    p = prep("begin arr[2] a; proc q is h += 1 end; a[0] = g; call q end")
    assert p.globals == ("g", "h")
