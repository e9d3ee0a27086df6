import pytest

from revint import annotate, erase_annotations, invert, parse, prepare
from revint.lang import (
    EMPTY_STACK,
    ArrDecl,
    ArrRemove,
    Assign,
    IdStack,
    ProcDecl,
    ProcRemove,
    VarDecl,
    VarRemove,
    expr_names,
    iter_statements,
    seq_to_list,
    structural_eq,
)

SOURCES = [
    "x = 1; y += x; y -= 2",
    "if x > 1 then y = 1 else y = 2 end",
    "begin var v = 1; arr[2] a; a[0] = v; remove arr[2] a; remove v = 1 end",
    "par { x = 1; y = 2 } { while z > 0 do z -= 1 end }",
    "begin proc p is x += 1 end; call p; remove proc p is x += 1 end end",
]


def test_identifier_stack_order():
    s = EMPTY_STACK.push(3).push(7)
    assert s.head == 7
    assert len(s) == 2
    head, rest = s.pop()
    assert head == 7 and rest.head == 3
    assert not IdStack(())
    assert IdStack(()).head is None
    with pytest.raises(ValueError):
        IdStack(()).pop()


def test_inversion_is_an_involution():
    for src in SOURCES:
        tree = prepare(parse(src)).program
        ann = annotate(tree)
        assert structural_eq(invert(invert(ann)), ann), src


def test_inversion_swaps_updates_and_declarations():
    tree = prepare(parse(SOURCES[2])).program
    inv = invert(tree)
    kinds = [type(s) for s in iter_statements(inv)]
    # declarations become removals and vice versa
    assert kinds.count(VarDecl) == 1 and kinds.count(VarRemove) == 1
    assert kinds.count(ArrDecl) == 1 and kinds.count(ArrRemove) == 1

    tree = prepare(parse("x += 2; x -= 1")).program
    ops = [s.op for s in iter_statements(invert(tree)) if isinstance(s, Assign)]
    assert ops == ["+=", "-="]  # order reversed and operators swapped


def test_inversion_reverses_composition_order():
    tree = prepare(parse("x = 1; y = 2; z = 3")).program
    names = [u.stmt.name for u in seq_to_list(invert(tree))]
    assert names == ["z", "y", "x"]


def test_procedure_bodies_invert_inside_their_declarations():
    tree = prepare(parse(SOURCES[4])).program
    inv = invert(tree)
    decls = [s for s in iter_statements(inv) if isinstance(s, (ProcDecl, ProcRemove))]
    assert {type(d) for d in decls} == {ProcDecl, ProcRemove}


def test_annotate_then_erase_is_identity():
    for src in SOURCES:
        tree = prepare(parse(src)).program
        assert erase_annotations(annotate(tree)) == tree, src


def test_annotate_gives_every_statement_an_empty_stack():
    tree = annotate(prepare(parse(SOURCES[1])).program)
    for s in iter_statements(tree):
        if type(s).__name__ == "Skip":
            continue
        assert s.stack == EMPTY_STACK


def test_expression_name_collection():
    tree = parse("x = y + a[z]")
    stmt = seq_to_list(tree)[0].stmt
    assert expr_names(stmt.expr) == {"y", "a", "z"}
