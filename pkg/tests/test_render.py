from revint import (
    Engine,
    LeftmostScheduler,
    parse,
    prepare,
    render_config,
    render_program,
    stmt_text,
)
from revint.lang import iter_statements, structural_eq


def test_rendered_source_reparses_to_the_same_tree(sort_source):
    tree = parse(sort_source)
    assert structural_eq(tree, parse(render_program(tree)))


def test_rendering_is_stable_under_preprocessing(sort_source):
    prepared = prepare(parse(sort_source))
    text = render_program(prepared.program)
    assert structural_eq(parse(text), parse(render_program(prepare(parse(text)).program)))


def test_statement_text_covers_every_kind(sort_prepared):
    seen = set()
    for s in iter_statements(sort_prepared.program):
        text = stmt_text(s)
        assert text and "\n" not in text
        seen.add(type(s).__name__)
    assert {"Assign", "If", "While", "ArrDecl", "ArrRemove"} <= seen


def test_mid_run_configuration_renders(sort_prepared):
    e = Engine(sort_prepared)
    for _ in range(12):
        e.step(e.enabled()[0])
    text = render_config(e.program)
    assert "while" in text
    # a fully reduced configuration renders too
    e2 = Engine(prepare(parse("x = 1")))
    e2.run(LeftmostScheduler())
    assert render_config(e2.program).strip() != ""


def test_reverse_configuration_renders(sort_prepared):
    e = Engine(sort_prepared)
    e.run(LeftmostScheduler())
    e.flip()
    for _ in range(9):
        e.step(e.enabled()[0])
    text = render_config(e.program)
    assert "arr[5] l" in text  # the removal flipped back into a declaration


def test_running_procedure_body_renders_only_in_tolerant_mode():
    src = "begin proc p is x += 1; y = 2 end; call p end"
    e = Engine(prepare(parse(src)))
    # step until the call has opened but not closed
    for _ in range(3):
        e.step(e.enabled()[0])
    text = render_config(e.program)
    assert "call p" in text
