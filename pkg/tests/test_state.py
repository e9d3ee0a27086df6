import pytest

from revint.state import Aux, Binding, ExecError, State, Store


def test_store_allocates_lowest_free_cell():
    st = Store()
    assert [st.alloc() for _ in range(3)] == [0, 1, 2]
    st.free(1)
    assert st.alloc() == 1
    base = st.alloc_block(3)
    assert base == 3
    assert st.allocated() == {0, 1, 2, 3, 4, 5}


def test_store_reads_zero_from_fresh_cells_and_drops_zeroes():
    st = Store()
    loc = st.alloc()
    assert st.read(loc) == 0
    st.write(loc, 7)
    assert st.read(loc) == 7
    st.write(loc, 0)
    # canonical form: zero cells leave no residue in the value map
    assert st.value_map() == {}


def test_block_allocation_is_contiguous_after_fragmentation():
    st = Store()
    locs = [st.alloc() for _ in range(4)]
    st.free(locs[1])  # hole of size 1
    base = st.alloc_block(2)  # does not fit the hole
    assert base == 4
    assert st.alloc() == locs[1]


def test_reversal_store_stacks_and_journal():
    aux = Aux()
    assert aux.is_empty()
    aux.push("x", 0, 5)
    aux.push("x", 3, 9)
    assert aux.head("x") == (3, 9)
    assert aux.entries("x") == [(3, 9), (0, 5)]  # newest first
    assert aux.total_entries() == 2
    journal = aux.drain_journal()
    assert journal == [("push", "x", 0, 5), ("push", "x", 3, 9)]
    assert aux.drain_journal() == []
    assert aux.pop("x") == (3, 9)
    assert aux.pop("x") == (0, 5)
    assert aux.is_empty()
    assert aux.drain_journal() == [("pop", "x", 3, 9), ("pop", "x", 0, 5)]
    with pytest.raises(ExecError):
        aux.pop("x")


def test_empty_reversal_stacks_vanish():
    aux = Aux()
    aux.push("B", 1, True)
    aux.pop("B")
    assert aux.keys() == []
    assert aux.snapshot() == {}


def test_sequencer_moves_both_ways():
    s = State()
    assert s.next_id() == 0
    assert s.next_id() == 1
    assert s.prev_id() == 1
    s.unstep_id(1)
    assert s.seq == 1
    s.unstep_id(0)
    assert s.seq == 0
    with pytest.raises(ExecError):
        s.unstep_id(5)  # out of order


def test_globals_bind_once_with_initial_values():
    s = State()
    s.bind_globals(("x", "y"), {"x": 2})
    assert s.read_var("x", ()) == 2
    assert s.read_var("y", ()) == 0
    s.write_var("x", (), 9)
    assert s.read_var("x", ()) == 9


def test_initial_values_for_unused_names_are_rejected():
    s = State()
    with pytest.raises(ExecError) as err:
        s.bind_globals(("x",), {"z": 1})
    assert "z" in str(err.value)


def test_binding_lookup_reports_unknown_names():
    s = State()
    s.bind_globals(("x",), {})
    with pytest.raises(ExecError):
        s.read_var("nope", ())
    b, scope = s.resolve("x", ())
    assert isinstance(b, Binding) and b.kind == "var"
