"""Two-level logic: table building, minimization, MCX conversion."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import eval_cover
from qdotplot import (
    Cube,
    PlaTable,
    brute_force_mcx,
    build_pla,
    cubes_to_mcx,
    d1merge,
    evaluate_all,
    functional_equal,
    read_pla,
    write_pla,
)

# The worked example used throughout: an 8-element sequence over a 4-symbol
# alphabet whose nonzero table rows and minimized cover are known by hand.
SEQ8 = (0, 1, 3, 2, 1, 2, 3, 0)


def test_build_pla_rows_frozen():
    table = build_pla(SEQ8, 2)
    assert table.n_inputs == 3
    assert table.n_outputs == 2
    assert [(c.inputs, c.outputs) for c in table.cubes] == [
        ("001", "01"),
        ("010", "11"),
        ("011", "10"),
        ("100", "01"),
        ("101", "10"),
        ("110", "11"),
    ]


def test_build_pla_drops_zero_rows():
    table = build_pla(SEQ8, 2)
    assert len(table.cubes) == 6  # indices 0 and 7 hold code 0


def test_build_pla_rejects_bad_shapes():
    with pytest.raises(ValueError):
        build_pla((0, 1, 2), 2)  # not a power of two
    with pytest.raises(ValueError):
        build_pla((0, 4), 2)  # code does not fit in d bits
    with pytest.raises(ValueError):
        build_pla((0, 1), 0)


def test_brute_force_count_is_popcount_sum():
    table = build_pla(SEQ8, 2)
    gates = brute_force_mcx(table)
    want = sum(c.outputs.count("1") for c in table.cubes)
    assert len(gates) == want == 8
    assert all(len(g.controls) == 3 for g in gates)


def test_cubes_to_mcx_bit_numbering():
    # MSB-first strings map to LSB-numbered bits: position p -> bit n-1-p.
    table = PlaTable(3, 2, (Cube("01-", "10"),))
    (g,) = cubes_to_mcx(table)
    assert g.controls == ((2, False), (1, True))
    assert g.output_bit == 1


def test_cubes_to_mcx_dashed_cube_is_unconditional():
    table = PlaTable(2, 2, (Cube("--", "11"),))
    gates = cubes_to_mcx(table)
    assert [g.controls for g in gates] == [(), ()]
    assert sorted(g.output_bit for g in gates) == [0, 1]


def test_d1merge_worked_example_equivalent_and_smaller():
    table = build_pla(SEQ8, 2)
    merged = d1merge(table)
    assert functional_equal(table, merged)
    assert len(merged.cubes) < len(table.cubes)
    assert len(cubes_to_mcx(merged)) < len(brute_force_mcx(table))


def test_d1merge_merges_distance_one_equal_outputs():
    table = PlaTable(3, 1, (Cube("010", "1"), Cube("011", "1")))
    merged = d1merge(table)
    assert [(c.inputs, c.outputs) for c in merged.cubes] == [("01-", "1")]


def test_d1merge_keeps_unequal_outputs_apart():
    table = PlaTable(2, 2, (Cube("00", "01"), Cube("01", "10")))
    merged = d1merge(table)
    assert len(merged.cubes) == 2
    assert functional_equal(table, merged)


def test_d1merge_subsumption():
    table = PlaTable(2, 1, (Cube("0-", "1"), Cube("00", "1")))
    merged = d1merge(table)
    assert [(c.inputs, c.outputs) for c in merged.cubes] == [("0-", "1")]


def _random_table(draw, max_inputs=6):
    n = draw(st.integers(min_value=1, max_value=max_inputs))
    d = draw(st.integers(min_value=1, max_value=3))
    n_cubes = draw(st.integers(min_value=1, max_value=12))
    cubes = []
    for _ in range(n_cubes):
        ins = "".join(draw(st.sampled_from("01-")) for _ in range(n))
        out = draw(st.integers(min_value=1, max_value=(1 << d) - 1))
        cubes.append(Cube(ins, format(out, f"0{d}b")))
    return PlaTable(n, d, tuple(cubes))


@st.composite
def pla_tables(draw):
    return _random_table(draw)


@given(pla_tables())
@settings(max_examples=150, deadline=None)
def test_d1merge_preserves_function(table):
    merged = d1merge(table)
    # Independent oracle: evaluate both covers literally at every input.
    mine = [(c.inputs, c.outputs) for c in table.cubes]
    theirs = [(c.inputs, c.outputs) for c in merged.cubes]
    for value in range(1 << table.n_inputs):
        assert eval_cover(mine, table.n_inputs, value) == eval_cover(
            theirs, table.n_inputs, value
        )
    assert len(merged.cubes) <= len(table.cubes)


@given(pla_tables())
@settings(max_examples=100, deadline=None)
def test_d1merge_idempotent(table):
    once = d1merge(table)
    twice = d1merge(once)
    assert once.cubes == twice.cubes


@given(st.integers(min_value=1, max_value=6), st.data())
@settings(max_examples=60, deadline=None)
def test_d1merge_strictly_shrinks_distance_one_pairs(n, data):
    value = data.draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    pos = data.draw(st.integers(min_value=0, max_value=n - 1))
    a = format(value, f"0{n}b")
    flipped = value ^ (1 << (n - 1 - pos))
    b = format(flipped, f"0{n}b")
    table = PlaTable(n, 1, (Cube(a, "1"), Cube(b, "1")))
    assert len(d1merge(table).cubes) == 1


def test_d1merge_matches_exhaustive_evaluation_against_sequence():
    rng = np.random.default_rng(5)
    for _ in range(10):
        length = 1 << int(rng.integers(2, 6))
        codes = rng.integers(0, 4, size=length)
        table = build_pla(tuple(int(c) for c in codes), 2)
        if not table.cubes:
            continue
        merged = d1merge(table)
        assert np.array_equal(evaluate_all(table), evaluate_all(merged))
        want = np.asarray(codes, dtype=np.int64)
        assert np.array_equal(evaluate_all(merged), want)


def test_pla_text_round_trip():
    table = d1merge(build_pla(SEQ8, 2))
    text = write_pla(table)
    back = read_pla(text)
    assert back == table
    assert ".i 3" in text and ".o 2" in text and text.endswith(".e\n")


def test_read_pla_rejects_malformed():
    with pytest.raises(ValueError):
        read_pla(".i 2\n.o 1\n01 1\n")  # missing .e
    with pytest.raises(ValueError):
        read_pla(".i 2\n.o 1\n011 1\n.e\n")  # width mismatch
    with pytest.raises(ValueError):
        read_pla(".i 2\n.o 1\n.p 2\n01 1\n.e\n")  # wrong declared count


def test_cube_validation():
    with pytest.raises(ValueError):
        Cube("01", "00")  # no output bit set
    with pytest.raises(ValueError):
        Cube("0x", "1")
