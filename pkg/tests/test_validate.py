"""Validation procedures: exhaustive bit-level and sampled statistical."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_dot_plot, make_sequence, random_codes
from qdotplot import (
    Circuit,
    Gate,
    classical_dotplot,
    build_dotplot_circuit,
    validate_exhaustive,
    validate_sampling,
)

RNG = np.random.default_rng(13)
R8 = make_sequence(random_codes(RNG, 8, 2))
Q8 = make_sequence(random_codes(RNG, 8, 2))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_classical_dotplot_matches_double_loop(data):
    w = data.draw(st.integers(min_value=1, max_value=12))
    h = data.draw(st.integers(min_value=1, max_value=12))
    r = make_sequence(
        [data.draw(st.integers(min_value=0, max_value=3)) for _ in range(w)], d=2
    )
    q = make_sequence(
        [data.draw(st.integers(min_value=0, max_value=3)) for _ in range(h)], d=2
    )
    plot = classical_dotplot(r, q)
    assert plot.width == w and plot.height == h
    assert np.array_equal(plot.pixels, brute_dot_plot(r.codes, q.codes))
    if w and h:
        assert plot.pixel(0, 0) == (1 if r.codes[0] == q.codes[0] else 0)


@pytest.mark.parametrize("mode", ["ccnot_chain", "single_ancilla"])
@pytest.mark.parametrize("use_minimizer", [False, True])
def test_exhaustive_passes_on_correct_circuit(mode, use_minimizer):
    rep = validate_exhaustive(R8, Q8, mode, use_minimizer)
    assert rep.passed
    assert rep.checks == 64
    assert rep.mismatches == 0
    assert rep.first_counterexample is None


def test_exhaustive_catches_mutations():
    # Drop the final mark gate: v never flips, every matching cell disagrees.
    good = build_dotplot_circuit(R8, Q8, mcx_mode="ccnot_chain", pinned=(0, 0))
    broken = Circuit(
        registers=good.registers,
        gates=good.gates[:-1],
        classical_bits=good.classical_bits,
        stage_marks=tuple((i, l) for i, l in good.stage_marks if i < len(good.gates) - 1),
    )
    rep = validate_exhaustive(R8, Q8, "ccnot_chain", True, circuit=broken)
    assert not rep.passed
    assert rep.mismatches == int(brute_dot_plot(R8.codes, Q8.codes).sum())
    assert rep.first_counterexample is not None
    x, y, got, want = rep.first_counterexample
    assert got != want


def test_exhaustive_catches_stray_flip():
    good = build_dotplot_circuit(R8, Q8, mcx_mode="ccnot_chain", pinned=(0, 0))
    v = good.register("v")[0]
    broken = good.append_stage("sabotage", [Gate.x(v)])
    rep = validate_exhaustive(R8, Q8, "ccnot_chain", True, circuit=broken)
    assert not rep.passed
    assert rep.mismatches == 64  # inverted plot disagrees everywhere


def test_sampling_passes_on_correct_circuit():
    rep = validate_sampling(R8, Q8, shots=60_000, seed=4)
    assert rep.passed
    assert rep.mismatches == 0
    assert rep.details["chi2_p_value"] > 0.001
    assert rep.checks == 60_000


def _measured_oracle(r, q):
    # Same shape validate_sampling builds internally: oracle, then read all
    # of v, x, y directly (no transform between oracle and readout).
    from qdotplot import layout_for, readout_bits

    layout = layout_for(r, q, "ccnot_chain")
    c = build_dotplot_circuit(r, q, mcx_mode="ccnot_chain")
    bits = readout_bits(layout)
    readout = [Gate.measure(c.register("v")[0], bits["v"])]
    x, y = c.register("x"), c.register("y")
    readout += [Gate.measure(x[i], bits["x"][i]) for i in range(layout.w)]
    readout += [Gate.measure(y[j], bits["y"][j]) for j in range(layout.h)]
    return c.append_stage("readout", readout)


def test_sampling_catches_value_mutation():
    good = _measured_oracle(R8, Q8)
    v = good.register("v")[0]
    first_measure = next(i for i, g in enumerate(good.gates) if g.kind == "measure")
    gates = good.gates[:first_measure] + (Gate.x(v),) + good.gates[first_measure:]
    marks = tuple(
        (i if i < first_measure else i + 1, l) for i, l in good.stage_marks
    )
    broken = Circuit(
        registers=good.registers,
        gates=gates,
        classical_bits=good.classical_bits,
        stage_marks=marks,
    )
    rep = validate_sampling(R8, Q8, shots=2000, seed=4, circuit=broken)
    assert not rep.passed
    assert rep.mismatches == 2000  # every sampled v is inverted


def test_sampling_catches_nonuniformity():
    good = _measured_oracle(R8, Q8)
    x0 = good.register("x")[0]
    # Stripping one init H pins an index bit: half the cells get no shots.
    drop = next(
        i for i, g in enumerate(good.gates) if g.kind == "h" and g.targets == (x0,)
    )
    gates = good.gates[:drop] + good.gates[drop + 1:]
    marks = tuple((i if i <= drop else i - 1, l) for i, l in good.stage_marks)
    broken = Circuit(
        registers=good.registers,
        gates=gates,
        classical_bits=good.classical_bits,
        stage_marks=marks,
    )
    rep = validate_sampling(R8, Q8, shots=20_000, seed=4, circuit=broken)
    assert not rep.passed
    assert rep.details["chi2_p_value"] <= 0.001


def test_validation_report_serializes():
    rep = validate_exhaustive(R8, Q8)
    raw = json.loads(rep.to_json())
    assert raw["method"] == "exhaustive"
    assert raw["passed"] is True
    assert raw["checks"] == 64


def test_unequal_sizes_validate():
    r = make_sequence(random_codes(RNG, 16, 2))
    q = make_sequence(random_codes(RNG, 4, 2))
    rep = validate_exhaustive(r, q)
    assert rep.passed and rep.checks == 64
    rep2 = validate_sampling(r, q, shots=30_000, seed=6)
    assert rep2.passed
