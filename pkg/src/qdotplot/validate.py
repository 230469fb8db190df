"""Classical dot-plot oracle and the two circuit validation procedures.

Method 1 (exhaustive): pin the index registers to every (x, y) basis pair,
propagate bits through the match oracle, and compare v against the
classical plot. In chain mode the circuit is first lowered to
{x, cx, ccx}, so the Toffoli decomposition itself is under test; the
single-ancilla lowering produces root-of-X gates a bit-propagation engine
cannot run, so that mode is checked at the multi-controlled gate level
(its decomposition is covered by the dense-matrix oracles).

Method 2 (sampling): run the full superposed circuit, measure v and both
index registers, assert every sampled (x, y, v) agrees with the classical
plot, and chi-square test the (x, y) marginal for uniformity.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import chi2

from .backends import BackendModel
from .circuit import Circuit, Gate
from .decompose import lower_to_native
from .encoder import build_dotplot_circuit, layout_for, readout_bits
from .sequences import SymbolSequence
from .simulate import sample, toffoli_run_batch

# Wide virtual target whose native set a bit-propagation engine can run.
TOFFOLI_BACKEND = BackendModel(
    name="toffoli",
    qubit_count=63,
    native_gates=("x", "cx", "ccx", "swap"),
)


@dataclass(frozen=True)
class DotPlot:
    """W x H binary match matrix; pixel(x, y) = 1 iff S_R[x] == S_Q[y]."""

    pixels: np.ndarray  # shape (H, W), row y, column x

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def pixel(self, x: int, y: int) -> int:
        return int(self.pixels[y, x])


def classical_dotplot(r: SymbolSequence, q: SymbolSequence) -> DotPlot:
    """Exhaustive W*H comparison."""
    rc = np.asarray(r.codes)
    qc = np.asarray(q.codes)
    return DotPlot((qc[:, None] == rc[None, :]).astype(np.uint8))


@dataclass(frozen=True)
class ValidationReport:
    method: str
    passed: bool
    checks: int
    mismatches: int
    first_counterexample: tuple | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        raw = asdict(self)
        if raw["first_counterexample"] is not None:
            raw["first_counterexample"] = list(raw["first_counterexample"])
        return json.dumps(raw, indent=2, sort_keys=True)


def validate_exhaustive(
    r: SymbolSequence,
    q: SymbolSequence,
    mcx_mode: str = "ccnot_chain",
    use_minimizer: bool = True,
    circuit: Circuit | None = None,
) -> ValidationReport:
    """Method 1: bit-exact check of every index pair against the oracle.

    The circuit is built once with both index registers pinned to zero (so
    the init stage is empty) and each (x, y) pair is supplied as the input
    basis state of a batched bit-propagation run.
    """
    plot = classical_dotplot(r, q)
    if circuit is None:
        circuit = build_dotplot_circuit(
            r, q, mcx_mode=mcx_mode, use_minimizer=use_minimizer, pinned=(0, 0)
        )
        if mcx_mode == "ccnot_chain":
            circuit = lower_to_native(circuit, TOFFOLI_BACKEND, mcx_mode)
    wf, hf = plot.width, plot.height
    x0 = circuit.wire(circuit.register("x")[0])
    y0 = circuit.wire(circuit.register("y")[0])
    v0 = circuit.wire(circuit.register("v")[0])
    ys, xs = np.mgrid[0:hf, 0:wf]
    initials = (xs.astype(np.uint64) << np.uint64(x0)) | (
        ys.astype(np.uint64) << np.uint64(y0)
    )
    bits, _ = toffoli_run_batch(circuit, initials.ravel())
    got = ((bits >> np.uint64(v0)) & np.uint64(1)).astype(np.uint8)
    want = plot.pixels.ravel()
    bad = np.nonzero(got != want)[0]
    first = None
    if bad.size:
        k = int(bad[0])
        first = (k % wf, k // wf, int(got[k]), int(want[k]))
    return ValidationReport(
        method="exhaustive",
        passed=bad.size == 0,
        checks=int(got.size),
        mismatches=int(bad.size),
        first_counterexample=first,
        details={
            "mcx_mode": mcx_mode,
            "use_minimizer": use_minimizer,
            "plot_shape": [wf, hf],
        },
    )


def validate_sampling(
    r: SymbolSequence,
    q: SymbolSequence,
    shots: int = 100_000,
    seed: int = 11,
    mcx_mode: str = "ccnot_chain",
    use_minimizer: bool = True,
    significance: float = 0.001,
    circuit: Circuit | None = None,
) -> ValidationReport:
    """Method 2: sampled check of the superposed circuit.

    Fails if any sampled (x, y, v) disagrees with the classical plot or if
    the chi-square p-value of the (x, y) marginal drops to the significance
    level or below.
    """
    plot = classical_dotplot(r, q)
    layout = layout_for(r, q, mcx_mode)
    if circuit is None:
        circuit = build_dotplot_circuit(r, q, mcx_mode=mcx_mode, use_minimizer=use_minimizer)
        bits = readout_bits(layout)
        readout = [Gate.measure(circuit.register("v")[0], bits["v"])]
        x, y = circuit.register("x"), circuit.register("y")
        readout += [Gate.measure(x[i], bits["x"][i]) for i in range(layout.w)]
        readout += [Gate.measure(y[j], bits["y"][j]) for j in range(layout.h)]
        circuit = circuit.append_stage("readout", readout)
    counts = sample(circuit, shots, seed=seed)
    bits = readout_bits(layout)
    wf, hf = plot.width, plot.height
    cells = np.zeros((hf, wf), dtype=np.int64)
    mismatches = 0
    first = None
    for key in sorted(counts):
        n = counts[key]
        v = key[bits["v"]]
        xv = sum((key[b] & 1) << i for i, b in enumerate(bits["x"]))
        yv = sum((key[b] & 1) << j for j, b in enumerate(bits["y"]))
        cells[yv, xv] += n
        if v != plot.pixel(xv, yv):
            mismatches += n
            if first is None:
                first = (xv, yv, v, plot.pixel(xv, yv))
    expected = shots / (wf * hf)
    stat = float(((cells - expected) ** 2 / expected).sum())
    dof = wf * hf - 1
    p_value = float(chi2.sf(stat, dof))
    uniform_ok = p_value > significance
    return ValidationReport(
        method="sampling",
        passed=mismatches == 0 and uniform_ok,
        checks=shots,
        mismatches=mismatches,
        first_counterexample=first,
        details={
            "mcx_mode": mcx_mode,
            "use_minimizer": use_minimizer,
            "plot_shape": [wf, hf],
            "chi2_statistic": stat,
            "chi2_dof": dof,
            "chi2_p_value": p_value,
            "min_cell_count": int(cells.min()),
            "shots": shots,
            "seed": seed,
        },
    )
