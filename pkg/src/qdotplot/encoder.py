"""Builders for dot-plot circuits.

Register layout, in declaration order: |x> (reference index, w qubits),
|dr> (reference data, d), |y> (query index, h), |dq> (query data, d),
|v> (match value, 1), plus a chain-mode ancilla pool. The pipeline stages
are marked "init" (Hadamards or pinned-index X gates), "neqr" (one
index-controlled encoder per sequence), "dotplot" (d CNOTs computing
dr XOR dq into dq, then one zero-controlled mark onto v), and "qft"
(inverse Fourier transform over (y, x) with x as the low-order bits, so a
measured transform index k decomposes as k = y*W + x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Control, Gate, Register
from .logic import build_pla, cubes_to_mcx, d1merge
from .sequences import SymbolSequence

MCX_MODES = ("ccnot_chain", "single_ancilla")


@dataclass(frozen=True)
class DotplotLayout:
    """Register shape for an aligned pair: 2^w by 2^h plot, d data bits."""

    w: int
    h: int
    d: int
    mcx_mode: str = "ccnot_chain"

    def __post_init__(self):
        if self.w < 1 or self.h < 1 or self.d < 1:
            raise ValueError("layout needs w, h, d >= 1")
        if self.mcx_mode not in MCX_MODES:
            raise ValueError(f"mcx_mode must be one of {MCX_MODES}")

    @property
    def n_ancilla(self) -> int:
        # Largest control set is max(w, h) (an encoder minterm) or d (the
        # mark gate); a c-control chain needs c-2 scratch qubits, the
        # single-ancilla recursion exactly one.
        biggest = max(self.w, self.h, self.d)
        if biggest < 3:
            return 0
        return biggest - 2 if self.mcx_mode == "ccnot_chain" else 1

    def registers(self) -> tuple[Register, ...]:
        regs = [
            Register("x", self.w, "index"),
            Register("dr", self.d, "data"),
            Register("y", self.h, "index"),
            Register("dq", self.d, "data"),
            Register("v", 1, "value"),
        ]
        if self.n_ancilla:
            regs.append(Register("anc", self.n_ancilla, "ancilla"))
        return tuple(regs)


def layout_for(r: SymbolSequence, q: SymbolSequence, mcx_mode: str = "ccnot_chain") -> DotplotLayout:
    if r.d != q.d:
        raise ValueError("sequences must share one data width; run pad_pair first")
    return DotplotLayout(r.index_bits, q.index_bits, r.d, mcx_mode)


def init_registers(layout: DotplotLayout, pinned: tuple[int, int] | None = None) -> Circuit:
    """Declare registers and the init stage.

    Default init puts both index registers in uniform superposition. With
    pinned=(x_value, y_value) the stage instead prepares that one basis
    index with X gates, which keeps the circuit Toffoli-simulable.
    """
    circuit = Circuit(layout.registers())
    x, y = circuit.register("x"), circuit.register("y")
    gates = []
    if pinned is None:
        gates += [Gate.h(q) for q in x.refs()]
        gates += [Gate.h(q) for q in y.refs()]
    else:
        xv, yv = pinned
        if not 0 <= xv < (1 << layout.w) or not 0 <= yv < (1 << layout.h):
            raise ValueError(f"pinned index {pinned} out of range")
        gates += [Gate.x(x[k]) for k in range(layout.w) if (xv >> k) & 1]
        gates += [Gate.x(y[k]) for k in range(layout.h) if (yv >> k) & 1]
    return circuit.append_stage("init", gates)


def encode_sequence(
    circuit: Circuit,
    seq: SymbolSequence,
    index_reg: str,
    data_reg: str,
    use_minimizer: bool = True,
) -> Circuit:
    """Append the index-controlled value encoder for one sequence.

    The data register must still be in |0..0>; every element's code is
    written by multi-controlled X gates keyed on the index register, one
    gate per (cube, set data bit) after optional cover minimization.
    """
    index = circuit.register(index_reg)
    data = circuit.register(data_reg)
    if (1 << index.size) != len(seq.codes):
        raise ValueError(
            f"register {index_reg!r} indexes {1 << index.size} elements "
            f"but sequence has {len(seq.codes)}"
        )
    if data.size != seq.d:
        raise ValueError(f"register {data_reg!r} holds {data.size} bits but d={seq.d}")
    table = build_pla(seq.codes, seq.d)
    if use_minimizer:
        table = d1merge(table)
    gates = []
    for desc in cubes_to_mcx(table):
        target = data[desc.output_bit]
        if desc.controls:
            controls = [Control(index[bit], positive) for bit, positive in desc.controls]
            gates.append(Gate.mcx(controls, target))
        else:
            gates.append(Gate.x(target))
    return circuit.append_stage("neqr", gates)


def quantum_xor(circuit: Circuit, src: str = "dr", dst: str = "dq") -> Circuit:
    """Append bitwise XOR of src into dst: d CNOTs, stage "dotplot"."""
    a, b = circuit.register(src), circuit.register(dst)
    if a.size != b.size:
        raise ValueError("xor registers must have equal size")
    return circuit.append_stage("dotplot", [Gate.cx(a[k], b[k]) for k in range(a.size)])

def mark_matches(circuit: Circuit, data: str = "dq", value: str = "v") -> Circuit:
    """Append the zero-controlled mark: v flips iff every data bit is 0."""
    d = circuit.register(data)
    controls = [Control(d[k], positive=False) for k in range(d.size)]
    return circuit.append_stage("dotplot", [Gate.mcx(controls, circuit.register(value)[0])])


def build_dotplot_circuit(
    r: SymbolSequence,
    q: SymbolSequence,
    mcx_mode: str = "ccnot_chain",
    use_minimizer: bool = True,
    pinned: tuple[int, int] | None = None,
) -> Circuit:
    """Full match oracle: init, both encoders, XOR, mark. No measurements.

    After it runs, v = 1 exactly on index pairs (x, y) with S_R[x] = S_Q[y].
    """
    layout = layout_for(r, q, mcx_mode)
    c = init_registers(layout, pinned=pinned)
    c = encode_sequence(c, r, "x", "dr", use_minimizer)
    c = encode_sequence(c, q, "y", "dq", use_minimizer)
    c = quantum_xor(c)
    c = mark_matches(c)
    return c


def build_encoder_circuit(
    seq: SymbolSequence,
    mcx_mode: str = "ccnot_chain",
    use_minimizer: bool = True,
    pinned: int | None = None,
) -> Circuit:
    """Standalone encoder for one sequence: index register, data register,
    ancilla pool, init stage, one neqr stage. Used for encoder-only
    inspection and minimizer comparisons."""
    if mcx_mode not in MCX_MODES:
        raise ValueError(f"mcx_mode must be one of {MCX_MODES}")
    n = seq.index_bits
    regs = [Register("x", n, "index"), Register("dr", seq.d, "data")]
    if n >= 3:
        regs.append(Register("anc", n - 2 if mcx_mode == "ccnot_chain" else 1, "ancilla"))
    circuit = Circuit(tuple(regs))
    x = circuit.register("x")
    if pinned is None:
        init = [Gate.h(q) for q in x.refs()]
    else:
        if not 0 <= pinned < (1 << n):
            raise ValueError(f"pinned index {pinned} out of range")
        init = [Gate.x(x[k]) for k in range(n) if (pinned >> k) & 1]
    circuit = circuit.append_stage("init", init)
    return encode_sequence(circuit, seq, "x", "dr", use_minimizer)


def _inverse_qft_gates(qubits) -> list[Gate]:
    # Adjoint of the textbook transform cascade, relabeled so the bit-order
    # reversal swaps land at the end. qubits[0] is the least significant bit.
    n = len(qubits)
    fwd = []
    for j in reversed(range(n)):
        fwd.append(("h", j))
        for k in reversed(range(j)):
            fwd.append(("cp", math.pi / 2 ** (j - k), k, j))
    gates = []
    for item in reversed(fwd):
        if item[0] == "h":
            gates.append(Gate.h(qubits[n - 1 - item[1]]))
        else:
            _, angle, k, j = item
            gates.append(Gate.cphase(-angle, qubits[n - 1 - k], qubits[n - 1 - j]))
    for i in range(n // 2):
        gates.append(Gate.swap(qubits[i], qubits[n - 1 - i]))
    return gates


def inverse_qft(circuit: Circuit, qubits) -> Circuit:
    """Append the inverse Fourier transform over the given qubits (LSB first).

    n Hadamards, n(n-1)/2 controlled phases with angles -pi/2^k, and
    floor(n/2) terminal swaps.
    """
    return circuit.append_stage("qft", _inverse_qft_gates(tuple(qubits)))


def k_index(x: int, y: int, width: int) -> int:
    """Transform-domain index of plot cell (x, y): k = y*W + x."""
    return y * width + x


def readout_bits(layout: DotplotLayout) -> dict:
    """Classical bit assignment shared by all samplers: v, then x, then y."""
    return {
        "v": 0,
        "x": tuple(range(1, 1 + layout.w)),
        "y": tuple(range(1 + layout.w, 1 + layout.w + layout.h)),
    }


def build_pattern_circuit(
    r: SymbolSequence,
    q: SymbolSequence,
    mcx_mode: str = "ccnot_chain",
    use_minimizer: bool = True,
) -> Circuit:
    """Dot-plot oracle followed by value readout, inverse QFT, index readout.

    Measuring v first leaves the index registers in a superposition of only
    the matching (or only the non-matching) cells; the inverse transform
    over (y, x) then concentrates structured plots onto few k values.
    """
    layout = layout_for(r, q, mcx_mode)
    c = build_dotplot_circuit(r, q, mcx_mode=mcx_mode, use_minimizer=use_minimizer)
    bits = readout_bits(layout)
    c = c.append_stage("dotplot", [Gate.measure(c.register("v")[0], bits["v"])])
    c = inverse_qft(c, c.register("x").refs() + c.register("y").refs())
    x, y = c.register("x"), c.register("y")
    readout = [Gate.measure(x[i], bits["x"][i]) for i in range(layout.w)]
    readout += [Gate.measure(y[j], bits["y"][j]) for j in range(layout.h)]
    return c.append_stage("readout", readout)


def decode_outcome(key: tuple, layout: DotplotLayout) -> tuple[int, int, int]:
    """Map a sampled classical tuple to (v, x, y)."""
    bits = readout_bits(layout)
    v = key[bits["v"]]
    x = sum((key[b] & 1) << i for i, b in enumerate(bits["x"]))
    y = sum((key[b] & 1) << j for j, b in enumerate(bits["y"]))
    return v, x, y
