"""Two-level logic for index-to-data encodings.

A PLA table maps an index register's bits to data bits: one cube per product
term, inputs over {0, 1, -} (MSB first), outputs over {0, 1}. Tables built
from a sequence have one minterm row per index whose element is nonzero; the
minimizer is an exhaustive distance-1 merge (equal outputs only) plus
subsumption, run to a fixpoint, which is the quick-merge mode of classic
two-level minimizers. Cube lists convert 1:1 into multi-controlled-X
descriptors, one gate per (cube, set output bit).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_IN_CHARS = frozenset("01-")
_OUT_CHARS = frozenset("01")


@dataclass(frozen=True, order=True)
class Cube:
    """One product term. inputs/outputs are MSB-first literal strings."""

    inputs: str
    outputs: str

    def __post_init__(self):
        if not set(self.inputs) <= _IN_CHARS:
            raise ValueError(f"cube inputs must be over '01-', got {self.inputs!r}")
        if not self.outputs or not set(self.outputs) <= _OUT_CHARS:
            raise ValueError(f"cube outputs must be over '01', got {self.outputs!r}")
        if "1" not in self.outputs:
            raise ValueError("cube must set at least one output bit")


@dataclass(frozen=True)
class PlaTable:
    n_inputs: int
    n_outputs: int
    cubes: tuple[Cube, ...]

    def __post_init__(self):
        if self.n_inputs < 0 or self.n_outputs < 1:
            raise ValueError("need n_inputs >= 0 and n_outputs >= 1")
        for c in self.cubes:
            if len(c.inputs) != self.n_inputs or len(c.outputs) != self.n_outputs:
                raise ValueError(f"cube {c} does not match table shape "
                                 f"({self.n_inputs} in / {self.n_outputs} out)")


@dataclass(frozen=True)
class McxDescriptor:
    """A multi-controlled X in index-bit space, before wire assignment.

    controls: (index_bit, positive) pairs, index_bit 0 = least significant.
    Empty controls mean an unconditional X. output_bit 0 = least significant
    data bit.
    """

    controls: tuple[tuple[int, bool], ...]
    output_bit: int


def build_pla(codes, d: int) -> PlaTable:
    """Tabulate a coded sequence as index -> value minterms, dropping zeros.

    len(codes) must be a power of two (the index register is full) and every
    code must fit in d bits.
    """
    n_elem = len(codes)
    if n_elem == 0 or n_elem & (n_elem - 1):
        raise ValueError(f"sequence length must be a power of two, got {n_elem}")
    if d < 1:
        raise ValueError("d must be >= 1")
    n = n_elem.bit_length() - 1
    cubes = []
    for idx, code in enumerate(codes):
        if not 0 <= code < (1 << d):
            raise ValueError(f"code {code} at index {idx} does not fit in {d} bits")
        if code == 0:
            continue
        cubes.append(Cube(format(idx, f"0{n}b"), format(code, f"0{d}b")))
    return PlaTable(n, d, tuple(cubes))


def _merge_pass(cubes: list[tuple[str, str]]) -> tuple[list[tuple[str, str]], bool]:
    # One deterministic sweep: cubes in lex order; each unconsumed cube merges
    # with the first earlier-indexed partner at distance 1 with equal outputs.
    index: dict[tuple, list[int]] = {}
    for i, (ins, outs) in enumerate(cubes):
        for p, lit in enumerate(ins):
            if lit != "-":
                index.setdefault((outs, p, ins[:p], ins[p + 1:]), []).append(i)
    consumed = [False] * len(cubes)
    out = []
    changed = False
    for i, (ins, outs) in enumerate(cubes):
        if consumed[i]:
            continue
        hit = None
        for p, lit in enumerate(ins):
            if lit == "-":
                continue
            for j in index.get((outs, p, ins[:p], ins[p + 1:]), ()):
                if j != i and not consumed[j] and cubes[j][0][p] not in ("-", lit):
                    hit = (j, p)
                    break
            if hit:
                break
        consumed[i] = True
        if hit:
            j, p = hit
            consumed[j] = True
            out.append((ins[:p] + "-" + ins[p + 1:], outs))
            changed = True
        else:
            out.append((ins, outs))
    deduped = sorted(set(out))
    return deduped, changed or len(deduped) < len(cubes)


def _covers(big: str, small: str) -> bool:
    return all(b == "-" or b == s for b, s in zip(big, small))


def _subsume_pass(cubes: list[tuple[str, str]]) -> tuple[list[tuple[str, str]], bool]:
    by_out: dict[str, list[str]] = {}
    for ins, outs in cubes:
        by_out.setdefault(outs, []).append(ins)
    keep = []
    changed = False
    for ins, outs in cubes:
        if any(other != ins and _covers(other, ins) for other in by_out[outs]):
            changed = True
        else:
            keep.append((ins, outs))
    return keep, changed


def d1merge(table: PlaTable) -> PlaTable:
    """Exhaustive distance-1 merge plus subsumption, to a fixpoint.

    Only cubes with identical outputs merge, so the computed function is
    preserved exactly; the result is idempotent under re-minimization.
    """
    cubes = sorted(set((c.inputs, c.outputs) for c in table.cubes))
    while True:
        any_change = False
        while True:
            cubes, changed = _merge_pass(cubes)
            any_change |= changed
            if not changed:
                break
        cubes, changed = _subsume_pass(cubes)
        any_change |= changed
        if not any_change:
            break
    return PlaTable(table.n_inputs, table.n_outputs,
                    tuple(Cube(i, o) for i, o in sorted(cubes)))


def evaluate_all(table: PlaTable) -> np.ndarray:
    """Output mask for every input value, as an int array of length 2^n."""
    if table.n_inputs > 22:
        raise ValueError("exhaustive evaluation capped at 22 inputs")
    n = table.n_inputs
    values = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for c in table.cubes:
        care = val = 0
        for p, lit in enumerate(c.inputs):
            if lit != "-":
                care |= 1 << (n - 1 - p)
                if lit == "1":
                    val |= 1 << (n - 1 - p)
        out[(values & care) == val] |= int(c.outputs, 2)
    return out


def functional_equal(a: PlaTable, b: PlaTable) -> bool:
    """Exhaustive truth-table equality over all 2^n inputs."""
    if a.n_inputs != b.n_inputs or a.n_outputs != b.n_outputs:
        return False
    return bool(np.array_equal(evaluate_all(a), evaluate_all(b)))


def cubes_to_mcx(table: PlaTable) -> tuple[McxDescriptor, ...]:
    """One MCX descriptor per (cube, set output bit), in cube then bit order.

    DASH literals contribute no control; a fully dashed cube becomes an
    unconditional X on each set output bit. Gates from one cube share the
    same control tuple.
    """
    n, d = table.n_inputs, table.n_outputs
    out = []
    for c in table.cubes:
        controls = tuple(
            (n - 1 - p, lit == "1")
            for p, lit in enumerate(c.inputs)
            if lit != "-"
        )
        for p, lit in enumerate(c.outputs):
            if lit == "1":
                out.append(McxDescriptor(controls, d - 1 - p))
    return tuple(out)


def brute_force_mcx(table: PlaTable) -> tuple[McxDescriptor, ...]:
    """Direct row-per-gate mapping of an unminimized table."""
    return cubes_to_mcx(table)


def write_pla(table: PlaTable) -> str:
    lines = [f".i {table.n_inputs}", f".o {table.n_outputs}", f".p {len(table.cubes)}"]
    lines += [f"{c.inputs} {c.outputs}" for c in table.cubes]
    lines.append(".e")
    return "\n".join(lines) + "\n"


def read_pla(text: str) -> PlaTable:
    n_inputs = n_outputs = None
    declared = None
    cubes = []
    ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise ValueError(f"line {lineno}: content after .e")
        if line.startswith("."):
            parts = line.split()
            if parts[0] == ".i":
                n_inputs = int(parts[1])
            elif parts[0] == ".o":
                n_outputs = int(parts[1])
            elif parts[0] == ".p":
                declared = int(parts[1])
            elif parts[0] == ".e":
                ended = True
            else:
                raise ValueError(f"line {lineno}: unsupported directive {parts[0]!r}")
            continue
        if n_inputs is None or n_outputs is None:
            raise ValueError(f"line {lineno}: cube before .i/.o header")
        parts = line.split()
        if len(parts) != 2 and not (n_inputs == 0 and len(parts) == 1):
            raise ValueError(f"line {lineno}: expected '<inputs> <outputs>'")
        ins, outs = ("", parts[0]) if len(parts) == 1 else (parts[0], parts[1])
        if len(ins) != n_inputs or len(outs) != n_outputs:
            raise ValueError(f"line {lineno}: cube width does not match header")
        cubes.append(Cube(ins, outs))
    if n_inputs is None or n_outputs is None or not ended:
        raise ValueError("PLA text needs .i, .o, and .e")
    if declared is not None and declared != len(cubes):
        raise ValueError(f".p declares {declared} cubes but {len(cubes)} present")
    return PlaTable(n_inputs, n_outputs, tuple(cubes))
