"""OpenQASM 2.0 emission and strict re-ingestion.

The emitter handles circuits already lowered to QASM-expressible gates:
h, x, cx, ccx, swap, u1/u2/u3, rx, ry, cu1 and measure, plus three kinds
that get gate-definition preludes: root-of-X (xrt_*), controlled
root-of-X (cxrt_*), and rxx. Multi-controlled or negative-control gates
must be lowered first. Output is byte-stable: fixed statement order, one
canonical float form (repr), preludes emitted in sorted order only when
used.

The parser accepts exactly the grammar the emitter produces (plus
whitespace/comment freedom) and maps every statement back to the gate kind
that produced it, so gate counts and depth survive a round trip unchanged.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .circuit import Circuit, Gate, QubitRef, Register
from .errors import QasmError

_EXP_NAMES = {
    Fraction(1, 2): "p2", Fraction(-1, 2): "m2",
    Fraction(1, 4): "p4", Fraction(-1, 4): "m4",
    Fraction(1, 8): "p8", Fraction(-1, 8): "m8",
}
_NAME_EXPS = {v: k for k, v in _EXP_NAMES.items()}


def _f(x: float) -> str:
    return repr(float(x))


def _xrt_def(exponent: Fraction) -> str:
    import math
    name = f"xrt_{_EXP_NAMES[exponent]}"
    s = math.pi * float(exponent)
    return (f"gate {name} a {{ u3({_f(s)},{_f(-math.pi / 2)},{_f(math.pi / 2)}) a; }}")


def _cxrt_def(exponent: Fraction) -> str:
    import math
    name = f"cxrt_{_EXP_NAMES[exponent]}"
    g = math.pi * float(exponent)
    half = math.pi / 2
    return (
        f"gate {name} a,b {{ "
        f"u1({_f(g / 2)}) a; u1({_f(half)}) b; cx a,b; "
        f"u3({_f(-g / 2)},0,0) b; cx a,b; u3({_f(g / 2)},{_f(-half)},0) b; }}"
    )


_RXX_DEF = "gate rxx(theta) a,b { h a; h b; cx a,b; u1(theta) b; cx a,b; h b; h a; }"


def _statement(circuit: Circuit, g: Gate, creg: str) -> str:
    def q(ref: QubitRef) -> str:
        return f"{ref.register}[{ref.offset}]"

    kind, label = g.kind, g.label
    operands = [c.qubit for c in g.controls] + list(g.targets)
    ops = ",".join(q(r) for r in operands)
    if kind == "measure":
        return f"measure {q(g.targets[0])} -> {creg}[{g.classical_bit}];"
    if label in ("x", "cx", "ccx", "h", "swap"):
        return f"{label} {ops};"
    if label == "p":
        return f"u1({_f(g.params[0])}) {ops};"
    if label == "cp":
        return f"cu1({_f(g.params[0])}) {ops};"
    if label == "rootx":
        return f"xrt_{_EXP_NAMES[g.exponent]} {ops};"
    if label == "crootx" and g.controls[0].positive:
        return f"cxrt_{_EXP_NAMES[g.exponent]} {ops};"
    if kind in ("u2", "u3", "rx", "ry", "rxx"):
        params = ",".join(_f(p) for p in g.params)
        return f"{kind}({params}) {ops};"
    raise QasmError(
        f"gate {label!r} has no OpenQASM 2.0 form; lower the circuit first"
    )


def qasm_text(circuit: Circuit) -> str:
    """Render a lowered circuit as a complete OpenQASM 2.0 program."""
    creg = "c"
    while any(r.name == creg for r in circuit.registers):
        creg += "_"
    body = [_statement(circuit, g, creg) for g in circuit.gates]

    preludes = set()
    for g in circuit.gates:
        if g.kind == "rootx":
            preludes.add(("cxrt_" if g.controls else "xrt_") + _EXP_NAMES[g.exponent])
        elif g.kind == "rxx":
            preludes.add("rxx")
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    for name in sorted(preludes):
        if name == "rxx":
            lines.append(_RXX_DEF)
        elif name.startswith("xrt_"):
            lines.append(_xrt_def(_NAME_EXPS[name[4:]]))
        else:
            lines.append(_cxrt_def(_NAME_EXPS[name[5:]]))
    for r in circuit.registers:
        lines.append(f"qreg {r.name}[{r.size}];")
    if circuit.classical_bits:
        lines.append(f"creg {creg}[{circuit.classical_bits}];")
    lines.extend(body)
    return "\n".join(lines) + "\n"


def emit_qasm(circuit: Circuit, path) -> None:
    Path(path).write_text(qasm_text(circuit))


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"^\s*(\w+)\s*(?:\(([^)]*)\))?\s*(.*)$")
_OPERAND = re.compile(r"^(\w+)\[(\d+)\]$")

_PI = {"pi": 3.141592653589793}


def _angle(text: str) -> float:
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    # Allow the pi-expression forms QASM tools commonly write.
    if re.fullmatch(r"[-+*/0-9.epi() ]+", text):
        try:
            return float(eval(text, {"__builtins__": {}}, _PI))
        except Exception as exc:
            raise QasmError(f"cannot evaluate angle {text!r}") from exc
    raise QasmError(f"cannot evaluate angle {text!r}")


def parse_qasm(text: str) -> Circuit:
    """Parse a program in the emitter's dialect back into a Circuit.

    Gate-definition preludes are recognized by name (xrt_*, cxrt_*, rxx)
    and skipped; their uses are mapped back to the originating gate kinds.
    """
    # Strip comments, then split into ';'-terminated statements. Gate
    # definitions keep their braced body on one logical statement.
    text = re.sub(r"//[^\n]*", "", text)
    statements = []
    buf = []
    depth = 0
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                buf.append(ch)
                statements.append("".join(buf).strip())
                buf = []
                continue
        if ch == ";" and depth == 0:
            statements.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    if "".join(buf).strip():
        raise QasmError("trailing unterminated statement")

    registers: list[Register] = []
    creg_names: dict[str, int] = {}
    creg_base: dict[str, int] = {}
    classical_bits = 0
    gates: list[Gate] = []
    known_defs: set[str] = set()

    def qubit(tok: str) -> QubitRef:
        m = _OPERAND.fullmatch(tok.strip())
        if not m:
            raise QasmError(f"malformed operand {tok!r}")
        name, off = m.group(1), int(m.group(2))
        for r in registers:
            if r.name == name:
                if off >= r.size:
                    raise QasmError(f"offset {off} out of range for qreg {name}")
                return QubitRef(name, off)
        raise QasmError(f"unknown qreg {name!r}")

    header_seen = False
    for st in statements:
        if not st:
            continue
        if not header_seen:
            if re.fullmatch(r"OPENQASM\s+2\.0", st):
                header_seen = True
                continue
            raise QasmError("program must start with OPENQASM 2.0;")
        if st.startswith("include"):
            continue
        if st.startswith("gate "):
            name = st.split()[1].split("(")[0]
            if name == "rxx" or name[:4] == "xrt_" or name[:5] == "cxrt_":
                known_defs.add(name)
                continue
            raise QasmError(f"unsupported gate definition {name!r}")
        m = _TOKEN.match(st)
        if not m:
            raise QasmError(f"cannot parse statement {st!r}")
        head, params, rest = m.group(1), m.group(2), m.group(3)
        if head == "qreg":
            dm = _OPERAND.fullmatch(st.split(None, 1)[1].strip())
            if not dm:
                raise QasmError(f"malformed qreg declaration {st!r}")
            registers.append(Register(dm.group(1), int(dm.group(2))))
            continue
        if head == "creg":
            dm = _OPERAND.fullmatch(st.split(None, 1)[1].strip())
            if not dm:
                raise QasmError(f"malformed creg declaration {st!r}")
            creg_base[dm.group(1)] = classical_bits
            creg_names[dm.group(1)] = int(dm.group(2))
            classical_bits += int(dm.group(2))
            continue
        if head == "measure":
            dm = re.fullmatch(r"(\S+)\s*->\s*(\w+)\[(\d+)\]", rest.strip())
            if not dm:
                raise QasmError(f"malformed measure {st!r}")
            cname, cbit = dm.group(2), int(dm.group(3))
            if cname not in creg_names or cbit >= creg_names[cname]:
                raise QasmError(f"unknown classical bit {cname}[{cbit}]")
            gates.append(Gate.measure(qubit(dm.group(1)), creg_base[cname] + cbit))
            continue
        operands = [qubit(tok) for tok in rest.split(",")] if rest.strip() else []
        angles = [_angle(a) for a in params.split(",")] if params else []

        if head == "h" and len(operands) == 1:
            gates.append(Gate.h(operands[0]))
        elif head == "x" and len(operands) == 1:
            gates.append(Gate.x(operands[0]))
        elif head == "cx" and len(operands) == 2:
            gates.append(Gate.cx(operands[0], operands[1]))
        elif head == "ccx" and len(operands) == 3:
            gates.append(Gate.ccx(operands[0], operands[1], operands[2]))
        elif head == "swap" and len(operands) == 2:
            gates.append(Gate.swap(operands[0], operands[1]))
        elif head in ("u1", "p") and len(operands) == 1 and len(angles) == 1:
            gates.append(Gate.phase(angles[0], operands[0]))
        elif head in ("cu1", "cp") and len(operands) == 2 and len(angles) == 1:
            gates.append(Gate.cphase(angles[0], operands[0], operands[1]))
        elif head == "u2" and len(operands) == 1 and len(angles) == 2:
            gates.append(Gate.u2(angles[0], angles[1], operands[0]))
        elif head == "u3" and len(operands) == 1 and len(angles) == 3:
            gates.append(Gate.u3(angles[0], angles[1], angles[2], operands[0]))
        elif head == "rx" and len(operands) == 1 and len(angles) == 1:
            gates.append(Gate.rx(angles[0], operands[0]))
        elif head == "ry" and len(operands) == 1 and len(angles) == 1:
            gates.append(Gate.ry(angles[0], operands[0]))
        elif head == "rxx" and len(operands) == 2 and len(angles) == 1:
            gates.append(Gate.rxx(angles[0], operands[0], operands[1]))
        elif head[:4] == "xrt_" and len(operands) == 1:
            if head[4:] not in _NAME_EXPS:
                raise QasmError(f"unknown root gate {head!r}")
            gates.append(Gate.root_x(_NAME_EXPS[head[4:]], operands[0]))
        elif head[:5] == "cxrt_" and len(operands) == 2:
            if head[5:] not in _NAME_EXPS:
                raise QasmError(f"unknown root gate {head!r}")
            gates.append(Gate.root_x(_NAME_EXPS[head[5:]], operands[1], control=operands[0]))
        else:
            raise QasmError(f"unsupported statement {st!r}")

    return Circuit(tuple(registers), tuple(gates), classical_bits)


def read_qasm(path) -> Circuit:
    return parse_qasm(Path(path).read_text())
