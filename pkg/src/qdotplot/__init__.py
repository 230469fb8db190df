"""Quantum dot-plot circuit compiler.

Builds the pattern-recognition circuit for a pair of symbol sequences:
value-encode both sequences over superposed index registers, mark the
matching index pairs, and read the plot structure out through an inverse
Fourier transform. Includes gate-level lowering for several backend gate
sets, connectivity routing, resource estimation, QASM emission, and two
validation procedures (exhaustive bit-propagation and sampled statistics).
"""

from .backends import BackendModel, builtin_backend_names, load_backend
from .circuit import (
    Circuit,
    Control,
    Gate,
    QubitRef,
    Register,
    depth,
    gate_counts,
    stage_depths,
    width,
)
from .decompose import (
    ccx_network,
    decompose_mcx_chain,
    decompose_mcx_single_ancilla,
    lower_to_native,
    rewrite_negative_controls,
)
from .encoder import (
    MCX_MODES,
    DotplotLayout,
    build_dotplot_circuit,
    build_encoder_circuit,
    build_pattern_circuit,
    decode_outcome,
    encode_sequence,
    init_registers,
    inverse_qft,
    k_index,
    layout_for,
    mark_matches,
    quantum_xor,
    readout_bits,
)
from .errors import CircuitError, ConfigError, LoweringError, QasmError
from .logic import (
    Cube,
    McxDescriptor,
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
from .qasm import emit_qasm, parse_qasm, qasm_text, read_qasm
from .reports import (
    CSV_COLUMNS,
    EncodingComparison,
    ResourceReport,
    compare_encodings,
    estimate,
    estimated_runtime,
    report_to_json,
    reports_to_csv,
    width_bounds,
)
from .routing import route
from .sequences import (
    ALPHABET_PRESETS,
    DNA_ALPHABET,
    SymbolSequence,
    map_alphabet,
    pad_pair,
    read_sequence_file,
)
from .simulate import (
    Statevector,
    ToffoliState,
    circuit_unitary,
    sample,
    statevector_run,
    states_equal,
    toffoli_run,
    toffoli_run_batch,
    unitaries_equal,
)
from .validate import (
    DotPlot,
    ValidationReport,
    classical_dotplot,
    validate_exhaustive,
    validate_sampling,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHABET_PRESETS",
    "BackendModel",
    "CSV_COLUMNS",
    "Circuit",
    "CircuitError",
    "ConfigError",
    "Control",
    "Cube",
    "DNA_ALPHABET",
    "DotPlot",
    "DotplotLayout",
    "EncodingComparison",
    "Gate",
    "LoweringError",
    "MCX_MODES",
    "McxDescriptor",
    "PlaTable",
    "QasmError",
    "QubitRef",
    "Register",
    "ResourceReport",
    "Statevector",
    "SymbolSequence",
    "ToffoliState",
    "ValidationReport",
    "brute_force_mcx",
    "build_dotplot_circuit",
    "build_encoder_circuit",
    "build_pattern_circuit",
    "build_pla",
    "builtin_backend_names",
    "ccx_network",
    "circuit_unitary",
    "classical_dotplot",
    "compare_encodings",
    "cubes_to_mcx",
    "d1merge",
    "decode_outcome",
    "decompose_mcx_chain",
    "decompose_mcx_single_ancilla",
    "depth",
    "emit_qasm",
    "encode_sequence",
    "estimate",
    "estimated_runtime",
    "evaluate_all",
    "functional_equal",
    "gate_counts",
    "init_registers",
    "inverse_qft",
    "k_index",
    "layout_for",
    "load_backend",
    "lower_to_native",
    "map_alphabet",
    "mark_matches",
    "pad_pair",
    "parse_qasm",
    "qasm_text",
    "quantum_xor",
    "read_pla",
    "read_qasm",
    "read_sequence_file",
    "readout_bits",
    "report_to_json",
    "reports_to_csv",
    "rewrite_negative_controls",
    "route",
    "sample",
    "stage_depths",
    "statevector_run",
    "states_equal",
    "toffoli_run",
    "toffoli_run_batch",
    "unitaries_equal",
    "validate_exhaustive",
    "validate_sampling",
    "width",
    "width_bounds",
    "write_pla",
]
