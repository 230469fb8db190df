"""Command-line surface.

Verbs mirror the pipeline stages: encode (sequence encoder only), build
(full pattern-recognition circuit), transpile (lower and route to a
backend), estimate (resource report), simulate (sampled histogram),
validate (both validation procedures), compare-modes (minimizer on/off
comparison). Exit codes: 0 success, 1 a requested validation failed,
2 configuration error, 3 internal error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .backends import BackendModel, load_backend
from .circuit import Circuit
from .decompose import lower_to_native
from .encoder import (
    build_encoder_circuit,
    build_pattern_circuit,
    decode_outcome,
    k_index,
    layout_for,
)
from .errors import ConfigError
from .qasm import emit_qasm
from .reports import compare_encodings, estimate, report_to_json, reports_to_csv
from .routing import route
from .sequences import (
    ALPHABET_PRESETS,
    SymbolSequence,
    map_alphabet,
    pad_pair,
    read_sequence_file,
)
from .simulate import sample
from .validate import validate_exhaustive, validate_sampling

_MODE_FLAGS = {"chain": "ccnot_chain", "single-ancilla": "single_ancilla"}
DEFAULT_SEED = 11


@dataclass
class RunConfig:
    reference_path: str
    query_path: str | None = None
    alphabet: str = "auto"
    mcx_mode: str = "ccnot_chain"
    backend: str = "allsim"
    use_minimizer: bool = True
    out_dir: str = "qdp-out"
    seed: int = DEFAULT_SEED
    shots: int = 100_000


def _load_pair(config: RunConfig) -> tuple[SymbolSequence, SymbolSequence, str]:
    """Read, code, and pad the sequence pair; absent query = self-alignment."""
    preset = None
    if config.alphabet != "auto":
        if config.alphabet not in ALPHABET_PRESETS:
            raise ConfigError(
                f"unknown alphabet {config.alphabet!r}; presets: "
                f"{', '.join(sorted(ALPHABET_PRESETS))} or auto"
            )
        preset = ALPHABET_PRESETS[config.alphabet]
    raw_r = read_sequence_file(config.reference_path, preset)
    name = Path(config.reference_path).stem
    if config.query_path is None:
        raw_q = raw_r
        name += "-self"
    else:
        raw_q = read_sequence_file(config.query_path, preset)
        name += "-" + Path(config.query_path).stem
    table = preset
    if table is None:
        # One shared first-appearance code table across both files.
        table = {}
        for s in raw_r + raw_q:
            table.setdefault(s, len(table))
    r, q = pad_pair(map_alphabet(raw_r, table), map_alphabet(raw_q, table))
    return r, q, name


def _outdir(config: RunConfig) -> Path:
    p = Path(config.out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def run_pipeline(config: RunConfig, validate: bool = False) -> int:
    """ingest -> encode -> build -> lower/route -> estimate, artifacts on disk.

    Returns the process exit code (0, or 1 when a requested validation
    fails)."""
    r, q, dataset = _load_pair(config)
    backend = load_backend(config.backend)
    circuit = build_pattern_circuit(
        r, q, mcx_mode=config.mcx_mode, use_minimizer=config.use_minimizer
    )
    lowered = lower_to_native(circuit, backend, config.mcx_mode)
    if backend.coupling_map is not None:
        lowered = route(lowered, backend)
    report = estimate(lowered, backend, config.mcx_mode, dataset=dataset, assume_lowered=True)
    out = _outdir(config)
    emit_qasm(lowered, out / "qpr.qasm")
    (out / "report.json").write_text(report_to_json(report) + "\n")
    (out / "report.csv").write_text(reports_to_csv([report]))
    status = 0
    if validate:
        m1 = validate_exhaustive(r, q, config.mcx_mode, config.use_minimizer)
        (out / "validation_method1.json").write_text(m1.to_json() + "\n")
        m2 = validate_sampling(
            r, q, shots=config.shots, seed=config.seed,
            mcx_mode=config.mcx_mode, use_minimizer=config.use_minimizer,
        )
        (out / "validation_method2.json").write_text(m2.to_json() + "\n")
        if not (m1.passed and m2.passed):
            status = 1
    click.echo(
        f"dataset={dataset} backend={backend.name} mcx_mode={config.mcx_mode} "
        f"width={report.width} total_depth={report.total_depth}"
        + (
            f" runtime_s={report.estimated_runtime_seconds:.6g}"
            if report.estimated_runtime_seconds is not None
            else ""
        )
    )
    return status


def _common(f):
    f = click.option("--out", "out_dir", default="qdp-out", show_default=True,
                     help="Output directory for artifacts.")(f)
    f = click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)(f)
    f = click.option("--shots", default=100_000, show_default=True, type=int)(f)
    f = click.option("--no-minimize", "no_minimize", is_flag=True,
                     help="Skip cover minimization (brute-force encoder).")(f)
    f = click.option("--mcx-mode", "mcx_mode", default="chain", show_default=True,
                     type=click.Choice(sorted(_MODE_FLAGS)),
                     help="Multi-controlled X lowering strategy.")(f)
    f = click.option("--backend", default="allsim", show_default=True,
                     help="Preset name or backend JSON path.")(f)
    f = click.option("--alphabet", default="auto", show_default=True,
                     help="'auto' or a preset name (dna).")(f)
    f = click.option("--query", "query_path", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Query sequence file; omit to self-align.")(f)
    f = click.option("--reference", "reference_path", required=True,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Reference sequence file (FASTA or raw).")(f)
    return f


def _config(kwargs) -> RunConfig:
    return RunConfig(
        reference_path=kwargs["reference_path"],
        query_path=kwargs["query_path"],
        alphabet=kwargs["alphabet"],
        mcx_mode=_MODE_FLAGS[kwargs["mcx_mode"]],
        backend=kwargs["backend"],
        use_minimizer=not kwargs["no_minimize"],
        out_dir=kwargs["out_dir"],
        seed=kwargs["seed"],
        shots=kwargs["shots"],
    )


def _run(body) -> None:
    try:
        sys.exit(body())
    except (ConfigError, click.ClickException):
        raise
    except Exception as exc:  # surfaced with stage attribution by message
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(3)


class _Cli(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ConfigError as exc:
            click.echo(f"configuration error: {exc}", err=True)
            sys.exit(2)


@click.group(cls=_Cli)
def main():
    """Dot-plot circuit compiler: encode, build, transpile, estimate,
    simulate, validate, compare-modes."""


@main.command()
@_common
def encode(**kwargs):
    """Sequence encoder circuit only (reference sequence)."""
    config = _config(kwargs)

    def body():
        r, _, dataset = _load_pair(config)
        backend = load_backend(config.backend)
        circuit = build_encoder_circuit(r, config.mcx_mode, config.use_minimizer)
        lowered = lower_to_native(circuit, backend, config.mcx_mode)
        if backend.coupling_map is not None:
            lowered = route(lowered, backend)
        report = estimate(lowered, backend, config.mcx_mode,
                          dataset=dataset, assume_lowered=True)
        out = _outdir(config)
        emit_qasm(lowered, out / "encode.qasm")
        (out / "report.json").write_text(report_to_json(report) + "\n")
        click.echo(f"dataset={dataset} width={report.width} "
                   f"neqr_depth={report.depth_per_stage.get('neqr', 0)}")
        return 0

    _run(body)


@main.command()
@_common
def build(**kwargs):
    """Full pattern-recognition circuit, lowered to the backend."""
    config = _config(kwargs)
    _run(lambda: run_pipeline(config, validate=False))


@main.command()
@_common
def transpile(**kwargs):
    """Alias pipeline emphasizing lowering + routing to --backend."""
    config = _config(kwargs)
    _run(lambda: run_pipeline(config, validate=False))


@main.command()
@_common
def estimate_cmd(**kwargs):
    """Resource report (width, stage depths, gate counts, runtime)."""
    config = _config(kwargs)

    def body():
        r, q, dataset = _load_pair(config)
        backend = load_backend(config.backend)
        circuit = build_pattern_circuit(
            r, q, mcx_mode=config.mcx_mode, use_minimizer=config.use_minimizer
        )
        report = estimate(circuit, backend, config.mcx_mode, dataset=dataset)
        out = _outdir(config)
        (out / "report.json").write_text(report_to_json(report) + "\n")
        (out / "report.csv").write_text(reports_to_csv([report]))
        click.echo(reports_to_csv([report]).rstrip())
        return 0

    _run(body)


@main.command()
@_common
def simulate(**kwargs):
    """Sample the pattern circuit and write the outcome histogram."""
    config = _config(kwargs)

    def body():
        r, q, dataset = _load_pair(config)
        circuit = build_pattern_circuit(
            r, q, mcx_mode=config.mcx_mode, use_minimizer=config.use_minimizer
        )
        layout = layout_for(r, q, config.mcx_mode)
        counts = sample(circuit, config.shots, seed=config.seed)
        rows = []
        for key in sorted(counts):
            v, x, y = decode_outcome(key, layout)
            rows.append({
                "v": v, "x": x, "y": y,
                "k": k_index(x, y, 1 << layout.w),
                "count": counts[key],
            })
        rows.sort(key=lambda row: -row["count"])
        out = _outdir(config)
        (out / "histogram.json").write_text(json.dumps(
            {"dataset": dataset, "shots": config.shots, "seed": config.seed,
             "outcomes": rows}, indent=2) + "\n")
        for row in rows[:10]:
            click.echo(f"v={row['v']} k={row['k']:>4} (x={row['x']}, y={row['y']})"
                       f"  count={row['count']}")
        return 0

    _run(body)


@main.command()
@_common
def validate(**kwargs):
    """Run both validation procedures; exit 1 on any failure."""
    config = _config(kwargs)
    _run(lambda: run_pipeline(config, validate=True))


@main.command("compare-modes")
@_common
def compare_modes(**kwargs):
    """Brute-force vs. minimized encoder comparison for the reference."""
    config = _config(kwargs)

    def body():
        r, _, dataset = _load_pair(config)
        backend = load_backend(config.backend)
        cmp = compare_encodings(r, backend)
        out = _outdir(config)
        (out / "comparison.json").write_text(cmp.to_json() + "\n")
        pct = "n/a" if cmp.compression_percent is None else f"{cmp.compression_percent:.2f}%"
        click.echo(f"dataset={dataset}")
        click.echo(f"encoder gates: brute={cmp.brute_mcx} minimized={cmp.minimized_mcx} "
                   f"compression={pct}")
        click.echo(f"chain CCNOTs: brute={cmp.brute_ccnot} minimized={cmp.minimized_ccnot}")
        click.echo(f"neqr depth:   brute={cmp.brute_depth} minimized={cmp.minimized_depth}")
        return 0

    _run(body)


main.add_command(estimate_cmd, name="estimate")

if __name__ == "__main__":
    main()
