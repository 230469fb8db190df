"""Backend models: qubit count, native gate set, connectivity, gate time.

Three presets ship with the package:

* ``allsim``: 256 all-to-all qubits, a wide native set including Toffoli
  and controlled roots of X, no timing model.
* ``superconducting-53``: 53 qubits on a heavy-hexagon lattice, natives
  {u1, u2, u3, cx}, 130 ns per circuit layer.
* ``ion-40``: 40 all-to-all trapped-ion qubits, natives {rx, ry, rxx},
  20 us per circuit layer.

``u1`` is a legacy name for the phase gate and is normalized to ``p`` on
load so the rest of the package only ever sees one spelling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError

_GATE_ALIASES = {"u1": "p"}

_PRESET_PACKAGE = "qdotplot.presets"


@dataclass(frozen=True)
class BackendModel:
    name: str
    qubit_count: int
    native_gates: tuple[str, ...]
    coupling_map: tuple[tuple[int, int], ...] | None = None
    gate_time_seconds: float | None = None

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ConfigError("backend needs at least one qubit")
        if not self.native_gates:
            raise ConfigError("backend needs a native gate set")
        if self.coupling_map is not None:
            for a, b in self.coupling_map:
                if a == b or not (0 <= a < self.qubit_count) or not (0 <= b < self.qubit_count):
                    raise ConfigError(f"bad coupling edge ({a}, {b})")
            seen = {0}
            stack = [0]
            adj = self.adjacency()
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            if len(seen) != self.qubit_count:
                raise ConfigError(f"coupling map of {self.name!r} is not connected")

    @property
    def all_to_all(self) -> bool:
        return self.coupling_map is None

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Undirected neighbor lists, sorted, for routing."""
        if self.coupling_map is None:
            raise ConfigError(f"backend {self.name!r} has no coupling map")
        nbrs: dict[int, set[int]] = {q: set() for q in range(self.qubit_count)}
        for a, b in self.coupling_map:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return {q: tuple(sorted(s)) for q, s in nbrs.items()}


def _from_dict(raw: dict, fallback_name: str = "backend") -> BackendModel:
    # File schema: name, qubit_count, native_gates, coupling_map (a list of
    # pairs or the string "all"), gate_time_ns (optional).
    try:
        gates = tuple(_GATE_ALIASES.get(g, g) for g in raw["native_gates"])
        coupling = raw.get("coupling_map", "all")
        if coupling == "all" or coupling is None:
            coupling = None
        else:
            coupling = tuple((int(a), int(b)) for a, b in coupling)
        gate_time_ns = raw.get("gate_time_ns")
        if gate_time_ns is not None and float(gate_time_ns) <= 0:
            raise ConfigError("gate_time_ns must be positive")
        return BackendModel(
            name=str(raw.get("name", fallback_name)),
            qubit_count=int(raw["qubit_count"]),
            native_gates=gates,
            coupling_map=coupling,
            gate_time_seconds=None if gate_time_ns is None else float(gate_time_ns) * 1e-9,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed backend description: {exc}") from exc


def builtin_backend_names() -> tuple[str, ...]:
    names = []
    for entry in resources.files(_PRESET_PACKAGE).iterdir():
        if entry.name.endswith(".json"):
            names.append(entry.name[: -len(".json")])
    return tuple(sorted(names))


def load_backend(source) -> BackendModel:
    """Accept a preset name, a JSON file path, or an already-parsed dict."""
    if isinstance(source, BackendModel):
        return source
    if isinstance(source, dict):
        return _from_dict(source)
    source = str(source)
    preset = resources.files(_PRESET_PACKAGE) / f"{source}.json"
    if preset.is_file():
        return _from_dict(json.loads(preset.read_text()), fallback_name=source)
    path = Path(source)
    if path.is_file():
        return _from_dict(json.loads(path.read_text()), fallback_name=path.stem)
    raise ConfigError(
        f"unknown backend {source!r}; presets are {', '.join(builtin_backend_names())}"
    )
