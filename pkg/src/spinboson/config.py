"""Run configuration: an INI-style file with ``model``, ``bath``, ``initial``,
``grid`` and ``run`` sections.

Example::

    [model]
    alpha = 1.0
    beta = 0.0
    omegas = 1.0
    couplings = 0.4
    cutoffs = 32

    [bath]
    kind = thermal      ; vacuum | fock | coherent | thermal
    theta = 2.0         ; inverse temperature (thermal)
    occupations = 0     ; per mode (fock)
    amplitudes = 0.3    ; per mode, complex allowed (coherent)

    [initial]
    bloch = 1, 0, 0

    [grid]
    t_max = 20
    steps = 200

    [run]
    method = closed_form   ; closed_form | oracle | both
    seed = 12345
    tolerance = 1e-10
    out = results

List-valued keys are comma separated. Complex numbers use Python syntax
(``0.2+0.1j``).
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .dynamics import BathState, QubitState, coherent_state, fock_state, thermal_state, vacuum_state
from .fock import FockSpace
from .model import ModelParams, ValidationError

METHODS = ("closed_form", "oracle", "both")
BATH_KINDS = ("vacuum", "fock", "coherent", "thermal")


class ConfigError(ValueError):
    """Malformed or invalid configuration."""


@dataclass(frozen=True)
class BathSpec:
    kind: str = "vacuum"
    theta: float | None = None
    occupations: tuple[int, ...] | None = None
    amplitudes: tuple[complex, ...] | None = None

    def build(self, params: ModelParams) -> BathState:
        space = params.space
        if self.kind == "vacuum":
            return vacuum_state(space)
        if self.kind == "fock":
            return fock_state(space, self.occupations or [0] * space.n_modes)
        if self.kind == "coherent":
            return coherent_state(space, self.amplitudes or [0] * space.n_modes)
        if self.kind == "thermal":
            return thermal_state(space, params.omegas, self.theta)
        raise ConfigError(f"unknown bath kind {self.kind!r}")


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    bath: BathSpec = field(default_factory=BathSpec)
    bloch: tuple[float, float, float] = (0.0, 0.0, 1.0)
    t_max: float = 10.0
    steps: int = 100
    method: str = "closed_form"
    seed: int = 12345
    tolerance: float = 1e-10
    out: str = "results"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.bath.kind not in BATH_KINDS:
            raise ConfigError(f"bath kind must be one of {BATH_KINDS}, got {self.bath.kind!r}")
        if self.bath.kind == "thermal" and (self.bath.theta is None or not self.bath.theta > 0):
            raise ConfigError("thermal bath needs theta > 0")
        if not np.isfinite(self.t_max) or self.t_max < 0:
            raise ConfigError(f"t_max must be finite and >= 0, got {self.t_max}")
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be > 0, got {self.tolerance}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if np.linalg.norm(self.bloch) > 1 + 1e-12:
            raise ConfigError(f"Bloch vector {self.bloch} is longer than 1")

    def initial_state(self) -> QubitState:
        return QubitState.from_bloch(self.bloch)

    def bath_state(self, params: ModelParams | None = None) -> BathState:
        try:
            return self.bath.build(params or self.params)
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc

    def doubled(self, factor: int = 2) -> "RunConfig":
        return replace(self, params=self.params.with_space(self.params.space.doubled(factor)))

    def to_dict(self) -> dict[str, Any]:
        p = self.params
        bath = {k: v for k, v in asdict(self.bath).items() if v is not None}
        if "amplitudes" in bath:
            bath["amplitudes"] = [_complex_str(a) for a in bath["amplitudes"]]
        return {
            "model": {
                "alpha": p.alpha,
                "beta": p.beta,
                "omegas": p.omegas.tolist(),
                "couplings": [_complex_str(g) for g in p.couplings],
                "cutoffs": list(p.space.cutoffs),
            },
            "bath": bath,
            "initial": {"bloch": list(self.bloch)},
            "grid": {"t_max": self.t_max, "steps": self.steps},
            "run": {
                "method": self.method,
                "seed": self.seed,
                "tolerance": self.tolerance,
                "out": self.out,
            },
        }


def _complex_str(z: complex) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else repr(z).strip("()")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _complexes(text: str) -> list[complex]:
    return [complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def parse_config(text: str, overrides: dict[str, str] | None = None) -> RunConfig:
    """Parse INI text; ``overrides`` maps ``section.key`` to a replacement value."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    for dotted, value in (overrides or {}).items():
        section, _, key = dotted.partition(".")
        if not key:
            raise ConfigError(f"override {dotted!r} must look like section.key")
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, str(value))

    def get(section: str, key: str, default: str | None = None) -> str | None:
        return cp.get(section, key, fallback=default)

    try:
        if not cp.has_section("model"):
            raise ConfigError("config needs a [model] section")
        omegas = _floats(get("model", "omegas", "1.0"))
        couplings = _complexes(get("model", "couplings", "0"))
        cutoffs = _ints(get("model", "cutoffs", "32"))
        params = ModelParams.build(
            float(get("model", "alpha", "0")),
            float(get("model", "beta", "0")),
            omegas,
            couplings,
            cutoffs,
        )
        kind = get("bath", "kind", "vacuum")
        theta = get("bath", "theta")
        occ = get("bath", "occupations")
        amps = get("bath", "amplitudes")
        bath = BathSpec(
            kind=kind,
            theta=float(theta) if theta is not None else None,
            occupations=tuple(_ints(occ)) if occ is not None else None,
            amplitudes=tuple(_complexes(amps)) if amps is not None else None,
        )
        bloch = tuple(_floats(get("initial", "bloch", "0, 0, 1")))
        if len(bloch) != 3:
            raise ConfigError(f"Bloch vector needs 3 components, got {len(bloch)}")
        config = RunConfig(
            params=params,
            bath=bath,
            bloch=bloch,
            t_max=float(get("grid", "t_max", "10")),
            steps=int(get("grid", "steps", "100")),
            method=get("run", "method", "closed_form"),
            seed=int(get("run", "seed", "12345")),
            tolerance=float(get("run", "tolerance", "1e-10")),
            out=get("run", "out", "results"),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    # fail early on bath states that cannot be represented at these cutoffs
    config.bath_state()
    return config


def load_config(path: str | Path, overrides: dict[str, str] | None = None) -> RunConfig:
    return parse_config(Path(path).read_text(), overrides)


def shipped_configs() -> dict[str, str]:
    """Name -> INI text of the example configurations bundled with the package."""
    root = resources.files("spinboson") / "configs"
    return {
        entry.name.removesuffix(".ini"): entry.read_text()
        for entry in sorted(root.iterdir(), key=lambda e: e.name)
        if entry.name.endswith(".ini")
    }
