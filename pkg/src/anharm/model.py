"""Domain types: potential, quantum state, and run configuration.

The potential is V(r) = m*omega**2*r**2/2 + sum_i v_i * r**(2*i + 2) for
i = 1..M, a radially symmetric even-power well.  Numbers are kept as ints
and Fractions wherever possible so the exact-rational backend stays exact;
JSON configs are parsed with decimal literals mapped to Fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from anharm.errors import ConfigError
from anharm.scalars import ScalarConfig, to_rational

Scalar = int | Fraction | float


def _coerce_number(value, where: str) -> Scalar:
    """Accept ints, Fractions, decimal/ratio strings, and floats."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{where}: cannot parse {value!r} as a number") from exc
    if isinstance(value, float):
        return value
    raise ConfigError(f"{where}: expected a number, got {type(value).__name__}")


def _number_to_json(value: Scalar):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return str(value)
    return value


@dataclass(frozen=True)
class PotentialSpec:
    """Spherically symmetric polynomial well."""

    mass: Scalar = 1
    omega: Scalar = 1
    coefficients: tuple[Scalar, ...] = ()

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)
        if self.mass <= 0:
            raise ConfigError("mass must be positive")
        if self.omega < 0:
            raise ConfigError("omega must be non-negative")
        if self.coefficients:
            if self.coefficients[-1] <= 0:
                raise ConfigError(
                    "the leading anharmonic coefficient must be positive "
                    "so the potential confines"
                )
        elif self.omega == 0:
            raise ConfigError("potential has no well: omega is zero and no "
                              "anharmonic terms were given")

    @property
    def degree(self) -> int:
        """Number M of anharmonic terms; the well is r**(2*M + 2) at infinity."""
        return len(self.coefficients)

    def coefficient(self, i: int) -> Scalar:
        """v_i for the r**(2*i + 2) term, zero beyond the last term."""
        if i < 1:
            raise ValueError("anharmonic coefficients are indexed from 1")
        if i <= len(self.coefficients):
            return self.coefficients[i - 1]
        return 0

    def evaluate(self, r):
        """V(r) in float arithmetic; r may be a numpy array."""
        m = float(self.mass)
        w = float(self.omega)
        r2 = r * r
        v = 0.5 * m * w * w * r2
        power = r2
        for coeff in self.coefficients:
            power = power * r2
            v = v + float(coeff) * power
        return v

    def frequency_scale(self) -> float:
        """Rough frequency scale max(omega, v_i**(1/(2i+2))) used for defaults."""
        scale = float(self.omega)
        for i, coeff in enumerate(self.coefficients, start=1):
            if coeff > 0:
                scale = max(scale, float(coeff) ** (1.0 / (2 * i + 2)))
        return scale

    def to_dict(self) -> dict:
        return {
            "mass": _number_to_json(self.mass),
            "omega": _number_to_json(self.omega),
            "coefficients": [_number_to_json(c) for c in self.coefficients],
        }


@dataclass(frozen=True)
class QuantumState:
    """Radial quantum number n (node count) and angular momentum l."""

    n: int = 0
    l: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ConfigError("n must be a non-negative integer")
        if not isinstance(self.l, int) or self.l < 0:
            raise ConfigError("l must be a non-negative integer")

    @property
    def zeros(self) -> int:
        """Total zero count 2n + l + 1 entering the quantization condition."""
        return 2 * self.n + self.l + 1

    @property
    def centrifugal(self) -> int:
        """Angular barrier strength l*(l + 1)."""
        return self.l * (self.l + 1)

    @property
    def zeros_product(self) -> int:
        """N*(N + 1) for N = 2n + l + 1; recurs throughout the closed forms."""
        return self.zeros * (self.zeros + 1)

    def to_dict(self) -> dict:
        return {"n": self.n, "l": self.l}


@dataclass(frozen=True)
class RunConfig:
    """Fully parsed run setup: what to solve and how to round."""

    potential: PotentialSpec = field(default_factory=PotentialSpec)
    state: QuantumState = field(default_factory=QuantumState)
    order: int = 10
    scalar: ScalarConfig = field(default_factory=ScalarConfig)

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ConfigError("order must be a positive integer")


def parse_potential(data) -> PotentialSpec:
    """Build a PotentialSpec from a mapping or a JSON object string."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("potential config must be a JSON object")
    known = {"mass", "omega", "coefficients"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown potential keys: {sorted(unknown)}")
    coeffs = data.get("coefficients", [])
    if not isinstance(coeffs, (list, tuple)):
        raise ConfigError("coefficients must be a list")
    return PotentialSpec(
        mass=_coerce_number(data.get("mass", 1), "mass"),
        omega=_coerce_number(data.get("omega", 1), "omega"),
        coefficients=tuple(
            _coerce_number(c, f"coefficients[{i}]") for i, c in enumerate(coeffs)
        ),
    )


def parse_config(data) -> RunConfig:
    """Build a RunConfig from a mapping or a JSON object string."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {"mass", "omega", "coefficients", "state", "order", "scalar"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    potential = parse_potential(
        {k: data[k] for k in ("mass", "omega", "coefficients") if k in data}
    )

    state_data = data.get("state", {})
    if not isinstance(state_data, dict):
        raise ConfigError("state must be an object with keys n and l")
    unknown = set(state_data) - {"n", "l"}
    if unknown:
        raise ConfigError(f"unknown state keys: {sorted(unknown)}")
    state = QuantumState(n=state_data.get("n", 0), l=state_data.get("l", 0))

    order = data.get("order", 10)
    if not isinstance(order, int):
        raise ConfigError("order must be an integer")

    scalar_data = data.get("scalar", {})
    if not isinstance(scalar_data, dict):
        raise ConfigError("scalar must be an object with keys backend and digits")
    unknown = set(scalar_data) - {"backend", "digits"}
    if unknown:
        raise ConfigError(f"unknown scalar keys: {sorted(unknown)}")
    scalar = ScalarConfig(
        backend=scalar_data.get("backend", ScalarConfig().backend),
        digits=scalar_data.get("digits", ScalarConfig().digits),
    )

    return RunConfig(potential=potential, state=state, order=order, scalar=scalar)


def load_config(path) -> RunConfig:
    """Read and parse a JSON config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


def config_to_dict(config: RunConfig) -> dict:
    """JSON-serializable form; round-trips through parse_config."""
    out = config.potential.to_dict()
    out["state"] = config.state.to_dict()
    out["order"] = config.order
    out["scalar"] = {"backend": config.scalar.backend, "digits": config.scalar.digits}
    return out


__all__ = [
    "PotentialSpec",
    "QuantumState",
    "RunConfig",
    "ScalarConfig",
    "parse_potential",
    "parse_config",
    "load_config",
    "config_to_dict",
    "to_rational",
]
