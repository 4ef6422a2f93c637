"""Flat ``key=value`` experiment configuration with typed validation."""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

__all__ = ["ExperimentConfig", "ConfigError", "RECIPES", "RECIPE_DEFAULTS"]

RECIPES = ("figure1", "vdc-limsup", "interlaced", "metrical", "weighted")
FORMATS = ("csv", "json")

# fill-ins for keys left unset, per recipe
RECIPE_DEFAULTS = {
    "figure1": {"n_max": 32},
    "vdc-limsup": {"n_max": 4096, "p_list": (2.0,)},
    "interlaced": {"s": 1, "n_max": 4096},
    "metrical": {"s": 2, "m": 10, "n_max": 1024, "reps": 100},
    "weighted": {"s": 4, "n_list": (8, 16, 32)},
}


class ConfigError(ValueError):
    pass


def _parse_float_list(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _opt_int(text: str):
    return None if text in ("", "none", "None") else int(text)


def _fmt_list(vals) -> str:
    return ",".join(repr(v) if isinstance(v, float) else str(v) for v in vals)


@dataclass
class ExperimentConfig:
    recipe: str = "figure1"
    b: int = 2
    s: Optional[int] = None
    m: Optional[int] = None
    n_min: int = 2
    n_max: Optional[int] = None
    p_list: tuple = ()
    n_list: tuple = ()
    gamma_file: Optional[str] = None
    delta: float = 1.0
    seed: int = 0
    reps: Optional[int] = None
    out: str = "out"
    fmt: str = "csv"
    base_preset: str = "faure"

    _parsers = {
        "recipe": str,
        "b": int,
        "s": _opt_int,
        "m": _opt_int,
        "n_min": int,
        "n_max": _opt_int,
        "p_list": _parse_float_list,
        "n_list": _parse_int_list,
        "gamma_file": lambda v: None if v in ("", "none", "None") else v,
        "delta": float,
        "seed": int,
        "reps": _opt_int,
        "out": str,
        "fmt": str,
        "base_preset": str,
    }

    def validate(self) -> "ExperimentConfig":
        if self.recipe not in RECIPES:
            raise ConfigError(f"unknown recipe {self.recipe!r}; choose from {', '.join(RECIPES)}")
        for key, val in RECIPE_DEFAULTS[self.recipe].items():
            if getattr(self, key) in (None, ()):
                setattr(self, key, val)
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        for name in ("s", "m", "reps", "n_max"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be positive")
        if self.b < 2:
            raise ConfigError("b must be at least 2")
        if self.n_max is not None and not 1 <= self.n_min <= self.n_max:
            raise ConfigError("need 1 <= n_min <= n_max")
        if any(p < 1 for p in self.p_list):
            raise ConfigError("every p must be >= 1")
        if any(n < 1 for n in self.n_list):
            raise ConfigError("every N must be positive")
        if self.reps is not None and self.reps > 1000:
            raise ConfigError("reps above 1000 are outside desk scale")
        return self

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = _fmt_list(v)
            elif v is None:
                v = "none"
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, **overrides) -> "ExperimentConfig":
        values = {}
        known = {f.name for f in fields(cls)}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                values[key] = cls._parsers[key](val)
            except ValueError as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from exc
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values).validate()

    @classmethod
    def load(cls, path, **overrides) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_text(fh.read(), **overrides)
