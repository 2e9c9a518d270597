"""Run configuration: a key = value text file with command-line overrides."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Union

from .forms import BUILTIN_WEIGHTS, DEFAULT_M, CuspForm, eta_power
from .quadrature import CACHE_ENV

__all__ = ["Config", "ConfigError", "parse_config_text", "parse_family", "parse_complex", "FORMATS"]

FORMATS = ("json", "csv", "pretty")
ALIASES = {"delta": "12", "eta": "1/2", "builtin": ",".join(str(w) for w in BUILTIN_WEIGHTS)}


class ConfigError(ValueError):
    pass


def parse_weight(text: str) -> Union[int, Fraction]:
    """'5.3' -> Fraction(53, 10), '12' -> 12."""
    try:
        w = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad weight {text!r}") from exc
    if w <= 0:
        raise ConfigError(f"weight must be positive: {text!r}")
    return int(w) if w.denominator == 1 else w


def parse_family(text: str) -> List[Union[int, Fraction]]:
    """Comma-separated weights; 'delta', 'eta' and 'builtin' are shorthands."""
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        if not part or part == "none":
            continue
        expanded = ALIASES.get(part, part)
        if "," in expanded:
            out.extend(parse_family(expanded))
        else:
            out.append(parse_weight(expanded))
    return out


def parse_complex(text: str) -> complex:
    """Accepts '-1i', '0.5-2i', '-i', '3' and Python forms like '-1j'."""
    s = str(text).strip().replace(" ", "").replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ConfigError(f"bad complex number {text!r}") from exc


def parse_config_text(text: str) -> Dict[str, str]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


@dataclass
class Config:
    tol: float = 1e-10
    M: int = DEFAULT_M
    depth: int = 3
    family: str = "12,53/10"
    cache_dir: Optional[str] = None
    output: str = "pretty"
    t: str = "-1i"

    def __post_init__(self):
        self.tol = float(self.tol)
        self.M = int(self.M)
        self.depth = int(self.depth)
        if self.cache_dir in ("", "none", "None"):
            self.cache_dir = None
        self.validate()

    def validate(self) -> None:
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.M < 1:
            raise ConfigError("M must be >= 1")
        if not 0 <= self.depth <= 4:
            raise ConfigError("depth must lie in 0..4")
        if len(self.weights) > 4:
            raise ConfigError("a family holds at most 4 forms")
        if self.output not in FORMATS:
            raise ConfigError(f"output must be one of {FORMATS}")
        parse_complex(self.t)

    @property
    def weights(self):
        return parse_family(self.family)

    @property
    def t_value(self) -> complex:
        return parse_complex(self.t)

    def forms(self) -> List[CuspForm]:
        return [eta_power(w, self.M) for w in self.weights]

    def resolved_cache_dir(self) -> Optional[str]:
        return self.cache_dir or os.environ.get(CACHE_ENV)

    def snapshot(self) -> dict:
        d = asdict(self)
        d["cache_dir"] = self.resolved_cache_dir()
        return d

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, **overrides) -> "Config":
        """File values first, then non-None overrides."""
        values: Dict[str, str] = {}
        if path is not None:
            try:
                values.update(parse_config_text(Path(path).read_text()))
            except OSError as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc
