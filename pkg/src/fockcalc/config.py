"""Run configuration: a flat ``key=value`` file overridden by CLI flags."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["DEFAULT_TOLERANCES", "RunConfig", "parse_config_text", "load_config"]

DEFAULT_TOLERANCES = {
    "isometry": 1e-8,
    "basis": 1e-8,
    "reproducing": 1e-8,
    "kernel_quad": 1e-8,
    "bargstft1": 1e-6,
    "t0t_inverse": 1e-12,
    "t0t_pointwise": 1e-10,
    "shift": 1e-15,
    "transfer": 1e-6,
    "diagram": 1e-4,
    "covariance": 1e-5,
    "seed_spread": 0.2,
    "nesting": 1e-3,
    "classify": 0.1,
}


@dataclass
class RunConfig:
    d: int = 1
    N: int = 12
    Q: int = 40
    R: float = 8.0
    h: float = 0.125
    seed: int = 0
    t: complex = 1.0
    samples: int = 10
    preset: str | None = None
    symbol: str = "gaussian"
    weight: str = "1"
    out: str | None = None
    tol: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        for k, v in self.tol.items():
            if not v > 0:
                raise ValueError(f"tolerance {k} must be positive, got {v}")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.N < 0:
            raise ValueError("N must be nonnegative")

    def with_overrides(self, values: dict) -> "RunConfig":
        """Return a copy with ``values`` (strings or typed) applied; keys of the
        form ``tol.<name>`` update single tolerances."""
        kw = dataclasses.asdict(self)
        tol = dict(self.tol)
        types = {f.name: f.type for f in dataclasses.fields(self)}
        for key, raw in values.items():
            if raw is None:
                continue
            if key.startswith("tol."):
                tol[key[4:]] = float(raw)
                continue
            if key not in types or key == "tol":
                raise ValueError(f"unknown config key {key!r}")
            kw[key] = _coerce(key, raw)
        kw["tol"] = tol
        return RunConfig(**kw)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        t = complex(self.t)
        out["t"] = [t.real, t.imag]
        out["tol"] = dict(sorted(self.tol.items()))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


_INT = {"d", "N", "Q", "seed", "samples"}
_FLOAT = {"R", "h"}


def _coerce(key: str, raw):
    if not isinstance(raw, str):
        return complex(raw) if key == "t" else raw
    raw = raw.strip()
    if key in _INT:
        return int(raw)
    if key in _FLOAT:
        return float(raw)
    if key == "t":
        return complex(raw.replace(" ", "").replace("i", "j"))
    return raw


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected key=value, got {line!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        cfg = cfg.with_overrides(parse_config_text(Path(path).read_text()))
    return cfg.with_overrides(overrides or {})
