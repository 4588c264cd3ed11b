"""Analysis tolerances, with environment-variable overrides for the CLI."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace

ENV_PREFIX = "DEQLENS_"


@dataclass(frozen=True)
class AnalysisConfig:
    grid_resolution: int = 201
    p_tol: float = 1e-9
    tie_tol: float = 1e-12
    membership_tol: float = 1e-9
    singular_rtol: float = 0.0
    signed_strict: bool = False
    normalize: bool = False
    eigensolver: str = "lapack"

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "AnalysisConfig":
        """Defaults, then ``DEQLENS_<FIELD>`` variables, then explicit overrides.

        ``DEQLENS_GRID`` is accepted as a short name for the grid resolution.
        """
        environ = os.environ if environ is None else environ
        cfg = cls()
        raw = {}
        if ENV_PREFIX + "GRID" in environ:
            raw["grid_resolution"] = environ[ENV_PREFIX + "GRID"]
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key in environ:
                raw[f.name] = environ[key]
        parsed = {}
        for f in fields(cls):
            if f.name not in raw:
                continue
            val = raw[f.name]
            default = getattr(cfg, f.name)
            if isinstance(default, bool):
                parsed[f.name] = val.strip().lower() in ("1", "true", "yes", "on")
            else:
                parsed[f.name] = type(default)(val)
        parsed.update({k: v for k, v in overrides.items() if v is not None})
        return replace(cfg, **parsed)

    def to_dict(self) -> dict:
        return asdict(self)
