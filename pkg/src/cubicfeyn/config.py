"""Tolerances and enumeration bounds, held in a single record."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import InvariantError, ParseError

ENV_VAR = "CUBICFEYN_CONFIG"
HARD_MAX_LOOP_ORDER = 5


@dataclass(frozen=True)
class Config:
    max_loop_order: int = 4
    det_floor: float = 1e-10
    symmetry_tol: float = 1e-12
    series_rel_tol: float = 1e-10
    quad_rel_tol: float = 1e-8
    link_tol: float = 1e-3
    rng_seed: int = 20240917
    max_pairing_degree: int = 24

    def __post_init__(self):
        if not 1 <= self.max_loop_order <= HARD_MAX_LOOP_ORDER:
            raise InvariantError(
                "max_loop_order", f"1 <= max_loop_order <= {HARD_MAX_LOOP_ORDER}",
                f"got {self.max_loop_order}")
        for name in ("det_floor", "symmetry_tol", "series_rel_tol",
                     "quad_rel_tol", "link_tol"):
            if not getattr(self, name) > 0:
                raise InvariantError(name, "tolerance must be positive")
        if self.max_pairing_degree < 0 or self.max_pairing_degree % 2:
            raise InvariantError("max_pairing_degree", "non-negative even integer")

    def replace(self, **changes) -> Config:
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, data: dict) -> Config:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> Config:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError("config must be a JSON object")
        return cls.from_dict(data)


def resolve_config(path=None) -> Config:
    """Explicit path wins over the environment variable, which wins over defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return Config()
    return Config.from_file(path)


DEFAULT = Config()
