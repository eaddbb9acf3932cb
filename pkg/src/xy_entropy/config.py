"""Runtime settings and the ``key=value`` config file loader."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError

CONFIG_ENV_VAR = "XY_ENTROPY_CONFIG"


@dataclass(frozen=True)
class Settings:
    """Tunable numerical knobs.

    Attributes
    ----------
    eps_phase : float
        Half-width of the exclusion band around ``h = 2`` and
        ``h = 2 sqrt(1 - gamma^2)``.
    tau0_min : float
        Smallest tau0 handled by the theta-series routes.
    quad_tol : float
        Acceptance threshold for quadrature error estimates.
    L_max : int
        Largest block length accepted by the finite-L routines.
    agree_tol : float
        Cross-method agreement required for a sweep row to be ``ok``.
    """

    eps_phase: float = 1e-8
    tau0_min: float = 0.02
    quad_tol: float = 1e-10
    L_max: int = 512
    agree_tol: float = 1e-6

    def replace(self, **changes) -> "Settings":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


def _coerce(name: str, raw: str):
    field_types = {f.name: f.type for f in dataclasses.fields(Settings)}
    if name not in field_types:
        raise DomainError(f"unknown config key {name!r}")
    kind = field_types[name]
    try:
        return int(raw) if kind in ("int", int) else float(raw)
    except ValueError as exc:
        raise DomainError(f"config key {name!r}: cannot parse {raw!r}") from exc


def parse_config(text: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key=value")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = _coerce(key, raw)
    return values


def load_settings(path: str | os.PathLike | None = None, **overrides) -> Settings:
    """Build settings from defaults, then a config file, then ``overrides``.

    When ``path`` is None the file named by ``$XY_ENTROPY_CONFIG`` is used
    if that variable is set.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    settings = Settings()
    if path is not None:
        settings = settings.replace(**parse_config(Path(path).read_text(encoding="utf-8")))
    return settings.replace(**overrides)
