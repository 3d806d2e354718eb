"""Tunable thresholds for indicator derivation."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..model import IndicatorKind


@dataclass(frozen=True)
class IndicatorConfig:
    enabled_kinds: frozenset[IndicatorKind] = field(
        default_factory=lambda: frozenset(IndicatorKind)
    )
    propagate_to_ancestors: bool = True
    # a fragment counts as visible when at least this fraction of it is on screen
    visibility_min_fraction: float = 0.5
    # fragments taller than the viewport count as visible when they cover this
    # much of the viewport instead
    tall_fragment_viewport_fraction: float = 0.5
    horiz_eps_y: float = 10.0
    horiz_min_dx: float = 40.0
    vert_eps_x: float = 10.0
    vert_min_dy: float = 40.0
    segment_gap_ms: int = 300
    passive_delta_s: float = 60.0

    def __post_init__(self) -> None:
        for name in ("horiz_eps_y", "horiz_min_dx", "vert_eps_x", "vert_min_dy"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.segment_gap_ms <= 0 or self.passive_delta_s <= 0:
            raise ValueError("segment_gap_ms and passive_delta_s must be positive")
        for name in ("visibility_min_fraction", "tall_fragment_viewport_fraction"):
            frac = getattr(self, name)
            if not 0 < frac <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {frac}")

    def enabled(self, kind: IndicatorKind) -> bool:
        return kind in self.enabled_kinds


_CONFIG_FIELD_PARSERS = {
    "propagate_to_ancestors": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "visibility_min_fraction": float,
    "tall_fragment_viewport_fraction": float,
    "horiz_eps_y": float,
    "horiz_min_dx": float,
    "vert_eps_x": float,
    "vert_min_dy": float,
    "segment_gap_ms": int,
    "passive_delta_s": float,
    "enabled_kinds": lambda s: frozenset(IndicatorKind(k.strip()) for k in s.split(",") if k.strip()),
}


def parse_config_text(text: str) -> IndicatorConfig:
    """Parse a `key = value` config file body into an IndicatorConfig.

    Blank lines and `#` comments are ignored; unknown keys raise.
    """
    overrides: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        parser = _CONFIG_FIELD_PARSERS.get(key)
        if parser is None:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        overrides[key] = parser(value)
    return IndicatorConfig(**overrides)
