"""`key = value` design/scenario config files."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass
class DesignConfig:
    section_a_mm: float = 15.0
    section_b_mm: float = 15.0
    theta1_deg: float = 0.0
    theta2_deg: float = 90.0
    alpha_deg: float = 45.0
    unit_length_mm: float = 15.0
    n_units: int = 1
    n_vertical: int = 1
    n_horizontal: int = 0
    pattern_x: int = 1
    pattern_y: int = 1
    pattern_z: int = 1
    # structural scenario
    thickness_mm: float = 1.0
    crease_scale: float = 0.01
    displacement_start_mm: float = 0.0
    displacement_stop_mm: float = 1.0
    displacement_steps: int = 6
    # material
    mu1_pa: float = 708211.0002
    alpha1: float = 2.33765815


def parse_config(text: str, base: DesignConfig | None = None) -> DesignConfig:
    """Parse `key = value` lines ('#' comments allowed) over defaults."""
    cfg = base or DesignConfig()
    known = {f.name: f.type for f in fields(DesignConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d: expected key = value, got %r" % (lineno, raw))
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ValueError("line %d: unknown key %r" % (lineno, key))
        current = getattr(cfg, key)
        try:
            parsed = int(value) if isinstance(current, int) else float(value)
        except ValueError as exc:
            raise ValueError("line %d: bad value for %s: %r" % (lineno, key, value)) from exc
        setattr(cfg, key, parsed)
    return cfg


def load_config(path, base: DesignConfig | None = None) -> DesignConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), base=base)


def config_text(cfg: DesignConfig) -> str:
    lines = []
    for f in fields(DesignConfig):
        value = getattr(cfg, f.name)
        lines.append("%s = %s" % (f.name, ("%d" % value) if isinstance(value, int) else ("%.10g" % value)))
    return "\n".join(lines) + "\n"
