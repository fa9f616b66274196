"""Static catalog of the fabrication materials that were bench-tested."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .errors import UnknownMaterial

_CATALOG_FILE = "materials.tsv"
_NA = "NA"


@dataclass(frozen=True)
class MaterialEntry:
    name: str
    shore_hardness: str                  # range on the Shore A scale, as listed
    tear_strength_kn_m: tuple[float, float] | None
    tensile_strength_mpa: tuple[float, float] | None
    elongation_break_pct: tuple[float, float] | None
    viscosity_mpa_s: tuple[float, float] | None
    problems: str

    @property
    def tear_strength_value(self) -> float | None:
        return _mid(self.tear_strength_kn_m)

    @property
    def tensile_strength_value(self) -> float | None:
        return _mid(self.tensile_strength_mpa)

    @property
    def elongation_value(self) -> float | None:
        return _mid(self.elongation_break_pct)


def material_catalog(name: str | None = None) -> list[MaterialEntry] | MaterialEntry:
    """All catalog entries, or the one matching `name` (case-insensitive)."""
    entries = _load()
    if name is None:
        return entries
    wanted = name.strip().lower()
    for entry in entries:
        if entry.name.lower() == wanted:
            return entry
    raise UnknownMaterial("no catalog entry named %r" % name)


def catalog_text() -> str:
    """Raw delimited catalog, for round-trip checks and the CLI listing."""
    return (
        resources.files("oritube.data").joinpath(_CATALOG_FILE).read_text(encoding="utf-8")
    )


def serialize(entries: list[MaterialEntry]) -> str:
    """Re-emit entries in the catalog file format."""
    lines = [
        "name\tshore_hardness\ttear_strength_kn_m\ttensile_strength_mpa"
        "\telongation_break_pct\tviscosity_mpa_s\tproblems"
    ]
    for e in entries:
        lines.append(
            "\t".join(
                [
                    e.name,
                    e.shore_hardness,
                    _fmt_range(e.tear_strength_kn_m),
                    _fmt_range(e.tensile_strength_mpa),
                    _fmt_range(e.elongation_break_pct),
                    _fmt_range(e.viscosity_mpa_s),
                    e.problems,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _load() -> list[MaterialEntry]:
    text = catalog_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split("\t")
    entries = []
    for ln in lines[1:]:
        row = dict(zip(header, ln.split("\t")))
        entries.append(
            MaterialEntry(
                name=row["name"],
                shore_hardness=row["shore_hardness"],
                tear_strength_kn_m=_parse_range(row["tear_strength_kn_m"]),
                tensile_strength_mpa=_parse_range(row["tensile_strength_mpa"]),
                elongation_break_pct=_parse_range(row["elongation_break_pct"]),
                viscosity_mpa_s=_parse_range(row["viscosity_mpa_s"]),
                problems=row["problems"],
            )
        )
    return entries


def _parse_range(text: str) -> tuple[float, float] | None:
    text = text.strip()
    if not text or text == _NA:
        return None
    parts = text.split("-")
    values = [float(p) for p in parts]
    if len(values) == 1:
        return (values[0], values[0])
    lo, hi = min(values), max(values)
    return (lo, hi)


def _fmt_range(rng: tuple[float, float] | None) -> str:
    if rng is None:
        return _NA
    lo, hi = rng
    if lo == hi:
        return _num(lo)
    return "%s-%s" % (_num(lo), _num(hi))


def _num(v: float) -> str:
    return ("%g" % v)


def _mid(rng: tuple[float, float] | None) -> float | None:
    return None if rng is None else 0.5 * (rng[0] + rng[1])
