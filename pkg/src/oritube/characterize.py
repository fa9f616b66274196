"""Actuator experiment analysis: force, step response, pressure sweep,
trajectory repeatability.

All extractors are pure functions over time series.  Pressures are gauge
kPa (vacuum negative); thresholds use the 10 %/90 % crossing convention
rescaled to the full transition (a 10-90 interval is 0.8 of the ramp), so
an ideal trapezoid reports its true ramp and hold durations.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicatePressure,
    InsufficientRounds,
    MalformedCsv,
    MissingColumn,
    NoPlateau,
)

JOIN_WINDOW_S = 0.05        # nearest-time join window for paired columns
RESAMPLE_POINTS = 64        # arc-length samples for trajectory comparison


@dataclass(frozen=True)
class ExperimentRecord:
    """Time series of pressure and optional displacement/force."""

    time_s: np.ndarray
    pressure_kpa: np.ndarray
    displacement_mm: np.ndarray | None = None
    force_n: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.time_s, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("need a 1-D, non-empty time axis")
        if np.any(np.diff(t) <= 0):
            raise ValueError("time must be strictly increasing")
        if self.displacement_mm is None and self.force_n is None:
            raise ValueError("need displacement and/or force data")
        object.__setattr__(self, "time_s", t)
        object.__setattr__(self, "pressure_kpa", np.asarray(self.pressure_kpa, float))
        for name in ("displacement_mm", "force_n"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=float)
                if val.shape != t.shape:
                    raise ValueError("%s length does not match time" % name)
                object.__setattr__(self, name, val)


@dataclass(frozen=True)
class TrajectoryRound:
    direction: int              # 1 | 2
    round_index: int
    time_s: np.ndarray
    x_mm: np.ndarray
    y_mm: np.ndarray

    def __post_init__(self):
        if self.direction not in (1, 2):
            raise ValueError("direction must be 1 or 2")
        t = np.asarray(self.time_s, float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("time must be strictly increasing")
        object.__setattr__(self, "time_s", t)
        object.__setattr__(self, "x_mm", np.asarray(self.x_mm, float))
        object.__setattr__(self, "y_mm", np.asarray(self.y_mm, float))

    def points(self) -> np.ndarray:
        return np.column_stack([self.x_mm, self.y_mm])


@dataclass(frozen=True)
class StepMetrics:
    actuation_s: float
    hold_s: float
    release_s: float
    cycle_s: float


def load_experiment_csv(stream, label: str = "") -> ExperimentRecord:
    """Parse time_s, pressure_kPa and optional displacement_mm / force_N."""
    rows = list(csv.DictReader(_text_lines(stream)))
    if not rows:
        raise MalformedCsv("empty experiment CSV")
    cols = rows[0].keys()
    if "time_s" not in cols or "pressure_kPa" not in cols:
        raise MalformedCsv("need time_s and pressure_kPa columns")

    def col(name):
        if name not in cols:
            return None
        vals = [row[name] for row in rows]
        if any(v in (None, "") for v in vals):
            return None
        return np.array([float(v) for v in vals])

    return ExperimentRecord(
        time_s=col("time_s"),
        pressure_kpa=col("pressure_kPa"),
        displacement_mm=col("displacement_mm"),
        force_n=col("force_N"),
        label=label,
    )


def load_trajectory_csv(stream) -> list[TrajectoryRound]:
    """Parse time_s, x_mm, y_mm, direction, round into rounds."""
    rows = list(csv.DictReader(_text_lines(stream)))
    if not rows:
        raise MalformedCsv("empty trajectory CSV")
    needed = {"time_s", "x_mm", "y_mm", "direction", "round"}
    if needed - set(rows[0].keys()):
        raise MalformedCsv("trajectory CSV needs columns %s" % sorted(needed))
    grouped: dict[tuple[int, int], list] = {}
    for row in rows:
        key = (int(row["direction"]), int(row["round"]))
        grouped.setdefault(key, []).append(
            (float(row["time_s"]), float(row["x_mm"]), float(row["y_mm"]))
        )
    out = []
    for (direction, rnd), pts in sorted(grouped.items()):
        pts.sort()
        arr = np.array(pts)
        out.append(
            TrajectoryRound(
                direction=direction,
                round_index=rnd,
                time_s=arr[:, 0],
                x_mm=arr[:, 1],
                y_mm=arr[:, 2],
            )
        )
    return out


def force_summary(rec: ExperimentRecord) -> dict[str, float]:
    """Maximum force over the record and the pressure at that instant."""
    if rec.force_n is None:
        raise MissingColumn("record has no force column")
    idx = int(np.argmax(rec.force_n))
    t_peak = rec.time_s[idx]
    j = int(np.argmin(np.abs(rec.time_s - t_peak)))
    if abs(rec.time_s[j] - t_peak) > JOIN_WINDOW_S:
        raise MissingColumn("no pressure sample within the join window")
    return {
        "max_force_N": float(rec.force_n[idx]),
        "pressure_at_max_kPa": float(rec.pressure_kpa[j]),
    }


def step_response_metrics(rec: ExperimentRecord) -> StepMetrics:
    """Actuation / hold / release / cycle times of one actuation cycle.

    Crossing times interpolate linearly; 10-90 intervals are scaled by
    1/0.8 to full-transition durations and the hold window (>= 95 % of
    plateau) is trimmed by the ramp time spent above 95 %.
    """
    if rec.displacement_mm is None:
        raise MissingColumn("record has no displacement column")
    t = rec.time_s
    d = rec.displacement_mm
    base = float(d[0])
    plateau = float(d.max())
    span = plateau - base
    if span <= 0:
        raise NoPlateau("displacement never rises above its start value")
    peak = int(np.argmax(d))

    lo, hi, hold_level = (base + f * span for f in (0.10, 0.90, 0.95))
    t10_up = _cross_time(t, d, lo, rising=True, start=0, stop=peak + 1)
    t90_up = _cross_time(t, d, hi, rising=True, start=0, stop=peak + 1)
    t90_dn = _cross_time(t, d, hi, rising=False, start=peak, stop=len(d))
    t10_dn = _cross_time(t, d, lo, rising=False, start=peak, stop=len(d))
    if None in (t10_up, t90_up, t90_dn, t10_dn):
        raise NoPlateau("could not locate both transitions around the plateau")

    actuation = (t90_up - t10_up) / 0.8
    release = (t10_dn - t90_dn) / 0.8
    above = d >= hold_level
    idx = np.where(above)[0]
    hold_window = float(t[idx[-1]] - t[idx[0]])
    hold = max(hold_window - 0.05 * (actuation + release), 0.0)
    cycle = actuation + hold + release
    return StepMetrics(actuation, hold, release, cycle)


def pressure_displacement(recs: list[ExperimentRecord]) -> dict:
    """Steady displacement per pressure plus the 98 % plateau pressure."""
    points = []
    for rec in recs:
        if rec.displacement_mm is None:
            raise MissingColumn("record %r has no displacement column" % rec.label)
        tail = max(1, rec.time_s.size // 4)
        pressure = float(np.median(rec.pressure_kpa[-tail:]))
        disp = float(np.mean(rec.displacement_mm[-tail:]))
        points.append((pressure, disp))
    pressures = [round(p, 9) for p, _ in points]
    if len(set(pressures)) != len(pressures):
        raise DuplicatePressure("two records share a steady pressure")
    points.sort(key=lambda pd: abs(pd[0]))
    curve = np.array(points)
    d_max = float(curve[:, 1].max())
    plateau_pressure = None
    for pressure, disp in points:
        if disp >= 0.98 * d_max:
            plateau_pressure = pressure
            break
    return {
        "curve": curve,
        "plateau_pressure_kPa": float(plateau_pressure),
        "max_displacement_mm": d_max,
    }


def trajectory_dependency(rounds: list[TrajectoryRound]) -> dict[int, dict[str, float]]:
    """Round-to-round repeatability per direction.

    Trajectories resample to a common arc-length grid; the metric is the
    mean pairwise RMS point distance, also normalized by mean path length.
    """
    by_dir: dict[int, list[TrajectoryRound]] = {}
    for r in rounds:
        by_dir.setdefault(r.direction, []).append(r)
    out = {}
    for direction, group in sorted(by_dir.items()):
        if len(group) < 2:
            raise InsufficientRounds(
                "direction %d has %d round(s); need at least 2" % (direction, len(group))
            )
        resampled = [_resample_arclength(r.points(), RESAMPLE_POINTS) for r in group]
        lengths = [_path_length(r.points()) for r in group]
        rms_list = []
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                diff = resampled[i] - resampled[j]
                rms_list.append(float(np.sqrt(np.mean(np.sum(diff ** 2, axis=1)))))
        rms = float(np.mean(rms_list))
        mean_len = float(np.mean(lengths))
        out[direction] = {
            "rms_deviation_mm": rms,
            "normalized_deviation_pct": 100.0 * rms / mean_len if mean_len > 0 else 0.0,
        }
    return out


def resample_record(rec: ExperimentRecord, factor: int) -> ExperimentRecord:
    """Linear-interpolated resampling (used by the invariance checks)."""
    t_new = np.linspace(rec.time_s[0], rec.time_s[-1],
                        (rec.time_s.size - 1) * factor + 1)

    def interp(v):
        return None if v is None else np.interp(t_new, rec.time_s, v)

    return ExperimentRecord(
        time_s=t_new,
        pressure_kpa=interp(rec.pressure_kpa),
        displacement_mm=interp(rec.displacement_mm),
        force_n=interp(rec.force_n),
        label=rec.label,
    )


def _cross_time(t, d, level, rising, start, stop):
    seg_t = t[start:stop]
    seg_d = d[start:stop]
    if rising:
        hits = np.where((seg_d[:-1] < level) & (seg_d[1:] >= level))[0]
    else:
        hits = np.where((seg_d[:-1] >= level) & (seg_d[1:] < level))[0]
    if hits.size == 0:
        if rising and seg_d.size and seg_d[0] >= level:
            return float(seg_t[0])
        return None
    i = int(hits[0])
    d0, d1 = seg_d[i], seg_d[i + 1]
    if d1 == d0:
        return float(seg_t[i])
    frac = (level - d0) / (d1 - d0)
    return float(seg_t[i] + frac * (seg_t[i + 1] - seg_t[i]))


def _path_length(points: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def _resample_arclength(points: np.ndarray, n: int) -> np.ndarray:
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate(([0.0], np.cumsum(seg)))
    if s[-1] == 0:
        return np.repeat(points[:1], n, axis=0)
    grid = np.linspace(0.0, s[-1], n)
    return np.column_stack(
        [np.interp(grid, s, points[:, 0]), np.interp(grid, s, points[:, 1])]
    )


def _text_lines(stream):
    for line in stream:
        if isinstance(line, bytes):
            line = line.decode()
        if line.lstrip().startswith("#"):
            continue
        yield line
