#!/usr/bin/env python3
"""Regenerate the bundled reference traces in src/oritube/data/.

The prototype's headline behaviour (max pull of ~42 N reached at -94 kPa,
~2 s full actuation with a cycle a bit over 5 s at -50 kPa, displacement
saturating by about -35 kPa, four near-identical strokes per direction)
is reproduced as smooth synthetic time series with a fixed seed.  Values
carry roughly +/-5 % uncertainty; treat them as reference shapes, not
calibrated measurements.
"""

from __future__ import annotations

import pathlib

import numpy as np

DATA_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "oritube" / "data"
SEED = 20240917


def fmt(v: float) -> str:
    return "%.6g" % v


def write_csv(name: str, header: list[str], columns: list[np.ndarray]) -> None:
    path = DATA_DIR / name
    lines = ["# reference trace, ~+/-5% uncertainty", ",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("wrote", path)


def force_trace(rng) -> None:
    # pressure steps down fast to -94 kPa; force tracks toward ~42 N
    t = np.arange(0.0, 12.0 + 1e-9, 0.02)
    pressure = -94.0 * (1.0 - np.exp(-t / 0.25))
    force = 42.0 * (1.0 - np.exp(-t / 1.1)) ** 2
    force *= 1.0 + 0.004 * np.sin(9.0 * t)
    force += 0.05 * rng.standard_normal(t.size)
    force = np.clip(force, 0.0, None)
    write_csv(
        "force_trace.csv",
        ["time_s", "pressure_kPa", "force_N"],
        [t, pressure, force],
    )


def step_trace(rng) -> None:
    # one actuation cycle at constant -50 kPa: 2 s ramp, ~1 s hold,
    # 2.1 s release; the full cycle lands a little over five seconds.
    # Ramps are linear so threshold-based timing reads the true durations.
    t = np.arange(0.0, 8.0 + 1e-9, 0.02)
    d_max = 18.0
    t0, rise, hold, fall = 0.3, 2.0, 1.05, 2.1
    d = np.zeros_like(t)
    up = (t >= t0) & (t < t0 + rise)
    d[up] = d_max * (t[up] - t0) / rise
    d[(t >= t0 + rise) & (t < t0 + rise + hold)] = d_max
    down = (t >= t0 + rise + hold) & (t < t0 + rise + hold + fall)
    d[down] = d_max * (1.0 - (t[down] - t0 - rise - hold) / fall)
    d += 0.03 * rng.standard_normal(t.size)
    d = np.clip(d, 0.0, None)
    d[0] = 0.0
    pressure = np.where((t >= t0) & (t < t0 + rise + hold), -50.0, 0.0)
    write_csv(
        "step_response.csv",
        ["time_s", "pressure_kPa", "displacement_mm"],
        [t, pressure, d],
    )


def pressure_displacement(rng) -> None:
    # steady-state stroke at increasing vacuum levels; saturates so the
    # 98 % plateau falls at -35 kPa
    d_max = 20.0
    p0 = 35.0 / np.log(50.0)
    for level in (-5, -10, -15, -20, -25, -30, -35, -40, -45, -50, -55, -60):
        t = np.arange(0.0, 6.0 + 1e-9, 0.05)
        steady = d_max * (1.0 - np.exp(level / p0))
        d = steady * (1.0 - np.exp(-t / 0.5))
        d += 0.02 * rng.standard_normal(t.size)
        pressure = np.full_like(t, float(level))
        write_csv(
            "pressure_step_%03d.csv" % abs(level),
            ["time_s", "pressure_kPa", "displacement_mm"],
            [t, pressure, d],
        )


def trajectories(rng) -> None:
    # four strokes per direction; gently curved, nearly repeating paths
    rows_t, rows_x, rows_y, rows_d, rows_r = [], [], [], [], []
    for direction in (1, 2):
        for rnd in range(1, 5):
            t = np.arange(0.0, 2.0 + 1e-9, 0.05)
            s = _smooth(t / t[-1]) * 20.0
            bow = 0.08 * s * (1.0 - s / 20.0)
            jitter = 0.15 * rng.standard_normal(2)
            if direction == 1:
                x = s + jitter[0] * (s / 20.0)
                y = bow + jitter[1] * (s / 20.0)
            else:
                x = bow + jitter[0] * (s / 20.0)
                y = s + jitter[1] * (s / 20.0)
            rows_t.append(t)
            rows_x.append(x)
            rows_y.append(y)
            rows_d.append(np.full(t.size, direction))
            rows_r.append(np.full(t.size, rnd))
    write_csv(
        "trajectories.csv",
        ["time_s", "x_mm", "y_mm", "direction", "round"],
        [np.concatenate(rows_t), np.concatenate(rows_x), np.concatenate(rows_y),
         np.concatenate(rows_d), np.concatenate(rows_r)],
    )


def utm_curve(rng) -> None:
    # dumbbell-specimen pull converted back to raw force/elongation using
    # the Ogden constants the fit should recover
    mu1, alpha1 = 708211.0002, 2.33765815
    gauge, width, thickness = 25.0, 6.0, 2.0
    eps = np.linspace(0.0, 1.5, 120)
    lam = 1.0 + eps
    stress = (2.0 * mu1 / alpha1) * (lam ** (alpha1 - 1.0) - lam ** (-alpha1 / 2.0 - 1.0))
    force = stress * (width * 1e-3) * (thickness * 1e-3)
    elongation = eps * gauge
    speed_mm_min = 60.0
    t = elongation / (speed_mm_min / 60.0)
    write_csv(
        "utm_tensile.csv",
        ["time_s", "force_N", "elongation_mm"],
        [t, force, elongation],
    )


def _smooth(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def main() -> None:
    rng = np.random.default_rng(SEED)
    force_trace(rng)
    step_trace(rng)
    pressure_displacement(rng)
    trajectories(rng)
    utm_curve(rng)


if __name__ == "__main__":
    main()
