import io

import numpy as np
import pytest

from oritube.characterize import (
    ExperimentRecord,
    TrajectoryRound,
    force_summary,
    load_experiment_csv,
    load_trajectory_csv,
    pressure_displacement,
    resample_record,
    step_response_metrics,
    trajectory_dependency,
)
from oritube.errors import (
    DuplicatePressure,
    InsufficientRounds,
    MissingColumn,
    NoPlateau,
)


def make_record(t, pressure=None, displacement=None, force=None):
    t = np.asarray(t, float)
    return ExperimentRecord(
        time_s=t,
        pressure_kpa=np.zeros_like(t) if pressure is None else np.asarray(pressure, float),
        displacement_mm=None if displacement is None else np.asarray(displacement, float),
        force_n=None if force is None else np.asarray(force, float),
    )


def trapezoid(rise=2.0, hold=1.0, fall=2.0, dt=0.01, level=10.0, t0=0.5, tail=2.0):
    t = np.arange(0.0, t0 + rise + hold + fall + tail + 1e-9, dt)
    d = np.zeros_like(t)
    up = (t >= t0) & (t < t0 + rise)
    d[up] = level * (t[up] - t0) / rise
    d[(t >= t0 + rise) & (t < t0 + rise + hold)] = level
    down = (t >= t0 + rise + hold) & (t < t0 + rise + hold + fall)
    d[down] = level * (1 - (t[down] - t0 - rise - hold) / fall)
    return t, d


def test_force_summary_triangle_wave():
    t = np.linspace(0, 6, 601)
    force = 10.0 * np.where(t <= 3, t / 3, (6 - t) / 3)
    pressure = -10.0 * t
    rec = make_record(t, pressure=pressure, force=force)
    out = force_summary(rec)
    assert out["max_force_N"] == pytest.approx(10.0)
    assert out["pressure_at_max_kPa"] == pytest.approx(-30.0)


def test_force_summary_constant_zero():
    t = np.linspace(0, 1, 11)
    rec = make_record(t, pressure=np.full_like(t, -5.0), force=np.zeros_like(t))
    out = force_summary(rec)
    assert out["max_force_N"] == 0.0
    assert out["pressure_at_max_kPa"] == -5.0


def test_force_summary_requires_force():
    rec = make_record([0, 1], displacement=[0, 1])
    with pytest.raises(MissingColumn):
        force_summary(rec)


def test_step_metrics_trapezoid():
    t, d = trapezoid()
    m = step_response_metrics(make_record(t, displacement=d))
    assert m.actuation_s == pytest.approx(2.0, abs=0.02)
    assert m.hold_s == pytest.approx(1.0, abs=0.02)
    assert m.release_s == pytest.approx(2.0, abs=0.02)
    assert m.cycle_s == pytest.approx(5.0, abs=0.05)


def test_step_metrics_instantaneous_step():
    t = np.arange(0.0, 4.0, 0.01)
    d = np.where(t >= 1.0, 8.0, 0.0)
    d[t >= 3.0] = 0.0
    m = step_response_metrics(make_record(t, displacement=d))
    assert m.actuation_s <= 0.0125  # within one sample period of zero
    assert m.release_s <= 0.0125


def test_step_metrics_need_plateau():
    t = np.linspace(0, 1, 11)
    with pytest.raises(NoPlateau):
        step_response_metrics(make_record(t, displacement=np.zeros_like(t)))


def test_step_metrics_append_flats_invariant():
    t, d = trapezoid()
    m1 = step_response_metrics(make_record(t, displacement=d))
    t2 = np.concatenate([t, t[-1] + 0.01 + np.arange(0, 3, 0.01)])
    d2 = np.concatenate([d, np.zeros(300)])
    m2 = step_response_metrics(make_record(t2, displacement=d2))
    assert m1 == m2


def test_time_translation_invariance():
    t, d = trapezoid()
    m1 = step_response_metrics(make_record(t, displacement=d))
    m2 = step_response_metrics(make_record(t + 17.3, displacement=d))
    assert m1.actuation_s == pytest.approx(m2.actuation_s, abs=1e-12)
    assert m1.cycle_s == pytest.approx(m2.cycle_s, abs=1e-12)


def test_resample_invariance():
    t, d = trapezoid()
    rec = make_record(t, displacement=d)
    m1 = step_response_metrics(rec)
    m2 = step_response_metrics(resample_record(rec, 2))
    assert m2.actuation_s == pytest.approx(m1.actuation_s, rel=0.01)
    assert m2.cycle_s == pytest.approx(m1.cycle_s, rel=0.01)


def saturating_records(p0=8.947, d_max=20.0, levels=(-5, -10, -15, -20, -25, -30, -35, -40)):
    recs = []
    for level in levels:
        t = np.linspace(0, 5, 51)
        steady = d_max * (1 - np.exp(level / p0))
        d = np.full_like(t, steady)
        recs.append(make_record(t, pressure=np.full_like(t, level), displacement=d))
    return recs


def test_pressure_displacement_closed_form():
    recs = saturating_records()
    out = pressure_displacement(recs)
    # analytic 98% point: d(p) = dmax(1 - e^{p/p0}) crosses 0.98*observed max
    # between -30 and -35 kPa, so the first sampled level at/after it is -35
    assert out["plateau_pressure_kPa"] == pytest.approx(-35.0)
    assert out["curve"].shape == (8, 2)


def test_pressure_displacement_single_record():
    recs = saturating_records(levels=(-20,))
    out = pressure_displacement(recs)
    assert out["plateau_pressure_kPa"] == pytest.approx(-20.0)
    assert out["curve"].shape == (1, 2)


def test_pressure_displacement_duplicate_rejected():
    recs = saturating_records(levels=(-20, -20))
    with pytest.raises(DuplicatePressure):
        pressure_displacement(recs)


def make_round(direction, rnd, offset=(0.0, 0.0)):
    t = np.linspace(0, 1, 40)
    x = 20 * t + offset[0]
    y = 0.5 * np.sin(np.pi * t) + offset[1]
    return TrajectoryRound(direction=direction, round_index=rnd, time_s=t, x_mm=x, y_mm=y)


def test_identical_rounds_zero_deviation():
    rounds = [make_round(1, i) for i in range(3)]
    out = trajectory_dependency(rounds)
    assert out[1]["rms_deviation_mm"] == pytest.approx(0.0, abs=1e-12)


def test_uniform_offset_gives_offset_rms():
    rounds = [make_round(1, 0), make_round(1, 1, offset=(0.6, 0.8))]
    out = trajectory_dependency(rounds)
    assert out[1]["rms_deviation_mm"] == pytest.approx(1.0, abs=1e-9)


def test_insufficient_rounds():
    with pytest.raises(InsufficientRounds):
        trajectory_dependency([make_round(1, 0), make_round(2, 0), make_round(2, 1)])


def test_csv_loaders():
    text = "time_s,pressure_kPa,displacement_mm\n0,0,0\n1,-50,5\n2,-50,10\n"
    rec = load_experiment_csv(io.StringIO(text))
    assert rec.displacement_mm[-1] == 10.0
    assert rec.force_n is None
    traj = "time_s,x_mm,y_mm,direction,round\n0,0,0,1,1\n1,5,0,1,1\n0,0,0,1,2\n1,5,0.1,1,2\n"
    rounds = load_trajectory_csv(io.StringIO(traj))
    assert len(rounds) == 2
    assert rounds[0].direction == 1


def test_record_validation():
    with pytest.raises(ValueError):
        make_record([0, 1])  # no displacement or force at all
    with pytest.raises(ValueError):
        ExperimentRecord(
            time_s=np.array([0.0, 0.0]),
            pressure_kpa=np.zeros(2),
            displacement_mm=np.zeros(2),
        )


def bundled(name):
    from importlib import resources

    return io.StringIO(resources.files("oritube.data").joinpath(name).read_text())


def test_bundled_traces_resample_and_shift_invariance():
    # metric extractors tolerate uniform time shifts and rate doubling
    force = load_experiment_csv(bundled("force_trace.csv"))
    base = force_summary(force)
    doubled = force_summary(resample_record(force, 2))
    assert doubled["max_force_N"] == pytest.approx(base["max_force_N"], rel=0.01)
    assert doubled["pressure_at_max_kPa"] == pytest.approx(
        base["pressure_at_max_kPa"], rel=0.01
    )

    step = load_experiment_csv(bundled("step_response.csv"))
    m0 = step_response_metrics(step)
    shifted = ExperimentRecord(
        time_s=step.time_s + 123.4,
        pressure_kpa=step.pressure_kpa,
        displacement_mm=step.displacement_mm,
    )
    m1 = step_response_metrics(shifted)
    assert m1.cycle_s == pytest.approx(m0.cycle_s, abs=1e-9)
    m2 = step_response_metrics(resample_record(step, 2))
    assert m2.actuation_s == pytest.approx(m0.actuation_s, rel=0.01)
    assert m2.cycle_s == pytest.approx(m0.cycle_s, rel=0.01)


def test_force_summary_append_flats_invariant():
    force = load_experiment_csv(bundled("force_trace.csv"))
    base = force_summary(force)
    t_ext = np.concatenate([force.time_s, force.time_s[-1] + 1 + np.arange(0, 2, 0.02)])
    pad = np.zeros(100)
    extended = ExperimentRecord(
        time_s=t_ext,
        pressure_kpa=np.concatenate([force.pressure_kpa, pad]),
        force_n=np.concatenate([force.force_n, pad]),
    )
    assert force_summary(extended) == base
