"""One-term Ogden hyperelasticity: energy, uniaxial stress, UTM data, fitting.

Convention: the strain-energy density is

    W = (2*mu1 / alpha1**2) * (l1**a1 + l2**a1 + l3**a1 - 3)

the two-parameter-per-term form used by tools that report (mu, alpha, d)
triples, whose initial shear modulus is mu0 = mu1 (so E0 = 3*mu1 for an
incompressible material).  The rival convention differs by the alpha**2
factor; all formulas here follow the one above.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    IncompressibilityViolated,
    InsufficientData,
    MalformedCsv,
    NoConvergence,
    NonPositiveGeometry,
    Unsupported,
)

#: smallest stretch the uniaxial formula accepts
MIN_STRETCH = 0.05


@dataclass(frozen=True)
class OgdenParams:
    mu1: float          # Pa
    alpha1: float       # dimensionless
    d1: float = 0.0     # 1/Pa; 0 means incompressible

    def __post_init__(self):
        if self.mu1 <= 0:
            raise ValueError("mu1 must be positive")
        if self.alpha1 == 0:
            raise ValueError("alpha1 must be nonzero")
        if self.d1 < 0:
            raise ValueError("d1 cannot be negative")

    @property
    def youngs_modulus(self) -> float:
        """Initial Young's modulus E0 = 3*mu1 (incompressible)."""
        return 3.0 * self.mu1


@dataclass(frozen=True)
class StressStrainCurve:
    strain: np.ndarray      # engineering strain, strictly increasing
    stress: np.ndarray      # nominal stress in Pa
    width_mm: float = float("nan")
    thickness_mm: float = float("nan")
    gauge_mm: float = float("nan")
    crosshead_mm_per_min: float = float("nan")
    dropped_samples: int = 0

    def __post_init__(self):
        e = np.asarray(self.strain, dtype=float)
        s = np.asarray(self.stress, dtype=float)
        if e.shape != s.shape or e.ndim != 1:
            raise ValueError("strain and stress must be 1-D arrays of equal length")
        if e.size and (np.any(np.diff(e) <= 0) or e[0] < 0):
            raise ValueError("strain must be strictly increasing and start at >= 0")
        if not np.all(np.isfinite(s)):
            raise ValueError("stresses must be finite")
        object.__setattr__(self, "strain", e)
        object.__setattr__(self, "stress", s)

    def __len__(self) -> int:
        return int(self.strain.size)


@dataclass(frozen=True)
class FitResult:
    params: OgdenParams
    rms_pa: float
    r_squared: float
    iterations: int


def ogden_energy(p: OgdenParams, l1: float, l2: float, l3: float) -> float:
    """Strain-energy density (Pa) at the given principal stretches."""
    if min(l1, l2, l3) <= 0:
        raise ValueError("principal stretches must be positive")
    if p.d1 == 0.0 and abs(l1 * l2 * l3 - 1.0) > 1e-9:
        raise IncompressibilityViolated(
            "det F = %.12f but d1 = 0 requires an isochoric state" % (l1 * l2 * l3)
        )
    a = p.alpha1
    return (2.0 * p.mu1 / (a * a)) * (l1 ** a + l2 ** a + l3 ** a - 3.0)


def uniaxial_stress(p: OgdenParams, stretch: float) -> float:
    """Nominal (first Piola-Kirchhoff) uniaxial stress at the given stretch.

    Incompressible path l2 = l3 = stretch**-0.5, so

        P(l) = (2*mu1/alpha1) * (l**(a1-1) - l**(-a1/2 - 1))
    """
    if p.d1 != 0.0:
        raise Unsupported("compressible uniaxial path (d1 > 0) is not implemented")
    if stretch <= MIN_STRETCH:
        raise ValueError("stretch must exceed %.2f" % MIN_STRETCH)
    a = p.alpha1
    return (2.0 * p.mu1 / a) * (stretch ** (a - 1.0) - stretch ** (-a / 2.0 - 1.0))


def uniaxial_stress_curve(p: OgdenParams, stretches: np.ndarray) -> np.ndarray:
    stretches = np.asarray(stretches, dtype=float)
    a = p.alpha1
    return (2.0 * p.mu1 / a) * (
        stretches ** (a - 1.0) - stretches ** (-a / 2.0 - 1.0)
    )


def load_utm_csv(stream, width_mm: float, thickness_mm: float, gauge_mm: float,
                 crosshead_mm_per_min: float = float("nan")) -> StressStrainCurve:
    """Convert a UTM export (time_s, force_N, elongation_mm) to stress/strain.

    strain = elongation / gauge length, nominal stress = force / (w * t).
    Rows that break strict strain monotonicity are dropped with a count
    kept on the returned curve.
    """
    if width_mm <= 0 or thickness_mm <= 0 or gauge_mm <= 0:
        raise NonPositiveGeometry("specimen width, thickness and gauge must be positive")
    reader = csv.DictReader(_text_lines(stream))
    if reader.fieldnames is None:
        raise MalformedCsv("empty CSV stream")
    required = {"time_s", "force_N", "elongation_mm"}
    missing = required - {f.strip() for f in reader.fieldnames}
    if missing:
        raise MalformedCsv("missing columns: %s" % ", ".join(sorted(missing)))
    area_m2 = (width_mm * 1e-3) * (thickness_mm * 1e-3)
    strains, stresses = [], []
    dropped = 0
    for row in reader:
        try:
            force = float(row["force_N"])
            elong = float(row["elongation_mm"])
        except (TypeError, ValueError) as exc:
            raise MalformedCsv("unparseable row: %r" % (row,)) from exc
        eps = elong / gauge_mm
        if strains and eps <= strains[-1]:
            dropped += 1
            continue
        if eps < 0:
            dropped += 1
            continue
        strains.append(eps)
        stresses.append(force / area_m2)
    if dropped:
        warnings.warn("dropped %d non-monotone UTM samples" % dropped, stacklevel=2)
    return StressStrainCurve(
        strain=np.array(strains),
        stress=np.array(stresses),
        width_mm=width_mm,
        thickness_mm=thickness_mm,
        gauge_mm=gauge_mm,
        crosshead_mm_per_min=crosshead_mm_per_min,
        dropped_samples=dropped,
    )


def fit_ogden(curve: StressStrainCurve, init: OgdenParams | None = None,
              n_restarts: int = 10, seed: int = 0) -> FitResult:
    """Least-squares fit of (mu1, alpha1) with d1 fixed at zero.

    Engineering strain converts to stretch as l = 1 + eps.  On failure of
    the first solve, seeded random multi-starts run and the lowest
    residual wins (ties broken by start index).
    """
    if len(curve) < 5:
        raise InsufficientData("need at least 5 samples, got %d" % len(curve))
    if init is None:
        init = OgdenParams(mu1=1e5, alpha1=2.0)
    stretches = 1.0 + curve.strain
    target = curve.stress

    def residuals(x):
        mu, alpha = x
        # wild multi-start trials may overflow the power terms; the solver
        # rejects the resulting inf residuals on its own
        with np.errstate(over="ignore"):
            return uniaxial_stress_curve(OgdenParams(abs(mu) + 1e-300, alpha), stretches) - target

    best = None
    rng = np.random.default_rng(seed)
    # data-driven start: small-strain slope gives E0 = 3*mu1
    head = max(2, len(curve) // 10)
    slope = float(np.polyfit(curve.strain[:head + 1], target[:head + 1], 1)[0])
    starts = [(init.mu1, init.alpha1)]
    if slope > 0:
        starts.append((slope / 3.0, 2.0))
    starts += [
        (float(init.mu1 * rng.uniform(0.05, 20.0)), float(rng.uniform(0.3, 6.0)))
        for _ in range(n_restarts)
    ]
    for idx, x0 in enumerate(starts):
        try:
            sol = least_squares(
                residuals, x0, method="lm", xtol=1e-12, ftol=1e-12, gtol=1e-10,
                max_nfev=20000,
            )
        except Exception:
            continue
        if not np.all(np.isfinite(sol.x)):
            continue
        if best is None or sol.cost < best.cost * (1.0 - 1e-9):
            best = sol
    if best is None:
        raise NoConvergence("Ogden fit failed from all starts")
    sol = best
    mu, alpha = float(abs(sol.x[0])), float(sol.x[1])
    resid = residuals(sol.x)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((target - target.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(
        params=OgdenParams(mu1=mu, alpha1=alpha),
        rms_pa=rms,
        r_squared=r2,
        iterations=int(sol.nfev),
    )


def fit_report_text(fit: FitResult, n_points: int) -> str:
    """Key/value report block used by the CLI and tests."""
    lines = [
        "mu1_pa = %.10g" % fit.params.mu1,
        "alpha1 = %.10g" % fit.params.alpha1,
        "d1 = %.10g" % fit.params.d1,
        "rms_pa = %.10g" % fit.rms_pa,
        "r2 = %.10g" % fit.r_squared,
        "n_points = %d" % n_points,
    ]
    return "\n".join(lines) + "\n"


def _text_lines(stream):
    for line in stream:
        if isinstance(line, bytes):
            line = line.decode()
        if line.lstrip().startswith("#"):
            continue
        yield line
