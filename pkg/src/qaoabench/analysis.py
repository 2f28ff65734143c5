"""Exponential scaling fits, prediction bands, and the crossover point.

Costs are fitted as straight lines in log10(T) against problem size N via
ordinary least squares, with t-distribution prediction intervals for a
future observation. The crossover is where two fitted lines intersect;
because exponentials look locally straight, everything here is an
extrapolation aid, not a forecast.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class FitResult:
    """OLS fit of log10(T) = slope * N + intercept with interval metadata."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    x_mean: float
    s_xx: float
    resid_std: float                # sqrt(SSE / (n - 2))

    def predict(self, n) -> np.ndarray:
        return self.slope * np.asarray(n, dtype=float) + self.intercept

    def prediction_band(self, n, level: float = 0.95):
        """(low, high) log10-seconds bounds for a future observation at n.

        Widens away from the data centroid; always contains the fitted
        line. With only perfect-fit data the band collapses onto the line.
        """
        x = np.asarray(n, dtype=float)
        center = self.predict(x)
        df = self.n_points - 2
        t_crit = stats.t.ppf(0.5 + level / 2.0, df)
        half = t_crit * self.resid_std * np.sqrt(
            1.0 + 1.0 / self.n_points + (x - self.x_mean) ** 2 / self.s_xx)
        return center - half, center + half


def fit_exponential(points) -> FitResult:
    """Fit T(N) = 10^(slope N + intercept) to (N, T_seconds) pairs."""
    pts = [(float(n), float(t)) for n, t in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points for a fit with intervals")
    if any(t <= 0 for _, t in pts):
        raise ValueError("all times must be positive")
    x = np.array([n for n, _ in pts])
    y = np.log10([t for _, t in pts])
    if np.ptp(x) == 0:
        raise ValueError("all points share one N; slope is undefined")

    x_mean = float(x.mean())
    s_xx = float(((x - x_mean) ** 2).sum())
    slope = float(((x - x_mean) * (y - y.mean())).sum() / s_xx)
    intercept = float(y.mean() - slope * x_mean)
    resid = y - (slope * x + intercept)
    sse = float((resid ** 2).sum())
    sst = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if sst == 0 else 1.0 - sse / sst
    resid_std = math.sqrt(sse / (len(pts) - 2))
    return FitResult(slope, intercept, max(0.0, min(1.0, r_squared)),
                     len(pts), x_mean, s_xx, resid_std)


@dataclass(frozen=True)
class CrossoverEstimate:
    """Intersection of two fitted lines, plus where the first fit's
    prediction band crosses the second line (None when parallel or when a
    crossing does not exist below n_limit)."""

    n_star: float | None
    band_low_cross: float | None
    band_high_cross: float | None


def crossover(fit_q: FitResult, fit_c: FitResult, level: float = 0.95,
              n_limit: float = 1e5) -> CrossoverEstimate:
    """Size where the two fitted costs meet, with a band-based window.

    The window brackets n_star by intersecting fit_q's prediction band
    edges with fit_c's central line. Adding a common constant to both
    intercepts (a shared cost rescaling) leaves every output unchanged.
    """
    if math.isclose(fit_q.slope, fit_c.slope, rel_tol=0.0, abs_tol=1e-15):
        return CrossoverEstimate(None, None, None)
    n_star = (fit_c.intercept - fit_q.intercept) / (fit_q.slope - fit_c.slope)

    def band_cross(which: int) -> float | None:
        def gap(n):
            band = fit_q.prediction_band(n, level)[which]
            return float(band - fit_c.predict(n))
        lo, hi = 0.0, max(2.0 * abs(n_star), 10.0)
        while gap(lo) * gap(hi) > 0:
            hi *= 2.0
            if hi > n_limit:
                return None
        from scipy.optimize import brentq
        return float(brentq(gap, lo, hi, xtol=1e-9))

    return CrossoverEstimate(float(n_star), band_cross(0), band_cross(1))


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def emit_report(fits: dict[str, FitResult], points: dict[str, list],
                cross: CrossoverEstimate | None = None,
                grid_points: int = 50) -> tuple[str, str]:
    """Machine-readable scaling report: (CSV text, JSON summary text).

    The CSV lists the raw datapoints and, for every fit, the fitted curve
    and 95% band sampled on a common N grid, one row per (kind, label, N).
    Deterministic for fixed inputs.
    """
    all_n = [float(n) for pts in points.values() for n, _ in pts]
    lo, hi = min(all_n), max(all_n)
    span = hi - lo if hi > lo else 1.0
    grid = np.linspace(lo, hi + 0.5 * span, grid_points)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "label", "N", "log10_seconds", "band_low", "band_high"])
    for label in sorted(points):
        for n, t in points[label]:
            writer.writerow(["data", label, f"{n:.6g}", f"{math.log10(t):.9g}", "", ""])
    for label in sorted(fits):
        fit = fits[label]
        low, high = fit.prediction_band(grid)
        center = fit.predict(grid)
        for i, n in enumerate(grid):
            writer.writerow(["fit", label, f"{n:.6g}", f"{center[i]:.9g}",
                             f"{low[i]:.9g}", f"{high[i]:.9g}"])

    summary = {
        "fits": {
            label: {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "r_squared": fit.r_squared,
                "n_points": fit.n_points,
            }
            for label, fit in sorted(fits.items())
        },
        "crossover": None if cross is None else {
            "n_star": cross.n_star,
            "band_low_cross": cross.band_low_cross,
            "band_high_cross": cross.band_high_cross,
        },
    }
    return buf.getvalue(), json.dumps(summary, indent=2) + "\n"


def read_timing_csv(text: str) -> dict[str, list[tuple[float, float]]]:
    """Parse (N, seconds, label) rows, grouped by label; header optional."""
    out: dict[str, list[tuple[float, float]]] = {}
    reader = csv.reader(io.StringIO(text))
    for row in reader:
        if not row or not row[0].strip():
            continue
        try:
            n = float(row[0])
        except ValueError:
            continue                # header row
        if len(row) < 2:
            raise ValueError(f"timing row needs at least N and seconds: {row}")
        label = row[2].strip() if len(row) > 2 and row[2].strip() else "default"
        out.setdefault(label, []).append((n, float(row[1])))
    return out
