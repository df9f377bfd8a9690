"""Sensitivity sweeps over adoption growth and single-regressor OLS."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dynamics import DynamicsTerms, GiniModelCoefficients
from .errors import DegenerateDesignError, DomainError, RicciGiniError, SchemaError
from .indicators import CANONICAL_ORDER, IndicatorId

R2_BAND = (0.80, 0.90)
P_THRESHOLD = 0.05


@dataclass(frozen=True)
class SensitivityRow:
    increase_pct: float
    gini_rate_change: float


def sensitivity_sweep(slope_per_pct: float, increases: Sequence[float]) -> list[SensitivityRow]:
    """Rows of ``slope_per_pct * p`` for each percent increase ``p``."""
    if len(increases) == 0:
        raise DomainError("increases must be nonempty")
    return [SensitivityRow(float(p), slope_per_pct * p) for p in sorted(increases)]


def sensitivity_from_model(
    c: GiniModelCoefficients, base_terms: DynamicsTerms, increases: Sequence[float]
) -> list[SensitivityRow]:
    """Change in dG/dt when the adoption level grows by ``p`` percent.

    Only the technology term depends on the adoption level, so the change
    is ``beta * G * A * p / 100``; it is computed in that form so that the
    rows are exactly linear in ``p``.
    """
    if len(increases) == 0:
        raise DomainError("increases must be nonempty")
    k = c.beta_c * base_terms.gini_level * base_terms.adoption_level
    return [SensitivityRow(float(p), k * (p / 100.0)) for p in sorted(increases)]


@dataclass(frozen=True)
class RegressionResult:
    slope: float
    intercept: float
    r_squared: float
    z_stat: float
    p_value: float
    n_obs: int
    slope_se: float = float("nan")

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r_squared,
            "z": self.z_stat,
            "p": self.p_value,
            "n_obs": self.n_obs,
        }


def normal_two_tailed(z: float) -> float:
    """Two-tailed standard-normal tail probability of ``|z|``."""
    if math.isnan(z):
        return float("nan")
    return math.erfc(abs(z) / math.sqrt(2.0))


def ols_fit(x: Sequence[float], y: Sequence[float]) -> RegressionResult:
    """Least-squares line of ``y`` on ``x`` with R^2 and a Z test on the slope.

    R^2 is ``1 - SSR/SST`` and is defined as 0 when ``y`` is constant. The
    slope's standard error uses the residual variance with ``n - 2``
    degrees of freedom; the p-value is the two-tailed normal tail.

    Raises:
        DomainError: length mismatch, fewer than 3 points, non-finite data.
        DegenerateDesignError: ``x`` is constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise DomainError(f"x and y must be 1-D of equal length, got {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise DomainError(f"need at least 3 observations, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("x and y must be finite")

    if np.ptp(x) == 0.0:
        raise DegenerateDesignError("x is constant; slope is undefined")
    x_mean = x.mean()
    # a constant y must give slope 0 and SST 0 exactly, not ulp-level noise
    y_mean = y[0] if np.ptp(y) == 0.0 else y.mean()
    dx = x - x_mean
    dy = y - y_mean
    sxx = float(dx @ dx)
    slope = float(dx @ dy) / sxx
    intercept = float(y_mean - slope * x_mean)

    residuals = y - (intercept + slope * x)
    ssr = float(residuals @ residuals)
    sst = float(dy @ dy)
    r_squared = 0.0 if sst == 0.0 else min(max(1.0 - ssr / sst, 0.0), 1.0)

    se = math.sqrt(ssr / (n - 2) / sxx)
    if se > 0:
        z = slope / se
    elif slope == 0.0:
        z = 0.0
    else:
        z = math.copysign(math.inf, slope)
    return RegressionResult(
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        z_stat=z,
        p_value=normal_two_tailed(z),
        n_obs=int(n),
        slope_se=se,
    )


@dataclass(frozen=True)
class CalibrationEntry:
    indicator: IndicatorId
    result: RegressionResult | None = None
    error: RicciGiniError | None = None

    @property
    def flags(self) -> tuple[str, ...]:
        if self.result is None:
            kind = "degenerate" if isinstance(self.error, DegenerateDesignError) else "error"
            return (kind,)
        lo, hi = R2_BAND
        r2 = self.result.r_squared
        if r2 < lo:
            band = "below-band"
        elif r2 > hi:
            band = "above-band"
        else:
            band = "in-band"
        sig = "significant" if self.result.p_value < P_THRESHOLD else "not-significant"
        return (band, sig)


def calibrate_indicators(
    panel: Mapping[str, Sequence[float]], gdp: Sequence[float]
) -> list[CalibrationEntry]:
    """Regress each indicator series on GDP.

    Missing observations (``nan``) are dropped pairwise. A failed fit
    becomes an entry carrying the error; other indicators still run.
    Entries come back in canonical indicator order.
    """
    gdp = np.asarray(gdp, dtype=float)
    keyed = {}
    for name, series in panel.items():
        try:
            ident = IndicatorId(name)
        except ValueError:
            raise SchemaError(f"unknown indicator {name!r}") from None
        series = np.asarray(series, dtype=float)
        if series.shape != gdp.shape:
            raise DomainError(f"{ident.value}: series length does not match GDP")
        keyed[ident] = series

    entries = []
    for ident in CANONICAL_ORDER:
        if ident not in keyed:
            continue
        y = keyed[ident]
        mask = np.isfinite(y) & np.isfinite(gdp)
        try:
            entries.append(CalibrationEntry(ident, ols_fit(gdp[mask], y[mask])))
        except DomainError as exc:
            entries.append(CalibrationEntry(ident, error=exc))
    return entries
