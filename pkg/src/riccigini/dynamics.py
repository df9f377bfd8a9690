"""Gini-rate equation, logistic technology adoption and Euler integration.

The rate is

    dG/dt = -alpha * D + beta * A(t) * G - gamma * K - delta * U(t)

with D the income-dispersion term, A the adoption level, K the scalar
Ricci integral and U the unemployment level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, IntegrationError

AS_PRINTED = "as_printed"
INCREASING = "increasing"


def mean_income(incomes: Sequence[float]) -> float:
    """Average of a yearly income series."""
    values = np.asarray(incomes, dtype=float)
    if values.size == 0:
        raise DomainError("mean_income needs at least one value")
    if not np.all(np.isfinite(values)):
        raise DomainError("mean_income needs finite values")
    return float(values.sum() / values.size)


def income_dispersion_from_series(series: Sequence[float]) -> float:
    """Sum of squared year-over-year changes, with unit volume."""
    values = np.asarray(series, dtype=float)
    if values.size < 2:
        raise DomainError("income dispersion needs at least two samples")
    if not np.all(np.isfinite(values)):
        raise DomainError("income dispersion needs finite values")
    return float(np.sum(np.diff(values) ** 2))


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@dataclass(frozen=True)
class AdoptionCurve:
    """Logistic adoption ``eta * (1 - 1 / (1 + exp(-steepness * (t - t_zero))))``.

    The default ``as_printed`` orientation decreases in ``t``; ``increasing``
    is its complement ``eta / (1 + exp(-steepness * (t - t_zero)))``.
    """

    eta: float = 1.0
    steepness: float = 1.0
    t_zero: float = 0.0
    orientation: str = AS_PRINTED

    def __post_init__(self):
        if not self.steepness > 0:
            raise DomainError("steepness must be positive")
        if self.orientation not in (AS_PRINTED, INCREASING):
            raise DomainError(f"unknown orientation {self.orientation!r}")
        if not (math.isfinite(self.eta) and math.isfinite(self.t_zero)):
            raise DomainError("eta and t_zero must be finite")

    def __call__(self, t: float) -> float:
        return adoption_level(self, t)


def adoption_level(c: AdoptionCurve, t: float) -> float:
    x = c.steepness * (t - c.t_zero)
    # 1 - 1/(1 + e^-x) == 1/(1 + e^x), evaluated without cancellation
    if c.orientation == AS_PRINTED:
        return c.eta * _logistic(-x)
    return c.eta * _logistic(x)


@dataclass(frozen=True)
class GiniModelCoefficients:
    alpha_c: float = 0.0
    beta_c: float = 0.0
    gamma_c: float = 0.0
    delta_u: float = 0.0

    def __post_init__(self):
        for name in ("alpha_c", "beta_c", "gamma_c", "delta_u"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")


@dataclass(frozen=True)
class DynamicsTerms:
    income_dispersion: float = 0.0
    adoption_level: float = 0.0
    gini_level: float = 0.0
    ricci_integral: float = 0.0
    unemployment_level: float = 0.0

    def __post_init__(self):
        for name in (
            "income_dispersion",
            "adoption_level",
            "gini_level",
            "ricci_integral",
            "unemployment_level",
        ):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not 0.0 <= self.gini_level <= 1.0:
            raise DomainError(f"gini_level must lie in [0, 1], got {self.gini_level!r}")
        if self.income_dispersion < 0:
            raise DomainError("income_dispersion must be nonnegative")
        if self.unemployment_level < 0:
            raise DomainError("unemployment_level must be nonnegative")


@dataclass(frozen=True)
class GiniRateBreakdown:
    """The four signed contributions to dG/dt and their total."""

    dispersion: float
    technology: float
    curvature: float
    unemployment: float

    @property
    def total(self) -> float:
        return self.dispersion + self.technology + self.curvature + self.unemployment

    def as_dict(self) -> dict:
        return {
            "dispersion": self.dispersion,
            "technology": self.technology,
            "curvature": self.curvature,
            "unemployment": self.unemployment,
            "total": self.total,
        }


def gini_rate_terms(c: GiniModelCoefficients, terms: DynamicsTerms) -> GiniRateBreakdown:
    return GiniRateBreakdown(
        dispersion=-c.alpha_c * terms.income_dispersion,
        technology=c.beta_c * (terms.adoption_level * terms.gini_level),
        curvature=-c.gamma_c * terms.ricci_integral,
        unemployment=-c.delta_u * terms.unemployment_level,
    )


def gini_rate(c: GiniModelCoefficients, terms: DynamicsTerms) -> float:
    rate = gini_rate_terms(c, terms).total
    if not math.isfinite(rate):
        raise DomainError("gini rate is not finite")
    return rate


def table2_binding(preset) -> tuple[GiniModelCoefficients, DynamicsTerms]:
    """Coefficients and terms that reproduce the printed dG/dt.

    Both the adoption level and the Ricci integral are bound to the printed
    W value; this is a reconstruction of the published arithmetic, not a
    modelling choice.
    """
    coefficients = GiniModelCoefficients(
        alpha_c=preset.alpha_c,
        beta_c=preset.beta_c,
        gamma_c=preset.gamma_c,
        delta_u=preset.delta_u,
    )
    terms = DynamicsTerms(
        income_dispersion=preset.income_dispersion,
        adoption_level=preset.w_reported,
        gini_level=preset.gini_level,
        ricci_integral=preset.w_reported,
        unemployment_level=preset.unemployment_level,
    )
    return coefficients, terms


# --- time integration ------------------------------------------------------

TermSource = Union[float, Callable[[float], float]]


def _at(source: TermSource, t: float) -> float:
    return float(source(t)) if callable(source) else float(source)


@dataclass(frozen=True)
class TermProviders:
    """Per-time sources for the exogenous terms; each is a constant or ``f(t)``."""

    income_dispersion: TermSource = 0.0
    adoption_level: TermSource = 0.0
    ricci_integral: TermSource = 0.0
    unemployment_level: TermSource = 0.0

    def at(self, t: float, gini_level: float) -> DynamicsTerms:
        return DynamicsTerms(
            income_dispersion=_at(self.income_dispersion, t),
            adoption_level=_at(self.adoption_level, t),
            gini_level=gini_level,
            ricci_integral=_at(self.ricci_integral, t),
            unemployment_level=_at(self.unemployment_level, t),
        )


@dataclass(frozen=True)
class GiniTrajectory:
    times: tuple[float, ...]
    values: tuple[float, ...]
    clamped: tuple[bool, ...]
    step: float

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times, self.values))

    @property
    def clamp_events(self) -> list[float]:
        return [t for t, c in zip(self.times, self.clamped) if c]


def _grid(t_start: float, t_end: float, step: float) -> list[float]:
    span = t_end - t_start
    n = math.ceil(span / step - 1e-9)
    times = [t_start + k * step for k in range(n)]
    times.append(t_end)
    return times


def integrate_gini(
    g0: float,
    c: GiniModelCoefficients,
    providers: TermProviders,
    t_span: tuple[float, float],
    step: float,
) -> GiniTrajectory:
    """Explicit Euler integration of dG/dt, clamping G to [0, 1].

    The grid is ``t_start + k * step`` and always ends exactly at
    ``t_end``; the last step is shortened when the span is not a whole
    number of steps.

    Raises:
        IntegrationError: the rate is non-finite at some grid time.
    """
    t_start, t_end = map(float, t_span)
    if not t_end > t_start:
        raise DomainError("t_span must satisfy t_end > t_start")
    if not step > 0:
        raise DomainError("step must be positive")
    if not 0.0 <= g0 <= 1.0:
        raise DomainError("g0 must lie in [0, 1]")

    times = _grid(t_start, t_end, step)
    values = [float(g0)]
    clamped = [False]
    g = float(g0)
    for t, t_next in zip(times, times[1:]):
        try:
            rate = gini_rate(c, providers.at(t, g))
        except DomainError as exc:
            raise IntegrationError(str(exc), t) from None
        g_next = g + (t_next - t) * rate
        if not math.isfinite(g_next):
            raise IntegrationError("gini level became non-finite", t)
        was_clamped = not 0.0 <= g_next <= 1.0
        g = min(max(g_next, 0.0), 1.0)
        values.append(g)
        clamped.append(was_clamped)
    return GiniTrajectory(tuple(times), tuple(values), tuple(clamped), float(step))
