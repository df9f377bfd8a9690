"""JSON scenario files for the Gini-rate model.

Example::

    {
      "coefficients": {"alpha_c": -0.058, "beta_c": -0.057,
                       "gamma_c": -0.118, "delta_u": 0.234},
      "adoption": {"eta": 1.0, "steepness": 0.5, "t_zero": 2020,
                   "orientation": "as_printed"},
      "terms": {"income_dispersion": 224288, "ricci_integral": 4.28,
                "unemployment_level": 262},
      "g0": 0.36, "t": 2023, "span": [2023, 2033], "step": 0.5
    }

``terms`` may give ``income_series`` instead of ``income_dispersion``
(squared year-over-year changes are summed), and ``adoption_level`` to pin
A(t) to a constant instead of the logistic curve.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .dynamics import (
    AdoptionCurve,
    DynamicsTerms,
    GiniModelCoefficients,
    TermProviders,
    income_dispersion_from_series,
)
from .errors import DomainError, ParseError

TERM_KEYS = (
    "income_dispersion",
    "income_series",
    "adoption_level",
    "ricci_integral",
    "unemployment_level",
    "gini_level",
)
TOP_KEYS = ("coefficients", "adoption", "terms", "g0", "t", "span", "step")


@dataclass(frozen=True)
class Scenario:
    coefficients: GiniModelCoefficients
    curve: AdoptionCurve | None = None
    income_dispersion: float = 0.0
    adoption_level: float | None = None
    ricci_integral: float = 0.0
    unemployment_level: float = 0.0
    gini_level: float | None = None
    g0: float | None = None
    t: float | None = None
    span: tuple[float, float] | None = None
    step: float | None = None

    def providers(self) -> TermProviders:
        if self.adoption_level is not None:
            adoption: Any = self.adoption_level
        elif self.curve is not None:
            adoption = self.curve
        else:
            adoption = 0.0
        return TermProviders(
            income_dispersion=self.income_dispersion,
            adoption_level=adoption,
            ricci_integral=self.ricci_integral,
            unemployment_level=self.unemployment_level,
        )

    @property
    def eval_time(self) -> float:
        if self.t is not None:
            return self.t
        if self.curve is not None:
            return self.curve.t_zero
        return 0.0

    def terms(self) -> DynamicsTerms:
        """Terms at :attr:`eval_time`, with G from ``gini_level`` or ``g0``."""
        g = self.gini_level if self.gini_level is not None else self.g0
        if g is None:
            raise DomainError("scenario needs terms.gini_level or g0")
        return self.providers().at(self.eval_time, g)


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{where} must be finite")
    return value


def _opt(obj: dict, key: str, where: str) -> float | None:
    return None if obj.get(key) is None else _num(obj[key], f"{where}.{key}")


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ParseError(f"{where} must be an object")
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {', '.join(unknown)}")


def parse_scenario(doc: dict) -> Scenario:
    _check_keys(doc, TOP_KEYS, "scenario")
    coeffs = doc.get("coefficients", {})
    _check_keys(coeffs, ("alpha_c", "beta_c", "gamma_c", "delta_u"), "coefficients")
    coefficients = GiniModelCoefficients(
        **{k: _num(v, f"coefficients.{k}") for k, v in coeffs.items()}
    )

    curve = None
    if doc.get("adoption") is not None:
        a = doc["adoption"]
        _check_keys(a, ("eta", "steepness", "t_zero", "orientation"), "adoption")
        kwargs = {k: _num(a[k], f"adoption.{k}") for k in ("eta", "steepness", "t_zero") if k in a}
        if "orientation" in a:
            kwargs["orientation"] = a["orientation"]
        curve = AdoptionCurve(**kwargs)

    terms = doc.get("terms", {})
    _check_keys(terms, TERM_KEYS, "terms")
    if "income_series" in terms and "income_dispersion" in terms:
        raise ParseError("terms: give income_dispersion or income_series, not both")
    if "income_series" in terms:
        series = terms["income_series"]
        if not isinstance(series, list):
            raise ParseError("terms.income_series must be an array")
        dispersion = income_dispersion_from_series(
            [_num(v, "terms.income_series[]") for v in series]
        )
    else:
        dispersion = _opt(terms, "income_dispersion", "terms") or 0.0

    span = None
    if doc.get("span") is not None:
        s = doc["span"]
        if not (isinstance(s, list) and len(s) == 2):
            raise ParseError("span must be a two-element array")
        span = (_num(s[0], "span[0]"), _num(s[1], "span[1]"))

    return Scenario(
        coefficients=coefficients,
        curve=curve,
        income_dispersion=dispersion,
        adoption_level=_opt(terms, "adoption_level", "terms"),
        ricci_integral=_opt(terms, "ricci_integral", "terms") or 0.0,
        unemployment_level=_opt(terms, "unemployment_level", "terms") or 0.0,
        gini_level=_opt(terms, "gini_level", "terms"),
        g0=_opt(doc, "g0", "scenario"),
        t=_opt(doc, "t", "scenario"),
        span=span,
        step=_opt(doc, "step", "scenario"),
    )


def load_scenario(text: str | bytes) -> Scenario:
    if isinstance(text, bytes):
        text = text.decode("utf-8-sig")
    if not text.strip():
        raise ParseError("scenario file is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return parse_scenario(doc)
