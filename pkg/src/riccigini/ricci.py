"""Scalar Ricci aggregate: a weighted sum of log-transformed indicators."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .indicators import Dataset, IndicatorId

VARIANTS = ("log", "raw")


def ricci_term(alpha_weight: float, ln_value: float) -> float:
    """Contribution of one indicator, ``alpha_weight * ln_value``."""
    if not (math.isfinite(alpha_weight) and math.isfinite(ln_value)):
        raise DomainError("ricci_term needs finite inputs")
    return alpha_weight * ln_value


@dataclass(frozen=True)
class RicciTerm:
    id: IndicatorId
    alpha_weight: float
    ln_value: float
    contribution: float


@dataclass(frozen=True)
class RicciAggregate:
    terms: tuple[RicciTerm, ...]
    sum_ln: float
    sum_ricci: float
    variant: str = "log"

    @property
    def scalar(self) -> float:
        """The scalar curvature surrogate R(x, t)."""
        return self.sum_ricci


def ricci_aggregate(d: Dataset, variant: str = "log") -> RicciAggregate:
    """Per-indicator contributions and both column sums.

    ``variant="log"`` weights the stored log values (this reproduces the
    published column). ``variant="raw"`` weights raw values instead, as the
    equation is literally written; every record then needs a raw value.
    Sums are accumulated in canonical row order.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    terms = []
    sum_ln = 0.0
    sum_ricci = 0.0
    for rec in d.records:
        if variant == "log":
            value = rec.ln_value
        else:
            if rec.raw_value is None:
                raise DomainError(f"raw variant needs a raw value for {rec.id.value}")
            value = rec.raw_value
        c = ricci_term(rec.alpha_weight, value)
        terms.append(RicciTerm(rec.id, rec.alpha_weight, rec.ln_value, c))
        sum_ln += rec.ln_value
        sum_ricci += c
    return RicciAggregate(tuple(terms), sum_ln, sum_ricci, variant)


@dataclass(frozen=True)
class Table1Row:
    indicator: str
    raw: str
    ln: float
    alpha_pct: float | None
    ricci: float
    is_sum: bool = False

    def cells(self) -> tuple[str, str, str, str]:
        """Text cells at printed precision: (raw, LN, alpha %, Ricci)."""
        if self.is_sum:
            return ("", f"{self.ln:.5f}", "", f"{self.ricci:.6f}")
        return (
            self.raw,
            f"{self.ln:.6f}",
            f"{self.alpha_pct:.1f}",
            _fixed(self.ricci, 2),
        )

    def as_dict(self) -> dict:
        return {
            "indicator": self.indicator,
            "raw": self.raw,
            "ln": self.ln,
            "alpha_pct": self.alpha_pct,
            "ricci": self.ricci,
        }


def _fixed(value: float, digits: int) -> str:
    text = f"{value:.{digits}f}"
    # avoid "-0.00" for tiny negative products
    if text.startswith("-") and float(text) == 0:
        text = text[1:]
    return text


def table1_rows(
    agg: RicciAggregate,
    d: Dataset,
    sum_ln: float | None = None,
    sum_ricci: float | None = None,
) -> list[Table1Row]:
    """Sixteen indicator rows plus a sum row.

    ``sum_ln`` / ``sum_ricci`` replace the computed sums on the sum row, for
    printing the published totals.
    """
    rows = []
    for term, rec in zip(agg.terms, d.records):
        rows.append(
            Table1Row(
                indicator=term.id.value,
                raw=rec.raw_display,
                ln=term.ln_value,
                alpha_pct=term.alpha_weight * 100,
                ricci=term.contribution,
            )
        )
    rows.append(
        Table1Row(
            indicator="sum",
            raw="",
            ln=agg.sum_ln if sum_ln is None else sum_ln,
            alpha_pct=None,
            ricci=agg.sum_ricci if sum_ricci is None else sum_ricci,
            is_sum=True,
        )
    )
    return rows
