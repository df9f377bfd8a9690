"""Indicator records, datasets and the bundled georgia-2023 preset.

The sixteen indicators are a closed set. A :class:`Dataset` always holds
exactly one record for each, stored in canonical (Table 1 row) order.

``ln_value`` is the authoritative quantity on a record. ``raw_value`` is
kept for display and for the round-trip check, together with the number
of decimals it was printed with, because the bundled values are rounded
(``0.36`` does not invert to the stored ``-1.01015``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import IO, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import DomainError, ParseError, SchemaError

ROUND_TRIP_TOL = 1e-3

Source = Union[bytes, str, IO[bytes], IO[str]]


class IndicatorId(str, Enum):
    INCOME_DISTRIBUTION = "income_distribution"
    PRODUCTIVITY = "productivity"
    UNEMPLOYMENT = "unemployment"
    INVESTMENT = "investment"
    INFLATION = "inflation"
    MIGRATION = "migration"
    EDUCATION = "education"
    SOCIAL_MOBILITY = "social_mobility"
    TRADE_INFRASTRUCTURE = "trade_infrastructure"
    CAPITAL_FLOWS = "capital_flows"
    INNOVATION = "innovation"
    HEALTHCARE_ACCESS = "healthcare_access"
    FISCAL_POLICY = "fiscal_policy"
    INTERNATIONAL_TRADE = "international_trade"
    SOCIAL_PROTECTION = "social_protection"
    TECHNOLOGICAL_ACCESS = "technological_access"

    @property
    def row(self) -> int:
        """1-based row index in Table 1."""
        return CANONICAL_ORDER.index(self) + 1

    def __str__(self) -> str:
        return self.value


CANONICAL_ORDER: tuple[IndicatorId, ...] = tuple(IndicatorId)

UNIT_LABELS: dict[IndicatorId, str] = {
    IndicatorId.INCOME_DISTRIBUTION: "ratio",
    IndicatorId.PRODUCTIVITY: "GEL per hour",
    IndicatorId.UNEMPLOYMENT: "percent",
    IndicatorId.INVESTMENT: "percent",
    IndicatorId.INFLATION: "percent",
    IndicatorId.MIGRATION: "persons",
    IndicatorId.EDUCATION: "GEL",
    IndicatorId.SOCIAL_MOBILITY: "index",
    IndicatorId.TRADE_INFRASTRUCTURE: "index",
    IndicatorId.CAPITAL_FLOWS: "unspecified",
    IndicatorId.INNOVATION: "index",
    IndicatorId.HEALTHCARE_ACCESS: "index",
    IndicatorId.FISCAL_POLICY: "percent",
    IndicatorId.INTERNATIONAL_TRADE: "percent",
    IndicatorId.SOCIAL_PROTECTION: "GEL",
    IndicatorId.TECHNOLOGICAL_ACCESS: "percent",
}


def log_transform(raw: float) -> float:
    """Natural logarithm of a strictly positive indicator value."""
    raw = float(raw)
    if not raw > 0 or not math.isfinite(raw):
        raise DomainError(f"log_transform needs a finite positive value, got {raw!r}")
    return math.log(raw)


@dataclass(frozen=True)
class IndicatorRecord:
    """One indicator with its stored log value and Ricci weight.

    ``raw_decimals`` is the number of decimals ``raw_value`` is known to;
    ``None`` means full precision. Percent-typed indicators are stored as
    fractions (``0.164`` for 16.4%).
    """

    id: IndicatorId
    ln_value: float
    alpha_weight: float = 0.0
    raw_value: float | None = None
    raw_decimals: int | None = None
    unit_label: str = ""

    def __post_init__(self):
        try:
            ident = IndicatorId(self.id)
        except ValueError:
            raise SchemaError(f"unknown indicator {self.id!r}") from None
        object.__setattr__(self, "id", ident)
        object.__setattr__(self, "ln_value", float(self.ln_value))
        object.__setattr__(self, "alpha_weight", float(self.alpha_weight))
        if self.raw_value is not None:
            object.__setattr__(self, "raw_value", float(self.raw_value))
        if not self.unit_label:
            object.__setattr__(self, "unit_label", UNIT_LABELS[ident])

    @classmethod
    def from_raw(cls, id, raw_value: float, alpha_weight: float = 0.0, **kwargs):
        """Build a record whose log value is computed from ``raw_value``."""
        return cls(
            id=id,
            ln_value=log_transform(raw_value),
            alpha_weight=alpha_weight,
            raw_value=raw_value,
            **kwargs,
        )

    @property
    def raw_display(self) -> str:
        """Raw value at its printed precision; percents shown as ``16.4%``."""
        if self.raw_value is None:
            return ""
        if self.unit_label == "percent":
            if self.raw_decimals is None:
                return f"{self.raw_value * 100:g}%"
            return f"{self.raw_value * 100:.{max(self.raw_decimals - 2, 0)}f}%"
        if self.raw_decimals is None:
            return repr(self.raw_value)
        return f"{self.raw_value:.{self.raw_decimals}f}"

    @property
    def raw_text(self) -> str:
        """Raw value as written to CSV (fraction, not percent)."""
        if self.raw_value is None:
            return ""
        if self.raw_decimals is None:
            return repr(self.raw_value)
        return f"{self.raw_value:.{self.raw_decimals}f}"


@dataclass(frozen=True)
class Dataset:
    """Exactly one record per canonical indicator, kept in canonical order."""

    records: tuple[IndicatorRecord, ...]
    label: str = ""
    year: int | None = None

    def __post_init__(self):
        records = tuple(self.records)
        seen: dict[IndicatorId, IndicatorRecord] = {}
        duplicates = []
        for rec in records:
            if rec.id in seen:
                duplicates.append(rec.id.value)
            seen[rec.id] = rec
        missing = [i.value for i in CANONICAL_ORDER if i not in seen]
        if duplicates or missing:
            parts = [f"{len(seen)} of 16 indicators present"]
            if missing:
                parts.append("missing: " + ", ".join(missing))
            if duplicates:
                parts.append("duplicated: " + ", ".join(duplicates))
            raise SchemaError("; ".join(parts))
        object.__setattr__(self, "records", tuple(seen[i] for i in CANONICAL_ORDER))

    def __iter__(self) -> Iterator[IndicatorRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def record(self, ident) -> IndicatorRecord:
        return self.records[IndicatorId(ident).row - 1]

    @property
    def ln_values(self) -> np.ndarray:
        return np.array([r.ln_value for r in self.records])

    @property
    def alpha_weights(self) -> np.ndarray:
        return np.array([r.alpha_weight for r in self.records])

    def with_alpha_weights(self, weights: Sequence[float] | Mapping) -> "Dataset":
        """Copy of the dataset with the Ricci weights replaced."""
        if isinstance(weights, Mapping):
            lookup = {IndicatorId(k): v for k, v in weights.items()}
            weights = [lookup.get(r.id, r.alpha_weight) for r in self.records]
        if len(weights) != 16:
            raise SchemaError(f"expected 16 weights, got {len(weights)}")
        records = tuple(
            replace(r, alpha_weight=w) for r, w in zip(self.records, weights)
        )
        return replace(self, records=records)


@dataclass(frozen=True)
class Check:
    indicator: IndicatorId
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _round_trip(rec: IndicatorRecord) -> Check:
    name = "ln_round_trip"
    if rec.raw_value is None:
        return Check(rec.id, name, True, "no raw value")
    if not rec.raw_value > 0:
        return Check(rec.id, name, True, "raw value not positive; ln_value taken as given")
    if not math.isfinite(rec.ln_value):
        return Check(rec.id, name, False, "ln_value not finite")
    if rec.raw_decimals is None:
        diff = abs(math.log(rec.raw_value) - rec.ln_value)
        ok = diff <= ROUND_TRIP_TOL
        return Check(rec.id, name, ok, f"|ln(raw) - ln_value| = {diff:.3g}")
    # rounded raw value: accept any ln_value that a value rounding to it could produce
    half = 0.5 * 10.0 ** (-rec.raw_decimals)
    lo_raw = rec.raw_value - half
    lo = math.log(lo_raw) if lo_raw > 0 else -math.inf
    hi = math.log(rec.raw_value + half)
    ok = lo - ROUND_TRIP_TOL <= rec.ln_value <= hi + ROUND_TRIP_TOL
    return Check(rec.id, name, ok, f"ln_value in [{lo:.6f}, {hi:.6f}] +/- {ROUND_TRIP_TOL}")


def validate_dataset(d: Dataset) -> ValidationReport:
    """Run the per-record checks. Failures are report entries, never raised."""
    checks = []
    for rec in d.records:
        finite = math.isfinite(rec.ln_value) and math.isfinite(rec.alpha_weight)
        if rec.raw_value is not None:
            finite = finite and math.isfinite(rec.raw_value)
        checks.append(Check(rec.id, "finite", finite))
        checks.append(_round_trip(rec))
        in_range = -1.0 <= rec.alpha_weight <= 1.0
        checks.append(
            Check(rec.id, "alpha_range", in_range, f"alpha_weight = {rec.alpha_weight!r}")
        )
    return ValidationReport(tuple(checks))


# --- ingestion -------------------------------------------------------------

REQUIRED_COLUMNS = ("indicator_id", "year", "raw_value")
OPTIONAL_COLUMNS = ("ln_value", "alpha_weight")


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    return source


def _number(value, row, column) -> tuple[float | None, int | None]:
    """Parse a cell into (value, decimals). Empty cells give (None, None)."""
    if value is None:
        return None, None
    if isinstance(value, bool):
        raise ParseError(f"{column} must be numeric, got {value!r}", row)
    if isinstance(value, int):
        return float(value), 0
    if isinstance(value, float):
        return value, None
    text = str(value).strip()
    if not text:
        return None, None
    try:
        dec = Decimal(text)
    except InvalidOperation:
        raise ParseError(f"{column} is not a number: {text!r}", row) from None
    if not dec.is_finite():
        raise DomainError(f"row {row}: {column} must be finite, got {text!r}")
    exponent = dec.as_tuple().exponent
    return float(dec), max(0, -exponent)


def _build_record(row: Mapping, rownum: int) -> tuple[IndicatorRecord, int]:
    ident_text = (row.get("indicator_id") or "").strip()
    try:
        ident = IndicatorId(ident_text)
    except ValueError:
        raise SchemaError(f"row {rownum}: unknown indicator {ident_text!r}") from None

    year_value, _ = _number(row.get("year"), rownum, "year")
    if year_value is None or year_value != int(year_value):
        raise ParseError(f"year must be an integer, got {row.get('year')!r}", rownum)

    raw, decimals = _number(row.get("raw_value"), rownum, "raw_value")
    ln, _ = _number(row.get("ln_value"), rownum, "ln_value")
    alpha, _ = _number(row.get("alpha_weight"), rownum, "alpha_weight")
    if alpha is None:
        alpha = 0.0
    if ln is None:
        if raw is None:
            raise ParseError("needs raw_value or ln_value", rownum)
        if not raw > 0:
            raise DomainError(
                f"row {rownum}: raw_value {raw!r} for {ident.value} is not positive "
                "and no ln_value is given"
            )
        ln = math.log(raw)
    for name, value in (("raw_value", raw), ("ln_value", ln), ("alpha_weight", alpha)):
        if value is not None and not math.isfinite(value):
            raise DomainError(f"row {rownum}: {name} must be finite")
    rec = IndicatorRecord(
        id=ident, ln_value=ln, alpha_weight=alpha, raw_value=raw, raw_decimals=decimals
    )
    return rec, int(year_value)


def _assemble(rows: Iterable[tuple[int, Mapping]], label: str) -> Dataset:
    records = []
    years = set()
    for rownum, row in rows:
        rec, year = _build_record(row, rownum)
        records.append(rec)
        years.add(year)
    if len(years) > 1:
        raise SchemaError(f"rows disagree on year: {sorted(years)}")
    return Dataset(tuple(records), label=label, year=years.pop() if years else None)


def _csv_rows(text: str) -> Iterator[tuple[int, dict]]:
    reader = csv.reader(io.StringIO(text))
    header = None
    for lineno, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if header is None:
            header = [c.strip() for c in cells]
            absent = [c for c in REQUIRED_COLUMNS if c not in header]
            if absent:
                raise ParseError(f"header lacks column(s) {', '.join(absent)}", lineno)
            unknown = [c for c in header if c not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS]
            if unknown:
                raise ParseError(f"unknown column(s) {', '.join(unknown)}", lineno)
            continue
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        yield lineno, dict(zip(header, cells))


def _json_rows(text: str) -> Iterator[tuple[int, Mapping]]:
    if not text.strip():
        return
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, list):
        raise ParseError("top level must be an array of objects")
    for i, obj in enumerate(doc, start=1):
        if not isinstance(obj, dict):
            raise ParseError("entry is not an object", i)
        unknown = [k for k in obj if k not in REQUIRED_COLUMNS + OPTIONAL_COLUMNS]
        if unknown:
            raise ParseError(f"unknown key(s) {', '.join(unknown)}", i)
        yield i, {k: (str(v) if isinstance(v, Decimal) else v) for k, v in obj.items()}


def load_dataset(source: Source, format: str = "csv", label: str = "") -> Dataset:
    """Read a dataset from CSV or JSON.

    Args:
        source: bytes, text, or a file object opened in either mode.
        format: ``"csv"`` or ``"json"``.
        label: free-text label stored on the dataset.

    Raises:
        ParseError: malformed row (carries the row number).
        SchemaError: missing, unknown or duplicate indicators.
        DomainError: non-positive raw value with no explicit ln_value.
    """
    text = _read_text(source)
    if format == "csv":
        rows = _csv_rows(text)
    elif format == "json":
        rows = _json_rows(text)
    else:
        raise ValueError(f"unsupported format {format!r}")
    return _assemble(rows, label)


def dataset_to_csv(d: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS + OPTIONAL_COLUMNS)
    year = "" if d.year is None else str(d.year)
    for rec in d.records:
        writer.writerow(
            [rec.id.value, year, rec.raw_text, repr(rec.ln_value), repr(rec.alpha_weight)]
        )
    return buf.getvalue()


def dataset_to_json(d: Dataset) -> str:
    rows = [
        {
            "indicator_id": rec.id.value,
            "year": d.year,
            "raw_value": rec.raw_value,
            "ln_value": rec.ln_value,
            "alpha_weight": rec.alpha_weight,
        }
        for rec in d.records
    ]
    return json.dumps(rows, indent=2) + "\n"


# --- bundled preset --------------------------------------------------------

PRESET_NAME = "georgia-2023"


@dataclass(frozen=True)
class PaperPreset:
    """Every printed Table 1 / Table 2 / Table 3 value, unmodified.

    Percent-printed coefficients are stored as fractions (``-5.8`` becomes
    ``-0.058``).
    """

    dataset: Dataset
    # Table 1 sum row
    ln_sum_reported: float = 32.39573
    ricci_sum_reported: float = 4.284181
    # Table 2
    income_dispersion: float = 224_288.0
    alpha_c: float = -0.058
    gamma_c: float = -0.118
    delta_u: float = 0.234
    unemployment_level: float = 262.0
    beta_c: float = -0.057
    grad_f_sq: float = 198.0
    tau: float = 15.0
    f_potential: float = 0.0
    n_dim: int = 16
    normalization_reported: float = 1.01
    weight_reported: float = 0.927
    w_reported: float = 2795.0
    gini_rate_reported: float = 13219.0
    # the 2023 Gini level, also Table 1 row 1
    gini_level: float = 0.36
    # Table 3, -3.30 per 5% increase
    sensitivity_slope: float = -0.66
    # normalization used when reproducing W; 1.01 overshoots the printed W
    normalization_binding: float = 1.0


def preset_csv_bytes() -> bytes:
    return resources.files("riccigini").joinpath("data/georgia_2023.csv").read_bytes()


@lru_cache(maxsize=None)
def georgia_2023() -> PaperPreset:
    """The bundled paper preset (cached, immutable)."""
    return PaperPreset(dataset=load_dataset(preset_csv_bytes(), "csv", label=PRESET_NAME))
