"""Batch command line: ``riccigini <command> [options]``.

Exit codes: 0 success, 1 internal failure, 2 input or validation error,
3 degenerate statistics. Diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from . import __version__
from .analysis import calibrate_indicators, sensitivity_from_model, sensitivity_sweep
from .dynamics import gini_rate_terms, integrate_gini, table2_binding
from .errors import DegenerateDesignError, ParseError, RicciGiniError
from .indicators import (
    PRESET_NAME,
    Dataset,
    dataset_to_csv,
    dataset_to_json,
    georgia_2023,
    load_dataset,
    validate_dataset,
)
from .perelman import WParams, evaluate_w, preset_w_params
from .report import FORMATS, Report, render
from .ricci import VARIANTS, ricci_aggregate, table1_rows
from .scenario import load_scenario

COMMANDS = (
    "table1",
    "wfunc",
    "gini-rate",
    "sensitivity",
    "simulate",
    "calibrate",
    "preset-export",
    "validate",
)
REPRODUCE = "reproduce"
FAITHFUL = "faithful"


class UsageError(RicciGiniError):
    """Invalid option combination."""


class Context:
    def __init__(self, args, stderr=sys.stderr):
        self.args = args
        self.stderr = stderr
        self.mode = args.mode or (FAITHFUL if args.input else REPRODUCE)
        if self.mode == REPRODUCE and args.input:
            raise UsageError("reproduce mode uses the bundled preset; drop --input or use --mode faithful")
        self.status = 0

    @property
    def reproduce(self) -> bool:
        return self.mode == REPRODUCE

    def read_input(self) -> bytes:
        return Path(self.args.input).read_bytes()

    def require_input(self, what: str) -> bytes:
        if not self.args.input:
            raise UsageError(f"{self.args.command} needs --input {what}")
        return self.read_input()

    def dataset(self) -> Dataset:
        if not self.args.input:
            return georgia_2023().dataset
        fmt = self.args.input_format or (
            "json" if self.args.input.lower().endswith(".json") else "csv"
        )
        return load_dataset(self.read_input(), fmt, label=Path(self.args.input).name)


def _g(value: float) -> str:
    return format(value, ".10g")


def _mode_note(ctx) -> str:
    if ctx.reproduce:
        return f"mode: reproduce (printed constants from the {PRESET_NAME} preset)"
    return "mode: faithful (all factors computed from their formulas)"


# --- commands ----------------------------------------------------------------


def cmd_table1(ctx) -> Report:
    preset = georgia_2023()
    d = ctx.dataset()
    agg = ricci_aggregate(d, variant=ctx.args.variant)
    if ctx.reproduce:
        rows = table1_rows(agg, d, preset.ln_sum_reported, preset.ricci_sum_reported)
    else:
        rows = table1_rows(agg, d)
    notes = [_mode_note(ctx)]
    if ctx.reproduce:
        notes += [
            "printed: raw values, LN and alpha columns, sum row",
            "derived: Ricci column = alpha x LN per row, rounded to 2 decimals",
            f"discrepancy: recomputed sums are LN {agg.sum_ln:.6f} and Ricci "
            f"{agg.sum_ricci:.6f}; the printed alpha column is rounded to 0.1%",
        ]
    else:
        notes.append(f"sums accumulated in canonical order over {d.label or 'dataset'}")
    if agg.variant == "raw":
        notes.append("variant: raw (alpha x raw value), does not reproduce the printed column")
    return Report(
        title=f"Ricci flow results ({d.label or 'dataset'}, {d.year})",
        columns=("indicator", "raw", "ln", "alpha_pct", "ricci"),
        cells=[(r.indicator,) + r.cells() for r in rows],
        records=[r.as_dict() for r in rows],
        notes=notes,
        extra={"mode": ctx.mode, "computed_sums": {"ln": agg.sum_ln, "ricci": agg.sum_ricci}},
    )


WFUNC_OPTIONS = ("tau", "f_potential", "n_dim", "grad_f_sq", "volume")


def cmd_wfunc(ctx) -> Report:
    preset = georgia_2023()
    given = {k: getattr(ctx.args, k) for k in WFUNC_OPTIONS if getattr(ctx.args, k) is not None}
    if ctx.reproduce:
        if given:
            raise UsageError("numeric W options need --mode faithful")
        params = preset_w_params(preset, reproduce=True)
    else:
        base = preset_w_params(preset, reproduce=False,
                               ricci_scalar=ricci_aggregate(ctx.dataset()).sum_ricci)
        fields = {k: getattr(base, k) for k in WFUNC_OPTIONS}
        fields.update(given)
        params = WParams(ricci_scalar=base.ricci_scalar, **fields)
    res = evaluate_w(params)

    cells = [
        ("R", _g(params.ricci_scalar), "printed sum" if ctx.reproduce else "computed"),
        ("core", f"{res.core:.2f}", "formula"),
        ("normalization", _g(res.normalization), res.norm_mode),
        ("weight", _g(res.weight), res.weight_mode),
        ("volume", _g(res.volume), "input"),
        ("W", f"{res.w_value:.1f}" if ctx.reproduce else _g(res.w_value), "product"),
    ]
    notes = [_mode_note(ctx)]
    if ctx.reproduce:
        rel = (res.w_value - preset.w_reported) / preset.w_reported
        notes += [
            f"printed: tau {preset.tau:g}, |grad f|^2 {preset.grad_f_sq:g}, f {preset.f_potential:g}, "
            f"n {preset.n_dim}, R {preset.ricci_sum_reported}",
            f"override: weight {preset.weight_reported} replaces exp(-f) = 1 (printed value "
            "92.7% contradicts f = 0)",
            f"override: normalization {preset.normalization_binding:g} replaces (4 pi tau)^(-n/2); "
            f"the printed {preset.normalization_reported} is retained but composing it with "
            "0.927 overshoots the printed W by 1.1%",
            f"discrepancy: W = {res.w_value:.1f} against printed {preset.w_reported:g} "
            f"({rel:+.3%})",
        ]
        cells.append(("W printed", f"{preset.w_reported:g}", "printed"))
    return Report(
        title="W-functional",
        columns=("quantity", "value", "source"),
        cells=cells,
        records=[res.as_dict() | {"ricci_scalar": params.ricci_scalar, "tau": params.tau,
                                  "grad_f_sq": params.grad_f_sq,
                                  "f_potential": params.f_potential, "n_dim": params.n_dim}],
        notes=notes,
        extra={"mode": ctx.mode},
    )


def cmd_gini_rate(ctx) -> Report:
    preset = georgia_2023()
    if ctx.reproduce:
        coefficients, terms = table2_binding(preset)
    else:
        scenario = load_scenario(ctx.require_input("SCENARIO.json"))
        coefficients, terms = scenario.coefficients, scenario.terms()
    br = gini_rate_terms(coefficients, terms)
    cells = [
        ("-alpha * dispersion", f"{br.dispersion:.3f}"),
        ("beta * A * G", f"{br.technology:.3f}"),
        ("-gamma * ricci", f"{br.curvature:.3f}"),
        ("-delta * U", f"{br.unemployment:.3f}"),
        ("dG/dt", f"{br.total:.2f}"),
    ]
    notes = [_mode_note(ctx)]
    if ctx.reproduce:
        cells.append(("dG/dt printed", f"{preset.gini_rate_reported:g}"))
        notes += [
            "printed: coefficients (percent values stored as fractions), dispersion "
            f"{preset.income_dispersion:g}, unemployment {preset.unemployment_level:g}, G {preset.gini_level}",
            f"binding: A(t) and the Ricci integral both set to the printed W {preset.w_reported:g}; "
            "this reconstructs the printed total and is not model semantics",
            f"discrepancy: {br.total:.2f} against printed {preset.gini_rate_reported:g}; "
            "no unit is claimed for the rate",
        ]
    return Report(
        title="Gini coefficient rate of change",
        columns=("term", "value"),
        cells=cells,
        records=[br.as_dict()],
        notes=notes,
        extra={"mode": ctx.mode},
    )


def _parse_steps(text: str) -> list[float]:
    try:
        a, b, s = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--steps expects A:B:S, got {text!r}") from None
    if s <= 0 or b < a:
        raise UsageError("--steps needs S > 0 and B >= A")
    n = int(math.floor((b - a) / s + 1e-9))
    return [a + k * s for k in range(n + 1)]


def cmd_sensitivity(ctx) -> Report:
    preset = georgia_2023()
    increases = _parse_steps(ctx.args.steps)
    coefficients, terms = table2_binding(preset)
    notes = [_mode_note(ctx)]
    if ctx.args.slope is not None or ctx.reproduce:
        slope = preset.sensitivity_slope if ctx.args.slope is None else ctx.args.slope
        rows = sensitivity_sweep(slope, increases)
        notes.append(f"slope: {slope:g} per percent increase of A(t)")
        if ctx.reproduce:
            model5 = sensitivity_from_model(coefficients, terms, [5.0])[0].gini_rate_change
            notes += [
                "printed: slope -0.66 per percent is the printed -3.30 at a 5% increase divided by 5",
                f"discrepancy: the slope is not derivable from beta = {preset.beta_c:g}; the "
                f"model-consistent change at 5% is {model5:.4f}",
            ]
    else:
        if ctx.args.input:
            scenario = load_scenario(ctx.read_input())
            coefficients, terms = scenario.coefficients, scenario.terms()
        else:
            notes.append(f"base terms: printed-rate binding from the {PRESET_NAME} preset")
        rows = sensitivity_from_model(coefficients, terms, increases)
        notes.append("rows: beta x G x A x p/100, the change in dG/dt when A grows by p%")
    return Report(
        title="Sensitivity of the Gini rate to adoption growth",
        columns=("increase_pct", "gini_rate_change"),
        cells=[(f"{r.increase_pct:.1f}", f"{r.gini_rate_change:.2f}") for r in rows],
        records=[{"increase_pct": r.increase_pct, "gini_rate_change": r.gini_rate_change}
                 for r in rows],
        notes=notes,
        extra={"mode": ctx.mode},
    )


def _parse_span(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--span expects A:B, got {text!r}") from None
    return a, b


def cmd_simulate(ctx) -> Report:
    scenario = load_scenario(ctx.require_input("SCENARIO.json"))
    span = _parse_span(ctx.args.span) if ctx.args.span else scenario.span
    step = ctx.args.step if ctx.args.step is not None else scenario.step
    if span is None or step is None:
        raise UsageError("simulate needs a span and a step (scenario file or --span/--step)")
    g0 = scenario.g0 if scenario.g0 is not None else scenario.gini_level
    if g0 is None:
        raise UsageError("simulate needs g0 in the scenario")
    traj = integrate_gini(g0, scenario.coefficients, scenario.providers(), span, step)
    notes = ["explicit Euler, G clamped to [0, 1]"]
    if traj.clamp_events:
        notes.append(f"clamped at {len(traj.clamp_events)} sample(s)")
    return Report(
        title="Gini trajectory",
        columns=("t", "G", "clamped"),
        cells=[(_g(t), _g(g), "true" if c else "false")
               for t, g, c in zip(traj.times, traj.values, traj.clamped)],
        records=[{"t": t, "G": g, "clamped": c}
                 for t, g, c in zip(traj.times, traj.values, traj.clamped)],
        notes=notes,
        extra={"step": traj.step, "clamp_events": traj.clamp_events},
    )


def _read_panel(data: bytes):
    text = data.decode("utf-8-sig")
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("panel file is empty")
    header = [c.strip() for c in rows[0]]
    if "gdp" not in header:
        raise ParseError("panel header needs a gdp column", 1)
    columns: dict[str, list[float]] = {h: [] for h in header}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", lineno)
        for h, cell in zip(header, row):
            cell = cell.strip()
            try:
                columns[h].append(float(cell) if cell else math.nan)
            except ValueError:
                raise ParseError(f"{h} is not a number: {cell!r}", lineno) from None
    gdp = columns.pop("gdp")
    columns.pop("year", None)
    return columns, gdp


def cmd_calibrate(ctx) -> Report:
    panel, gdp = _read_panel(ctx.require_input("PANEL.csv"))
    entries = calibrate_indicators(panel, gdp)
    cells, records = [], []
    for e in entries:
        flags = ";".join(e.flags)
        if e.result is None:
            cells.append((e.indicator.value, "", "", "", "", "", flags))
            records.append({"indicator": e.indicator.value, "flags": list(e.flags),
                            "error": str(e.error)})
            continue
        r = e.result
        cells.append((e.indicator.value, _g(r.slope), _g(r.intercept), _g(r.r_squared),
                      _g(r.z_stat), _g(r.p_value), flags))
        records.append({"indicator": e.indicator.value, **r.as_dict(), "flags": list(e.flags)})
    degenerate = [e for e in entries if isinstance(e.error, DegenerateDesignError)]
    if degenerate:
        ctx.status = 3
        names = ", ".join(e.indicator.value for e in degenerate)
        print(f"error: degenerate design for {names}: GDP has no variance", file=ctx.stderr)
    return Report(
        title="Indicator calibration against GDP",
        columns=("indicator", "slope", "intercept", "r2", "z", "p", "flags"),
        cells=cells,
        records=records,
        notes=[
            "p-values use the two-tailed normal tail of z = slope / SE (not Student t; small n)",
            "flags: R^2 band [0.80, 0.90]; significance at p < 0.05",
        ],
    )


def cmd_preset_export(ctx) -> str:
    d = georgia_2023().dataset
    if ctx.args.format == "json":
        return dataset_to_json(d)
    return dataset_to_csv(d)


def cmd_validate(ctx) -> Report:
    d = ctx.dataset()
    report = validate_dataset(d)
    if not report.ok:
        ctx.status = 2
        for c in report.violations:
            print(f"invalid: {c.indicator.value}: {c.name} ({c.detail})", file=ctx.stderr)
    return Report(
        title=f"Validation of {d.label or 'dataset'}: {'ok' if report.ok else 'FAILED'}",
        columns=("indicator", "check", "result", "detail"),
        cells=[(c.indicator.value, c.name, "pass" if c.passed else "fail", c.detail)
               for c in report.checks],
        records=[{"indicator": c.indicator.value, "check": c.name, "passed": c.passed,
                  "detail": c.detail} for c in report.checks],
        extra={"ok": report.ok},
    )


HANDLERS = {
    "table1": cmd_table1,
    "wfunc": cmd_wfunc,
    "gini-rate": cmd_gini_rate,
    "sensitivity": cmd_sensitivity,
    "simulate": cmd_simulate,
    "calibrate": cmd_calibrate,
    "preset-export": cmd_preset_export,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH")
    common.add_argument("--input-format", choices=("csv", "json"))
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--mode", choices=(FAITHFUL, REPRODUCE))
    common.add_argument("--out", metavar="PATH")

    parser = argparse.ArgumentParser(prog="riccigini", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", parents=[common], help="Ricci contributions per indicator")
    p.add_argument("--variant", choices=VARIANTS, default="log")

    p = sub.add_parser("wfunc", parents=[common], help="W-functional")
    p.add_argument("--tau", type=float)
    p.add_argument("--f", dest="f_potential", type=float)
    p.add_argument("--n", dest="n_dim", type=int)
    p.add_argument("--grad-sq", dest="grad_f_sq", type=float)
    p.add_argument("--volume", type=float)

    sub.add_parser("gini-rate", parents=[common], help="Gini rate of change")

    p = sub.add_parser("sensitivity", parents=[common], help="adoption-growth sweep")
    p.add_argument("--slope", type=float)
    p.add_argument("--steps", default="5:35:5", metavar="A:B:S")

    p = sub.add_parser("simulate", parents=[common], help="integrate G(t) from a scenario")
    p.add_argument("--span", metavar="A:B")
    p.add_argument("--step", type=float)

    sub.add_parser("calibrate", parents=[common], help="regress indicators on GDP")
    sub.add_parser("preset-export", parents=[common], help="write the bundled preset")
    sub.add_parser("validate", parents=[common], help="validate a dataset")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args, stderr)
        if args.command == "preset-export" and args.input:
            raise UsageError("preset-export takes no --input")
        result = HANDLERS[args.command](ctx)
        text = result if isinstance(result, str) else render(result, args.format)
    except DegenerateDesignError as exc:
        print(f"error: {exc}", file=stderr)
        return 3
    except (RicciGiniError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        stdout.write(text)
    return ctx.status


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
