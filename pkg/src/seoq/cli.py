"""Command-line entry point.

Usage::

    seoq solve --config params.cfg --out table.csv
    seoq solve-int --config params.cfg
    seoq sensitivity --config params.cfg --deltas -20,-10,0,10,20
    seoq scenarios --config params.cfg --r-list 0.004,0.04,0.2
    seoq curve --config params.cfg --which exact --grid 200
    seoq calibrate --n-star 100 --demand 1000 --slope 2

The parameter file holds one ``name = value`` per line and one
``container = <capacity>,<available>`` line per container type; ``#`` starts
a comment.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import analysis, calibration, solver
from .model import PARAMETER_NAMES, ModelParameters, total_cost_approx, total_cost_exact
from .segments import ContainerSpec, Segment, segments_for

COMMANDS = ("solve", "solve-int", "sensitivity", "scenarios", "curve", "calibrate")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    parameters: ModelParameters | None  # None only for calibrate without --config
    containers: list[ContainerSpec]
    command: str | None = None
    options: dict = field(default_factory=dict)

    def segments(self) -> list[Segment]:
        return segments_for(self.containers)


def _number(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{where}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: not a finite number: {text!r}")
    return value


def parse_config(text: str) -> RunConfig:
    values: dict[str, float] = {}
    seen: dict[str, int] = {}
    containers: list[ContainerSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'name = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        where = f"line {lineno}: {key}"
        if key == "container":
            parts = [s.strip() for s in value.split(",")]
            if len(parts) != 2:
                raise ConfigError(f"{where}: expected '<capacity>,<available>', got {value!r}")
            capacity = _number(parts[0], where)
            available = _number(parts[1], where)
            if available != int(available):
                raise ConfigError(f"{where}: availability must be an integer, got {parts[1]!r}")
            try:
                containers.append(ContainerSpec(capacity, int(available)))
            except ValueError as exc:
                raise ConfigError(f"{where}: {exc}") from None
            continue
        if key not in PARAMETER_NAMES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        seen[key] = lineno
        values[key] = _number(value, where)

    missing = [k for k in PARAMETER_NAMES if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    if not containers:
        raise ConfigError("missing required key: container (at least one line)")
    try:
        params = ModelParameters(**values)
    except ValueError as exc:
        # messages start with the offending key name
        key = str(exc).split(":", 1)[0]
        where = f"line {seen[key]}: " if key in seen else ""
        raise ConfigError(f"{where}{exc}") from None
    return RunConfig(params, containers)


def dump_config(config: RunConfig) -> str:
    lines = [f"{name} = {getattr(config.parameters, name)!r}" for name in PARAMETER_NAMES]
    lines += [f"container = {c.capacity!r},{c.available}" for c in config.containers]
    return "\n".join(lines) + "\n"


class _Fmt:
    def __init__(self, full_precision: bool):
        self.full = full_precision

    def _f(self, x, digits: int) -> str:
        if x is None or (isinstance(x, float) and math.isinf(x)):
            return ""
        if self.full:
            return repr(float(x))
        return f"{x:.{digits}f}"

    def cost(self, x) -> str:
        return self._f(x, 3)

    def lot(self, x) -> str:
        return self._f(x, 4)

    def pct(self, x) -> str:
        return self._f(x, 4)

    def small_pct(self, x) -> str:
        return self._f(x, 8)

    @staticmethod
    def flag(b: bool) -> str:
        return "F" if b else "T"


def _csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _count_headers(segments: list[Segment]) -> list[str]:
    return [f"n{i + 1}" for i in range(len(segments[0].combination.counts))]


def solve_table(p: ModelParameters, segments: list[Segment], full_precision: bool = False) -> str:
    """Per-segment exact and approximate solutions, then one ``optimum`` row."""
    fmt = _Fmt(full_precision)
    exact = solver.solve_exact(p, segments)
    approx = solver.solve_continuous(p, segments)
    header = ["segment", *_count_headers(segments), "dp_lower", "dp_upper",
              "q_opt", "q_app", "tc_q_opt", "tc_q_app", "tc_lower", "tc_upper",
              "ac_q_app", "ac_lower", "ac_upper", "interior_exact", "interior_approx",
              "q_exact", "q_approx"]
    rows = [header]
    for seg, ex, ap in zip(segments, exact.candidates, approx.candidates):
        cap = seg.capacity
        q_opt, q_app = ex.stationary_lot, ap.stationary_lot
        rows.append([
            str(seg.index), *map(str, seg.combination.counts),
            fmt.lot(seg.lower), fmt.lot(seg.upper),
            fmt.lot(q_opt), fmt.lot(q_app),
            fmt.cost(total_cost_exact(p, cap, q_opt)) if q_opt > 0 else "",
            fmt.cost(total_cost_exact(p, cap, q_app)),
            fmt.cost(ex.lower_cost), fmt.cost(ex.upper_cost),
            fmt.cost(total_cost_approx(p, cap, q_app)),
            fmt.cost(ap.lower_cost), fmt.cost(ap.upper_cost),
            fmt.flag(ex.at_boundary), fmt.flag(ap.at_boundary),
            fmt.lot(ex.lot), fmt.lot(ap.lot),
        ])
    summary = [""] * len(header)
    summary[0] = "optimum"
    col = header.index
    summary[col("q_exact")] = fmt.lot(exact.optimum_lot)
    summary[col("q_approx")] = fmt.lot(approx.optimum_lot)
    summary[col("tc_q_opt")] = fmt.cost(exact.optimum_cost)
    summary[col("ac_q_app")] = fmt.cost(approx.optimum_cost)
    rows.append(summary)
    return _csv(rows)


def solve_int_table(p: ModelParameters, segments: list[Segment], full_precision: bool = False) -> str:
    fmt = _Fmt(full_precision)
    exact = solver.solve_integer(p, segments, cost="exact")
    approx = solver.solve_integer(p, segments, cost="approximate")
    header = ["segment", *_count_headers(segments), "dp_lower", "dp_upper", "q_app",
              "tc_q_app", "tc_lower", "tc_upper", "ac_q_app", "ac_lower", "ac_upper",
              "condition", "q_exact", "q_approx"]
    rows = [header]
    by_index = {seg.index: seg for seg in segments}
    for ex, ap in zip(exact.candidates, approx.candidates):
        seg = by_index[ex.segment_index]
        q = ex.stationary_lot
        rows.append([
            str(seg.index), *map(str, seg.combination.counts),
            fmt.lot(seg.lower), fmt.lot(seg.upper), str(int(q)),
            fmt.cost(total_cost_exact(p, seg.capacity, q)),
            fmt.cost(ex.lower_cost), fmt.cost(ex.upper_cost),
            fmt.cost(total_cost_approx(p, seg.capacity, q)),
            fmt.cost(ap.lower_cost), fmt.cost(ap.upper_cost),
            fmt.flag(ex.at_boundary), str(int(ex.lot)), str(int(ap.lot)),
        ])
    summary = [""] * len(header)
    summary[0] = "optimum"
    col = header.index
    summary[col("q_exact")] = str(int(exact.optimum_lot))
    summary[col("q_approx")] = str(int(approx.optimum_lot))
    summary[col("tc_q_app")] = fmt.cost(exact.optimum_cost)
    summary[col("ac_q_app")] = fmt.cost(approx.optimum_cost)
    rows.append(summary)
    return _csv(rows)


def sensitivity_csv(rows: list[analysis.SensitivityRow], full_precision: bool = False) -> str:
    fmt = _Fmt(full_precision)
    out = [["parameter", "delta_pct", "q_opt", "dq_pct", "approx_q_pct", "tc_opt",
            "dtc_pct", "approx_c_pct", "error"]]
    for r in rows:
        out.append([
            r.parameter, f"{r.delta_pct:g}", fmt.lot(r.q_opt), fmt.pct(r.dq_pct),
            fmt.pct(r.approx_q_pct), fmt._f(r.tc_opt, 4), fmt.pct(r.dtc_pct),
            fmt.small_pct(r.approx_c_pct), r.error or "",
        ])
    return _csv(out)


def scenarios_csv(rows: list[analysis.ScenarioRow], full_precision: bool = False) -> str:
    fmt = _Fmt(full_precision)
    out = [["r", "s_eoq", "s_eoq_approx", "q_s", "gap_pct",
            "s_eoq_at_boundary", "s_eoq_approx_at_boundary", "q_s_at_boundary"]]
    for r in rows:
        out.append([
            repr(r.r), fmt._f(r.s_eoq, 3), fmt._f(r.s_eoq_approx, 3), fmt._f(r.q_s, 3),
            fmt.pct(r.gap_pct), str(r.s_eoq_at_boundary).lower(),
            str(r.s_eoq_approx_at_boundary).lower(), str(r.q_s_at_boundary).lower(),
        ])
    return _csv(out)


def curve_csv(points: list[analysis.CurvePoint], full_precision: bool = False) -> str:
    fmt = _Fmt(full_precision)
    out = [["q", "value", "segment", "in_range", "breakpoint"]]
    for pt in points:
        out.append([
            fmt.lot(pt.q), fmt.cost(pt.value),
            "" if pt.segment_index is None else str(pt.segment_index),
            str(pt.in_range).lower(), str(pt.breakpoint).lower(),
        ])
    return _csv(out)


def calibration_csv(
    result: calibration.CalibrationResult,
    residuals: list[calibration.Residual] | None = None,
    full_precision: bool = False,
) -> str:
    fmt = _Fmt(full_precision)
    out = [["critical_orders", "critical_lot", "r", "l", "closeness_lot"],
           [repr(result.critical_orders), repr(result.critical_lot), repr(result.r),
            repr(result.l), fmt.lot(result.closeness_lot)]]
    text = _csv(out)
    if residuals:
        res = [["q", "observed", "fitted", "relative_error"]]
        res += [[repr(x.q), repr(x.observed), fmt._f(x.fitted, 6), fmt._f(x.relative_error, 6)]
                for x in residuals]
        text += "\n" + _csv(res)
    return text


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _read_observations(path: Path) -> list[tuple[float, float]]:
    obs = []
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                obs.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                continue  # header or malformed line
    return obs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seoq", description="Sustainable EOQ solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", type=Path, required=config_required,
                        help="parameter file")
        sp.add_argument("--out", type=Path, help="output CSV (default: stdout)")
        sp.add_argument("--full-precision", action="store_true",
                        help="write unrounded values")
        sp.add_argument("--dump-config", action="store_true",
                        help="echo the parsed parameter file and exit")

    for name in ("solve", "solve-int"):
        common(sub.add_parser(name))
    sp = sub.add_parser("sensitivity")
    common(sp)
    sp.add_argument("--deltas", type=_float_list, default=list(analysis.SWEEP_DELTAS))
    sp.add_argument("--params", default=",".join(analysis.SWEEP_PARAMETERS))
    sp = sub.add_parser("scenarios")
    common(sp)
    sp.add_argument("--r-list", type=_float_list, required=True)
    sp = sub.add_parser("curve")
    common(sp)
    sp.add_argument("--grid", type=int, default=analysis.POINTS_PER_SEGMENT,
                    help="points per segment")
    sp.add_argument("--which", choices=("exact", "approximate", "environmental", "emissions"),
                    default="exact")
    sp = sub.add_parser("calibrate")
    common(sp, config_required=False)
    sp.add_argument("--n-star", type=float, required=True,
                    help="critical number of orders per period")
    sp.add_argument("--slope", type=float,
                    help="emissions increase per unit of average inventory")
    sp.add_argument("--demand", type=float, help="demand rate (default: D from --config)")
    sp.add_argument("--observations", type=Path,
                    help="CSV of observed (Q, emissions) pairs for the residual report")
    return parser


def run(config: RunConfig) -> str:
    """Execute ``config.command`` and return the CSV text."""
    opts = config.options
    full = opts.get("full_precision", False)
    p = config.parameters
    cmd = config.command
    if cmd == "calibrate":
        return _run_calibrate(opts, p.D if p else None, full)
    segments = config.segments()
    if cmd == "solve":
        return solve_table(p, segments, full)
    if cmd == "solve-int":
        return solve_int_table(p, segments, full)
    if cmd == "sensitivity":
        rows = analysis.sensitivity_table(p, segments, opts.get("params", analysis.SWEEP_PARAMETERS),
                                          opts.get("deltas", analysis.SWEEP_DELTAS))
        return sensitivity_csv(rows, full)
    if cmd == "scenarios":
        return scenarios_csv(analysis.scenario_report(p, segments, opts["r_list"]), full)
    if cmd == "curve":
        grid = analysis.default_grid(segments, opts.get("grid", analysis.POINTS_PER_SEGMENT))
        points = analysis.sample_cost_curve(p, segments, grid, opts.get("which", "exact"))
        return curve_csv(points, full)
    raise ConfigError(f"unknown command {cmd!r}")


def _run_calibrate(opts: dict, config_demand: float | None, full: bool) -> str:
    demand = opts.get("demand") or config_demand
    if demand is None:
        raise ConfigError("calibrate needs --demand or a --config providing D")
    observations = opts.get("observations") or []
    slope = opts.get("slope")
    if slope is None:
        if not observations:
            raise ConfigError("calibrate needs --slope or --observations to estimate it")
        slope = calibration.estimate_slope(observations, demand / opts["n_star"])
    result = calibration.calibrate(opts["n_star"], demand, slope)
    residuals = calibration.emission_residuals(result, demand, observations) if observations else None
    return calibration_csv(result, residuals, full)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            config = parse_config(args.config.read_text(encoding="utf-8"))
        else:
            config = RunConfig(None, [])  # calibrate without a parameter file
        if args.dump_config:
            if args.config is None:
                raise ConfigError("--dump-config needs --config")
            sys.stdout.write(dump_config(config))
            return 0
        config.command = args.command
        config.options = {k: v for k, v in vars(args).items() if k not in ("command", "config", "out")}
        if args.command == "sensitivity":
            config.options["params"] = [s.strip() for s in args.params.split(",") if s.strip()]
        if args.command == "calibrate" and args.observations is not None:
            config.options["observations"] = _read_observations(args.observations)
        text = run(config)
    except OSError as exc:
        print(f"seoq: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"seoq: error: {exc}", file=sys.stderr)
        return 1
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0
