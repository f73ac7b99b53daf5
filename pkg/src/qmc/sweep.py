"""Deterministic parameter sweeps over the cycle, with CSV output.

A sweep evaluates :func:`qmc.cycle.cycle_report` on a grid along one
parameter axis and writes one CSV row per grid point, in axis order,
regardless of how many workers evaluated the points.  Identical
configurations produce byte-identical CSVs.

Configuration is a flat ``key = value`` text format ('#' starts a comment);
every key can also be set on the command line, with precedence
CLI > config file > preset > built-in default.  The built-in defaults and
both presets use the same reference operating point (omega = 0.5,
T_h = 0.2, T_c = 0.1, gamma_h = gamma_c = 0.01, tau_h = 1, phi = pi/4).

Number formatting: 17 significant digits, '.' radix, "inf"/"-inf" for
infinities.  Undefined values are emitted as empty cells so numeric columns
never contain NaN.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import __version__ as _code_version
from . import chain
from .cycle import (
    CycleReport,
    CycleSpec,
    cycle_report,
    monte_carlo_oracle,
    with_parameter,
)
from .errors import ConfigError, ParseError, QmcError, ValidationError
from .measurement import MeasurementBasis
from .qubit import Hamiltonian
from .thermal import BathSpec, ChannelOptions, evolve, evolve_ode_oracle

AXES = ("theta", "phi", "tau_c", "tau_h", "gamma_c", "gamma_h", "omega", "T_c", "T_h")

CSV_COLUMNS = [
    "axis_name", "axis_value", "p_plus", "q_pp", "q_pm", "W", "Qc", "Qh",
    "dSm", "I", "S_baths", "sigma", "cop", "cop_carnot", "cop_ratio",
    "regime", "status",
]

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate-kernel"

DEFAULTS: dict[str, object] = {
    "omega": 0.5,
    "theta": 0.98 * math.pi,
    "phi": math.pi / 4.0,
    "T_c": 0.1,
    "T_h": 0.2,
    "gamma_c": 0.01,
    "gamma_h": 0.01,
    "tau_c": 0.5,
    "tau_h": 1.0,
    "include_unitary": True,
    "integrator_step": 0.005,
    "axis": "theta",
    "start": 0.0,
    "stop": math.pi,
    "points": 400,
    "spacing": "linear",
    "oracle_checks": False,
    "seed": 12345,
    "jobs": 0,  # 0 = available parallelism
    "out": "sweep.csv",
}

PRESETS: dict[str, dict[str, object]] = {
    "fig2a": {
        "axis": "theta", "start": 0.0, "stop": math.pi,
        "points": 400, "spacing": "linear", "tau_c": 0.5,
    },
    "fig2b": {
        "axis": "tau_c", "start": 0.01, "stop": 20.0,
        "points": 200, "spacing": "log", "theta": 0.98 * math.pi,
    },
}

_KEY_TYPES: dict[str, type] = {
    "omega": float, "theta": float, "phi": float, "T_c": float, "T_h": float,
    "gamma_c": float, "gamma_h": float, "tau_c": float, "tau_h": float,
    "integrator_step": float, "start": float, "stop": float,
    "points": int, "seed": int, "jobs": int,
    "include_unitary": bool, "oracle_checks": bool,
    "axis": str, "spacing": str, "out": str,
}


# ---------------------------------------------------------------------------
# value formatting / parsing
# ---------------------------------------------------------------------------

def format_value(x: float | None) -> str:
    """Canonical cell text: empty for undefined, 'inf' forms, else %.17g."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        raise ValueError("NaN must not be emitted; use None for undefined values")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def parse_value(cell: str) -> float | None:
    cell = cell.strip()
    if cell == "":
        return None
    if cell == "inf":
        return math.inf
    if cell == "-inf":
        return -math.inf
    return float(cell)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def parse_kv_text(text: str, *, source: str = "<config>") -> dict[str, str]:
    """Parse the flat ``key = value`` format shared by configs and manifests."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def coerce_setting(key: str, raw: str) -> object:
    if key not in _KEY_TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    kind = _KEY_TYPES[key]
    if kind is bool:
        lowered = raw.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if kind is str:
        return raw
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {raw!r}") from None


def merge_settings(
    preset: str | None = None,
    config_text: str | None = None,
    overrides: dict[str, str] | None = None,
    config_source: str = "<config>",
) -> dict[str, object]:
    """Built-in defaults <- preset <- config file <- CLI overrides."""
    settings = dict(DEFAULTS)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        settings.update(PRESETS[preset])
    if config_text is not None:
        for key, raw in parse_kv_text(config_text, source=config_source).items():
            settings[key] = coerce_setting(key, raw)
    if overrides:
        for key, raw in overrides.items():
            settings[key] = coerce_setting(key, raw)
    return settings


@dataclass(frozen=True, eq=False)
class GridSpec:
    start: float
    stop: float
    n_points: int
    spacing: str  # "linear" | "log"

    def __post_init__(self):
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"spacing: must be 'linear' or 'log', got {self.spacing!r}")
        if self.n_points < 2:
            raise ConfigError(f"points: need at least 2, got {self.n_points}")
        if not (self.start < self.stop):
            raise ConfigError(f"start: must be < stop, got start={self.start!r} stop={self.stop!r}")
        if self.spacing == "log" and not (self.start > 0.0):
            raise ConfigError(f"start: log spacing requires start > 0, got {self.start!r}")

    def values(self) -> list[float]:
        if self.spacing == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.n_points)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.n_points)]


@dataclass(frozen=True, eq=False)
class SweepConfig:
    base: CycleSpec
    axis: str
    grid: GridSpec
    output_path: str
    oracle_checks: bool
    seed: int
    jobs: int
    settings: dict[str, object]  # the merged flat settings, for the manifest


def build_config(settings: dict[str, object]) -> SweepConfig:
    axis = settings["axis"]
    if axis not in AXES:
        raise ConfigError(f"axis: must be one of {AXES}, got {axis!r}")
    try:
        base = CycleSpec(
            hamiltonian=Hamiltonian(settings["omega"]),
            basis=MeasurementBasis(settings["theta"], settings["phi"]),
            cold=BathSpec(settings["T_c"], settings["gamma_c"], settings["tau_c"]),
            hot=BathSpec(settings["T_h"], settings["gamma_h"], settings["tau_h"]),
            options=ChannelOptions(settings["include_unitary"], settings["integrator_step"]),
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    grid = GridSpec(settings["start"], settings["stop"], settings["points"], settings["spacing"])
    jobs = settings["jobs"]
    if jobs < 0:
        raise ConfigError(f"jobs: must be >= 0, got {jobs}")
    return SweepConfig(
        base=base,
        axis=axis,
        grid=grid,
        output_path=str(settings["out"]),
        oracle_checks=bool(settings["oracle_checks"]),
        seed=int(settings["seed"]),
        jobs=int(jobs),
        settings=dict(settings),
    )


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SweepRow:
    axis_name: str
    axis_value: float
    p_plus: float | None = None
    q_pp: float | None = None
    q_pm: float | None = None
    W: float | None = None
    Qc: float | None = None
    Qh: float | None = None
    dSm: float | None = None
    mutual_info: float | None = None
    S_baths: float | None = None
    sigma: float | None = None
    cop: float | None = None
    cop_carnot: float | None = None
    cop_ratio: float | None = None
    regime: str = ""
    status: str = STATUS_OK


_COLUMN_FIELDS = [
    "axis_name", "axis_value", "p_plus", "q_pp", "q_pm", "W", "Qc", "Qh",
    "dSm", "mutual_info", "S_baths", "sigma", "cop", "cop_carnot",
    "cop_ratio", "regime", "status",
]


def row_from_report(axis: str, value: float, report: CycleReport, status: str) -> SweepRow:
    return SweepRow(
        axis_name=axis,
        axis_value=value,
        p_plus=report.p_plus,
        q_pp=report.kernel.q_pp,
        q_pm=report.kernel.q_pm,
        W=report.W,
        Qc=report.Qc,
        Qh=report.Qh,
        dSm=report.dSm,
        mutual_info=report.mutual_info,
        S_baths=report.S_baths,
        sigma=report.sigma,
        cop=report.cop,
        cop_carnot=report.cop_carnot,
        cop_ratio=report.cop_ratio,
        regime=report.regime,
        status=status,
    )


def _sanitize_status(text: str) -> str:
    return text.replace(",", ";").replace("\n", " ")


def _oracle_check_status(spec: CycleSpec, report: CycleReport, seed: int, index: int) -> str:
    """Cross-check one grid point against the stochastic and ODE oracles."""
    if report.degenerate:
        return STATUS_DEGENERATE
    point_seed = int(np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(1)[0])
    mc = monte_carlo_oracle(spec, n_samples=20_000, seed=point_seed)
    if abs(mc.p_plus - report.p_plus) > 6.0 * mc.se_p_plus + 1e-12:
        return f"oracle-mismatch:mc dev={abs(mc.p_plus - report.p_plus):.3e} se={mc.se_p_plus:.3e}"
    h = spec.hamiltonian
    for bath, rho in (
        (spec.cold, _plus_projector_state(spec)),
        (spec.hot, _minus_projector_state(spec)),
    ):
        step = min(spec.options.integrator_step, 0.01, 0.01 / bath.decay_rate(h.omega))
        opts = ChannelOptions(spec.options.include_unitary, step)
        closed = evolve(rho, bath, h, bath.contact_time, opts)
        integrated = evolve_ode_oracle(rho, bath, h, bath.contact_time, opts)
        if float(np.max(np.abs(closed.mat - integrated.mat))) > 1e-8:
            return "oracle-mismatch:ode"
    return STATUS_OK


def _plus_projector_state(spec: CycleSpec):
    from .measurement import projectors
    from .qubit import DensityMatrix

    return DensityMatrix(projectors(spec.basis)[0])


def _minus_projector_state(spec: CycleSpec):
    from .measurement import projectors
    from .qubit import DensityMatrix

    return DensityMatrix(projectors(spec.basis)[1])


def _evaluate_point(payload: tuple[CycleSpec, str, float, int, bool, int]) -> SweepRow:
    base, axis, value, index, oracle_checks, seed = payload
    try:
        spec = with_parameter(base, axis, value)
        report = cycle_report(spec)
    except QmcError as exc:
        return SweepRow(
            axis_name=axis, axis_value=value,
            status=_sanitize_status(f"error:{type(exc).__name__}: {exc}"),
        )
    status = STATUS_DEGENERATE if report.degenerate else STATUS_OK
    if oracle_checks and status == STATUS_OK:
        status = _sanitize_status(_oracle_check_status(spec, report, seed, index))
    return row_from_report(axis, value, report, status)


@dataclass(eq=False)
class SweepResult:
    rows: list[SweepRow]
    manifest: dict[str, str]


def run_sweep(config: SweepConfig) -> SweepResult:
    """Evaluate the grid (optionally in parallel) and assemble the manifest.

    Worker count 0 means "use available parallelism".  Rows come back in
    axis order whatever the evaluation order was, and their content does
    not depend on the worker count.
    """
    t0 = time.monotonic()
    values = config.grid.values()
    payloads = [
        (config.base, config.axis, v, i, config.oracle_checks, config.seed)
        for i, v in enumerate(values)
    ]
    jobs = config.jobs if config.jobs > 0 else (os.cpu_count() or 1)
    if jobs == 1 or len(payloads) < 2:
        rows = [_evaluate_point(p) for p in payloads]
    else:
        chunk = max(1, len(payloads) // (4 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate_point, payloads, chunksize=chunk))
    wall = time.monotonic() - t0

    manifest: dict[str, str] = {
        "code_version": _code_version,
        "kernel_backend": chain.backend_name(),
        "wall_time_s": format_value(wall),
        "n_rows": str(len(rows)),
    }
    for key in _KEY_TYPES:
        value = config.settings[key]
        if isinstance(value, bool):
            manifest[key] = "true" if value else "false"
        elif isinstance(value, float):
            manifest[key] = format_value(value)
        else:
            manifest[key] = str(value)
    return SweepResult(rows=rows, manifest=manifest)


# ---------------------------------------------------------------------------
# CSV and manifest I/O
# ---------------------------------------------------------------------------

def write_rows_csv(rows: list[SweepRow], path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            cells = []
            for field_name in _COLUMN_FIELDS:
                value = getattr(row, field_name)
                if field_name in ("axis_name", "regime", "status"):
                    cells.append(str(value))
                else:
                    cells.append(format_value(value))
            f.write(",".join(cells) + "\n")


def manifest_path_for(csv_path: str) -> str:
    return csv_path + ".manifest"


def write_manifest(manifest: dict[str, str], path: str) -> None:
    with open(path, "w") as f:
        for key, value in manifest.items():
            f.write(f"{key} = {value}\n")


def read_manifest(path: str) -> dict[str, str]:
    with open(path) as f:
        return parse_kv_text(f.read(), source=path)


def read_rows_csv(path: str) -> list[SweepRow]:
    """Parse a sweep CSV, validating the header and every numeric cell."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}:1: empty file, expected header "
                             f"{','.join(CSV_COLUMNS)}") from None
        if header != CSV_COLUMNS:
            missing = [c for c in CSV_COLUMNS if c not in header]
            raise ParseError(
                f"{path}:1: header mismatch"
                + (f", missing columns {missing}" if missing else f", got {header}")
            )
        rows: list[SweepRow] = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(CSV_COLUMNS):
                raise ParseError(f"{path}:{lineno}: expected {len(CSV_COLUMNS)} cells, "
                                 f"got {len(record)}")
            kwargs: dict[str, object] = {}
            for field_name, cell in zip(_COLUMN_FIELDS, record):
                if field_name in ("axis_name", "regime", "status"):
                    kwargs[field_name] = cell
                else:
                    try:
                        kwargs[field_name] = parse_value(cell)
                    except ValueError:
                        raise ParseError(
                            f"{path}:{lineno}: bad numeric cell {cell!r} in "
                            f"column {field_name!r}"
                        ) from None
            if kwargs["axis_value"] is None:
                raise ParseError(f"{path}:{lineno}: axis_value must not be empty")
            rows.append(SweepRow(**kwargs))
        if not rows:
            raise ParseError(f"{path}: no data rows")
    return rows


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class CheckResult:
    name: str
    passed: bool
    first_bad_row: int | None = None
    detail: str = ""


@dataclass(eq=False)
class VerificationSummary:
    checks: list[CheckResult]
    crossing_intervals: list[int]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _ok_numeric(row: SweepRow) -> bool:
    return row.status in (STATUS_OK, STATUS_DEGENERATE) and row.W is not None


def crossing_intervals(rows: list[SweepRow]) -> tuple[list[int], list[int]]:
    """Indices i where S_baths, resp. cop_ratio - 1, changes sign on (i, i+1).

    Only consecutive pairs of rows with usable numbers, finite values and
    positive work input qualify: the exact coincidence of the two sign
    changes (S = 0 exactly where the COP meets the Carnot value) is an
    identity only for measurement-driven operation, W > 0.
    """
    s_cross, r_cross = [], []
    for i in range(len(rows) - 1):
        a, b = rows[i], rows[i + 1]
        if not (_ok_numeric(a) and _ok_numeric(b)):
            continue
        if not (a.W > 0.0 and b.W > 0.0):
            continue
        if a.cop_ratio is None or b.cop_ratio is None:
            continue
        if not all(map(math.isfinite, (a.S_baths, b.S_baths, a.cop_ratio, b.cop_ratio))):
            continue
        if a.S_baths * b.S_baths < 0.0:
            s_cross.append(i)
        if (a.cop_ratio - 1.0) * (b.cop_ratio - 1.0) < 0.0:
            r_cross.append(i)
    return s_cross, r_cross


def verify_rows(
    rows: list[SweepRow],
    t_cold: float | None = None,
    t_hot: float | None = None,
) -> VerificationSummary:
    """Run the invariant suite over parsed sweep rows.

    The information-corrected COP bound needs the bath temperatures; they
    normally come from the manifest written next to the CSV.  Without them
    that one check is reported as skipped-but-passing with a note.
    """
    checks: list[CheckResult] = []

    def first_failure(name, predicate, detail_fn):
        for i, row in enumerate(rows):
            if not _ok_numeric(row):
                continue
            if not predicate(row):
                checks.append(CheckResult(name, False, i, detail_fn(row)))
                return
        checks.append(CheckResult(name, True))

    first_failure(
        "first-law",
        lambda r: abs(r.W + r.Qc + r.Qh) <= 1e-12 * max(1.0, abs(r.W), abs(r.Qc), abs(r.Qh)),
        lambda r: f"|W+Qc+Qh| = {abs(r.W + r.Qc + r.Qh):.3e}",
    )
    first_failure(
        "second-law",
        lambda r: r.sigma >= -1e-10,
        lambda r: f"sigma = {r.sigma:.3e}",
    )
    first_failure(
        "entropy-identity",
        lambda r: abs(r.sigma - (r.mutual_info + r.S_baths)) <= 1e-12,
        lambda r: f"sigma - (I + S) = {r.sigma - (r.mutual_info + r.S_baths):.3e}",
    )

    if t_cold is not None and t_hot is not None:
        def bound_ok(r: SweepRow) -> bool:
            if not (r.W > 0.0) or r.cop_ratio is None or not math.isfinite(r.cop_ratio):
                return True
            rhs = 1.0 + t_hot * r.mutual_info / r.W
            return r.cop_ratio <= rhs + 1e-10
        first_failure(
            "cop-bound",
            bound_ok,
            lambda r: f"cop_ratio = {r.cop_ratio!r} exceeds 1 + T_h I/W",
        )
    else:
        checks.append(CheckResult("cop-bound", True, None, "skipped: bath temperatures unknown"))

    s_cross, r_cross = crossing_intervals(rows)
    if s_cross == r_cross:
        checks.append(CheckResult("carnot-crossing", True))
    else:
        bad = sorted(set(s_cross).symmetric_difference(r_cross))
        checks.append(CheckResult(
            "carnot-crossing", False, bad[0] if bad else None,
            f"S crossings {s_cross} != cop_ratio crossings {r_cross}",
        ))

    return VerificationSummary(checks=checks, crossing_intervals=s_cross)
