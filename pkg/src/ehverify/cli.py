"""Command line front end: construct, verify, scan, energy and einstein-check.

Every command writes one versioned report. JSON goes to ``--json PATH`` (or
standard output when no path is given) and CSV to ``--csv PATH``. Files are
written atomically. Exit status is 0 when every check passes, 1 when a check
fails (the report is still written) and 2 for unusable arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import checks as ck
from .einstein_5d import HYPERBOLIC_LAPSE, Lapse, default_radii, type1_obstruction_report, type2_uniqueness_report
from .energy import hawking_mass_cm, total_energy
from .errors import VerificationError
from .families import (
    FAMILY_ALIASES,
    ROOT_TOL,
    SMOOTHNESS_TOL,
    FamilySpec,
    assert_largest_root,
    construct,
    type2_constants,
)
from .radial_profiles import CLASSIC_EH, HYPERBOLIC, TYPE_I, TYPE_II, ZERO_SCALAR

SCHEMA_VERSION = "ehverify-report/1"
WORKERS_ENV = "EHVERIFY_WORKERS"
DEFAULT_MAX_SPECS = 1_000_000
SCAN_RADII = 12

COMMANDS = ("construct", "verify", "scan", "energy", "einstein-check")
CSV_HEADER = (
    "B", "n", "C", "admissibility", "status", "r0", "A",
    "scalar_residual", "h_residual", "E_raw", "E_paper", "kappa",
)

FORMULAS = {
    (TYPE_I, "r0"): ("type-I bolt radius", "r0^2 = (n - 2 + sqrt((n - 2)^2 - 12 B C)) / (6 B)"),
    (TYPE_I, "A"): ("type-I mass parameter", "A = (1 - 2 n + sqrt((n - 2)^2 - 12 B C)) r0^4 / 3"),
    (TYPE_II, "r0"): (
        "type-II bolt radius",
        "r0^2 = t + (n^2 - 4)/(12 B), t the largest real root of t^3 + p t + q = 0",
    ),
    (TYPE_II, "A"): ("type-II mass parameter", "A = -r0^4 - sqrt(1 + B r0^2) C"),
    (ZERO_SCALAR, "r0"): ("zero-scalar bolt radius", "r0 = (B/(n - 1))^(1/4)"),
    (ZERO_SCALAR, "A"): ("zero-scalar mass parameter", "A = -(n - 2)/2 sqrt(B/(n - 1))"),
    (CLASSIC_EH, "r0"): ("Eguchi-Hanson bolt radius", "r0 = B^(1/4)"),
    (CLASSIC_EH, "A"): ("Eguchi-Hanson parameter", "A = 0"),
    (HYPERBOLIC, "r0"): ("no bolt", "r0 = 0"),
    (HYPERBOLIC, "A"): ("hyperbolic space", "A = 0"),
}
ENERGY_FORMULAS = {
    "E_raw": ("normalised energy integral", "lim_{r->inf} (1/(4 Vol(S^3/Z_n))) int_{S^3(r)/Z_n} E U_50^(0)"),
    "E_paper": ("closed-form energy", "A sqrt(B)"),
    "kappa": ("energy ratio", "E_raw / (A sqrt(B))"),
    "hawking_mass": ("Hawking mass, C = 0 extension", "-(5/6) (n^2 - 4)^2 / (16 B)"),
}


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    derivative: float = 1e-6
    energy: float = 1e-6


@dataclass(frozen=True)
class Job:
    command: str
    family: str
    B: float
    n: int | None
    C: float
    tol: Tolerances
    r_max: float | None = None
    c1: float = 1.0
    c2: float = 0.0


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str
    B: tuple[float, ...]
    n: tuple[int | None, ...]
    C: tuple[float, ...]
    tol: Tolerances
    r_max: float | None
    c1: float
    c2: float
    json_path: str | None
    csv_path: str | None
    workers: int
    max_specs: int

    def jobs(self) -> list[Job]:
        # lexicographic in (B, n, C) grid indices
        return [
            Job(self.command, self.family, B, n, C, self.tol, self.r_max, self.c1, self.c2)
            for B in self.B
            for n in self.n
            for C in self.C
        ]

    def echo(self) -> dict:
        return {
            "command": self.command,
            "family": self.family,
            "B": list(self.B),
            "n": list(self.n),
            "C": list(self.C),
            "tolerances": asdict(self.tol),
            "r_max": self.r_max,
            "c1": self.c1,
            "c2": self.c2,
        }


# ---------------------------------------------------------------------------
# argument parsing


def parse_real_range(text: str) -> tuple[float, ...]:
    """``x``, ``x1,x2,...`` or ``lo:hi:count`` (``count`` points, endpoints included)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"real range {text!r} must look like lo:hi:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"range {text!r} is empty")
        if count == 1:
            return (lo,)
        return tuple(float(x) for x in np.linspace(lo, hi, count))
    return tuple(float(x) for x in text.split(","))


def parse_int_range(text: str) -> tuple[int, ...]:
    """``k``, ``k1,k2,...`` or ``a:b`` (inclusive)."""
    if ":" in text:
        a, b = (int(x) for x in text.split(":"))
        if b < a:
            raise ValueError(f"range {text!r} is empty")
        return tuple(range(a, b + 1))
    return tuple(int(x) for x in text.split(","))


def _positive(text: str) -> float:
    val = float(text)
    if not val > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return val


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ehverify", description="Verify Eguchi-Hanson type metrics of constant scalar curvature.")
    ap.add_argument("--schema-version", action="version", version=SCHEMA_VERSION, help="print the report schema version and exit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--family", required=True, choices=sorted(FAMILY_ALIASES))
        p.add_argument("--B", required=True, help="value, list x1,x2 or range lo:hi:count")
        p.add_argument("--n", default=None, help="integer, list or inclusive range a:b")
        p.add_argument("--C", default="0", help="value, list x1,x2 or range lo:hi:count")
        p.add_argument("--json", dest="json_path", default=None, help="write the JSON report here")
        p.add_argument("--csv", dest="csv_path", default=None, help="write the CSV table here")
        p.add_argument("--tol-residual", type=_positive, default=1e-9)
        p.add_argument("--tol-derivative", type=_positive, default=1e-6)
        p.add_argument("--tol-energy", type=_positive, default=1e-6)
        p.add_argument("--r-max", type=_positive, default=None, help="outer radius for the energy extrapolation")
        p.add_argument("--c1", type=float, default=1.0, help="lapse coefficient for einstein-check")
        p.add_argument("--c2", type=float, default=0.0, help="lapse offset for einstein-check")
        p.add_argument("--workers", type=int, default=None, help=f"worker processes (default ${WORKERS_ENV} or 1)")
        p.add_argument("--max-specs", type=int, default=DEFAULT_MAX_SPECS)
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    B = parse_real_range(args.B)
    C = parse_real_range(args.C)
    n = parse_int_range(args.n) if args.n is not None else (None,)
    if args.command != "scan" and len(B) * len(C) * len(n) != 1:
        raise ValueError(f"{args.command} takes single values; use scan for ranges")
    workers = args.workers if args.workers is not None else _default_workers()
    if workers < 1:
        raise ValueError("--workers must be at least 1")
    return RunConfig(
        command=args.command,
        family=FAMILY_ALIASES[args.family],
        B=B,
        n=n,
        C=C,
        tol=Tolerances(args.tol_residual, args.tol_derivative, args.tol_energy),
        r_max=args.r_max,
        c1=args.c1,
        c2=args.c2,
        json_path=args.json_path,
        csv_path=args.csv_path,
        workers=workers,
        max_specs=args.max_specs,
    )


# ---------------------------------------------------------------------------
# evaluation


def _quantity(value: float, key: tuple[str, str] | str, residual: float | None = None, tol: float | None = None) -> dict:
    name, expr = FORMULAS[key] if isinstance(key, tuple) else ENERGY_FORMULAS[key]
    return {"value": value, "residual": residual, "tol": tol, "provenance": {"formula": name, "expression": expr}}


def _largest_root_check(spec: FamilySpec) -> ck.Check:
    try:
        assert_largest_root(spec.profile, spec.r0)
    except VerificationError:
        return ck.Check("largest_root_violated", 1.0, 0.0)
    return ck.Check("largest_root_violated", 0.0, 0.0)


def _energy(spec: FamilySpec, job: Job, row: dict, checks: list[ck.Check]) -> None:
    try:
        rep = total_energy(spec, job.r_max, job.tol.energy)
    except VerificationError as exc:
        checks.append(ck.Check(f"energy:{exc.code}", 1.0, 0.0))
        row["messages"].append(str(exc))
        return
    row["energy"] = {
        "E_raw": _quantity(rep.raw_limit, "E_raw", rep.error_estimate, job.tol.energy),
        "E_paper": _quantity(rep.closed_form, "E_paper"),
        "kappa": _quantity(rep.kappa, "kappa"),
        "volume_factor": rep.volume_factor,
    }
    if spec.family == TYPE_II and spec.C == 0.0:
        row["energy"]["hawking_mass"] = _quantity(hawking_mass_cm(spec.B, spec.n), "hawking_mass")
    rel = rep.error_estimate / max(1.0, abs(rep.raw_limit))
    checks.append(ck.Check("energy_extrapolation", rel, job.tol.energy))


def _spot_curvature(spec: FamilySpec) -> dict:
    metric = ck.metric_for(spec)
    r = 2.0 * spec.r0 if spec.r0 > 0.0 else 1.0 / math.sqrt(spec.B)
    frame = ck.fg.curvature(metric, r)
    return {"r": r, "ricci_diag": frame.ricci_diag.tolist(), "scalar": frame.scalar, "sectional": frame.sectional}


def _einstein(spec: FamilySpec, job: Job, row: dict, checks: list[ck.Check]) -> None:
    tol = job.tol.residual
    B = spec.B
    radii = default_radii(spec)
    if spec.family == TYPE_I:
        rep = type1_obstruction_report(B, spec.n, spec.C, job.c1, job.c2, radii, tol)
        first = float(np.max(np.abs(rep.first - rep.first_closed))) / B
        second = float(np.max(np.abs(rep.second - rep.second_closed))) / B
        checks.append(ck.Check("first_constraint_closed_form", first, tol))
        checks.append(ck.Check("second_constraint_closed_form", second, tol))
        predicted = False
        einstein = rep.einstein
        row["einstein"] = {"constraints_hold": rep.constraints_hold, "notes": rep.notes}
    elif spec.family == TYPE_II:
        rep = type2_uniqueness_report(B, spec.n, spec.C, job.c1, job.c2, radii)
        # both columns carry a factor 2 r^4 v / B; compare in Ricci units relative to B
        v = np.array([Lapse(HYPERBOLIC_LAPSE, job.c1, job.c2, B)(float(r))[0] for r in rep.radii])
        cons = float(np.max(np.abs(rep.constraint_engine - rep.constraint) / (2.0 * rep.radii**4 * np.abs(v))))
        checks.append(ck.Check("constraint_closed_form", cons, tol))
        predicted = job.c1 != 0.0 and spec.C * job.c1 == 0.0 and spec.A * job.c2 == 0.0
        einstein = rep.einstein
        row["einstein"] = {"branch": rep.branch, "lapse_ode_max": float(np.max(np.abs(rep.v2_residual)))}
    else:
        checks.append(ck.Check("einstein:unsupported-family", 1.0, 0.0))
        return
    observed = einstein / B <= tol
    row["einstein"].update(
        {"residual": einstein / B, "tol": tol, "predicted_einstein": predicted, "observed_einstein": observed}
    )
    checks.append(ck.Check("theorem_prediction_mismatch", float(predicted != observed), 0.0))


def _run_command(spec: FamilySpec, job: Job, row: dict, checks: list[ck.Check]) -> None:
    construction_ok = ck.all_passed(checks)
    if construction_ok and job.command == "verify":
        checks += ck.curvature_checks(spec, None, job.tol.residual, job.tol.derivative)
        row["curvature_spot"] = _spot_curvature(spec)
    elif construction_ok and job.command == "scan":
        checks += ck.curvature_checks(spec, default_radii(spec, SCAN_RADII), job.tol.residual, job.tol.derivative)
    alh = spec.family in (TYPE_II, HYPERBOLIC)
    if job.command in ("energy", "scan") and alh and construction_ok:
        _energy(spec, job, row, checks)
    elif job.command == "energy":
        code = "construction-check-failed" if alh else "not-ALH"
        checks.append(ck.Check(f"energy:{code}", 1.0, 0.0))
    if job.command == "einstein-check":
        _einstein(spec, job, row, checks)


def evaluate(job: Job) -> dict:
    """Run the checks for ``job.command`` on one spec; always returns a row."""
    t0 = time.perf_counter()
    row: dict = {"family": job.family, "B": job.B, "n": job.n, "C": job.C, "messages": []}
    checks: list[ck.Check] = []
    try:
        spec = construct(job.family, job.B, job.n, job.C, check=False)
    except VerificationError as exc:
        row.update(admissibility=exc.code, status=exc.code, passed=False, checks=[], quantities={})
        row["messages"].append(str(exc))
        row["timing_s"] = time.perf_counter() - t0
        return row
    row["n"] = spec.n
    row["admissibility"] = spec.admissibility
    checks += ck.construction_checks(spec)
    if spec.r0 > 0.0:
        checks.append(_largest_root_check(spec))
    row["quantities"] = {
        "r0": _quantity(spec.r0, (spec.family, "r0"), spec.residuals.get("f_at_r0"), ROOT_TOL),
        "A": _quantity(spec.A, (spec.family, "A"), spec.residuals.get("smoothness"), SMOOTHNESS_TOL),
    }
    if spec.family == TYPE_II:
        k = type2_constants(spec.B, spec.n)
        row["discriminant_constants"] = asdict(k)
    try:
        _run_command(spec, job, row, checks)
    except VerificationError as exc:
        checks.append(ck.Check(f"{job.command}:{exc.code}", 1.0, 0.0))
        row["messages"].append(str(exc))
    row["checks"] = [c.as_dict() for c in checks]
    row["passed"] = ck.all_passed(checks)
    row["status"] = "pass" if row["passed"] else "fail"
    row["timing_s"] = time.perf_counter() - t0
    return row


def run_jobs(jobs: list[Job], workers: int) -> list[dict]:
    if workers <= 1 or len(jobs) <= 1:
        return [evaluate(j) for j in jobs]
    chunk = max(1, len(jobs) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so rows stay in grid order
        return list(pool.map(evaluate, jobs, chunksize=chunk))


# ---------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _value(row: dict, group: str, key: str):
    item = row.get(group, {}).get(key)
    return None if item is None else item["value"]


def csv_row(row: dict) -> list[str]:
    by_name = {c["name"]: c["residual"] for c in row.get("checks", [])}
    return [
        _fmt(row["B"]),
        _fmt(row["n"]),
        _fmt(row["C"]),
        _fmt(row.get("admissibility")),
        _fmt(row.get("status")),
        _fmt(_value(row, "quantities", "r0")),
        _fmt(_value(row, "quantities", "A")),
        _fmt(by_name.get("scalar_curvature")),
        _fmt(by_name.get("smoothness_h_minus_n")),
        _fmt(_value(row, "energy", "E_raw")),
        _fmt(_value(row, "energy", "E_paper")),
        _fmt(_value(row, "energy", "kappa")),
    ]


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(csv_row(row))
    return buf.getvalue()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan; render them as strings
        return x if math.isfinite(x) else repr(x)
    return obj


def build_report(config: RunConfig, rows: list[dict], elapsed: float) -> dict:
    n_pass = sum(1 for r in rows if r["passed"])
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config.echo(),
        "results": rows,
        "summary": {"n_specs": len(rows), "n_passed": n_pass, "passed": n_pass == len(rows)},
        "timings": {"total_s": elapsed},
    }


def render_json(report: dict) -> str:
    return json.dumps(_json_safe(report), indent=2, sort_keys=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and ``os.replace``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".ehverify-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig) -> int:
    jobs = config.jobs()
    if not jobs:
        print("error: empty parameter grid", file=sys.stderr)
        return 2
    if len(jobs) > config.max_specs:
        print(f"error: grid has {len(jobs)} specs, cap is {config.max_specs}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    rows = run_jobs(jobs, config.workers)
    report = build_report(config, rows, time.perf_counter() - t0)
    if config.json_path:
        write_atomic(config.json_path, render_json(report))
    if config.csv_path:
        write_atomic(config.csv_path, render_csv(rows))
    if not config.json_path and not config.csv_path:
        sys.stdout.write(render_json(report))
    return 0 if report["summary"]["passed"] else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
