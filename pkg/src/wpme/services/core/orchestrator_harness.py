"""
Harness Orchestrator — Coordinates solve → check → report.

Pipelines:
    run         → validate every check, solve, run checks, confirm raw
                  violations on a refined run, write CSVs + summary.json
    identities  → operator identity suites on seeded random trig fields
    sweep       → one run per value of p, m or α; aggregate sweep.csv
"""

# ═══════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════

import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from wpme.config.settings import NumericsConfig, settings
from wpme.core.scenario_loader import describe_validation_error
from wpme.core.worker import run_parallel
from wpme.exceptions import ParameterError, ScenarioError, UnsupportedEstimateError, WpmeException
from wpme.schemas.reports import CheckOutcome, RunReport, SweepPoint
from wpme.schemas.scenario import CheckSpec, InitialKind, Scenario, SweepAxis
from wpme.services.checks import CheckContext, CheckPlugin, CheckResult, check_registry
from wpme.services.common import (
    Stopwatch,
    log_check,
    log_error,
    log_info,
    log_success,
    log_warning,
    observed_order,
    safe_json_dumps,
    write_csv,
)
from wpme.services.geometry.bochner import bochner_defect, hessian_trace_slack, operator_slack
from wpme.services.geometry.curvature import CurvatureReport, bakry_emery
from wpme.services.geometry.fields import ScalarField
from wpme.services.geometry.manifold import ManifoldSpec, PhiKind
from wpme.services.geometry.operators import hessian, symmetry_defect, weighted_integral, witten_laplacian
from wpme.services.geometry.trig_fields import random_trig_polynomial
from wpme.services.solver.export import read_initial_state, write_trajectory_csv
from wpme.services.solver.integrator import solve
from wpme.services.solver.trajectory import Trajectory

SUMMARY_FILE = "summary.json"
SWEEP_HEADER = ["axis", "value", "check", "min_margin", "pass", "skipped_reason"]
IDENTITY_SUITE_HEADER = ["suite", "manifold", "value", "threshold", "pass"]
BOCHNER_SLACK_FLOOR = 1e-6


# ═══════════════════════════════════════════════════════════════════
# SCENARIO PREPARATION
# ═══════════════════════════════════════════════════════════════════

def initial_state(scenario: Scenario, manifold: ManifoldSpec) -> ScalarField:
    initial = scenario.initial
    if initial.kind == InitialKind.CONSTANT:
        return ScalarField.constant(manifold, initial.value)
    if initial.kind == InitialKind.TRIG:
        poly = random_trig_polynomial(
            manifold.lengths,
            seed=scenario.seed,
            modes=initial.modes,
            max_wavenumber=initial.max_wavenumber,
            amplitude=initial.amplitude,
            offset=initial.value,
        )
        return poly.field(manifold)
    if initial.kind == InitialKind.COSINE:
        k = 2.0 * np.pi * initial.wavenumber / manifold.lengths[0]
        return ScalarField.from_function(
            manifold, lambda x, *rest: initial.value + initial.amplitude * np.cos(k * x)
        )
    return read_initial_state(initial.file, manifold)


def validate_checks(scenario: Scenario, manifold: ManifoldSpec) -> Dict[float, CurvatureReport]:
    """
    Every check's constraints, before anything is solved. Returns the curvature
    report for each m in use; K is always taken from these, never asserted.
    """
    curvatures: Dict[float, CurvatureReport] = {}
    for spec in scenario.checks:
        plugin = check_registry.get_plugin(spec.id)
        curvature = None
        if spec.m is not None:
            if spec.m not in curvatures:
                curvatures[spec.m] = bakry_emery(manifold, spec.m)
            curvature = curvatures[spec.m]
        plugin.validate(spec, scenario.solver.p, manifold, curvature)
    return curvatures


class RefinedRun:
    """
    The scenario re-solved with every grid count doubled, dt quartered and the
    snapshot stride ×4, so refined snapshots land on the coarse snapshot times.
    Solved at most once, on first request.
    """

    def __init__(self, scenario: Scenario, coarse: Trajectory):
        self._scenario = scenario
        self._coarse = coarse
        self._lock = threading.Lock()
        self._trajectory: Optional[Trajectory] = None

    def trajectory(self) -> Trajectory:
        with self._lock:
            if self._trajectory is None:
                self._trajectory = self._solve()
            return self._trajectory

    def _solve(self) -> Trajectory:
        if self._scenario.initial.kind == InitialKind.FILE:
            raise ParameterError("initial data read from a file cannot be refined")
        manifold = self._scenario.manifold.build(refine=2)
        solver = self._scenario.solver.model_copy(update={
            "dt": self._coarse.metadata["dt"] / 4.0,
            "snapshot_stride": self._scenario.solver.snapshot_stride * 4,
        })
        log_info(f"Refined run: grid {list(manifold.grid)}, dt={solver.dt:.3e}")
        return solve(initial_state(self._scenario, manifold), solver)


def confirm_violation(plugin: CheckPlugin, spec: CheckSpec, raw: CheckResult, refined: RefinedRun) -> Dict[str, Any]:
    """
    Rerun a raw violation on the refined trajectory. The violation is eliminated
    when the refined margin is within tolerance or at least REFINE_SHRINK_FACTOR
    times smaller in magnitude.
    """
    log_warning(
        f"{spec.id}: raw violation (min margin {raw.min_margin:.3e} < -{raw.tol:.3e}), "
        f"confirming on a refined run"
    )
    if not plugin.refinable:
        return {"available": False, "reason": f"{spec.id} does not depend on the discretization"}
    try:
        fine_traj = refined.trajectory()
    except WpmeException as e:
        log_warning(f"{spec.id}: refinement unavailable: {e}")
        return {"available": False, "reason": str(e)}

    curvature = bakry_emery(fine_traj.manifold, spec.m) if spec.m is not None else None
    fine = plugin.run(CheckContext(fine_traj, spec, curvature))
    raw_size = abs(raw.min_margin)
    fine_size = abs(min(fine.min_margin, 0.0))
    eliminated = fine.min_margin >= -fine.tol or fine_size * NumericsConfig.REFINE_SHRINK_FACTOR <= raw_size
    outcome = {
        "available": True,
        "grid": list(fine_traj.manifold.grid),
        "dt": fine_traj.metadata["dt"],
        "refined_min_margin": fine.min_margin,
        "shrink_factor": raw_size / fine_size if fine_size > 0.0 else None,
        "eliminated": eliminated,
    }
    if eliminated:
        log_success(f"{spec.id}: violation eliminated under refinement ({fine.min_margin:.3e})")
    else:
        log_error(f"{spec.id}: violation persists under refinement ({fine.min_margin:.3e})")
    return outcome


# ═══════════════════════════════════════════════════════════════════
# OUTPUT
# ═══════════════════════════════════════════════════════════════════

def write_check_tables(out_dir: Path, results: Sequence[CheckResult]) -> List[Path]:
    """
    Shared tables (estimates) are concatenated into one CSV; every other table
    gets its own file, suffixed _2, _3 … when a check id repeats.
    """
    files: "OrderedDict[str, Tuple[List[str], List[tuple]]]" = OrderedDict()
    for result in results:
        for table in result.tables:
            name = table.name
            if table.shared and name in files:
                files[name][1].extend(table.rows)
                continue
            suffix = 2
            while name in files:
                name = f"{table.name}_{suffix}"
                suffix += 1
            files[name] = (list(table.header), list(table.rows))

    paths = []
    for name, (header, rows) in files.items():
        path = out_dir / f"{name}.csv"
        write_csv(path, header, rows)
        paths.append(path)
    return paths


def write_summary(out_dir: Path, report: RunReport) -> Path:
    path = out_dir / SUMMARY_FILE
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(safe_json_dumps(report.to_summary_dict()) + "\n")
    return path


def _output_dir(scenario: Optional[Scenario], out_dir: Optional[Path]) -> Path:
    if out_dir is not None:
        return Path(out_dir)
    if scenario is not None and scenario.output_dir is not None:
        return scenario.output_dir
    return settings.out_dir


# ═══════════════════════════════════════════════════════════════════
# RUN
# ═══════════════════════════════════════════════════════════════════

def run_scenario(scenario: Scenario, out_dir: Optional[Path] = None,
                 max_workers: Optional[int] = None) -> RunReport:
    """
    Validate → solve → check (checks in parallel) → confirm raw violations →
    write CSVs and summary.json. Raises ParameterError / ScenarioError /
    UnsupportedEstimateError before solving when a check is inadmissible.
    """
    stopwatch = Stopwatch()
    out = _output_dir(scenario, out_dir)
    manifold = scenario.manifold.build()
    curvatures = validate_checks(scenario, manifold)
    log_check(f"Scenario '{scenario.name}': {len(scenario.checks)} checks validated")

    traj = solve(initial_state(scenario, manifold), scenario.solver)
    refined = RefinedRun(scenario, traj)

    def evaluate(spec: CheckSpec) -> Tuple[CheckResult, CheckOutcome]:
        plugin = check_registry.get_plugin(spec.id)
        log_check(f"Running {spec.id} ({spec.label})")
        result = plugin.run(CheckContext(traj, spec, curvatures.get(spec.m)))
        refinement = confirm_violation(plugin, spec, result, refined) if result.raw_violation else None
        outcome = result.to_outcome(refinement)
        status = "pass" if outcome.passed else "FAIL"
        log_info(f"{spec.id}: {status} (min margin {result.min_margin:.3e}, tol {result.tol:.3e})")
        return result, outcome

    evaluated = run_parallel(evaluate, scenario.checks, max_workers)

    out.mkdir(parents=True, exist_ok=True)
    paths = write_check_tables(out, [result for result, _ in evaluated])
    if scenario.write_trajectory:
        paths.append(write_trajectory_csv(traj, out / "trajectory.csv"))

    report = RunReport(
        scenario=scenario.echo(),
        checks=[outcome for _, outcome in evaluated],
        K=max((c.K for c in curvatures.values()), default=None),
        lambda_min=min((c.lambda_min for c in curvatures.values()), default=None),
        wall_time=stopwatch.elapsed(),
        output_files=[str(p) for p in paths],
    )
    summary = write_summary(out, report)
    report = report.model_copy(update={"output_files": report.output_files + [str(summary)]})

    if report.overall_pass:
        log_success(f"Scenario '{scenario.name}' passed ({report.wall_time:.1f}s)")
    else:
        failed = [c.id for c in report.checks if not c.passed]
        log_error(f"Scenario '{scenario.name}' failed: {', '.join(failed)}")
    return report


# ═══════════════════════════════════════════════════════════════════
# IDENTITY SUITES
# ═══════════════════════════════════════════════════════════════════

@dataclass
class _Suite:
    id: str
    rows: List[tuple] = field(default_factory=list)   # (manifold, value, threshold, pass)
    details: Dict[str, Any] = field(default_factory=dict)

    def add(self, manifold: ManifoldSpec, value: float, threshold: float, ok: bool) -> None:
        label = f"{manifold.kind.value}{list(manifold.grid)} phi={manifold.phi_kind.value}({manifold.phi_amplitude:g})"
        self.rows.append((label, float(value), float(threshold), bool(ok)))

    def outcome(self, margins: List[float]) -> CheckOutcome:
        worst = min(range(len(margins)), key=lambda i: margins[i])
        return CheckOutcome(
            id=self.id,
            passed=all(row[3] for row in self.rows),
            min_margin=margins[worst],
            argmin={"manifold": self.rows[worst][0]},
            details=self.details,
        )


def _identity_manifolds() -> List[ManifoldSpec]:
    return [
        ManifoldSpec.circle(128, phi=PhiKind.SIN, amplitude=0.3),
        ManifoldSpec.torus((32, 32), phi=PhiKind.SIN, amplitude=0.3),
    ]


def _random_field(manifold: ManifoldSpec, seed: int, rng: np.random.Generator) -> ScalarField:
    modes = 3 if manifold.n == 1 else 4
    return random_trig_polynomial(manifold.lengths, seed=seed, modes=modes, rng=rng).field(manifold)


def _symmetry_suite(seed: int, rng: np.random.Generator) -> Tuple[_Suite, CheckOutcome]:
    suite, margins = _Suite("symmetry"), []
    for manifold in _identity_manifolds():
        u, v = _random_field(manifold, seed, rng), _random_field(manifold, seed, rng)
        scale = max(u.sup_norm(), v.sup_norm()) ** 2
        defect = symmetry_defect(u, v)
        suite.add(manifold, defect, 1e-10 * scale, defect <= 1e-10 * scale)
        margins.append(1e-10 * scale - defect)
    return suite, suite.outcome(margins)


def _constant_kernel_suite() -> Tuple[_Suite, CheckOutcome]:
    suite, margins = _Suite("constant_kernel"), []
    for manifold in _identity_manifolds():
        worst = max(witten_laplacian(ScalarField.constant(manifold, c)).sup_norm() for c in (1.0, -2.5, 7.0))
        suite.add(manifold, worst, 0.0, worst == 0.0)
        margins.append(-worst)
    return suite, suite.outcome(margins)


def _divergence_suite(seed: int, rng: np.random.Generator) -> Tuple[_Suite, CheckOutcome]:
    suite, margins = _Suite("divergence"), []
    for manifold in _identity_manifolds():
        f = _random_field(manifold, seed, rng)
        threshold = 1e-12 * max(1.0, f.sup_norm() ** 2)
        value = abs(weighted_integral(witten_laplacian(f)))
        suite.add(manifold, value, threshold, value <= threshold)
        margins.append(threshold - value)
    return suite, suite.outcome(margins)


def _bochner_equality_suite(seed: int, rng: np.random.Generator) -> Tuple[_Suite, CheckOutcome]:
    """L∞ equality defect at N = 64 and 128 on the weighted circle; observed order ≥ 1.8."""
    suite = _Suite("bochner_equality")
    poly = random_trig_polynomial((2.0 * np.pi,), seed=seed, modes=3, max_wavenumber=3, rng=rng)
    sups = []
    for points in (64, 128):
        manifold = ManifoldSpec.circle(points, phi=PhiKind.SIN, amplitude=0.3)
        defect, _ = bochner_defect(poly.field(manifold), 3.0)
        sups.append(defect.sup_norm())
    order = observed_order(sups[0], sups[1])
    # one row, labelled by the finer grid; value is the observed order
    suite.add(manifold, order, 1.8, order >= 1.8)
    suite.details = {"defects": {"64": sups[0], "128": sups[1]}, "observed_order": order}
    return suite, suite.outcome([order - 1.8])


def _bochner_inequality_suite(seed: int) -> Tuple[_Suite, CheckOutcome]:
    """
    Pointwise slack ≥ −1e−6 at N = 256 for m ∈ {2, 3, 10}, and the slack built
    from Δ_φw converging to it at order ≥ 1.8 between N = 128 and 256.
    """
    suite, margins = _Suite("bochner_inequality"), []
    poly = random_trig_polynomial((2.0 * np.pi,), seed=seed, modes=3)
    fine = ManifoldSpec.circle(256, phi=PhiKind.SIN, amplitude=0.3)
    w = poly.field(fine)
    for m in (2.0, 3.0, 10.0):
        _, slack = bochner_defect(w, m)
        value = slack.min()
        suite.add(fine, value, -BOCHNER_SLACK_FLOOR, value >= -BOCHNER_SLACK_FLOOR)
        margins.append(value + BOCHNER_SLACK_FLOOR)
        suite.details[f"m={m:g}"] = {"min_slack": value, "min_operator_slack": operator_slack(w, m).min()}

    gaps = []
    for points in (128, 256):
        manifold = ManifoldSpec.circle(points, phi=PhiKind.SIN, amplitude=0.3)
        field_w = poly.field(manifold)
        _, slack = bochner_defect(field_w, 3.0)
        gaps.append((operator_slack(field_w, 3.0) - slack).sup_norm())
    order = observed_order(gaps[0], gaps[1])
    suite.add(fine, order, 1.8, order >= 1.8)
    margins.append(order - 1.8)
    suite.details["operator_gap"] = {"128": gaps[0], "256": gaps[1], "observed_order": order}
    return suite, suite.outcome(margins)


def _hessian_trace_suite(seed: int, rng: np.random.Generator) -> Tuple[_Suite, CheckOutcome]:
    """|∇²w|² − (1/n)(tr ∇²w)² ≥ 0 per node, up to round-off."""
    suite, margins = _Suite("hessian_trace"), []
    for manifold in _identity_manifolds():
        w = _random_field(manifold, seed, rng)
        threshold = -1e-12 * max(1.0, hessian(w).sup_norm() ** 2)
        value = hessian_trace_slack(w).min()
        suite.add(manifold, value, threshold, value >= threshold)
        margins.append(value - threshold)
    return suite, suite.outcome(margins)


def run_identities(seed: Optional[int] = None, out_dir: Optional[Path] = None) -> RunReport:
    """Operator identity suites on seeded random trig fields; writes identities.csv + summary.json."""
    stopwatch = Stopwatch()
    seed = settings.default_seed if seed is None else seed
    out = _output_dir(None, out_dir)
    rng = np.random.default_rng(seed)
    log_check(f"Running operator identity suites (seed {seed})")

    suites = [
        _symmetry_suite(seed, rng),
        _constant_kernel_suite(),
        _divergence_suite(seed, rng),
        _bochner_equality_suite(seed, rng),
        _bochner_inequality_suite(seed),
        _hessian_trace_suite(seed, rng),
    ]
    for suite, outcome in suites:
        log_info(f"{suite.id}: {'pass' if outcome.passed else 'FAIL'}")

    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "identities.csv"
    write_csv(csv_path, IDENTITY_SUITE_HEADER, [(suite.id, *row) for suite, _ in suites for row in suite.rows])

    report = RunReport(
        scenario={"name": "identities", "seed": seed},
        checks=[outcome for _, outcome in suites],
        wall_time=stopwatch.elapsed(),
        output_files=[str(csv_path)],
    )
    summary = write_summary(out, report)
    report = report.model_copy(update={"output_files": report.output_files + [str(summary)]})
    if report.overall_pass:
        log_success("All identity suites passed")
    return report


# ═══════════════════════════════════════════════════════════════════
# SWEEP
# ═══════════════════════════════════════════════════════════════════

@dataclass
class SweepResult:
    points: List[SweepPoint]
    reports: List[Optional[RunReport]]
    csv_path: Path

    @property
    def ran(self) -> int:
        return sum(1 for r in self.reports if r is not None)

    @property
    def all_passed(self) -> bool:
        return all(r.overall_pass for r in self.reports if r is not None)


def run_sweep(scenario: Scenario, axis: SweepAxis, values: Sequence[float],
              out_dir: Optional[Path] = None, max_workers: Optional[int] = None) -> SweepResult:
    """
    One run per value, each in its own subdirectory. An invalid point is
    skipped with the constraint it broke recorded, never a hard failure.
    """
    axis = SweepAxis(axis)
    out = _output_dir(scenario, out_dir)
    check_ids = [spec.id for spec in scenario.checks]

    def skipped(value: float, reason: str) -> Tuple[List[SweepPoint], None]:
        log_warning(f"sweep {axis.value}={value:g} skipped: {reason}")
        return [SweepPoint(axis=axis.value, value=value, check=cid, skipped_reason=reason) for cid in check_ids], None

    def point(value: float) -> Tuple[List[SweepPoint], Optional[RunReport]]:
        try:
            variant = scenario.with_axis_value(axis, value)
        except ValidationError as e:
            return skipped(value, describe_validation_error(e))
        try:
            report = run_scenario(variant, out / f"{axis.value}_{value:g}", max_workers=1)
        except (ParameterError, UnsupportedEstimateError, ScenarioError) as e:
            return skipped(value, str(e))
        return [
            SweepPoint(axis=axis.value, value=value, check=c.id, min_margin=c.min_margin, passed=c.passed)
            for c in report.checks
        ], report

    results = run_parallel(point, list(values), max_workers)

    points = [p for pts, _ in results for p in pts]
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    write_csv(csv_path, SWEEP_HEADER, [p.row() for p in points])
    sweep = SweepResult(points=points, reports=[r for _, r in results], csv_path=csv_path)
    log_info(f"Sweep over {axis.value}: {sweep.ran}/{len(values)} points ran")
    return sweep
