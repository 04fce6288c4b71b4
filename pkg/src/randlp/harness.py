"""Experiment campaigns: deterministic seeding, optional process parallelism,
and file emission for the table, distribution, width, and tail studies.

Every random draw in a campaign comes from a stream index packed as

    stream_index = (grid_index * 2**20 + replicate_index) * 8 + lane

under the campaign's master seed, with lane 0 the coefficient matrix, lane 1
the cost vector, and lane 2 auxiliary draws (e.g. width directions). The
packing is a pure function of the task's coordinates, so results do not
depend on the worker count, and re-runs are bitwise reproducible.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from multiprocessing import get_context
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import ExperimentConfig, RestoreSettings, TailCase
from .geometry import UnboundedDirection, mean_width_mc
from .restore import DegenerateBlock, RestoreOptions, restore
from .sampling import CostVectorKind, EntryDistribution, SeedSpec, sample_cost_vector, sample_matrix
from .solver import LPInstance, solve
from .stats import asymptotic_bound, ecdf, histogram, ks_test, relative_gap, summarize, tail_probability_mc
from . import render

LANE_MATRIX = 0
LANE_COST = 1
LANE_AUX = 2
_LANES = 8
_REPLICATE_SPACE = 2**20


def stream_index(grid_index: int, replicate_index: int, lane: int) -> int:
    """Pack task coordinates into a nonnegative stream index."""
    if grid_index < 0 or not (0 <= replicate_index < _REPLICATE_SPACE) or not (0 <= lane < _LANES):
        raise ValueError("stream coordinates out of range")
    return (grid_index * _REPLICATE_SPACE + replicate_index) * _LANES + lane


@dataclass
class RunRecord:
    m: int
    n: int
    replicate_index: int
    stream_index: int
    z_star: Optional[float]
    pivots: int
    wall_time: float
    status: str
    error: Optional[str] = None
    arm: Optional[str] = None
    r: Optional[int] = None
    i0: Optional[int] = None
    i1: Optional[int] = None
    converged: Optional[bool] = None
    iterates: Optional[List[Dict[str, float]]] = None

    def to_json(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if v is not None}
        if self.z_star is None:
            payload["z_star"] = None
        return json.dumps(payload, sort_keys=True)


@dataclass
class CampaignResult:
    rows: List[dict]
    records: List[RunRecord]
    errored: int
    partial: bool
    files: List[str] = field(default_factory=list)
    ks: Optional[dict] = None


def _ensure_thread_caps() -> None:
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, "1")


def _map_tasks(fn, tasks: Sequence, workers: int) -> List:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    _ensure_thread_caps()
    ctx = get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(fn, tasks))


def _cost_replicate(policy: str, replicate_index: int) -> int:
    return 0 if policy == "FixedAcrossReplicates" else replicate_index


def _solve_task(task: Tuple) -> RunRecord:
    (grid_index, replicate_index, m, n, dist, cost_kind, cost_rep, master_seed, arm) = task
    mat_stream = stream_index(grid_index, replicate_index, LANE_MATRIX)
    A = sample_matrix(dist, m, n, SeedSpec(master_seed, mat_stream))
    c = sample_cost_vector(cost_kind, n, SeedSpec(master_seed, stream_index(grid_index, cost_rep, LANE_COST)))
    t0 = time.perf_counter()
    outcome = solve(LPInstance(A, c))
    wall = time.perf_counter() - t0
    z = outcome.z_star if outcome.status == "optimal" else None
    err = None if outcome.status == "optimal" else (outcome.message or outcome.status)
    return RunRecord(
        m=m,
        n=n,
        replicate_index=replicate_index,
        stream_index=mat_stream,
        z_star=z,
        pivots=outcome.pivots,
        wall_time=wall,
        status=outcome.status,
        error=err,
        arm=arm,
    )


def _restore_task(task: Tuple) -> RunRecord:
    (grid_index, replicate_index, m, n, dist, cost_kind, cost_rep, master_seed, settings) = task
    mat_stream = stream_index(grid_index, replicate_index, LANE_MATRIX)
    A = sample_matrix(dist, m, n, SeedSpec(master_seed, mat_stream))
    c = sample_cost_vector(cost_kind, n, SeedSpec(master_seed, stream_index(grid_index, cost_rep, LANE_COST)))
    opts = RestoreOptions(
        eps0=settings.eps0, shrink=settings.shrink, max_iters=settings.max_iters, feas_tol=settings.feas_tol
    )
    t0 = time.perf_counter()
    try:
        trace = restore(A, c, opts)
    except DegenerateBlock as exc:
        trace = exc.trace
        wall = time.perf_counter() - t0
        return RunRecord(
            m=m,
            n=n,
            replicate_index=replicate_index,
            stream_index=mat_stream,
            z_star=None,
            pivots=0,
            wall_time=wall,
            status="degenerate_block",
            error=str(exc),
            r=trace.iterations,
            i0=trace.iterates[0].violated if trace.iterations >= 1 else 0,
            i1=trace.iterates[1].violated if trace.iterations >= 2 else 0,
            converged=False,
            iterates=[asdict(rec) for rec in trace.iterates],
        )
    wall = time.perf_counter() - t0
    return RunRecord(
        m=m,
        n=n,
        replicate_index=replicate_index,
        stream_index=mat_stream,
        z_star=float(np.dot(c, trace.final_x)),
        pivots=0,
        wall_time=wall,
        status="converged" if trace.converged else "non_converged",
        error=None,
        r=trace.iterations,
        i0=trace.iterates[0].violated if trace.iterations >= 1 else 0,
        i1=trace.iterates[1].violated if trace.iterations >= 2 else 0,
        converged=trace.converged,
        iterates=[asdict(rec) for rec in trace.iterates],
    )


def _solve_campaign_records(config: ExperimentConfig, arms: Optional[List[Tuple[str, CostVectorKind]]] = None) -> List[RunRecord]:
    """Run one solve per (grid point, arm, replicate), ordered deterministically.

    Arms share the per-replicate matrix streams, so a cost-vector sweep is a
    paired comparison on identical matrices.
    """
    if arms is None:
        arms = [(None, config.cost_kind)]
    tasks = []
    for g, (m, n) in enumerate(config.grid):
        for arm_label, arm_cost in arms:
            for j in range(config.sample_size):
                tasks.append(
                    (g, j, m, n, config.dist, arm_cost, _cost_replicate(config.cost_policy, j), config.master_seed, arm_label)
                )
    return _map_tasks(_solve_task, tasks, config.workers)


def _grouped(records: List[RunRecord], key_fn) -> Dict:
    groups: Dict = {}
    for rec in records:
        groups.setdefault(key_fn(rec), []).append(rec)
    return groups


def _optimal_values(records: List[RunRecord]) -> List[float]:
    return [rec.z_star for rec in records if rec.status == "optimal" and rec.z_star is not None]


def run_objective_table(config: ExperimentConfig) -> CampaignResult:
    """Sample-mean objective versus the asymptotic reference on a grid."""
    records = _solve_campaign_records(config)
    groups = _grouped(records, lambda r: (r.m, r.n))
    rows = []
    errored = 0
    for (m, n) in config.grid:
        recs = groups.get((m, n), [])
        values = _optimal_values(recs)
        errored += len(recs) - len(values)
        ab = asymptotic_bound(m, n)
        mu = float(np.mean(values)) if values else float("nan")
        gap = relative_gap(ab, mu) if values else float("nan")
        rows.append({"m": m, "n": n, "ab": ab, "mu_hat": mu, "relative_gap_pct": gap})
    return CampaignResult(rows=rows, records=records, errored=errored, partial=errored > 0)


def run_stddev_table(config: ExperimentConfig) -> CampaignResult:
    """Sample standard deviation of the objective, scaled by sqrt(m)."""
    records = _solve_campaign_records(config)
    groups = _grouped(records, lambda r: (r.m, r.n))
    rows = []
    errored = 0
    for (m, n) in config.grid:
        recs = groups.get((m, n), [])
        values = _optimal_values(recs)
        errored += len(recs) - len(values)
        ab = asymptotic_bound(m, n)
        if len(values) >= 2:
            sigma = summarize(values).std
            scaled = sigma * math.sqrt(m)
        else:
            sigma = float("nan")
            scaled = float("nan")
        rows.append({"m": m, "n": n, "ab": ab, "sigma_hat": sigma, "sigma_sqrt_m": scaled})
    return CampaignResult(rows=rows, records=records, errored=errored, partial=errored > 0)


def run_sparse_cost_table(config: ExperimentConfig) -> CampaignResult:
    """Spike-cost sweep against the spread-cost baseline on shared matrices.

    k = 0 in the output denotes the baseline row.
    """
    arms: List[Tuple[str, CostVectorKind]] = [("baseline", config.cost_kind)]
    for k in config.k_values:
        arms.append((f"k={k}", CostVectorKind.k_spike(k)))
    records = _solve_campaign_records(config, arms=arms)
    groups = _grouped(records, lambda r: r.arm)
    errored = sum(1 for rec in records if rec.status != "optimal")
    baseline_values = _optimal_values(groups.get("baseline", []))
    mu_base = float(np.mean(baseline_values)) if baseline_values else float("nan")
    supplied = config.baseline_mu
    rows = [{"k": 0, "mu_hat": mu_base, "relative_gap_pct": 0.0}]
    for k in config.k_values:
        values = _optimal_values(groups.get(f"k={k}", []))
        mu = float(np.mean(values)) if values else float("nan")
        gap = relative_gap(mu_base, mu) if values and baseline_values else float("nan")
        rows.append({"k": k, "mu_hat": mu, "relative_gap_pct": gap})
    if supplied is not None:
        for row in rows:
            mu = row["mu_hat"]
            row["relative_gap_vs_supplied_pct"] = (
                relative_gap(supplied, mu) if math.isfinite(mu) else float("nan")
            )
    return CampaignResult(rows=rows, records=records, errored=errored, partial=errored > 0)


def run_distribution_study(config: ExperimentConfig) -> CampaignResult:
    """Histogram, ECDF, and normal goodness-of-fit of the objective ensemble."""
    records = _solve_campaign_records(config)
    values = _optimal_values(records)
    errored = len(records) - len(values)
    ks_payload: dict
    try:
        result = ks_test(values)
        ks_payload = {"statistic": result.statistic, "p_value": result.p_value, "n_samples": result.n_samples}
    except ValueError as exc:
        ks_payload = {"error": str(exc)}
    bins = histogram(values) if values else []
    rows = [{"bin_left": left, "bin_right": right, "count": count} for (left, right, count) in bins]
    return CampaignResult(rows=rows, records=records, errored=errored, partial=errored > 0, ks=ks_payload)


def run_algorithm_table(config: ExperimentConfig) -> CampaignResult:
    """Feasibility-restoration sweeps over the grid, one row per run."""
    tasks = []
    for g, (m, n) in enumerate(config.grid):
        for j in range(config.sample_size):
            tasks.append(
                (g, j, m, n, config.dist, config.cost_kind, _cost_replicate(config.cost_policy, j), config.master_seed, config.restore)
            )
    records = _map_tasks(_restore_task, tasks, config.workers)
    rows = []
    errored = 0
    for rec in records:
        if rec.status == "degenerate_block":
            errored += 1
        rows.append(
            {
                "m": rec.m,
                "n": rec.n,
                "r": rec.r,
                "z_x": rec.z_star if rec.z_star is not None else float("nan"),
                "i0": rec.i0,
                "i1": rec.i1,
                "converged": bool(rec.converged),
            }
        )
    partial = errored > 0 or any(not rec.converged for rec in records)
    return CampaignResult(rows=rows, records=records, errored=errored, partial=partial)


def run_mean_width(config: ExperimentConfig) -> CampaignResult:
    """Monte Carlo mean width per grid point."""
    rows = []
    records = []
    errored = 0
    for g, (m, n) in enumerate(config.grid):
        mat_stream = stream_index(g, 0, LANE_MATRIX)
        A = sample_matrix(config.dist, m, n, SeedSpec(config.master_seed, mat_stream))
        t0 = time.perf_counter()
        try:
            est = mean_width_mc(A, config.trials, SeedSpec(config.master_seed, stream_index(g, 0, LANE_AUX)))
        except (UnboundedDirection, RuntimeError) as exc:
            errored += 1
            wall = time.perf_counter() - t0
            rows.append(
                {
                    "m": m,
                    "n": n,
                    "trials": config.trials,
                    "estimate": float("nan"),
                    "standard_error": float("nan"),
                    "normalized": float("nan"),
                }
            )
            records.append(
                RunRecord(
                    m=m, n=n, replicate_index=0, stream_index=mat_stream, z_star=None,
                    pivots=0, wall_time=wall, status="error", error=str(exc),
                )
            )
            continue
        wall = time.perf_counter() - t0
        rows.append(
            {
                "m": m,
                "n": n,
                "trials": est.trials,
                "estimate": est.estimate,
                "standard_error": est.standard_error,
                "normalized": est.normalized,
            }
        )
        records.append(
            RunRecord(
                m=m, n=n, replicate_index=0, stream_index=mat_stream, z_star=est.estimate,
                pivots=0, wall_time=wall, status="optimal",
            )
        )
    return CampaignResult(rows=rows, records=records, errored=errored, partial=errored > 0)


def run_tail_check(config: ExperimentConfig) -> CampaignResult:
    """Monte Carlo moderate-deviation tails for the flat unit direction."""
    rows = []
    records = []
    for idx, case in enumerate(config.tail_cases):
        y = np.full(case.n, case.n ** -0.5)
        t = case.threshold()
        spec = SeedSpec(config.master_seed, stream_index(idx, 0, LANE_MATRIX))
        t0 = time.perf_counter()
        est = tail_probability_mc(y, config.dist, t, case.trials, spec)
        wall = time.perf_counter() - t0
        rows.append(
            {
                "n": case.n,
                "delta": case.delta,
                "eps": case.eps,
                "t": t,
                "p_hat": est.p_hat,
                "se": est.standard_error,
                "exponent_bound": math.exp(-case.delta * case.n / 2.0),
            }
        )
        records.append(
            RunRecord(
                m=case.trials, n=case.n, replicate_index=0, stream_index=spec.stream_index,
                z_star=est.p_hat, pivots=0, wall_time=wall, status="optimal",
            )
        )
    return CampaignResult(rows=rows, records=records, errored=0, partial=False)


_RUNNERS = {
    "ObjectiveTable": run_objective_table,
    "StdDevTable": run_stddev_table,
    "SparseCostTable": run_sparse_cost_table,
    "DistributionStudy": run_distribution_study,
    "AlgorithmTable": run_algorithm_table,
    "MeanWidth": run_mean_width,
    "TailCheck": run_tail_check,
}

_TABLE_FILES = {
    "ObjectiveTable": ("objective_table.csv", ("m", "n", "ab", "mu_hat", "relative_gap_pct")),
    "StdDevTable": ("stddev_table.csv", ("m", "n", "ab", "sigma_hat", "sigma_sqrt_m")),
    "SparseCostTable": ("sparse_cost_table.csv", ("k", "mu_hat", "relative_gap_pct")),
    "AlgorithmTable": ("algorithm_table.csv", ("m", "n", "r", "z_x", "i0", "i1", "converged")),
    "MeanWidth": ("mean_width.csv", ("m", "n", "trials", "estimate", "standard_error", "normalized")),
    "TailCheck": ("tail_check.csv", ("n", "delta", "eps", "t", "p_hat", "se", "exponent_bound")),
}


def run_campaign(config: ExperimentConfig) -> CampaignResult:
    """Dispatch to the configured experiment kind."""
    return _RUNNERS[config.experiment_kind](config)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: Sequence[str], rows: List[dict], footer: Optional[str] = None) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(row[col]) for col in header))
    if footer is not None:
        lines.append(footer)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit(config: ExperimentConfig, result: CampaignResult, output_dir: Optional[str] = None) -> List[str]:
    """Write the campaign's CSV/JSON (and optional SVG) files; returns paths.

    Output is bitwise identical for identical inputs, apart from wall_time
    fields inside records.jsonl.
    """
    out = output_dir if output_dir is not None else config.output_dir
    os.makedirs(out, exist_ok=True)
    files = []

    kind = config.experiment_kind
    footer = f"# excluded_replicates={result.errored}"
    if kind == "DistributionStudy":
        hist_path = os.path.join(out, "histogram.csv")
        _write_csv(hist_path, ("bin_left", "bin_right", "count"), result.rows, footer)
        files.append(hist_path)
        values = _optimal_values(result.records)
        ecdf_rows = [{"x": x, "ecdf": p} for (x, p) in ecdf(values)] if values else []
        ecdf_path = os.path.join(out, "ecdf.csv")
        _write_csv(ecdf_path, ("x", "ecdf"), ecdf_rows, footer)
        files.append(ecdf_path)
        ks_path = os.path.join(out, "ks.json")
        with open(ks_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(result.ks, sort_keys=True) + "\n")
        files.append(ks_path)
        if config.svg:
            bins = [(row["bin_left"], row["bin_right"], row["count"]) for row in result.rows]
            svg_hist = os.path.join(out, "histogram.svg")
            render.svg_histogram(bins, svg_hist)
            files.append(svg_hist)
            svg_ecdf = os.path.join(out, "ecdf.svg")
            render.svg_steps([(row["x"], row["ecdf"]) for row in ecdf_rows], svg_ecdf)
            files.append(svg_ecdf)
    else:
        name, header = _TABLE_FILES[kind]
        if result.rows and "relative_gap_vs_supplied_pct" in result.rows[0]:
            header = tuple(header) + ("relative_gap_vs_supplied_pct",)
        table_path = os.path.join(out, name)
        _write_csv(table_path, header, result.rows, footer)
        files.append(table_path)

    records_path = os.path.join(out, "records.jsonl")
    with open(records_path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in result.records:
            fh.write(rec.to_json() + "\n")
    files.append(records_path)
    result.files = files
    return files
