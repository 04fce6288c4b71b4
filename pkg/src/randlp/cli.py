"""Command-line front end.

Subcommands mirror the experiment kinds: `table`, `dist`, `meanwidth`, and
`tailcheck` run campaigns from a YAML config; `generate`, `solve`, and
`restore` work on single .npz instances. Every subcommand accepts --config,
--seed, --workers, and --out. Exit codes: 0 full success, 2 partial success
(some replicates errored or a restoration did not converge), 1 bad
configuration or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="YAML campaign/instance configuration")
    sub.add_argument("--seed", type=int, help="override the config's master_seed")
    sub.add_argument("--workers", type=int, help="override the config's worker count")
    sub.add_argument("--out", help="output file (instance commands) or directory (campaigns)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randlp", description="Random linear program experiments")
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="sample one instance to an .npz file")
    _add_common(gen)

    solve_p = subs.add_parser("solve", help="solve an .npz instance exactly")
    solve_p.add_argument("instance", help="path to an .npz instance")
    _add_common(solve_p)

    restore_p = subs.add_parser("restore", help="run feasibility restoration on an .npz instance")
    restore_p.add_argument("instance", help="path to an .npz instance")
    _add_common(restore_p)

    for name, blurb in (
        ("table", "run a table campaign (objective, stddev, sparse-cost, or algorithm)"),
        ("dist", "run the distribution study"),
        ("meanwidth", "run the mean-width estimate"),
        ("tailcheck", "run the moderate-deviation tail checks"),
    ):
        sub = subs.add_parser(name, help=blurb)
        _add_common(sub)
    return parser


_COMMAND_KINDS = {
    "table": ("ObjectiveTable", "StdDevTable", "SparseCostTable", "AlgorithmTable"),
    "dist": ("DistributionStudy",),
    "meanwidth": ("MeanWidth",),
    "tailcheck": ("TailCheck",),
}


def _load_config(args) -> "object":
    from .config import ConfigError, load_config

    if not args.config:
        raise ConfigError("this command needs --config")
    config = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    env_dir = os.environ.get("RANDLP_OUTPUT_DIR")
    if args.out:
        overrides["output_dir"] = args.out
    elif env_dir:
        overrides["output_dir"] = env_dir
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


def _run_campaign(args) -> int:
    from .config import ConfigError
    from .harness import emit, run_campaign

    config = _load_config(args)
    allowed = _COMMAND_KINDS[args.command]
    if config.experiment_kind not in allowed:
        raise ConfigError(
            f"experiment kind {config.experiment_kind!r} does not belong to `{args.command}` "
            f"(expected one of {', '.join(allowed)})"
        )
    result = run_campaign(config)
    files = emit(config, result)
    for path in files:
        print(path)
    return 2 if result.partial else 0


def _instance_seed(args, config) -> int:
    if args.seed is not None:
        return args.seed
    if config is not None:
        return config.master_seed
    return 0


def _cmd_generate(args) -> int:
    import numpy as np

    from .config import ConfigError
    from .harness import LANE_COST, LANE_MATRIX, stream_index
    from .sampling import SeedSpec, sample_cost_vector, sample_matrix

    config = _load_config(args) if args.config else None
    if config is None:
        raise ConfigError("generate needs --config for the instance shape and ensemble")
    if not config.grid:
        raise ConfigError("generate needs a non-empty grid; the first entry is used")
    m, n = config.grid[0]
    master_seed = _instance_seed(args, config)
    mat_stream = stream_index(0, 0, LANE_MATRIX)
    cost_stream = stream_index(0, 0, LANE_COST)
    A = sample_matrix(config.dist, m, n, SeedSpec(master_seed, mat_stream))
    c = sample_cost_vector(config.cost_kind, n, SeedSpec(master_seed, cost_stream))
    out = args.out or "instance.npz"
    if not out.endswith(".npz"):
        out += ".npz"
    np.savez(
        out,
        A=A,
        c=c,
        dist_kind=np.array(config.dist.kind),
        master_seed=np.array(master_seed, dtype=np.uint64),
        matrix_stream=np.array(mat_stream, dtype=np.int64),
        cost_stream=np.array(cost_stream, dtype=np.int64),
    )
    print(out)
    return 0


def _load_instance(path: str):
    import numpy as np

    with np.load(path) as data:
        return np.array(data["A"], dtype=float), np.array(data["c"], dtype=float)


def _cmd_solve(args) -> int:
    from .solver import LPInstance, solve

    A, c = _load_instance(args.instance)
    outcome = solve(LPInstance(A, c))
    payload = {
        "status": outcome.status,
        "z_star": outcome.z_star,
        "pivots": outcome.pivots,
        "x_star": None if outcome.x_star is None else [float(v) for v in outcome.x_star],
        "y_star": None if outcome.y_star is None else [float(v) for v in outcome.y_star],
        "ray": None if outcome.ray is None else [float(v) for v in outcome.ray],
        "message": outcome.message,
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return 0 if outcome.status in ("optimal", "unbounded") else 2


def _cmd_restore(args) -> int:
    from dataclasses import asdict

    from .restore import DegenerateBlock, RestoreOptions, restore

    A, c = _load_instance(args.instance)
    settings = None
    if args.config:
        config = _load_config(args)
        settings = config.restore
    opts = (
        RestoreOptions()
        if settings is None
        else RestoreOptions(
            eps0=settings.eps0, shrink=settings.shrink, max_iters=settings.max_iters, feas_tol=settings.feas_tol
        )
    )
    status = 0
    try:
        trace = restore(A, c, opts)
    except DegenerateBlock as exc:
        trace = exc.trace
        status = 2
    payload = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "objective": float(c @ trace.final_x),
        "iterates": [asdict(rec) for rec in trace.iterates],
        "final_x": [float(v) for v in trace.final_x],
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    if not trace.converged:
        status = 2
    return status


def main(argv: Optional[List[str]] = None) -> int:
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, "1")
    parser = build_parser()
    args = parser.parse_args(argv)
    from .config import ConfigError

    try:
        if args.command in _COMMAND_KINDS:
            return _run_campaign(args)
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "restore":
            return _cmd_restore(args)
    except ConfigError as exc:
        print(f"randlp: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"randlp: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable command dispatch")


if __name__ == "__main__":
    sys.exit(main())
