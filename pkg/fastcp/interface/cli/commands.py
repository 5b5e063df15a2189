"""
Handlers for the fastcp subcommands. Each returns the process exit code.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ...algorithms.options import Algorithm, SolveOptions
from ...algorithms.runner import run
from ...bench.checks import run_gradcheck
from ...bench.harness import BenchConfig, render_records, run_benchmark
from ...config import settings
from ...core.kruskal import KruskalModel
from ...core.utils.helpers import parse_int_list, parse_name_list
from ...io.kruskal_io import write_kruskal
from ...io.tensor_io import read_tensor

logger = logging.getLogger(__name__)

ALGORITHM_NAMES = [a.value for a in Algorithm]


def cmd_bench(args: argparse.Namespace) -> int:
    common = {
        "iters": args.iters,
        "reps": args.reps,
        "seed": args.seed,
        "algos": tuple(parse_name_list(args.algos, ALGORITHM_NAMES, "--algos")),
        "match_order": args.match_order,
        "mem_budget": args.mem_budget,
        "out": Path(args.out) if args.out else None,
        "output_format": args.format,
    }
    if args.dims:
        dims = parse_int_list(args.dims, "--dims")
        cfg = BenchConfig.single(dims, args.rank or 10, **common)
    else:
        cfg = BenchConfig.default_grid(**common)
        if args.rank:
            cells = [{"dims": c.dims, "rank": args.rank} for c in cfg.cells if c.rank == 1]
            cfg = BenchConfig.create(cells=cells, **common)

    records = run_benchmark(cfg)
    if cfg.out is not None:
        print(f"Wrote {len(records)} records to {cfg.out}")
    else:
        print(render_records(records, cfg.output_format), end="")
    failed = [r for r in records if r.status.startswith("failed")]
    return 1 if failed else 0


def cmd_decompose(args: argparse.Namespace) -> int:
    tensor = read_tensor(args.input)
    opts = SolveOptions.create(
        max_iters=args.iters, tol=args.tol, seed=args.seed, step=args.step
    )
    init = KruskalModel.random(tensor.dims, args.rank, np.random.default_rng(opts.seed))
    model, trace = run(tensor, init, opts, args.algo)
    if args.out:
        write_kruskal(args.out, model)
        logger.info("wrote factors to %s", args.out)
    if args.trace:
        pd.DataFrame(trace.to_records()).to_csv(args.trace, index=False)
    print(
        f"{trace.algorithm}: {trace.iterations} sweeps, "
        f"rel_error={trace.rel_errors[-1]:.6e} fit={trace.fits[-1]:.6f} "
        f"time={trace.total_seconds:.4f}s"
        + (" (converged)" if trace.converged else "")
    )
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    dims = parse_int_list(args.dims, "--dims") if args.dims else None
    report = run_gradcheck(dims, args.rank, args.trials, args.seed, fd=not args.no_fd)
    print(report.to_frame().to_string(index=False, float_format=lambda v: f"{v:.2e}"))
    if report.passed:
        print(f"All {len(report.trials)} trials passed")
        return 0
    print("Some checks FAILED")
    return 1


def add_bench_parser(sub) -> None:
    p = sub.add_parser("bench", help="Time ordinary vs fast ALS on random tensors")
    p.add_argument("--dims", help="Comma-separated dims, e.g. 10,10,10,10 (default: grid)")
    p.add_argument("--rank", type=int, help="CP rank R")
    p.add_argument("--iters", type=int, default=settings.DEFAULT_ITERS, help="Sweeps per run")
    p.add_argument("--reps", type=int, help="Repetitions (default: ceil(200 / iters))")
    p.add_argument("--algos", default="als-direct,als-fast", help="Baseline,candidate")
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--format", choices=["csv", "table"], default="table")
    p.add_argument("--out", help="Write results to this path")
    p.add_argument("--mem-budget", type=int, default=settings.BENCH_MEM_BUDGET,
                   help="Skip cells needing more bytes than this")
    p.add_argument("--match-order", action="store_true",
                   help="Run the baseline in pivot order and compare final factors")
    p.set_defaults(handler=cmd_bench)


def add_decompose_parser(sub) -> None:
    p = sub.add_parser("decompose", help="Fit a CP model to a tensor file")
    p.add_argument("--input", required=True, help="TDNS or TDNB tensor file")
    p.add_argument("--rank", type=int, required=True, help="CP rank R")
    p.add_argument("--algo", choices=ALGORITHM_NAMES, default="als-fast")
    p.add_argument("--iters", type=int, default=settings.DEFAULT_ITERS)
    p.add_argument("--tol", type=float, default=0.0, help="Relative cost change to stop at")
    p.add_argument("--step", type=float, default=settings.GD_STEP, help="Step size for gd")
    p.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    p.add_argument("--out", help="Write factors (KRUS format) to this path")
    p.add_argument("--trace", help="Write the per-sweep trace as CSV to this path")
    p.set_defaults(handler=cmd_decompose)


def add_gradcheck_parser(sub) -> None:
    p = sub.add_parser("gradcheck", help="Check fast gradients against oracles")
    p.add_argument("--dims", help="Comma-separated dims (default: random per trial)")
    p.add_argument("--rank", type=int, help="CP rank R (default: random per trial)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-fd", action="store_true", help="Skip finite-difference checks")
    p.set_defaults(handler=cmd_gradcheck)
