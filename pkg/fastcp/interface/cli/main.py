#!/usr/bin/env python3
"""fastcp: benchmark and run CP decompositions from the command line.

Usage:
    fastcp bench [--dims 10,10,10,10] [--rank 10] [--iters 20] [--reps N]
                 [--algos als-direct,als-fast] [--seed 42] [--format csv|table]
                 [--out PATH] [--mem-budget BYTES] [--match-order]
    fastcp decompose --input FILE --rank R [--algo als-fast|als-direct|mu|gd]
                 [--iters K] [--tol T] [--out FACTORS] [--trace CSV]
    fastcp gradcheck [--dims ...] [--rank R] [--trials T] [--no-fd]

Exit code 0 on success, 1 on errors or failed checks.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from ...config import settings
from ...core.errors import FastCPError
from .commands import add_bench_parser, add_decompose_parser, add_gradcheck_parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME, description="Dense CP decomposition with fast CP gradients"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="cmd", required=True)
    add_bench_parser(sub)
    add_decompose_parser(sub)
    add_gradcheck_parser(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format=f"[{settings.APP_NAME}] %(levelname)s %(name)s: %(message)s",
    )

    try:
        return args.handler(args)
    except FastCPError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
