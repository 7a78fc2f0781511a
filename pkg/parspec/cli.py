# The MIT License (MIT)
# Copyright © 2025 Parspec Team

# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
# documentation files (the "Software"), to deal in the Software without restriction, including without limitation
# the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software,
# and to permit persons to whom the Software is furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all copies or substantial portions of
# the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO
# THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
# THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION
# OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
# DEALINGS IN THE SOFTWARE.

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from parspec import __version__
from parspec.constants import BENCH_REPEATS
from parspec.dataio import BlobSpec, BlockSpec, CliqueSpec, generate_synthetic
from parspec.errors import ConfigError, ParspecError
from parspec.pipeline import benchmark_speedup, run_pipeline
from parspec.utils.config import add_args, add_logging_args, config_from_args, parse_worker_counts
from parspec.utils.logger import setup_logging


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cluster", description="Parallel normalized spectral clustering")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Cluster one input file")
    add_args(run_parser)

    bench_parser = commands.add_parser("bench", help="Time the parallel stages over several worker counts")
    add_args(bench_parser, worker_list=True)
    bench_parser.add_argument("--repeats", type=int, help="Runs per worker count", default=BENCH_REPEATS)

    gen_parser = commands.add_parser("gen", help="Write a seeded synthetic dataset")
    kind = gen_parser.add_mutually_exclusive_group(required=True)
    kind.add_argument("--blobs", type=int, help="Number of Gaussian blobs (point mode)")
    kind.add_argument("--cliques", type=int, help="Number of disjoint cliques (graph mode)")
    kind.add_argument("--blocks", type=int, help="Number of disjoint random connected blocks (graph mode)")
    gen_parser.add_argument("--points", type=int, help="Points per blob", default=30)
    gen_parser.add_argument("--sep", type=float, help="Distance between blob centers", default=10.0)
    gen_parser.add_argument("--dimension", type=int, help="Point dimension", default=2)
    gen_parser.add_argument("--spread", type=float, help="Blob standard deviation", default=1.0)
    gen_parser.add_argument("--size", type=int, help="Vertices per clique", default=4)
    gen_parser.add_argument("--max-size", type=int, help="Largest random block", default=16)
    gen_parser.add_argument("--seed", type=int, help="Generator seed", default=0)
    gen_parser.add_argument("--out", type=str, help="Dataset file", required=True)
    gen_parser.add_argument("--labels", type=str, help="Labels file (default: <out>.labels)", default=None)
    add_logging_args(gen_parser)
    return parser


def _run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    assignment, reports = run_pipeline(config)
    logger.info(f"Wrote {len(assignment)} assignments to {Path(config.out) / 'assignments.tsv'}")
    logger.info(f"Total wall time {reports['total'].wall_seconds:.3f}s")
    return 0


def _bench(args: argparse.Namespace) -> int:
    worker_counts = parse_worker_counts(args.workers)
    config = config_from_args(args)
    report = benchmark_speedup(config, worker_counts, repeats=args.repeats, out_dir=config.out)
    sys.stdout.write(report.summary())
    return 0


def _gen(args: argparse.Namespace) -> int:
    if args.blobs is not None:
        spec = BlobSpec(
            blobs=args.blobs,
            points_per_blob=args.points,
            separation=args.sep,
            dimension=args.dimension,
            spread=args.spread,
        )
    elif args.cliques is not None:
        spec = CliqueSpec(cliques=args.cliques, size=args.size)
    elif args.blocks is not None:
        spec = BlockSpec(blocks=args.blocks, max_size=args.max_size)
    else:
        raise ConfigError("one of --blobs, --cliques or --blocks is required")
    dataset = generate_synthetic(spec, args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dataset.text, encoding="utf-8")
    labels_path = Path(args.labels) if args.labels else out.with_name(out.name + ".labels")
    labels_path.write_text("".join(f"{label}\n" for label in dataset.labels), encoding="utf-8")
    logger.info(f"Wrote {dataset.mode} dataset with {len(dataset.labels)} items to {out} (labels: {labels_path})")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    setup_logging(debug=args.log_debug, trace=args.log_trace, logfile=args.log_file)
    handlers = {"run": _run, "bench": _bench, "gen": _gen}
    try:
        return handlers[args.command](args)
    except (ParspecError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
