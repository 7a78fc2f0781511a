"""Local map/reduce execution engine."""

from parspec.mapreduce.engine import MapReduceEngine, engine_scope, partition, run_job
from parspec.mapreduce.report import TIMING_HEADER, timing_rows, write_timing_csv
from parspec.mapreduce.types import JobResult, JobSpec, MapFn, ReduceFn, TimingReport

__all__ = [
    # Types
    "JobResult",
    "JobSpec",
    "MapFn",
    "ReduceFn",
    "TimingReport",
    # Engine
    "MapReduceEngine",
    "engine_scope",
    "partition",
    "run_job",
    # Reporting
    "TIMING_HEADER",
    "timing_rows",
    "write_timing_csv",
]
