"""Speedup benchmark over worker counts."""

from __future__ import annotations

import csv
import os
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from parspec.constants import BENCH_REPEATS
from parspec.dataio import Graph, PointSet, load_points, load_topology
from parspec.errors import ConfigError, NumericalError
from parspec.mapreduce import TimingReport
from parspec.pipeline.outputs import StageTiming, write_counters, write_stage_timing
from parspec.pipeline.runner import SpectralPipelineRunner
from parspec.pipeline.stages import PARALLEL_STAGES
from parspec.utils.config import PipelineConfig
from parspec.utils.logger import StageLogger

log = StageLogger("Benchmark")

BENCH_STAGES = PARALLEL_STAGES + ("total",)


@dataclass(frozen=True)
class SpeedupRow:
    stage: str
    workers: int
    wall_seconds: float
    counters: Dict[str, int] = field(default_factory=dict)


@dataclass
class SpeedupReport:
    """Median wall time per (stage, m) and the speedup against the m=1 row."""

    rows: List[SpeedupRow]
    repeats: int = BENCH_REPEATS
    host_cores: Optional[int] = None

    def __post_init__(self) -> None:
        for stage in {row.stage for row in self.rows}:
            if self._find(stage, 1) is None:
                raise ConfigError(f"stage {stage!r} has no m=1 row")

    def _find(self, stage: str, workers: int) -> Optional[SpeedupRow]:
        for row in self.rows:
            if row.stage == stage and row.workers == workers:
                return row
        return None

    @property
    def stages(self) -> List[str]:
        seen: List[str] = []
        for row in self.rows:
            if row.stage not in seen:
                seen.append(row.stage)
        return seen

    @property
    def worker_counts(self) -> List[int]:
        return sorted({row.workers for row in self.rows})

    def wall_seconds(self, stage: str, workers: int) -> float:
        row = self._find(stage, workers)
        if row is None:
            raise KeyError((stage, workers))
        return row.wall_seconds

    def ratio(self, stage: str, workers: int) -> float:
        """``T(1) / T(m)``; exactly 1.0 for the m=1 row."""
        if workers == 1:
            return 1.0
        base = self.wall_seconds(stage, 1)
        current = self.wall_seconds(stage, workers)
        if current <= 0.0:
            return float("inf")
        return base / current

    def monotone_limit(self, stage: str = "total") -> int:
        """Largest m up to which the stage never got slower."""
        limit = 1
        previous = self.wall_seconds(stage, 1)
        for workers in self.worker_counts[1:]:
            current = self.wall_seconds(stage, workers)
            if current > previous:
                break
            limit, previous = workers, current
        return limit

    def write_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["stage", "m", "wall_seconds", "speedup", "efficiency"])
            for row in self.rows:
                ratio = self.ratio(row.stage, row.workers)
                writer.writerow(
                    [row.stage, row.workers, f"{row.wall_seconds:.6f}", f"{ratio:.4f}", f"{ratio / row.workers:.4f}"]
                )

    def summary(self) -> str:
        cores = self.host_cores
        lines = [
            "Speedup summary",
            f"host logical cores: {cores if cores is not None else 'unknown'}",
            f"median of {self.repeats} runs per (stage, m)",
            "",
        ]
        for stage in self.stages:
            cells = ", ".join(
                f"m={workers}: {self.wall_seconds(stage, workers):.3f}s x{self.ratio(stage, workers):.2f}"
                for workers in self.worker_counts
                if self._find(stage, workers) is not None
            )
            lines.append(f"{stage:<12} {cells}")
        lines.append("")
        limit = self.monotone_limit()
        lines.append(f"total time non-increasing up to m={limit}")
        if cores is not None:
            beyond = [workers for workers in self.worker_counts if workers > cores]
            if beyond:
                lines.append(f"m={','.join(map(str, beyond))} exceed the host core count; no speedup expected there")
        return "\n".join(lines) + "\n"


def _load(config: PipelineConfig) -> Union[PointSet, Graph]:
    if config.input is None:
        raise ConfigError("no input file given")
    if config.mode == "graph":
        return load_topology(config.input)
    return load_points(config.input)


def _check_conservation(counters: Dict[int, Dict[str, Dict[str, int]]]) -> None:
    baseline = counters[1]
    for workers, by_stage in counters.items():
        for stage in PARALLEL_STAGES:
            if by_stage.get(stage) != baseline.get(stage):
                raise NumericalError(
                    f"work not conserved in stage {stage!r}: m=1 {baseline.get(stage)} vs m={workers} {by_stage.get(stage)}"
                )


def benchmark_speedup(
    config: PipelineConfig,
    worker_counts: Sequence[int],
    repeats: int = BENCH_REPEATS,
    out_dir: Optional[Union[str, Path]] = None,
    data: Optional[Union[PointSet, Graph]] = None,
) -> SpeedupReport:
    """Run the pipeline ``repeats`` times per worker count on the same input and seed."""
    counts = sorted(set(int(m) for m in worker_counts))
    if 1 not in counts:
        raise ConfigError(f"worker counts must include 1, got {list(worker_counts)}")
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    if data is None:
        data = _load(config)

    samples: Dict[Tuple[str, int], List[float]] = {}
    counters: Dict[int, Dict[str, Dict[str, int]]] = {}
    timings: List[StageTiming] = []
    reports: List[TimingReport] = []
    reference: Optional[Tuple[int, ...]] = None
    for workers in counts:
        run_config = config.updated(workers=workers)
        for run in range(repeats):
            runner = SpectralPipelineRunner(run_config, data=data, write_outputs=False)
            assignment, stage_reports = runner.run(run_index=run)
            timings.extend(runner.stage_timings)
            for stage, _, _, seconds in runner.stage_timings:
                samples.setdefault((stage, workers), []).append(seconds)
            if reference is None:
                reference = assignment.labels
            elif assignment.labels != reference:
                raise NumericalError(f"assignment at m={workers} differs from m={counts[0]}")
            if run == 0:
                counters[workers] = {
                    stage: dict(stage_reports[stage].op_counters) for stage in PARALLEL_STAGES
                }
                reports.extend(stage_reports[stage] for stage in BENCH_STAGES)
        log.info(
            "m=%d: total median %.3fs",
            workers,
            statistics.median(samples[("total", workers)]),
        )
    _check_conservation(counters)

    rows = [
        SpeedupRow(
            stage=stage,
            workers=workers,
            wall_seconds=statistics.median(samples[(stage, workers)]),
            counters=counters[workers].get(stage, {}),
        )
        for stage in BENCH_STAGES
        for workers in counts
    ]
    report = SpeedupReport(rows=rows, repeats=repeats, host_cores=os.cpu_count())
    if out_dir is not None:
        _write(report, timings, reports, Path(out_dir))
    log.info("\n%s", report.summary())
    return report


def _write(
    report: SpeedupReport,
    timings: Iterable[StageTiming],
    reports: Iterable[TimingReport],
    out: Path,
) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_stage_timing(timings, out / "timing.csv")
    write_counters(reports, out / "counters.csv")
    report.write_csv(out / "speedup.csv")
    (out / "summary.txt").write_text(report.summary(), encoding="utf-8")
