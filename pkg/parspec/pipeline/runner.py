from __future__ import annotations

import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from parspec.dataio import ClusterAssignment, Graph, PointSet, load_labels, save_assignments, write_id_map
from parspec.eigensolver import write_eigenvalues_csv
from parspec.errors import ParspecError, StageError
from parspec.kmeans import CENTERS_TABLE
from parspec.kvstore import RowStore
from parspec.mapreduce import MapReduceEngine, TimingReport, write_timing_csv
from parspec.pipeline.base import PipelineStage, StageContext
from parspec.pipeline.outputs import StageTiming, save_tables, write_counters, write_stage_timing
from parspec.pipeline.quality import ari
from parspec.pipeline.stages import PIPELINE_STAGES
from parspec.utils.config import PipelineConfig
from parspec.utils.logger import StageLogger

log = StageLogger("Pipeline")

SNAPSHOT_TABLES = ("S", "Z", CENTERS_TABLE)
# Written for a failed run so the staging tables can be inspected.
PARTIAL_TABLES = ("S_upper", "S_full", "S", "Z", CENTERS_TABLE)


class SpectralPipelineRunner:
    """Runs the clustering stages in order over one engine and one store."""

    def __init__(
        self,
        config: PipelineConfig,
        store: Optional[RowStore] = None,
        data: Optional[Union[PointSet, Graph]] = None,
        write_outputs: bool = True,
    ) -> None:
        self.config = config
        self.store = store if store is not None else RowStore()
        self.write_outputs = write_outputs
        self._initial_data = data
        self._run_count = 0
        self._last_stats: Optional[Dict[str, Any]] = None
        self.stage_timings: List[StageTiming] = []

    @property
    def run_count(self) -> int:
        return self._run_count

    def run(self, run_index: int = 0) -> Tuple[ClusterAssignment, Dict[str, TimingReport]]:
        """Run every stage; a failure is re-raised as :class:`StageError` tagged with the stage."""
        started = time.perf_counter()
        stage_stats: Dict[str, Dict[str, Any]] = {}
        self.stage_timings = []
        with MapReduceEngine(self.config.workers) as engine:
            context = StageContext(config=self.config, store=self.store, engine=engine)
            if self._initial_data is not None:
                context.artifacts["input"] = self._initial_data
            stages: List[PipelineStage] = [stage_cls(context) for stage_cls in PIPELINE_STAGES]
            log.info(
                "Running %d stages with m=%d (k=%d, mode=%s)",
                len(stages),
                self.config.workers,
                self.config.k,
                self.config.mode,
            )
            for stage in stages:
                stage_started = time.perf_counter()
                try:
                    stats = stage.run()
                except StageError:
                    raise
                except Exception as exc:
                    log.error("Stage %s failed: %s", stage.stage_name, exc)
                    self._dump_partial_tables()
                    raise StageError(stage.stage_name, exc) from exc
                elapsed = time.perf_counter() - stage_started
                stage.run_count += 1
                stage.last_seconds = elapsed
                stage_stats[stage.stage_name] = stats
                self.stage_timings.append((stage.stage_name, self.config.workers, run_index, elapsed))
                log.info(
                    "Stage %s finished in %.3fs counters=%s",
                    stage.stage_name,
                    elapsed,
                    stats["counters"],
                )

        total = time.perf_counter() - started
        reports = dict(context.reports)
        reports["total"] = TimingReport(stage="total", worker_count=self.config.workers, wall_seconds=total)
        self.stage_timings.append(("total", self.config.workers, run_index, total))

        result = context.artifacts["kmeans"]
        assignment = result.assignment
        quality = self._score(assignment)
        if self.write_outputs:
            self._write_outputs(context, reports, quality)

        self._run_count += 1
        self._last_stats = {
            "run_id": self._run_count,
            "timestamp": started,
            "total_time": total,
            "stages": stage_stats,
            "ari": quality,
            "errors": sum(stats.get("errors", 0) for stats in stage_stats.values()),
        }
        log.success("Pipeline finished in %.3fs; cluster sizes %s", total, assignment.sizes())
        return assignment, reports

    def get_status(self) -> Dict[str, Any]:
        return {
            "run_count": self._run_count,
            "workers": self.config.workers,
            "out": str(self.config.out),
            "last_run": self._last_stats,
            "tables": self.store.tables(),
            "config": self.config.model_dump(mode="json"),
        }

    def _score(self, assignment: ClusterAssignment) -> Optional[float]:
        if self.config.truth is None:
            return None
        truth = load_labels(self.config.truth)
        score = ari(assignment.labels, truth)
        log.info("Adjusted Rand Index against %s: %.6f", self.config.truth, score)
        return score

    def _write_outputs(
        self,
        context: StageContext,
        reports: Dict[str, TimingReport],
        quality: Optional[float],
    ) -> None:
        out = Path(self.config.out)
        out.mkdir(parents=True, exist_ok=True)
        embedding = context.artifacts["embedding"]

        save_assignments(context.artifacts["kmeans"].assignment, out / "assignments.tsv")
        write_eigenvalues_csv(embedding.eigenvalues, out / "lambda.csv")
        write_stage_timing(self.stage_timings, out / "timing.csv")
        write_counters(reports.values(), out / "counters.csv")
        write_timing_csv(reports.values(), out / "jobs.csv")
        self.config.save(out / "config.txt")

        data = context.artifacts["input"]
        if isinstance(data, Graph) and write_id_map(data, out / "id_map.tsv"):
            log.info("Vertex ids were remapped; wrote id_map.tsv")
        if quality is not None:
            (out / "ari.txt").write_text(f"{quality!r}\n", encoding="utf-8")
        if self.config.snapshots:
            written = save_tables(self.store, out / "tables", SNAPSHOT_TABLES)
            log.debug("Snapshots: %s", ", ".join(path.name for path in written))

    def _dump_partial_tables(self) -> None:
        if not (self.write_outputs and self.config.snapshots):
            return
        try:
            written = save_tables(self.store, Path(self.config.out) / "tables", PARTIAL_TABLES)
        except (OSError, ParspecError) as exc:
            log.warning("Could not save partial tables: %s", exc)
            return
        if written:
            log.warning("Partial tables left in %s", written[0].parent)


def run_pipeline(
    config: PipelineConfig,
    store: Optional[RowStore] = None,
) -> Tuple[ClusterAssignment, Dict[str, TimingReport]]:
    """Load, cluster and write every result file under ``config.out``."""
    return SpectralPipelineRunner(config, store=store).run()
