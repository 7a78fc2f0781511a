"""Base definitions for pipeline stages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from parspec.kvstore import RowStore
from parspec.mapreduce import MapReduceEngine, TimingReport
from parspec.utils.config import PipelineConfig


@dataclass
class StageContext:
    """Shared state handed from stage to stage."""

    config: PipelineConfig
    store: RowStore
    engine: MapReduceEngine
    artifacts: Dict[str, Any] = field(default_factory=dict)
    reports: Dict[str, TimingReport] = field(default_factory=dict)


class PipelineStage:
    """Base class for one step of the clustering pipeline."""

    stage_name: str = "base"

    def __init__(self, context: StageContext) -> None:
        self.context = context
        self.run_count: int = 0
        self.last_seconds: Optional[float] = None

    def run(self) -> Dict[str, Any]:
        """Run the stage and return its stats."""
        raise NotImplementedError

    def get_status(self) -> Dict[str, Any]:
        return {
            "stage_name": self.stage_name,
            "run_count": self.run_count,
            "last_seconds": self.last_seconds,
        }

    @property
    def config(self) -> PipelineConfig:
        return self.context.config

    def record(self, report: TimingReport) -> Dict[str, Any]:
        """Store ``report`` under this stage and build the stats dict."""
        self.context.reports[self.stage_name] = report
        return {
            "stage": self.stage_name,
            "total_time": report.wall_seconds,
            "counters": dict(report.op_counters),
            "errors": 0,
        }
