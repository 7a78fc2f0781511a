"""Spectral clustering pipeline: stages, runner, benchmark and quality metric."""

from parspec.pipeline.base import PipelineStage, StageContext
from parspec.pipeline.benchmark import SpeedupReport, SpeedupRow, benchmark_speedup
from parspec.pipeline.quality import ari
from parspec.pipeline.runner import SpectralPipelineRunner, run_pipeline
from parspec.pipeline.stages import (
    PARALLEL_STAGES,
    PIPELINE_STAGES,
    EigenStage,
    KMeansStage,
    LaplacianStage,
    LoadStage,
    SimilarityStage,
)

__all__ = [
    "PipelineStage",
    "StageContext",
    "LoadStage",
    "SimilarityStage",
    "LaplacianStage",
    "EigenStage",
    "KMeansStage",
    "PIPELINE_STAGES",
    "PARALLEL_STAGES",
    "SpectralPipelineRunner",
    "run_pipeline",
    "SpeedupReport",
    "SpeedupRow",
    "benchmark_speedup",
    "ari",
]
