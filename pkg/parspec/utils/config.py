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
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from parspec.constants import KMEANS_EPS, KMEANS_MAX_ITER
from parspec.errors import ConfigError
from parspec.kmeans import parse_init
from parspec.similarity import SimilarityParams


class PipelineConfig(BaseModel):
    """Every tunable of one pipeline run."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    input: Optional[Path] = None
    mode: Literal["point", "graph"] = "point"
    k: int = Field(default=2, ge=1)
    sigma: Optional[float] = Field(default=None, gt=0)
    knn_t: Optional[int] = Field(default=None, ge=1)
    dense: bool = False
    eps: float = Field(default=KMEANS_EPS, gt=0)
    max_iter: int = Field(default=KMEANS_MAX_ITER, ge=1)
    lanczos_steps: Optional[int] = Field(default=None, ge=1)
    reorthogonalize: bool = True
    init: str = "kmeans++"
    workers: int = Field(default=1, ge=1)
    seed: int = 0
    out: Path = Path("out")
    truth: Optional[Path] = None
    snapshots: bool = True

    @field_validator("init")
    def validate_init(cls, value: str) -> str:  # noqa: D417
        parse_init(value)
        return value.strip()

    @model_validator(mode="after")
    def validate_sparsification(self) -> "PipelineConfig":
        if self.dense and self.knn_t is not None:
            raise ValueError("dense and knn_t are mutually exclusive")
        return self

    @classmethod
    def build(cls, **values: Any) -> "PipelineConfig":
        """Validate ``values``, reporting failures as :class:`ConfigError`."""
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ConfigError(_describe(exc)) from exc

    def updated(self, **values: Any) -> "PipelineConfig":
        merged = self.model_dump()
        merged.update(values)
        return type(self).build(**merged)

    def similarity_params(self) -> SimilarityParams:
        return SimilarityParams(sigma=self.sigma, knn_t=self.knn_t, dense=self.dense, seed=self.seed)

    def to_config_text(self) -> str:
        """Flat ``key=value`` lines in field order; ``None`` is written as an empty value."""
        lines = []
        for name, value in self.model_dump().items():
            lines.append(f"{name}={_format_value(value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config_text(cls, text: str) -> "PipelineConfig":
        return cls.build(**parse_config_text(text))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PipelineConfig":
        return cls.from_config_text(Path(path).read_text(encoding="utf-8"))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_config_text(), encoding="utf-8")


def _describe(exc: ValidationError) -> str:
    problems = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error.get("loc", ())) or "config"
        problems.append(f"{location}: {error.get('msg', 'invalid value')}")
    return "; ".join(problems)


def _format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config_text(text: str) -> Dict[str, Optional[str]]:
    """Parse ``key=value`` lines; ``#`` starts a comment, empty values mean unset."""
    known = set(PipelineConfig.model_fields)
    values: Dict[str, Optional[str]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {line_no}: unknown config key {key!r}")
        values[key] = value or None
    return values


def add_pipeline_args(parser: argparse.ArgumentParser, worker_list: bool = False) -> None:
    pipeline_group = parser.add_argument_group("pipeline")
    pipeline_group.add_argument("--config", type=str, help="key=value config file; flags override it", default=None)
    pipeline_group.add_argument("--input", type=str, help="Input file (points CSV or topology text)", default=None)
    pipeline_group.add_argument("--mode", choices=["point", "graph"], help="Input format", default=None)
    pipeline_group.add_argument("--k", type=int, help="Number of clusters", default=None)
    if worker_list:
        pipeline_group.add_argument(
            "--workers", type=str, help="Comma separated worker counts, must include 1", default="1,2,4,8"
        )
    else:
        pipeline_group.add_argument("--workers", type=int, help="Worker thread count", default=None)
    pipeline_group.add_argument("--seed", type=int, help="Seed for sampling, Lanczos and init", default=None)
    pipeline_group.add_argument("--out", type=str, help="Output directory", default=None)
    pipeline_group.add_argument("--truth", type=str, help="Ground-truth labels file for ARI", default=None)
    pipeline_group.add_argument(
        "--no-snapshots",
        dest="no_snapshots",
        action="store_true",
        help="Skip writing tables/*.tbl snapshots.",
        default=None,
    )


def add_similarity_args(parser: argparse.ArgumentParser) -> None:
    similarity_group = parser.add_argument_group("similarity")
    similarity_group.add_argument("--sigma", type=float, help="Gaussian bandwidth (default: sampled median)", default=None)
    similarity_group.add_argument("--knn-t", type=int, help="Neighbours kept per row (default: ceil(log2 n)+1)", default=None)
    similarity_group.add_argument(
        "--dense", action="store_true", help="Keep the full similarity matrix.", default=None
    )


def add_eigen_args(parser: argparse.ArgumentParser) -> None:
    eigen_group = parser.add_argument_group("eigen")
    eigen_group.add_argument("--lanczos-steps", type=int, help="Initial Lanczos steps per round", default=None)
    eigen_group.add_argument(
        "--no-reorth",
        dest="no_reorth",
        action="store_true",
        help="Run the plain three-term recurrence without reorthogonalization.",
        default=None,
    )


def add_kmeans_args(parser: argparse.ArgumentParser) -> None:
    kmeans_group = parser.add_argument_group("kmeans")
    kmeans_group.add_argument("--eps", type=float, help="Center displacement tolerance", default=None)
    kmeans_group.add_argument("--max-iter", type=int, help="Maximum K-means iterations", default=None)
    kmeans_group.add_argument("--init", type=str, help="kmeans++, first-k or indices=i,j,...", default=None)


def add_logging_args(parser: argparse.ArgumentParser) -> None:
    logging_group = parser.add_argument_group("logging")
    logging_group.add_argument("--logging.debug", dest="log_debug", action="store_true", help="Debug output", default=False)
    logging_group.add_argument("--logging.trace", dest="log_trace", action="store_true", help="Trace output", default=False)
    logging_group.add_argument("--logging.logfile", dest="log_file", type=str, help="Also log to this file", default=None)


def add_args(parser: argparse.ArgumentParser, worker_list: bool = False) -> None:
    """Adds every pipeline argument group to ``parser``."""
    add_pipeline_args(parser, worker_list=worker_list)
    add_similarity_args(parser)
    add_eigen_args(parser)
    add_kmeans_args(parser)
    add_logging_args(parser)


def parse_worker_counts(text: str) -> List[int]:
    try:
        counts = [int(token) for token in text.split(",") if token.strip()]
    except ValueError as exc:
        raise ConfigError(f"invalid worker list {text!r}") from exc
    if not counts or any(count < 1 for count in counts):
        raise ConfigError(f"worker counts must be positive integers, got {text!r}")
    return counts


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    """File values first, then every flag that was given."""
    base = PipelineConfig.load(args.config) if getattr(args, "config", None) else PipelineConfig()
    overrides: Dict[str, Any] = {}
    for name in ("input", "mode", "k", "seed", "out", "truth", "sigma", "knn_t", "eps", "max_iter", "init"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if isinstance(getattr(args, "workers", None), int):
        overrides["workers"] = args.workers
    if getattr(args, "lanczos_steps", None) is not None:
        overrides["lanczos_steps"] = args.lanczos_steps
    if getattr(args, "dense", None):
        overrides["dense"] = True
        if "knn_t" not in overrides:
            overrides["knn_t"] = None
    elif "knn_t" in overrides:
        overrides["dense"] = False
    if getattr(args, "no_reorth", None):
        overrides["reorthogonalize"] = False
    if getattr(args, "no_snapshots", None):
        overrides["snapshots"] = False
    return base.updated(**overrides)
