"""Job descriptions and instrumentation records."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from parspec.errors import DomainError

MapFn = Callable[[Any, Counter], Iterable[Tuple[Hashable, Any]]]
ReduceFn = Callable[[Hashable, List[Any], Counter], Any]


@dataclass(frozen=True)
class JobSpec:
    """One map/reduce job.

    ``map_fn(key, counters)`` returns ``(intermediate_key, value)`` emissions;
    ``reduce_fn(intermediate_key, values, counters)`` returns the output for a
    key. Both must be deterministic and may only mutate the ``counters``
    handed to them. ``reduce_fn=None`` makes a map-only job whose output is
    the grouped value list per key.
    """

    name: str
    input_keys: Sequence[Any]
    map_fn: MapFn
    reduce_fn: Optional[ReduceFn] = None
    worker_count: int = 1
    tasks_per_worker: int = 2
    counter_names: Tuple[str, ...] = ()
    read_only_tables: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.worker_count < 1:
            raise DomainError(f"worker_count must be >= 1, got {self.worker_count}")
        if self.tasks_per_worker < 1:
            raise DomainError(f"tasks_per_worker must be >= 1, got {self.tasks_per_worker}")

    @property
    def task_count(self) -> int:
        return self.worker_count * self.tasks_per_worker


@dataclass
class TimingReport:
    """Wall clock and operation counts for one stage (or one job)."""

    stage: str
    worker_count: int
    wall_seconds: float = 0.0
    op_counters: Dict[str, int] = field(default_factory=dict)
    phase_seconds: Dict[str, float] = field(default_factory=dict)
    task_counters: List[Dict[str, int]] = field(default_factory=list)
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.wall_seconds < 0:
            raise DomainError(f"wall_seconds must be >= 0, got {self.wall_seconds}")
        for name, value in self.op_counters.items():
            if value < 0:
                raise DomainError(f"counter {name} must be >= 0, got {value}")

    @classmethod
    def combine(
        cls,
        stage: str,
        worker_count: int,
        reports: Iterable["TimingReport"],
        wall_seconds: float,
        metadata: Optional[Dict[str, str]] = None,
    ) -> "TimingReport":
        """Roll job reports up into a stage report; counters add, phases add."""
        counters: Counter = Counter()
        phases: Counter = Counter()
        tasks: List[Dict[str, int]] = []
        merged_meta: Dict[str, str] = {}
        for report in reports:
            counters.update(report.op_counters)
            phases.update(report.phase_seconds)
            tasks.extend(report.task_counters)
            merged_meta.update(report.metadata)
        merged_meta.update(metadata or {})
        return cls(
            stage=stage,
            worker_count=worker_count,
            wall_seconds=wall_seconds,
            op_counters={name: int(value) for name, value in sorted(counters.items())},
            phase_seconds={name: float(value) for name, value in sorted(phases.items())},
            task_counters=tasks,
            metadata=merged_meta,
        )

    def counter(self, name: str) -> int:
        return int(self.op_counters.get(name, 0))


class JobResult(NamedTuple):
    output: Dict[Hashable, Any]
    report: TimingReport
