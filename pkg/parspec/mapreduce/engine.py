"""In-process map/reduce engine over a fixed pool of worker threads."""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import Future, ThreadPoolExecutor
from contextlib import contextmanager
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from parspec.constants import SIMILARITY_TASKS_PER_WORKER
from parspec.errors import DomainError, JobError
from parspec.mapreduce.types import JobResult, JobSpec, MapFn, ReduceFn, TimingReport
from parspec.utils.logger import StageLogger

log = StageLogger("MapReduce")

Emission = Tuple[Hashable, Any]


def partition(keys: Sequence[Any], m: int, tasks_per_worker: int = 2) -> List[List[Any]]:
    """Split ``keys`` into ``m * tasks_per_worker`` contiguous tasks whose sizes differ by at most 1."""
    if m < 1:
        raise DomainError(f"worker count must be >= 1, got {m}")
    if tasks_per_worker < 1:
        raise DomainError(f"tasks_per_worker must be >= 1, got {tasks_per_worker}")
    keys = list(keys)
    task_count = m * tasks_per_worker
    base, extra = divmod(len(keys), task_count)
    tasks: List[List[Any]] = []
    start = 0
    for index in range(task_count):
        size = base + (1 if index < extra else 0)
        tasks.append(keys[start : start + size])
        start += size
    return tasks


def _map_task(job: JobSpec, keys: List[Any]) -> Tuple[List[Emission], Counter]:
    counters: Counter = Counter()
    emissions: List[Emission] = []
    for key in keys:
        try:
            emissions.extend(job.map_fn(key, counters))
        except Exception as exc:  # noqa: BLE001
            raise JobError(job.name, "map", key, exc) from exc
    return emissions, counters


def _reduce_task(
    job: JobSpec, reduce_fn: ReduceFn, groups: List[Tuple[Hashable, List[Any]]]
) -> Tuple[List[Tuple[Hashable, Any]], Counter]:
    counters: Counter = Counter()
    outputs: List[Tuple[Hashable, Any]] = []
    for key, values in groups:
        try:
            outputs.append((key, reduce_fn(key, values, counters)))
        except Exception as exc:  # noqa: BLE001
            raise JobError(job.name, "reduce", key, exc) from exc
    return outputs, counters


class MapReduceEngine:
    """Runs jobs on ``worker_count`` long-lived threads.

    Map emissions are grouped by intermediate key in (source key order,
    emission order), so results never depend on the worker count. Shuffle is
    a barrier between the two phases.
    """

    def __init__(self, worker_count: int = 1) -> None:
        if worker_count < 1:
            raise DomainError(f"worker_count must be >= 1, got {worker_count}")
        self.worker_count = worker_count
        self.jobs_run = 0
        self._executor: Optional[ThreadPoolExecutor] = ThreadPoolExecutor(
            max_workers=worker_count, thread_name_prefix="parspec-worker"
        )

    def __enter__(self) -> "MapReduceEngine":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def job(
        self,
        name: str,
        input_keys: Sequence[Any],
        map_fn: MapFn,
        reduce_fn: Optional[ReduceFn] = None,
        *,
        tasks_per_worker: int = SIMILARITY_TASKS_PER_WORKER,
        counter_names: Tuple[str, ...] = (),
        read_only_tables: Tuple[str, ...] = (),
    ) -> JobSpec:
        """Build a :class:`JobSpec` bound to this engine's worker count."""
        return JobSpec(
            name=name,
            input_keys=input_keys,
            map_fn=map_fn,
            reduce_fn=reduce_fn,
            worker_count=self.worker_count,
            tasks_per_worker=tasks_per_worker,
            counter_names=counter_names,
            read_only_tables=read_only_tables,
        )

    def _gather(self, futures: List[Future]) -> List[Any]:
        results: List[Any] = []
        for index, future in enumerate(futures):
            try:
                results.append(future.result())
            except BaseException:
                for pending in futures[index + 1 :]:
                    pending.cancel()
                raise
        return results

    def _submit_all(self, fn: Callable[..., Any], argument_lists: List[Tuple[Any, ...]]) -> List[Any]:
        if self._executor is None:
            raise DomainError("engine is closed")
        futures = [self._executor.submit(fn, *arguments) for arguments in argument_lists]
        return self._gather(futures)

    def run_job(self, job: JobSpec) -> JobResult:
        if job.worker_count != self.worker_count:
            raise DomainError(
                f"job {job.name!r} targets {job.worker_count} workers, engine has {self.worker_count}"
            )
        started = time.perf_counter()
        phases: Dict[str, float] = {}

        map_tasks = partition(job.input_keys, job.worker_count, job.tasks_per_worker)
        map_results = self._submit_all(_map_task, [(job, keys) for keys in map_tasks])
        phases["map"] = time.perf_counter() - started

        shuffle_started = time.perf_counter()
        groups: Dict[Hashable, List[Any]] = {}
        for emissions, _ in map_results:
            for key, value in emissions:
                bucket = groups.get(key)
                if bucket is None:
                    groups[key] = [value]
                else:
                    bucket.append(value)
        phases["shuffle"] = time.perf_counter() - shuffle_started

        task_counters: List[Counter] = [counters for _, counters in map_results]
        output: Dict[Hashable, Any]
        if job.reduce_fn is None:
            output = groups
        else:
            reduce_started = time.perf_counter()
            reduce_tasks = partition(list(groups.items()), job.worker_count, job.tasks_per_worker)
            reduce_results = self._submit_all(
                _reduce_task, [(job, job.reduce_fn, chunk) for chunk in reduce_tasks]
            )
            output = {}
            for outputs, counters in reduce_results:
                output.update(outputs)
                task_counters.append(counters)
            phases["reduce"] = time.perf_counter() - reduce_started

        totals: Counter = Counter({name: 0 for name in job.counter_names})
        for counters in task_counters:
            totals.update(counters)

        wall = time.perf_counter() - started
        self.jobs_run += 1
        report = TimingReport(
            stage=job.name,
            worker_count=job.worker_count,
            wall_seconds=wall,
            op_counters={name: int(value) for name, value in sorted(totals.items())},
            phase_seconds=phases,
            task_counters=[dict(counters) for counters in task_counters],
        )
        log.trace(
            "job %s: %d keys, %d groups, %.4fs", job.name, len(job.input_keys), len(groups), wall
        )
        return JobResult(output=output, report=report)


def run_job(job: JobSpec) -> JobResult:
    """Run a single job on a temporary engine sized by ``job.worker_count``."""
    with MapReduceEngine(job.worker_count) as engine:
        return engine.run_job(job)


@contextmanager
def engine_scope(worker_count: int, engine: Optional[MapReduceEngine] = None) -> Iterator[MapReduceEngine]:
    """Yield ``engine`` when given (its worker count wins), else a temporary engine."""
    if engine is not None:
        yield engine
        return
    with MapReduceEngine(worker_count) as created:
        yield created
