"""Result files written next to the assignments."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from parspec.kvstore import RowStore, save_snapshot
from parspec.mapreduce import TimingReport

StageTiming = Tuple[str, int, int, float]


def write_stage_timing(rows: Iterable[StageTiming], path: Union[str, Path]) -> None:
    """``stage,m,run,wall_seconds``."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["stage", "m", "run", "wall_seconds"])
        for stage, m, run, seconds in rows:
            writer.writerow([stage, m, run, f"{seconds:.6f}"])


def write_counters(reports: Iterable[TimingReport], path: Union[str, Path]) -> None:
    """``stage,m,counter,value``, counters sorted by name within a stage."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["stage", "m", "counter", "value"])
        for report in reports:
            for name, value in sorted(report.op_counters.items()):
                writer.writerow([report.stage, report.worker_count, name, value])


def save_tables(store: RowStore, directory: Union[str, Path], tables: Sequence[str]) -> List[Path]:
    """Snapshot each existing table to ``<directory>/<table>.tbl``."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for table in tables:
        if store.has_table(table):
            path = target / f"{table}.tbl"
            save_snapshot(store, table, path)
            written.append(path)
    return written
