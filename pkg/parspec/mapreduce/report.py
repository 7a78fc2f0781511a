"""CSV serialisation of timing reports."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, List, TextIO, Union

from parspec.mapreduce.types import TimingReport

TIMING_HEADER = ["stage", "m", "wall_seconds", "counter_name", "counter_value"]


def timing_rows(report: TimingReport) -> List[List[object]]:
    """One row per counter; a report without counters still yields one row with blank counter cells."""
    wall = f"{report.wall_seconds:.6f}"
    if not report.op_counters:
        return [[report.stage, report.worker_count, wall, "", ""]]
    return [
        [report.stage, report.worker_count, wall, name, value]
        for name, value in sorted(report.op_counters.items())
    ]


def write_timing_csv(reports: Iterable[TimingReport], sink: Union[TextIO, str, Path]) -> int:
    """Write ``stage,m,wall_seconds,counter_name,counter_value`` rows; returns the row count."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", newline="", encoding="utf-8") as handle:
            return write_timing_csv(reports, handle)
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(TIMING_HEADER)
    written = 0
    for report in reports:
        for row in timing_rows(report):
            writer.writerow(row)
            written += 1
    return written
