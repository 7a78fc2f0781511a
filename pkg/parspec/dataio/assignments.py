"""Cluster assignment output."""

from __future__ import annotations

from pathlib import Path
from typing import List, TextIO, Union

from parspec.dataio.types import ClusterAssignment
from parspec.errors import ParseError


def write_assignments(assignment: ClusterAssignment, sink: TextIO) -> None:
    """Write ``<point_index>\\t<cluster_index>`` lines ordered by point index."""
    sink.write("".join(f"{index}\t{label}\n" for index, label in enumerate(assignment.labels)))


def save_assignments(assignment: ClusterAssignment, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        write_assignments(assignment, handle)


def load_labels(path: Union[str, Path]) -> List[int]:
    """Read labels from an assignments TSV or a one-label-per-line file."""
    labels: List[int] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            tokens = raw.split()
            if not tokens:
                continue
            try:
                labels.append(int(tokens[-1]))
            except ValueError:
                raise ParseError(f"label {tokens[-1]!r} is not an integer", line_no) from None
    return labels
