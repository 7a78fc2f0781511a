"""Comma-separated point coordinates."""

from __future__ import annotations

import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from parspec.dataio.types import PointSet, TextSource, iter_lines
from parspec.errors import ParseError


def parse_points(source: TextSource) -> PointSet:
    """Parse headerless CSV rows of finite reals; every row must have the same arity."""
    rows: List[List[float]] = []
    arity: Optional[int] = None
    for line_no, raw in enumerate(iter_lines(source), start=1):
        text = raw.strip()
        if not text:
            continue
        row: List[float] = []
        for token in text.split(","):
            token = token.strip()
            try:
                value = float(token)
            except ValueError:
                raise ParseError(f"non-numeric token {token!r}", line_no) from None
            if not math.isfinite(value):
                raise ParseError(f"non-finite coordinate {token!r}", line_no)
            row.append(value)
        if arity is None:
            arity = len(row)
        elif len(row) != arity:
            raise ParseError(f"ragged row: expected {arity} values, got {len(row)}", line_no)
        rows.append(row)

    if arity is None:
        raise ParseError("no points in input")
    return PointSet(np.asarray(rows, dtype=np.float64))


def load_points(path: Union[str, Path]) -> PointSet:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_points(handle)


def format_points(points: PointSet) -> str:
    """Serialise with shortest round-trip float text, so reruns are byte-identical."""
    lines = [",".join(repr(float(value)) for value in row) for row in points.points]
    return "".join(f"{line}\n" for line in lines)
