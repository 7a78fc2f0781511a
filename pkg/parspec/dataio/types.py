"""Input and output data types for the clustering pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from parspec.errors import DomainError

TextSource = Union[str, Iterable[str]]


def iter_lines(source: TextSource) -> Iterable[str]:
    """Lines of an in-memory string, or the source itself (an open file, a list of lines)."""
    if isinstance(source, str):
        return source.splitlines()
    return source


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: float


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph with dense 0-based vertex ids.

    ``edges`` holds each undirected edge once with ``src < dst``; ``weight``
    answers both orientations. ``id_map`` is set when the source file used
    non-dense ids and lists the original id of every dense vertex.
    """

    vertex_count: int
    vertices: Tuple[Tuple[int, int], ...]
    edges: Tuple[Edge, ...]
    id_map: Optional[Tuple[int, ...]] = None
    _weights: Dict[Tuple[int, int], float] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.vertex_count != len(self.vertices):
            raise DomainError(
                f"vertex_count {self.vertex_count} does not match {len(self.vertices)} vertices"
            )
        weights: Dict[Tuple[int, int], float] = {}
        for edge in self.edges:
            if not (0 <= edge.src < self.vertex_count and 0 <= edge.dst < self.vertex_count):
                raise DomainError(f"edge ({edge.src}, {edge.dst}) outside vertex range")
            if edge.src >= edge.dst:
                raise DomainError(f"edge ({edge.src}, {edge.dst}) must satisfy src < dst")
            if not np.isfinite(edge.weight) or edge.weight < 0:
                raise DomainError(f"edge ({edge.src}, {edge.dst}) has invalid weight {edge.weight}")
            weights[(edge.src, edge.dst)] = float(edge.weight)
        object.__setattr__(self, "_weights", weights)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        """Symmetric weight lookup; 0.0 when the edge is absent."""
        key = (u, v) if u < v else (v, u)
        return self._weights.get(key, 0.0)

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._weights

    def labels(self) -> List[int]:
        return [label for _, label in self.vertices]

    def neighbours(self, u: int) -> Iterator[Tuple[int, float]]:
        for edge in self.edges:
            if edge.src == u:
                yield edge.dst, edge.weight
            elif edge.dst == u:
                yield edge.src, edge.weight


@dataclass(frozen=True)
class PointSet:
    """Immutable ``n x d`` array of coordinate vectors, row order = point id."""

    points: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.points, dtype=np.float64, copy=True)
        if array.ndim != 2:
            raise DomainError(f"points must be a 2-D array, got shape {array.shape}")
        if array.shape[1] < 1:
            raise DomainError("points must have dimension >= 1")
        if not np.all(np.isfinite(array)):
            raise DomainError("points contain non-finite coordinates")
        array.setflags(write=False)
        object.__setattr__(self, "points", array)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ClusterAssignment:
    labels: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        labels = tuple(int(label) for label in self.labels)
        if self.k < 1:
            raise DomainError(f"cluster count must be >= 1, got {self.k}")
        for label in labels:
            if not (0 <= label < self.k):
                raise DomainError(f"label {label} outside [0, {self.k})")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int) -> "ClusterAssignment":
        return cls(labels=tuple(int(label) for label in labels), k=k)

    def __len__(self) -> int:
        return len(self.labels)

    def sizes(self) -> List[int]:
        counts = np.bincount(np.asarray(self.labels, dtype=np.int64), minlength=self.k)
        return [int(c) for c in counts]
