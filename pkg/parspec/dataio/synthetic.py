"""Seeded synthetic datasets in the point and topology formats."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from parspec.dataio.points import format_points
from parspec.dataio.topology import format_topology
from parspec.dataio.types import Edge, Graph, PointSet
from parspec.errors import DomainError


@dataclass(frozen=True)
class BlobSpec:
    """Isotropic Gaussian blobs; centers sit ``separation`` apart along the first axis."""

    blobs: int
    points_per_blob: int
    separation: float = 10.0
    dimension: int = 2
    spread: float = 1.0


@dataclass(frozen=True)
class CliqueSpec:
    """Disjoint complete graphs with a constant edge label."""

    cliques: int
    size: int
    weight: int = 1


@dataclass(frozen=True)
class BlockSpec:
    """Disjoint random connected blocks (spanning tree plus random chords)."""

    blocks: int
    min_size: int = 2
    max_size: int = 16
    chord_probability: float = 0.3
    max_weight: int = 5


GeneratorSpec = Union[BlobSpec, CliqueSpec, BlockSpec]


@dataclass(frozen=True)
class SyntheticDataset:
    text: str
    labels: Tuple[int, ...]
    points: Optional[PointSet] = None
    graph: Optional[Graph] = None

    @property
    def mode(self) -> str:
        return "point" if self.points is not None else "graph"


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value < 1:
            raise DomainError(f"{name} must be >= 1, got {value}")


def _generate_blobs(spec: BlobSpec, rng: np.random.Generator) -> SyntheticDataset:
    _require_positive(blobs=spec.blobs, points_per_blob=spec.points_per_blob, dimension=spec.dimension)
    if spec.spread <= 0 or spec.separation < 0:
        raise DomainError("spread must be > 0 and separation >= 0")
    centers = np.zeros((spec.blobs, spec.dimension))
    centers[:, 0] = np.arange(spec.blobs) * spec.separation
    chunks = [
        center + rng.normal(0.0, spec.spread, size=(spec.points_per_blob, spec.dimension))
        for center in centers
    ]
    points = PointSet(np.vstack(chunks))
    labels = tuple(int(label) for label in np.repeat(np.arange(spec.blobs), spec.points_per_blob))
    return SyntheticDataset(text=format_points(points), labels=labels, points=points)


def _assemble_graph(
    sizes: List[int], block_edges: List[Dict[Tuple[int, int], float]]
) -> Tuple[Graph, Tuple[int, ...]]:
    vertices: List[Tuple[int, int]] = []
    edges: List[Edge] = []
    labels: List[int] = []
    offset = 0
    for block, (size, local_edges) in enumerate(zip(sizes, block_edges)):
        vertices.extend((offset + local, 1) for local in range(size))
        labels.extend([block] * size)
        edges.extend(Edge(offset + u, offset + v, w) for (u, v), w in sorted(local_edges.items()))
        offset += size
    graph = Graph(vertex_count=offset, vertices=tuple(vertices), edges=tuple(edges))
    return graph, tuple(labels)


def _generate_cliques(spec: CliqueSpec) -> SyntheticDataset:
    _require_positive(cliques=spec.cliques, size=spec.size)
    if spec.weight < 0:
        raise DomainError(f"clique edge weight must be >= 0, got {spec.weight}")
    block = {pair: float(spec.weight) for pair in combinations(range(spec.size), 2)}
    graph, labels = _assemble_graph([spec.size] * spec.cliques, [block] * spec.cliques)
    return SyntheticDataset(text=format_topology(graph), labels=labels, graph=graph)


def _generate_blocks(spec: BlockSpec, rng: np.random.Generator) -> SyntheticDataset:
    _require_positive(blocks=spec.blocks, max_weight=spec.max_weight)
    if spec.min_size < 2 or spec.max_size < spec.min_size:
        raise DomainError("block sizes need 2 <= min_size <= max_size")
    sizes: List[int] = []
    block_edges: List[Dict[Tuple[int, int], float]] = []
    for _ in range(spec.blocks):
        size = int(rng.integers(spec.min_size, spec.max_size + 1))
        local: Dict[Tuple[int, int], float] = {}
        for v in range(1, size):
            u = int(rng.integers(0, v))
            local[(u, v)] = float(rng.integers(1, spec.max_weight + 1))
        for u, v in combinations(range(size), 2):
            if (u, v) not in local and rng.random() < spec.chord_probability:
                local[(u, v)] = float(rng.integers(1, spec.max_weight + 1))
        sizes.append(size)
        block_edges.append(local)
    graph, labels = _assemble_graph(sizes, block_edges)
    return SyntheticDataset(text=format_topology(graph), labels=labels, graph=graph)


def generate_synthetic(spec: GeneratorSpec, seed: int) -> SyntheticDataset:
    """Generate a dataset; identical ``spec`` and ``seed`` give identical bytes."""
    rng = np.random.default_rng(seed)
    if isinstance(spec, BlobSpec):
        return _generate_blobs(spec, rng)
    if isinstance(spec, CliqueSpec):
        return _generate_cliques(spec)
    if isinstance(spec, BlockSpec):
        return _generate_blocks(spec, rng)
    raise DomainError(f"unknown generator spec {type(spec).__name__}")
