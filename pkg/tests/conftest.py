from typing import Callable, Tuple

import pytest

from parspec.dataio import BlobSpec, BlockSpec, Graph, PointSet, generate_synthetic
from parspec.kvstore import RowStore
from parspec.utils.logger import setup_logging


@pytest.fixture(autouse=True, scope="session")
def _quiet_logging() -> None:
    setup_logging()


@pytest.fixture
def store() -> RowStore:
    return RowStore()


@pytest.fixture
def blob_points() -> Tuple[PointSet, Tuple[int, ...]]:
    """Three well-separated blobs of 30 points each."""
    dataset = generate_synthetic(BlobSpec(blobs=3, points_per_blob=30, separation=10.0), seed=7)
    assert dataset.points is not None
    return dataset.points, dataset.labels


@pytest.fixture
def block_graph() -> Callable[[int, int], Tuple[Graph, Tuple[int, ...]]]:
    """Factory for ``blocks`` disjoint random connected blocks (total n <= 64)."""

    def make(blocks: int, seed: int) -> Tuple[Graph, Tuple[int, ...]]:
        max_size = max(2, 64 // blocks)
        dataset = generate_synthetic(BlockSpec(blocks=blocks, max_size=min(16, max_size)), seed)
        assert dataset.graph is not None
        return dataset.graph, dataset.labels

    return make
