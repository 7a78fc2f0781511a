"""Parallel K-means and its sequential reference."""

from parspec.kmeans.driver import kmeans
from parspec.kmeans.ops import (
    CENTERS_TABLE,
    assign_map,
    nearest_center,
    read_centers,
    squared_distances,
    update_reduce,
    wcss,
    write_centers,
)
from parspec.kmeans.oracle import kmeans_oracle
from parspec.kmeans.seeding import initial_centers, kmeans_plus_plus, parse_init
from parspec.kmeans.types import Centroids, ClusterStats, KMeansResult

__all__ = [
    # Types
    "Centroids",
    "ClusterStats",
    "KMeansResult",
    # Steps
    "assign_map",
    "nearest_center",
    "squared_distances",
    "update_reduce",
    "wcss",
    # Centers table
    "CENTERS_TABLE",
    "read_centers",
    "write_centers",
    # Seeding
    "initial_centers",
    "kmeans_plus_plus",
    "parse_init",
    # Drivers
    "kmeans",
    "kmeans_oracle",
]
