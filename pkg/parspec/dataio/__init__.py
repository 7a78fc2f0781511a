"""Dataset ingestion, synthetic generation and result output."""

from parspec.dataio.assignments import load_labels, save_assignments, write_assignments
from parspec.dataio.points import format_points, load_points, parse_points
from parspec.dataio.synthetic import (
    BlobSpec,
    BlockSpec,
    CliqueSpec,
    SyntheticDataset,
    generate_synthetic,
)
from parspec.dataio.topology import (
    EdgeRecord,
    TopologyRecords,
    VertexRecord,
    format_topology,
    load_topology,
    parse_topology,
    read_topology_records,
    write_id_map,
)
from parspec.dataio.types import ClusterAssignment, Edge, Graph, PointSet

__all__ = [
    # Types
    "ClusterAssignment",
    "Edge",
    "Graph",
    "PointSet",
    # Topology format
    "EdgeRecord",
    "TopologyRecords",
    "VertexRecord",
    "format_topology",
    "load_topology",
    "parse_topology",
    "read_topology_records",
    "write_id_map",
    # Point format
    "format_points",
    "load_points",
    "parse_points",
    # Generators
    "BlobSpec",
    "BlockSpec",
    "CliqueSpec",
    "SyntheticDataset",
    "generate_synthetic",
    # Output
    "load_labels",
    "save_assignments",
    "write_assignments",
]
