"""Reader and writer for the ``t``/``v``/``e`` topology text format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

from parspec.dataio.types import Edge, Graph, TextSource, iter_lines
from parspec.errors import DomainError, ParseError, ReferentialError
from parspec.utils.logger import StageLogger

log = StageLogger("Topology")

RECORD_TAGS = {"t", "v", "e"}


@dataclass(frozen=True)
class VertexRecord:
    vertex_id: int
    label: int
    line: int


@dataclass(frozen=True)
class EdgeRecord:
    src: int
    dst: int
    weight: float
    line: int


@dataclass
class TopologyRecords:
    """Raw records in file order, before any referential checks."""

    vertices: List[VertexRecord] = field(default_factory=list)
    edges: List[EdgeRecord] = field(default_factory=list)
    graph_headers: int = 0


def _parse_int(token: str, what: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} {token!r} is not an integer", line_no) from None


def _parse_weight(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"edge label {token!r} is not a number", line_no) from None
    if not math.isfinite(value):
        raise ParseError(f"edge label {token!r} is not finite", line_no)
    if value < 0:
        raise DomainError(f"line {line_no}: negative edge label {token}")
    return value


def read_topology_records(source: TextSource) -> TopologyRecords:
    """Tokenise a topology listing into vertex and edge records.

    Tokens may be separated by any run of whitespace. A leading integer column
    (a listing line number, e.g. ``10043 e 0 1 3``) is accepted and dropped.
    """
    records = TopologyRecords()
    for line_no, raw in enumerate(iter_lines(source), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if len(tokens) > 1 and tokens[0] not in RECORD_TAGS and tokens[1] in RECORD_TAGS:
            _parse_int(tokens[0], "line number", line_no)
            tokens = tokens[1:]

        tag = tokens[0]
        if tag == "t":
            records.graph_headers += 1
        elif tag == "v":
            if len(tokens) != 3:
                raise ParseError(f"vertex record needs 'v <id> <label>', got {raw.strip()!r}", line_no)
            vertex_id = _parse_int(tokens[1], "vertex id", line_no)
            label = _parse_int(tokens[2], "vertex label", line_no)
            if vertex_id < 0:
                raise DomainError(f"line {line_no}: negative vertex id {vertex_id}")
            if label < 0:
                raise DomainError(f"line {line_no}: negative vertex label {label}")
            records.vertices.append(VertexRecord(vertex_id, label, line_no))
        elif tag == "e":
            if len(tokens) != 4:
                raise ParseError(
                    f"edge record needs 'e <src> <dst> <label>', got {raw.strip()!r}", line_no
                )
            src = _parse_int(tokens[1], "edge source", line_no)
            dst = _parse_int(tokens[2], "edge target", line_no)
            weight = _parse_weight(tokens[3], line_no)
            records.edges.append(EdgeRecord(src, dst, weight, line_no))
        else:
            raise ParseError(f"unknown record type {tag!r}", line_no)
    return records


def parse_topology(source: TextSource) -> Graph:
    """Parse a topology listing into a :class:`Graph` with dense vertex ids."""
    records = read_topology_records(source)

    labels: Dict[int, int] = {}
    for vertex in records.vertices:
        if vertex.vertex_id in labels:
            raise ParseError(f"vertex {vertex.vertex_id} declared twice", vertex.line)
        labels[vertex.vertex_id] = vertex.label

    ordered_ids = sorted(labels)
    dense = ordered_ids == list(range(len(ordered_ids)))
    remap = {original: index for index, original in enumerate(ordered_ids)}

    weights: Dict[Tuple[int, int], float] = {}
    dropped_loops = 0
    duplicates = 0
    for edge in records.edges:
        for endpoint in (edge.src, edge.dst):
            if endpoint not in labels:
                raise ReferentialError(endpoint, edge.line)
        if edge.src == edge.dst:
            dropped_loops += 1
            log.warning("line %d: dropping self-loop on vertex %d", edge.line, edge.src)
            continue
        u, v = remap[edge.src], remap[edge.dst]
        key = (u, v) if u < v else (v, u)
        if key in weights:
            duplicates += 1
            log.warning(
                "line %d: duplicate edge (%d, %d); last one wins", edge.line, edge.src, edge.dst
            )
        weights[key] = edge.weight

    if not dense:
        log.info("remapped %d non-dense vertex ids to 0..%d", len(ordered_ids), len(ordered_ids) - 1)

    graph = Graph(
        vertex_count=len(ordered_ids),
        vertices=tuple((remap[vid], labels[vid]) for vid in ordered_ids),
        edges=tuple(Edge(u, v, w) for (u, v), w in sorted(weights.items())),
        id_map=None if dense else tuple(ordered_ids),
    )
    log.debug(
        "parsed %d vertices, %d edges (%d self-loops dropped, %d duplicates)",
        graph.vertex_count,
        graph.edge_count,
        dropped_loops,
        duplicates,
    )
    return graph


def load_topology(path: Union[str, Path]) -> Graph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_topology(handle)


def _format_weight(weight: float) -> str:
    if float(weight).is_integer():
        return str(int(weight))
    return repr(float(weight))


def format_topology(graph: Graph, graph_id: int = 0) -> str:
    """Serialise a graph in listing syntax; original ids are restored when remapped."""
    original = graph.id_map if graph.id_map is not None else range(graph.vertex_count)
    lines = [f"t # {graph_id}"]
    lines.extend(f"v {original[vid]} {label}" for vid, label in graph.vertices)
    lines.extend(
        f"e {original[edge.src]} {original[edge.dst]} {_format_weight(edge.weight)}"
        for edge in graph.edges
    )
    return "\n".join(lines) + "\n"


def write_id_map(graph: Graph, path: Union[str, Path]) -> bool:
    """Write the ``dense_id<TAB>original_id`` sidecar; returns False when ids were dense."""
    if graph.id_map is None:
        return False
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for dense_id, original_id in enumerate(graph.id_map):
            handle.write(f"{dense_id}\t{original_id}\n")
    return True
