import io

import numpy as np
import pytest

from parspec.dataio import (
    BlobSpec,
    BlockSpec,
    ClusterAssignment,
    CliqueSpec,
    format_topology,
    generate_synthetic,
    load_labels,
    parse_points,
    parse_topology,
    read_topology_records,
    write_assignments,
    write_id_map,
)
from parspec.errors import DomainError, ParseError, ReferentialError

LISTING_EXCERPT = """\
10039 v 10026 29
10040 v 10027 30
10041 v 10028 225
10042 v 10029 292
10043 e 0 1 3
10044 e 1 2 2
10045 e 1 3 2
"""


class TestParseTopology:
    def test_single_edge(self):
        graph = parse_topology("v 0 1\nv 1 1\ne 0 1 2\n")
        assert graph.vertex_count == 2
        assert graph.edge_count == 1
        assert graph.weight(0, 1) == 2.0
        assert graph.weight(1, 0) == 2.0

    def test_empty_input(self):
        graph = parse_topology("")
        assert graph.vertex_count == 0
        assert graph.edge_count == 0

    def test_undeclared_endpoint(self):
        with pytest.raises(ReferentialError) as excinfo:
            parse_topology("v 0 1\ne 0 5 1\n")
        assert excinfo.value.vertex == 5
        assert excinfo.value.line == 2

    def test_runs_of_spaces(self):
        graph = parse_topology("t  #   0\nv   0    1\nv 1  1\ne  0   1     4\n")
        assert graph.weight(0, 1) == 4.0

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(ParseError) as excinfo:
            parse_topology("v 0 1\nv 1\n")
        assert excinfo.value.line == 2

    def test_unknown_record(self):
        with pytest.raises(ParseError):
            parse_topology("x 0 1\n")

    def test_negative_label(self):
        with pytest.raises(DomainError):
            parse_topology("v 0 1\nv 1 1\ne 0 1 -2\n")

    def test_self_loop_dropped(self):
        graph = parse_topology("v 0 1\nv 1 1\ne 0 0 5\ne 0 1 1\n")
        assert graph.edge_count == 1
        assert not graph.has_edge(0, 0)

    def test_duplicate_edge_last_wins(self):
        graph = parse_topology("v 0 1\nv 1 1\ne 0 1 1\ne 1 0 7\n")
        assert graph.edge_count == 1
        assert graph.weight(0, 1) == 7.0

    def test_non_dense_ids_are_remapped(self, tmp_path):
        graph = parse_topology("v 3 1\nv 10 1\ne 3 10 2\n")
        assert graph.vertex_count == 2
        assert graph.id_map == (3, 10)
        assert graph.weight(0, 1) == 2.0
        sidecar = tmp_path / "id_map.tsv"
        assert write_id_map(graph, sidecar)
        assert sidecar.read_text() == "0\t3\n1\t10\n"

    def test_dense_ids_have_no_sidecar(self, tmp_path):
        graph = parse_topology("v 0 1\nv 1 1\n")
        assert graph.id_map is None
        assert not write_id_map(graph, tmp_path / "id_map.tsv")


class TestListingExcerpt:
    def test_records(self):
        records = read_topology_records(LISTING_EXCERPT)
        assert [v.vertex_id for v in records.vertices] == [10026, 10027, 10028, 10029]
        assert [v.label for v in records.vertices] == [29, 30, 225, 292]
        assert [(e.src, e.dst, e.weight) for e in records.edges] == [
            (0, 1, 3.0),
            (1, 2, 2.0),
            (1, 3, 2.0),
        ]

    def test_edges_reference_vertices_outside_the_excerpt(self):
        with pytest.raises(ReferentialError):
            parse_topology(LISTING_EXCERPT)


class TestParsePoints:
    def test_two_points(self):
        points = parse_points("0,0\n1,0\n")
        assert points.n == 2
        assert points.dimension == 2
        np.testing.assert_array_equal(points.points, [[0.0, 0.0], [1.0, 0.0]])

    def test_ragged_rows(self):
        with pytest.raises(ParseError) as excinfo:
            parse_points("1,2,3\n4,5\n")
        assert excinfo.value.line == 2

    def test_shape(self):
        points = parse_points("1,2,3\n4,5,6\n7,8,9\n0.5,0.25,1e3\n")
        assert (points.n, points.dimension) == (4, 3)

    def test_non_numeric(self):
        with pytest.raises(ParseError):
            parse_points("1,a\n")

    def test_non_finite(self):
        with pytest.raises(ParseError):
            parse_points("1,nan\n")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_points("\n\n")

    def test_open_file_and_line_list(self):
        from_file = parse_points(io.StringIO("1,2\n3,4\n"))
        from_lines = parse_points(["1,2\n", "3,4\n"])
        np.testing.assert_array_equal(from_file.points, from_lines.points)

    def test_whitespace_separated_rows_are_rejected(self):
        with pytest.raises(ParseError) as excinfo:
            parse_points("1 2\n3 4\n")
        assert excinfo.value.line == 1


class TestGenerateSynthetic:
    def test_blobs_are_deterministic(self):
        spec = BlobSpec(blobs=3, points_per_blob=30, separation=10.0)
        first = generate_synthetic(spec, seed=7)
        second = generate_synthetic(spec, seed=7)
        assert first.text == second.text
        assert first.points is not None and first.points.n == 90
        assert first.labels == tuple([0] * 30 + [1] * 30 + [2] * 30)
        assert parse_points(first.text) == first.points

    def test_cliques(self):
        dataset = generate_synthetic(CliqueSpec(cliques=3, size=4), seed=0)
        lines = dataset.text.splitlines()
        assert sum(1 for line in lines if line.startswith("v ")) == 12
        assert sum(1 for line in lines if line.startswith("e ")) == 18
        assert lines[0].startswith("t ")

    def test_single_point(self):
        dataset = generate_synthetic(BlobSpec(blobs=1, points_per_blob=1), seed=3)
        assert len(dataset.text.splitlines()) == 1

    def test_zero_points(self):
        with pytest.raises(DomainError):
            generate_synthetic(BlobSpec(blobs=0, points_per_blob=10), seed=0)
        with pytest.raises(DomainError):
            generate_synthetic(CliqueSpec(cliques=2, size=0), seed=0)

    @pytest.mark.parametrize("seed", range(5))
    def test_graph_round_trip(self, seed):
        dataset = generate_synthetic(BlockSpec(blocks=3), seed=seed)
        reparsed = parse_topology(dataset.text)
        assert reparsed == dataset.graph
        assert format_topology(reparsed) == dataset.text

    def test_blocks_are_connected(self):
        dataset = generate_synthetic(BlockSpec(blocks=2, min_size=3, max_size=6), seed=11)
        graph = dataset.graph
        assert graph is not None
        for u in range(graph.vertex_count):
            assert any(True for _ in graph.neighbours(u))


class TestWriteAssignments:
    def _render(self, labels, k):
        sink = io.StringIO()
        write_assignments(ClusterAssignment.from_labels(labels, k), sink)
        return sink.getvalue()

    def test_two_labels(self):
        assert self._render([1, 0], 2) == "0\t1\n1\t0\n"

    def test_empty(self):
        assert self._render([], 1) == ""

    def test_single_cluster(self):
        lines = self._render([0, 0, 0], 1).splitlines()
        assert len(lines) == 3
        assert all(line.endswith("\t0") for line in lines)

    def test_label_out_of_range(self):
        with pytest.raises(DomainError):
            ClusterAssignment.from_labels([0, 2], 2)

    def test_labels_read_back(self, tmp_path):
        path = tmp_path / "assignments.tsv"
        path.write_text(self._render([2, 0, 1], 3))
        assert load_labels(path) == [2, 0, 1]
