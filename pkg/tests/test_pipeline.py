import os
import statistics

import pytest
from helpers import components_of

from parspec.cli import main
from parspec.dataio import BlobSpec, generate_synthetic, load_labels
from parspec.errors import ConfigError, DomainError, SingularityError, StageError
from parspec.pipeline import (
    SpectralPipelineRunner,
    SpeedupReport,
    SpeedupRow,
    benchmark_speedup,
    run_pipeline,
)
from parspec.utils.config import PipelineConfig

INVARIANT_FILES = ("assignments.tsv", "lambda.csv", "tables/S.tbl", "tables/Z.tbl", "tables/centers.tbl")


@pytest.fixture
def blob_files(tmp_path, blob_points):
    points, labels = blob_points
    data = tmp_path / "blobs.csv"
    truth = tmp_path / "blobs.labels"
    data.write_text(generate_synthetic(BlobSpec(blobs=3, points_per_blob=30), seed=7).text)
    truth.write_text("".join(f"{label}\n" for label in labels))
    return data, truth


def blob_config(blob_files, out, **values):
    data, truth = blob_files
    values = {"k": 3, "knn_t": 10, **values}
    return PipelineConfig.build(input=data, truth=truth, out=out, **values)


class TestRunPipeline:
    def test_blobs_are_recovered(self, blob_files, tmp_path):
        config = blob_config(blob_files, tmp_path / "out", workers=2)
        assignment, reports = run_pipeline(config)
        truth = load_labels(blob_files[1])
        assert components_of(list(assignment.labels)) == components_of(truth)
        assert float((tmp_path / "out" / "ari.txt").read_text()) == 1.0
        assert set(reports) == {"load", "similarity", "laplacian", "eigensolver", "kmeans", "total"}
        assert reports["similarity"].counter("kernel_evaluations") == 90 * 91 // 2

    @pytest.mark.parametrize("knn_t", [None, 10])
    @pytest.mark.parametrize("seed", range(10))
    def test_blobs_recovered_for_every_seed(self, tmp_path, seed, knn_t):
        dataset = generate_synthetic(BlobSpec(blobs=3, points_per_blob=30), seed=seed)
        data = tmp_path / "blobs.csv"
        truth = tmp_path / "blobs.labels"
        data.write_text(dataset.text)
        truth.write_text("".join(f"{label}\n" for label in dataset.labels))
        config = PipelineConfig.build(
            input=data, k=3, knn_t=knn_t, seed=seed, truth=truth, out=tmp_path / "out"
        )
        assignment, _ = run_pipeline(config)
        assert components_of(list(assignment.labels)) == components_of(list(dataset.labels))
        assert float((tmp_path / "out" / "ari.txt").read_text()) == 1.0

    def test_without_reorthogonalization(self, blob_files, tmp_path):
        out = tmp_path / "out"
        assignment, reports = run_pipeline(blob_config(blob_files, out, reorthogonalize=False))
        assert components_of(list(assignment.labels)) == components_of(load_labels(blob_files[1]))
        assert float((out / "ari.txt").read_text()) == 1.0
        assert reports["eigensolver"].metadata["reorthogonalize"] == "false"

    def test_result_files(self, blob_files, tmp_path):
        out = tmp_path / "out"
        run_pipeline(blob_config(blob_files, out))
        for name in ("timing.csv", "counters.csv", "jobs.csv", "config.txt") + INVARIANT_FILES:
            assert (out / name).exists(), name
        assert (out / "timing.csv").read_text().splitlines()[0] == "stage,m,run,wall_seconds"
        assert (out / "counters.csv").read_text().splitlines()[0] == "stage,m,counter,value"
        assert len((out / "assignments.tsv").read_text().splitlines()) == 90
        assert len((out / "lambda.csv").read_text().splitlines()) == 4
        assert PipelineConfig.load(out / "config.txt") == blob_config(blob_files, out)

    def test_outputs_identical_for_every_worker_count(self, blob_files, tmp_path):
        contents = []
        for m in (1, 2, 4, 8):
            out = tmp_path / f"m{m}"
            run_pipeline(blob_config(blob_files, out, workers=m))
            contents.append({name: (out / name).read_bytes() for name in INVARIANT_FILES})
        for other in contents[1:]:
            assert other == contents[0]

    def test_no_snapshots(self, blob_files, tmp_path):
        out = tmp_path / "out"
        run_pipeline(blob_config(blob_files, out, snapshots=False))
        assert not (out / "tables").exists()

    def test_cliques_in_graph_mode(self, tmp_path):
        data = tmp_path / "cliques.txt"
        assert main(["gen", "--cliques", "3", "--size", "4", "--out", str(data)]) == 0
        out = tmp_path / "out"
        config = PipelineConfig.build(
            input=data, mode="graph", k=3, out=out, truth=tmp_path / "cliques.txt.labels"
        )
        assignment, _ = run_pipeline(config)
        assert components_of(list(assignment.labels)) == [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]]
        assert float((out / "ari.txt").read_text()) == 1.0

    def test_k_larger_than_n(self, blob_files, tmp_path):
        with pytest.raises(StageError) as excinfo:
            run_pipeline(blob_config(blob_files, tmp_path / "out", k=200))
        assert excinfo.value.stage == "load"
        assert isinstance(excinfo.value.__cause__, DomainError)
        assert str(excinfo.value).startswith("[load] DomainError:")

    def test_isolated_vertex_leaves_partial_tables(self, tmp_path):
        data = tmp_path / "graph.txt"
        data.write_text("v 0 1\nv 1 1\nv 2 1\ne 0 1 1\n")
        out = tmp_path / "out"
        config = PipelineConfig.build(input=data, mode="graph", k=2, out=out)
        with pytest.raises(StageError) as excinfo:
            run_pipeline(config)
        assert excinfo.value.stage == "laplacian"
        assert isinstance(excinfo.value.__cause__, SingularityError)
        assert (out / "tables" / "S.tbl").exists()

    def test_missing_input(self, tmp_path):
        with pytest.raises(StageError) as excinfo:
            run_pipeline(PipelineConfig.build(out=tmp_path / "out"))
        assert isinstance(excinfo.value.__cause__, ConfigError)

    def test_runner_status(self, blob_files, tmp_path, blob_points):
        runner = SpectralPipelineRunner(blob_config(blob_files, tmp_path / "out"), data=blob_points[0])
        runner.run()
        status = runner.get_status()
        assert status["run_count"] == 1
        assert status["last_run"]["ari"] == 1.0
        assert {"S", "Z", "centers"} <= set(status["tables"])
        assert [row[0] for row in runner.stage_timings][-1] == "total"


class TestSpeedupReport:
    def rows(self):
        return [
            SpeedupRow("total", 1, 2.0),
            SpeedupRow("total", 2, 1.0),
            SpeedupRow("total", 4, 1.5),
        ]

    def test_ratios(self):
        report = SpeedupReport(self.rows(), repeats=1, host_cores=2)
        assert report.ratio("total", 1) == 1.0
        assert report.ratio("total", 2) == 2.0
        assert report.monotone_limit() == 2
        assert "m=4 exceed the host core count" in report.summary()

    def test_missing_single_worker_row(self):
        with pytest.raises(ConfigError):
            SpeedupReport(self.rows()[1:])

    def test_csv(self, tmp_path):
        path = tmp_path / "speedup.csv"
        SpeedupReport(self.rows()).write_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "stage,m,wall_seconds,speedup,efficiency"
        assert lines[2] == "total,2,1.000000,2.0000,1.0000"


class TestBenchmark:
    def test_small_run(self, blob_files, tmp_path, blob_points):
        out = tmp_path / "bench"
        config = blob_config(blob_files, out)
        report = benchmark_speedup(config, [2, 1], repeats=2, out_dir=out, data=blob_points[0])
        assert report.worker_counts == [1, 2]
        assert report.stages == ["similarity", "eigensolver", "kmeans", "total"]
        for stage in report.stages:
            assert report.ratio(stage, 1) == 1.0
        by_key = {(row.stage, row.workers): row for row in report.rows}
        assert by_key[("similarity", 1)].counters == by_key[("similarity", 2)].counters
        for name in ("timing.csv", "counters.csv", "speedup.csv", "summary.txt"):
            assert (out / name).exists()
        assert not (out / "assignments.tsv").exists()

    def test_requires_single_worker(self, blob_files, tmp_path):
        with pytest.raises(ConfigError):
            benchmark_speedup(blob_config(blob_files, tmp_path), [2, 4])

    def test_requires_a_repeat(self, blob_files, tmp_path):
        with pytest.raises(ConfigError):
            benchmark_speedup(blob_config(blob_files, tmp_path), [1], repeats=0)

    @pytest.mark.benchmark
    @pytest.mark.skipif((os.cpu_count() or 1) < 4, reason="needs at least 4 cores")
    def test_similarity_speedup(self, tmp_path):
        dataset = generate_synthetic(BlobSpec(blobs=4, points_per_blob=500), seed=1)
        data = tmp_path / "points.csv"
        data.write_text(dataset.text)
        config = PipelineConfig.build(input=data, k=4, out=tmp_path / "bench")
        report = benchmark_speedup(config, [1, 2, 4], repeats=3, data=dataset.points)
        assert report.wall_seconds("similarity", 4) <= 0.6 * report.wall_seconds("similarity", 1)
        totals = [report.wall_seconds("total", m) for m in (1, 2, 4)]
        for before, after in zip(totals, totals[1:]):
            assert after <= 1.1 * before
        assert statistics.median(totals) > 0.0


class TestCli:
    def test_gen_then_run(self, tmp_path):
        data = tmp_path / "blobs.csv"
        assert main(["gen", "--blobs", "2", "--points", "20", "--seed", "3", "--out", str(data)]) == 0
        assert len(data.read_text().splitlines()) == 40
        out = tmp_path / "out"
        argv = ["run", "--input", str(data), "--k", "2", "--knn-t", "8", "--workers", "2"]
        argv += ["--out", str(out), "--truth", f"{data}.labels"]
        assert main(argv) == 0
        assert float((out / "ari.txt").read_text()) == 1.0

    def test_bench(self, tmp_path):
        data = tmp_path / "blobs.csv"
        main(["gen", "--blobs", "2", "--points", "15", "--out", str(data)])
        out = tmp_path / "bench"
        argv = ["bench", "--input", str(data), "--k", "2", "--workers", "1,2", "--repeats", "1"]
        assert main(argv + ["--out", str(out)]) == 0
        assert (out / "speedup.csv").exists()

    def test_failure_exit_code(self, tmp_path):
        argv = ["run", "--input", str(tmp_path / "missing.csv"), "--k", "2", "--out", str(tmp_path)]
        assert main(argv) == 1
