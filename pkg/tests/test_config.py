import argparse
from pathlib import Path

import pytest

from parspec.errors import ConfigError
from parspec.utils.config import (
    PipelineConfig,
    add_args,
    config_from_args,
    parse_config_text,
    parse_worker_counts,
)


def parse(argv, worker_list=False):
    parser = argparse.ArgumentParser()
    add_args(parser, worker_list=worker_list)
    return parser.parse_args(argv)


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert config.k == 2
        assert config.workers == 1
        assert config.init == "kmeans++"
        assert config.snapshots
        assert config.reorthogonalize

    @pytest.mark.parametrize(
        "values",
        [
            {"k": 0},
            {"workers": 0},
            {"sigma": -1.0},
            {"knn_t": 0},
            {"eps": 0.0},
            {"mode": "mesh"},
            {"init": "random"},
            {"dense": True, "knn_t": 3},
            {"colour": "blue"},
        ],
    )
    def test_invalid(self, values):
        with pytest.raises(ConfigError):
            PipelineConfig.build(**values)

    def test_text_round_trip(self):
        config = PipelineConfig.build(
            input="data/points.csv", k=3, sigma=0.5, workers=4, init="indices=0,5,9", truth="labels.txt"
        )
        assert PipelineConfig.from_config_text(config.to_config_text()) == config

    def test_text_format(self):
        text = PipelineConfig.build(k=3, dense=True).to_config_text()
        assert "k=3\n" in text
        assert "dense=true\n" in text
        assert "sigma=\n" in text

    def test_save_and_load(self, tmp_path):
        config = PipelineConfig.build(mode="graph", k=4, seed=11)
        path = tmp_path / "config.txt"
        config.save(path)
        assert PipelineConfig.load(path) == config

    def test_updated_revalidates(self):
        config = PipelineConfig.build(knn_t=5)
        with pytest.raises(ConfigError):
            config.updated(dense=True)
        assert config.updated(k=7).k == 7

    def test_similarity_params(self):
        params = PipelineConfig.build(sigma=2.0, knn_t=4, seed=3).similarity_params()
        assert (params.sigma, params.knn_t, params.dense, params.seed) == (2.0, 4, False, 3)


class TestConfigText:
    def test_comments_blanks_and_dashes(self):
        values = parse_config_text("# run\n\nk = 3  # clusters\nknn-t=5\nsigma=\n")
        assert values == {"k": "3", "knn_t": "5", "sigma": None}

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config_text("clusters=3\n")

    def test_missing_separator(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("k=3\nworkers 4\n")


class TestWorkerCounts:
    def test_list(self):
        assert parse_worker_counts("1,2,4,8") == [1, 2, 4, 8]

    @pytest.mark.parametrize("text", ["", "1,x", "0,1", "1,-2"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_worker_counts(text)


class TestArgs:
    def test_flags(self):
        args = parse(["--input", "x.csv", "--k", "3", "--workers", "4", "--dense", "--no-reorth", "--no-snapshots"])
        config = config_from_args(args)
        assert config.input == Path("x.csv")
        assert (config.k, config.workers) == (3, 4)
        assert config.dense and config.knn_t is None
        assert not config.reorthogonalize
        assert not config.snapshots

    def test_flags_override_file(self, tmp_path):
        path = tmp_path / "run.txt"
        path.write_text("k=5\nworkers=2\nknn_t=6\n")
        config = config_from_args(parse(["--config", str(path), "--k", "3"]))
        assert (config.k, config.workers, config.knn_t) == (3, 2, 6)

    def test_dense_flag_clears_file_knn_t(self, tmp_path):
        path = tmp_path / "run.txt"
        path.write_text("knn_t=6\n")
        config = config_from_args(parse(["--config", str(path), "--dense"]))
        assert config.dense and config.knn_t is None

    def test_knn_t_flag_clears_file_dense(self, tmp_path):
        path = tmp_path / "run.txt"
        path.write_text("dense=true\n")
        config = config_from_args(parse(["--config", str(path), "--knn-t", "4"]))
        assert not config.dense and config.knn_t == 4

    def test_dense_and_knn_t_flags_together(self):
        with pytest.raises(ConfigError):
            config_from_args(parse(["--dense", "--knn-t", "4"]))

    def test_worker_list_is_left_to_the_caller(self):
        args = parse(["--workers", "1,2"], worker_list=True)
        assert args.workers == "1,2"
        assert config_from_args(args).workers == 1

    def test_logging_flags(self):
        args = parse(["--logging.debug", "--logging.logfile", "run.log"])
        assert args.log_debug and not args.log_trace
        assert args.log_file == "run.log"
