"""
Tests for the unitfrac command line
"""

import json

import pytest
from typer.testing import CliRunner

from unitfrac import __version__
from unitfrac.cli import EXIT_LIMIT, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE, app


@pytest.fixture
def runner():
    return CliRunner()


def _records(result):
    """JSON lines from the captured output; rich tables and notes go to stderr"""
    return [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]


class TestVerifyCommand:
    def test_valid(self, runner):
        result = runner.invoke(app, ["verify", "1726201", "431566", "13447105790", "98022323785"])
        assert result.exit_code == EXIT_OK
        assert _records(result)[0]["valid"] is True

        assert runner.invoke(app, ["verify", "2", "1", "2", "2"]).exit_code == EXIT_OK

    def test_invalid(self, runner):
        result = runner.invoke(app, ["verify", "7", "2", "2", "2"])
        assert result.exit_code == EXIT_NOT_FOUND
        assert _records(result)[0]["valid"] is False


class TestSolveCommand:
    def test_identity(self, runner):
        result = runner.invoke(app, ["solve", "6"])
        assert result.exit_code == EXIT_OK
        record = _records(result)[0]
        assert record["method"] == "identity(F1)"
        assert (record["x"], record["y"], record["z"]) == (6, 6, 3)

    def test_multiplier(self, runner):
        result = runner.invoke(app, ["solve", "409", "--methods", "split,multiplier", "--stages"])
        assert result.exit_code == EXIT_OK
        record = _records(result)[0]
        assert record["method"] == "multiplier-split"
        assert (record["x"], record["y"], record["z"]) == (104, 6544, 85072)
        assert record["params"]["r1"] == 2

    def test_not_found(self, runner):
        result = runner.invoke(app, ["solve", "409", "--methods", "split"])
        assert result.exit_code == EXIT_NOT_FOUND
        assert _records(result)[0]["solved"] is False

    def test_usage_errors(self, runner):
        assert runner.invoke(app, ["solve", "6", "--methods", "bogus"]).exit_code == EXIT_USAGE
        assert runner.invoke(app, ["solve", "1"]).exit_code == EXIT_USAGE

    def test_config_file(self, runner, tmp_path):
        path = tmp_path / "pipeline.json"
        path.write_text(json.dumps({"methods": ["split"]}))
        assert runner.invoke(app, ["solve", "409", "--config", str(path)]).exit_code == EXIT_NOT_FOUND
        path.write_text("{not json")
        assert runner.invoke(app, ["solve", "409", "--config", str(path)]).exit_code == EXIT_USAGE


class TestSieveCommand:
    def test_report(self, runner, tmp_path):
        path = tmp_path / "report.json"
        result = runner.invoke(
            app, ["sieve", "--l-start", "1", "--l-end", "30", "--methods", "split", "--report", str(path)]
        )
        assert result.exit_code == EXIT_OK
        assert json.loads(path.read_text())["exceptions"] == [17, 24]

    def test_progress_to_stdout(self, runner):
        result = runner.invoke(
            app, ["sieve", "--l-start", "1", "--l-end", "5", "--methods", "split", "--progress", "-"]
        )
        assert result.exit_code == EXIT_OK
        assert [r["l"] for r in _records(result)] == [1, 2, 3, 4, 5]

    def test_resume_with_cache(self, runner, tmp_path):
        cache = tmp_path / "cache.jsonl"
        args = ["sieve", "--l-start", "1", "--l-end", "10", "--methods", "split", "--cache", str(cache)]
        assert runner.invoke(app, args).exit_code == EXIT_OK
        assert runner.invoke(app, args + ["--resume"]).exit_code == EXIT_OK

    def test_usage_errors(self, runner):
        assert runner.invoke(app, ["sieve"]).exit_code == EXIT_USAGE
        assert runner.invoke(app, ["sieve", "--l-start", "1", "--n-start", "2"]).exit_code == EXIT_USAGE
        assert runner.invoke(app, ["sieve", "--l-start", "5", "--l-end", "4"]).exit_code == EXIT_USAGE
        assert runner.invoke(app, ["sieve", "--l-start", "1", "--resume"]).exit_code == EXIT_USAGE

    def test_inconclusive_exit_code(self, runner, monkeypatch):
        from unitfrac import pipeline
        from unitfrac.exceptions import ResourceLimitError

        def exhausted(*args, **kwargs):
            raise ResourceLimitError("budget")

        monkeypatch.setattr(pipeline, "split_search", exhausted)
        result = runner.invoke(app, ["sieve", "--l-start", "1", "--l-end", "3", "--methods", "split"])
        assert result.exit_code == EXIT_LIMIT


class TestOtherCommands:
    def test_oracle(self, runner):
        result = runner.invoke(app, ["oracle", "13", "--max", "1"])
        assert result.exit_code == EXIT_OK
        assert _records(result) == [{"n": 13, "x": 4, "y": 18, "z": 468}]

        result = runner.invoke(app, ["oracle", "5", "--count-only"])
        record = _records(result)[0]
        assert record["count"] >= 2 and record["exhausted"] is True

    def test_parametric(self, runner):
        result = runner.invoke(app, ["parametric", "409", "--w5-max", "1000", "--u5-max", "1000"])
        assert result.exit_code == EXIT_OK
        records = _records(result)
        assert len(records) == 11
        assert (records[0]["w5"], records[0]["u5"]) == (1, 15)
        assert records[0]["triple"] == [15 * 409, 1560 * 409, 104]

        result = runner.invoke(app, ["parametric", "409", "--first"])
        assert len(_records(result)) == 1

    def test_parametric_wrong_residue(self, runner):
        assert runner.invoke(app, ["parametric", "7"]).exit_code == EXIT_USAGE

    def test_families(self, runner):
        result = runner.invoke(app, ["families", "--list"])
        assert result.exit_code == EXIT_OK
        lines = result.output.splitlines()
        assert lines[0] == "id\tcondition\ttriple\tderivation"
        assert [line.split("\t")[0] for line in lines[1:]] == [f"F{i}" for i in range(1, 32)]

        records = _records(runner.invoke(app, ["families", "--classify", "97"]))
        assert {"family_id": "F8", "params": {"l": 4, "b": 1}, "unknown": False} in records

    def test_atlas(self, runner):
        result = runner.invoke(app, ["atlas", "840"])
        assert result.exit_code == EXIT_OK
        for residue in ("121", "169", "289", "361", "529"):
            assert residue in result.output

        assert len(_records(runner.invoke(app, ["atlas", "120", "--full"]))) == 120
        assert runner.invoke(app, ["atlas", "100"]).exit_code == EXIT_USAGE

    def test_golden(self, runner):
        assert runner.invoke(app, ["golden"]).exit_code == EXIT_OK

    def test_version(self, runner):
        result = runner.invoke(app, ["version"])
        assert result.output.strip() == __version__
