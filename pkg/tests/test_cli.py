# stdlib
import json

# 3rd party
import pytest
from coincidence.regressions import AdvancedFileRegressionFixture
from domdf_python_tools.paths import PathPlus

# this package
from curvquot import checks
from curvquot.checks import Check, CheckResult
from curvquot.cli import EXIT_CONFIG_ERROR, EXIT_FAILED, EXIT_PASSED, build_parser, main

LINEAR_TABLE = """\
r,g,g',g'',g'''
0.0,0.0,1.0,0.0,0.0
0.5,0.5,1.0,0.0,0.0
1.0,1.0,1.0,0.0,0.0
"""


def test_list(capsys, advanced_file_regression: AdvancedFileRegressionFixture):
	assert main(["list"]) == EXIT_PASSED
	advanced_file_regression.check(capsys.readouterr().out)


def test_exit_codes():
	assert (EXIT_PASSED, EXIT_FAILED, EXIT_CONFIG_ERROR) == (0, 1, 2)


def test_command_required(capsys):
	with pytest.raises(SystemExit) as excinfo:
		build_parser().parse_args([])

	assert excinfo.value.code == 2


class TestVerify:

	def test_unknown_check(self, capsys):
		assert main(["verify", "nope"]) == EXIT_CONFIG_ERROR
		assert capsys.readouterr().err == "curvquot: error: check: Unknown check 'nope'.\n"

	def test_unknown_check_in_config(self, tmp_pathplus: PathPlus, capsys):
		(tmp_pathplus / "config.json").write_clean('{"check": "nope"}')

		assert main(["verify", "nope", "--config", str(tmp_pathplus / "config.json")]) == EXIT_CONFIG_ERROR
		assert capsys.readouterr().err == "curvquot: error: check: Unknown check 'nope'.\n"

	def test_mismatched_config(self, tmp_pathplus: PathPlus, capsys):
		(tmp_pathplus / "config.json").write_clean('{"check": "oracle-sanity"}')

		assert main(["verify", "bundle-vw-identities", "--config", str(tmp_pathplus / "config.json")]) == 2
		err = capsys.readouterr().err
		assert err.startswith("curvquot: error: check: The configuration is for 'oracle-sanity'")

	def test_missing_config(self, tmp_pathplus: PathPlus, capsys):
		assert main(["verify", "oracle-sanity", "--config", str(tmp_pathplus / "missing.json")]) == 2
		assert capsys.readouterr().err.startswith("curvquot: error: config: No such configuration file")

	def test_invalid_tolerance(self, tmp_pathplus: PathPlus, capsys):
		document = {"check": "bundle-vw-identities", "tolerances": {"identity": -1}}
		(tmp_pathplus / "config.json").dump_json(document)

		assert main(["verify", "bundle-vw-identities", "--config", str(tmp_pathplus / "config.json")]) == 2
		assert capsys.readouterr().err.startswith("curvquot: error: tolerances.identity: Tolerance 'identity'")

	def test_fibration_for_other_check(self, capsys):
		assert main(["verify", "bundle-vw-identities", "--fibration", "s3"]) == EXIT_CONFIG_ERROR
		assert capsys.readouterr().err.startswith("curvquot: error: scene.fibration: ")

	def test_report_to_file(self, tmp_pathplus: PathPlus):
		document = {"check": "bundle-vw-identities", "seed": 1, "samples": {"draws": 200}}
		(tmp_pathplus / "config.json").dump_json(document)
		out = tmp_pathplus / "report.json"

		argv = ["verify", "bundle-vw-identities", "--config", str(tmp_pathplus / "config.json"), "--out", str(out)]
		assert main(argv) == EXIT_PASSED

		report = json.loads(out.read_text())
		assert report["check"] == "bundle-vw-identities"
		assert report["passed"] is True
		assert report["seed"] == 1
		assert report["samples"] == {"draws": 200}

	def test_seed_override(self, tmp_pathplus: PathPlus, capsys):
		document = {"check": "bundle-vw-identities", "seed": 1, "samples": {"draws": 200}}
		(tmp_pathplus / "config.json").dump_json(document)

		assert main(["verify", "bundle-vw-identities", "--config", str(tmp_pathplus / "config.json"), "--seed", "7"]) == 0
		assert json.loads(capsys.readouterr().out)["seed"] == 7

	def test_failed_check(self, monkeypatch, capsys):
		check = Check(
				name="never-passes",
				description="Always fails.",
				function=lambda ctx: CheckResult(passed=False, details={"reason": "by construction"}),
				scene={},
				tolerances={"anything": 0.5},
				samples={},
				primary="anything",
				)
		monkeypatch.setitem(checks._REGISTRY, check.name, check)

		assert main(["verify", "never-passes"]) == EXIT_FAILED
		report = json.loads(capsys.readouterr().out)
		assert report["passed"] is False
		assert report["details"] == {"reason": "by construction"}
		assert report["tolerance"] == 0.5


class TestExportProfile:

	def test_stdout(self, capsys):
		assert main(["export-profile", "--profile", "linear", "--grid", "3", "--no-cache"]) == EXIT_PASSED
		assert capsys.readouterr().out == LINEAR_TABLE

	def test_file(self, tmp_pathplus: PathPlus):
		out = tmp_pathplus / "table.csv"
		argv = ["export-profile", "--profile", "linear", "--grid", "3", "--out", str(out), "--no-cache"]

		assert main(argv) == EXIT_PASSED
		assert out.read_text() == LINEAR_TABLE

	def test_cache_dir(self, tmp_pathplus: PathPlus, capsys):
		argv = ["export-profile", "--profile", "linear", "--grid", "3", "--cache-dir", str(tmp_pathplus)]

		assert main(argv) == EXIT_PASSED
		assert capsys.readouterr().out == LINEAR_TABLE
		assert list(tmp_pathplus.iterdir())

		# a second run reads the table back from disk
		assert main(argv) == EXIT_PASSED
		assert capsys.readouterr().out == LINEAR_TABLE

	@pytest.mark.parametrize("grid", ["1", "0", "-5"])
	def test_bad_grid(self, grid: str, capsys):
		assert main(["export-profile", "--profile", "g0", "--grid", grid, "--no-cache"]) == EXIT_CONFIG_ERROR
		assert capsys.readouterr().err == f"curvquot: error: grid: --grid must be at least 2, not {grid}\n"

	def test_unknown_profile(self, capsys):
		assert main(["export-profile", "--profile", "cosh", "--no-cache"]) == EXIT_CONFIG_ERROR
		assert capsys.readouterr().err == "curvquot: error: profile: Unknown profile 'cosh'\n"
