import json

import pytest
from click.testing import CliRunner

from rieszlab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


class TestScenarioCommands:
    def test_list(self, runner):
        result = runner.invoke(main, ["scenario", "list"])
        assert result.exit_code == 0
        assert "clark-identity" in result.output
        assert "theorem4-crosscheck" in result.output

    def test_list_machine_filter(self, runner):
        result = runner.invoke(main, ["scenario", "list", "--machine", "--filter", "theorem5"])
        assert result.exit_code == 0
        infos = json.loads(result.output)
        assert len(infos) == 1
        assert infos[0]["name"] == "theorem5-crosscheck"

    def test_run_pass_exit_zero(self, runner, tmp_path):
        result = runner.invoke(main, [
            "scenario", "run", "lattice-gram", "--param", "n_nodes=16",
            "--out", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "report.json").exists()
        assert "[PASS]" in result.output

    def test_run_check_failure_exit_two(self, runner):
        # alternating control asserted as AOB must fail its check
        result = runner.invoke(main, [
            "scenario", "run", "aob-decay",
            "--param", "kind=perturbed", "--param", "delta=0.2",
        ])
        assert result.exit_code == 2
        assert "[FAIL]" in result.output

    def test_run_unknown_scenario_exit_one(self, runner):
        result = runner.invoke(main, ["scenario", "run", "nope"])
        assert result.exit_code == 1

    def test_run_config_file(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n_nodes": 8}))
        result = runner.invoke(main, [
            "scenario", "run", "lattice-gram", "--config", str(cfg),
        ])
        assert result.exit_code == 0
        assert '"n_nodes": 8' in result.output or "n_nodes" not in result.output

    def test_determinism_byte_identical(self, runner, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        for out in (out1, out2):
            result = runner.invoke(main, [
                "scenario", "run", "kadets-sweep",
                "--param", "gram_window=60",
                "--param", 'deltas=[0.1, 0.3]',
                "--out", str(out),
            ])
            assert result.exit_code == 0, result.output
        for name in ("report.json", "kadets-sweep_bounds.csv", "summary.txt"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestDirectCommands:
    def test_validate(self, runner):
        result = runner.invoke(main, [
            "validate", "--kind", "perturbed", "--delta", "0.3",
            "--window", "-20..20",
        ])
        assert result.exit_code == 0, result.output
        assert "delta: 0.4" in result.output

    def test_validate_bad_window(self, runner):
        result = runner.invoke(main, ["validate", "--window", "3..9"])
        assert result.exit_code != 0

    def test_clark(self, runner, tmp_path):
        result = runner.invoke(main, [
            "clark", "--window", "-50..50", "--points", "0.25,0.5",
            "--out", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        assert "I(0.25+0.5i)" in result.output
        assert (tmp_path / "clark_spec.json").exists()

    def test_gram_writes_csv(self, runner, tmp_path):
        result = runner.invoke(main, [
            "gram", "--window", "-4..4", "--nu", "1.0", "--out", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        text = (tmp_path / "gram.csv").read_text()
        assert text.startswith("row,col,re,im")

    def test_riesz(self, runner):
        result = runner.invoke(main, [
            "riesz", "--kind", "perturbed", "--delta", "0.15",
            "--window", "-40..40", "--sizes", "20,40",
        ])
        assert result.exit_code == 0, result.output
        assert "c=" in result.output

    def test_aob(self, runner):
        result = runner.invoke(main, [
            "aob", "--kind", "decaying", "--delta", "0.3",
            "--window", "-30..30", "--tails", "0,5,10",
        ])
        assert result.exit_code == 0, result.output
        assert "aob proxy: True" in result.output

    def test_angle(self, runner):
        result = runner.invoke(main, [
            "angle", "--theta-kind", "clark", "--window", "-10..10",
            "--tails", "3,6", "--grid", "8192",
        ])
        assert result.exit_code == 0, result.output
        assert "cos =" in result.output

    def test_toeplitz(self, runner, tmp_path):
        result = runner.invoke(main, [
            "toeplitz", "--symbol", "cayley_power", "--k", "1",
            "--sizes", "8,16,32", "--grid", "256", "--out", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        assert "not_invertible" in result.output
        assert (tmp_path / "spectrum.csv").exists()
