import json
import subprocess
import sys
from pathlib import Path

import pytest

CLI = [sys.executable, "-m", "chainline.cli"]


def run_cli(*args, cwd=None):
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, cwd=cwd, timeout=120
    )


@pytest.fixture()
def small_model(tmp_path):
    path = tmp_path / "m.fm"
    path.write_text("model R { optional A }\n", encoding="utf-8")
    return path


class TestValidate:
    def test_bundled_asset_passes(self):
        result = run_cli("validate", "traceability")
        assert result.returncode == 0
        assert "ok: OnChainTraceability" in result.stdout

    def test_void_model_fails(self, tmp_path):
        path = tmp_path / "void.fm"
        path.write_text(
            "model R { xor G { member A member B } }\nconstraint A <=> B\n",
            encoding="utf-8",
        )
        result = run_cli("validate", str(path))
        assert result.returncode == 1
        assert "void" in result.stdout

    def test_parse_error_reported_on_stderr(self, tmp_path):
        path = tmp_path / "bad.fm"
        path.write_text("model R { optional ?? }\n", encoding="utf-8")
        result = run_cli("validate", str(path))
        assert result.returncode == 1
        assert "error:" in result.stderr


class TestCount:
    def test_small_model(self, small_model):
        result = run_cli("count", str(small_model))
        assert result.returncode == 0
        assert result.stdout.strip() == "2"

    def test_bound_exceeded(self):
        result = run_cli("count", "traceability")
        assert result.returncode == 1
        assert "bound" in result.stderr

    def test_raised_bound(self):
        result = run_cli("count", "traceability", "--max-features", "64")
        assert result.returncode == 0
        assert result.stdout.strip() == "49680"


class TestConfigureGenerateVerify:
    def test_deselect_root_rejected(self, small_model, tmp_path):
        result = run_cli(
            "configure", str(small_model), "--decide", "R=off",
            "-o", str(tmp_path / "c.json"),
        )
        assert result.returncode == 1
        assert "root" in result.stderr

    def test_rejected_decision_reports_conflict(self, tmp_path):
        cfg = tmp_path / "c.json"
        result = run_cli(
            "configure", "traceability",
            "--decide", "Roles=off", "--decide", "AddRoleDynamically=on",
            "-o", str(cfg),
        )
        assert result.returncode == 1
        assert "rejected" in result.stderr

    def test_full_pipeline(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        result = run_cli(
            "configure", "traceability",
            "--decide", "StateMachine=on",
            "--decide", "AssetTracking=on",
            "--decide", "StructuredAssets=on",
            "--decide", "Testnet=on",
            "--finalize",
            "-o", str(cfg),
        )
        assert result.returncode == 0, result.stderr
        assert "complete=true" in result.stdout
        decisions = json.loads(cfg.read_text())
        assert decisions["model"] == "OnChainTraceability"

        out = tmp_path / "product"
        result = run_cli("generate", "traceability", str(cfg), "-o", str(out))
        assert result.returncode == 0, result.stderr
        assert (out / "contracts/Factory.sol").exists()

        result = run_cli("verify", str(out))
        assert result.returncode == 0, result.stderr
        assert "artifacts verified" in result.stdout

    def test_incomplete_configuration_rejected_by_generate(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        run_cli("configure", "traceability", "--decide", "StateMachine=on", "-o", str(cfg))
        result = run_cli("generate", "traceability", str(cfg), "-o", str(tmp_path / "p"))
        assert result.returncode == 1
        assert "not complete" in result.stderr

    def test_verify_detects_tampering(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        run_cli(
            "configure", "traceability", "--decide", "RecordCollections=on",
            "--decide", "StructuredRecords=on", "--decide", "Testnet=on",
            "--finalize", "-o", str(cfg),
        )
        out = tmp_path / "p"
        run_cli("generate", "traceability", str(cfg), "-o", str(out))
        target = out / "contracts/RecordsData.sol"
        target.write_text(target.read_text() + "// tampered\n")
        result = run_cli("verify", str(out))
        assert result.returncode == 1
        assert "digest mismatch" in result.stdout


class TestCost:
    def test_default_scenarios_eight_rows(self):
        result = run_cli("cost", "--from", "1", "--to", "8")
        assert result.returncode == 0
        lines = result.stdout.strip().splitlines()
        assert lines[0] == "n,reference_total,generated_total"
        assert len(lines) == 9
        assert lines[1] == "1,1842918,12680027"

    def test_dairy_pair(self):
        result = run_cli("cost", "--pair", "dairy", "--from", "3", "--to", "3")
        assert result.returncode == 0
        assert result.stdout.strip().splitlines()[1] == "3,23380236,21413140"

    def test_unknown_pair(self):
        result = run_cli("cost", "--pair", "nope")
        assert result.returncode == 1

    def test_csv_file_output(self, tmp_path):
        target = tmp_path / "curve.csv"
        result = run_cli("cost", "--pair", "spare_parts", "--csv", str(target))
        assert result.returncode == 0
        assert target.read_text().startswith("n,reference_total")


class TestUsageErrors:
    def test_unknown_subcommand(self):
        assert run_cli("frobnicate").returncode == 2

    def test_missing_required_option(self):
        assert run_cli("configure", "traceability").returncode == 2

    def test_bad_decide_syntax(self, tmp_path):
        result = run_cli(
            "configure", "traceability", "--decide", "Roles=maybe",
            "-o", str(tmp_path / "c.json"),
        )
        assert result.returncode == 2
