"""Integration tests that drive the installed command line in a subprocess."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).parent.parent


def run_cli(*args: str, cwd: Path, timeout: int = 600) -> subprocess.CompletedProcess:
    """Run ``python -m generalized_turan`` with the project on the path.

    Args:
        args: Command-line arguments after the module name
        cwd: Working directory, so caches and config files stay in the test's temp dir
        timeout: Seconds before the run is abandoned

    Returns:
        The finished process with captured text output
    """
    env = os.environ.copy()
    env["PYTHONPATH"] = os.pathsep.join(filter(None, [str(PROJECT_ROOT), env.get("PYTHONPATH")]))
    for name in ("CONFIG_FILE", "TURAN_CACHE_DIR", "TURAN_NO_CACHE", "TURAN_JOBS", "TURAN_SEED", "TURAN_TIMEOUT"):
        env.pop(name, None)
    return subprocess.run(  # noqa: S603
        [sys.executable, "-m", "generalized_turan", *args],
        capture_output=True,
        text=True,
        cwd=str(cwd),
        env=env,
        timeout=timeout,
        check=False,
    )


@pytest.mark.integration
def test_furedi_report_on_stdout(tmp_path):
    process = run_cli("furedi", "--q", "7", "--t", "3", cwd=tmp_path)
    assert process.returncode == 0, process.stderr
    report = json.loads(process.stdout)
    assert report["schema"] == 1
    assert report["provenance"]["version"] == "0.1.0"
    graph = next(r["data"] for r in report["results"] if r["name"] == "graph")
    assert graph["order"] == 24


@pytest.mark.integration
def test_graph_out_round_trips_through_count(tmp_path):
    """A graph written by one command is read back by another via @FILE."""
    edges = tmp_path / "f53.txt"
    assert run_cli("furedi", "--q", "5", "--t", "3", "--graph-out", str(edges), cwd=tmp_path).returncode == 0
    process = run_cli("count", "--host", f"@{edges}", "--k2t", "3", cwd=tmp_path)
    assert process.returncode == 0, process.stderr
    report = json.loads(process.stdout)
    assert report["results"][0]["data"]["value"] == 0


@pytest.mark.integration
def test_usage_and_infeasible_exit_codes(tmp_path):
    """Failing runs still print a report whose error record carries the exit status."""
    for args, code in (
        (("count", "--host", "kab_3"), 2),
        (("furedi", "--n", "5", "--t", "5"), 4),
        (("oracle", "--n", "12", "--pattern", "clique_2", "--forbid", "clique_3"), 4),
    ):
        process = run_cli(*args, cwd=tmp_path)
        assert process.returncode == code, process.stderr
        report = json.loads(process.stdout)
        assert report["results"][-1]["data"]["exit_code"] == code


@pytest.mark.integration
def test_oracle_writes_cache_in_working_directory(tmp_path):
    process = run_cli("oracle", "--n", "6", "--pattern", "path_3", "--forbid", "cycle_4", cwd=tmp_path)
    assert process.returncode == 0, process.stderr
    assert list((tmp_path / ".turan-cache").glob("*.json"))


@pytest.mark.integration
@pytest.mark.slow
def test_quick_verification_suite_passes(tmp_path):
    out = tmp_path / "suite.json"
    process = run_cli("verify-paper", "--level", "quick", "--out", str(out), cwd=tmp_path, timeout=3600)
    assert process.returncode == 0, process.stderr
    report = json.loads(out.read_text())
    assert report["command"] == "verify-paper"
    assert all(r["data"]["passed"] for r in report["results"] if r["data"].get("hard"))


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-m", "integration"])
