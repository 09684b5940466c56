import json
import shutil
import subprocess
import sys

import pytest

from pcg import catalog
from pcg.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    status = main([*argv, "--json", str(out)])
    return status, json.loads(out.read_text())


def test_validate_ok(tmp_path):
    status, report = run(tmp_path, "validate", "--catalog", "m27")
    assert status == 0 and report["diagnostics"] == []
    assert report["schema"] == "pcg-report/1"


@pytest.mark.parametrize("path", catalog.fixture_paths("malformed"), ids=lambda p: p.name)
def test_malformed_exit_2(tmp_path, path):
    status, report = run(tmp_path, "validate", "--input", str(path))
    assert status == 2


@pytest.mark.parametrize("path", catalog.fixture_paths("bad"), ids=lambda p: p.name)
def test_inconsistent_exit_2(tmp_path, path):
    status, report = run(tmp_path, "consistency", "--input", str(path))
    assert status == 2 and report["failures"]
    assert report["input"]["sha256"]
    status, report = run(tmp_path, "info", "--input", str(path))
    assert status == 2 and report["error"]["code"] == "inconsistent"


def test_props_and_expect(tmp_path):
    status, report = run(tmp_path, "props", "--catalog", "c3wrc3", "--property", "semi:i=1",
                         "--property", "semi:i=2")
    assert status == 0
    assert [v["holds"] for v in report["verdicts"]] == [False, True]
    assert report["verdicts"][0]["witness"]
    status, _ = run(tmp_path, "props", "--catalog", "c3wrc3", "--property", "semi:i=1",
                    "--expect", "true")
    assert status == 1


def test_parameter_error(tmp_path):
    status, report = run(tmp_path, "info", "--catalog", "cyclic:p=4")
    assert status == 2 and report["error"]["code"] == "parameter"


def test_capacity_exit_3(tmp_path):
    status, report = run(tmp_path, "series", "--catalog", "example38", "--cap", "100")
    assert status == 3 and report["error"]["code"] == "capacity"
    status, _ = run(tmp_path, "oracle-check", "--catalog", "example38")
    assert status == 3


def test_identities_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["identities", "--catalog", "c3wrc3xc3", "--json", str(a)]) == 0
    assert main(["identities", "--catalog", "c3wrc3xc3", "--tasks", "2", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "timings" not in json.loads(a.read_text())


def test_timings_opt_in(tmp_path):
    out = tmp_path / "t.json"
    main(["series", "--catalog", "m27", "--json", str(out), "--timings"])
    assert "total" in json.loads(out.read_text())["timings"]


def test_oracle_check(tmp_path):
    status, report = run(tmp_path, "oracle-check", "--catalog", "c3wrc3")
    assert status == 0 and report["oracle"]["cross_validation"]["ok"]


def test_list_catalog(tmp_path):
    status, report = run(tmp_path, "list-catalog")
    assert status == 0
    assert {r["name"] for r in report["catalog"]} == set(catalog.names())


def test_info_shows_completion(capsys):
    assert main(["info", "--catalog", "example38"]) == 0
    out = capsys.readouterr().out
    assert "completion" in out and "class       5" in out


def test_console_script():
    exe = shutil.which("pcg")
    cmd = [exe] if exe else [sys.executable, "-m", "pcg.cli"]
    proc = subprocess.run([*cmd, "series", "--catalog", "m27"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "lower_central" in proc.stdout
