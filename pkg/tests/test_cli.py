import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from rodlab.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_spectrum_command(runner, tmp_path):
    res = runner.invoke(main, ["--out", str(tmp_path), "spectrum", "--c-max", "3"])
    assert res.exit_code == 0, res.output
    data = json.loads((tmp_path / "spectrum.json").read_text())
    energies = [lv["energy"] for lv in data["levels"]]
    assert energies == sorted(energies)
    assert energies[0] == pytest.approx(2 * math.pi**2, rel=1e-12)


def test_flow_command_and_determinism(runner, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        res = runner.invoke(
            main,
            ["--seed", "7", "--out", str(out), "flow", "--record-every", "200"],
        )
        assert res.exit_code == 0, res.output
        assert "converged=True" in res.output
    s1 = (out1 / "flow_seed7.json").read_text()
    s2 = (out2 / "flow_seed7.json").read_text()
    assert s1 == s2  # byte-identical summaries for identical config + seed
    traj = (out1 / "flow_seed7_trajectory.csv").read_text().splitlines()
    assert traj[0] == "iteration,energy,residual,step"
    assert len(traj) > 2


def test_flow_then_classify_and_export(runner, tmp_path):
    res = runner.invoke(
        main, ["--seed", "11", "--out", str(tmp_path), "flow", "--record-every", "500"]
    )
    assert res.exit_code == 0, res.output
    summary = tmp_path / "flow_seed11.json"

    res = runner.invoke(main, ["--out", str(tmp_path), "classify", str(summary)])
    assert res.exit_code == 0, res.output
    assert "critical" in res.output

    res = runner.invoke(
        main,
        ["--out", str(tmp_path), "--grid-size", "64", "export", str(summary), "--format", "obj"],
    )
    assert res.exit_code == 0, res.output
    obj = (tmp_path / "flow_seed11.obj").read_text()
    assert obj.splitlines()[1].startswith("v ")

    res = runner.invoke(
        main, ["--out", str(tmp_path), "--grid-size", "64", "invariants", str(summary)]
    )
    assert res.exit_code == 0, res.output


def test_family_command(runner, tmp_path):
    res = runner.invoke(
        main,
        ["--out", str(tmp_path), "--grid-size", "256", "family",
         "--h", "2", "--k", "1", "--u", "0.2", "--skip-linking"],
    )
    assert res.exit_code == 0, res.output
    assert "torus(2,3)" in res.output
    summary = json.loads((tmp_path / "family_h2_k1_u0.2.json").read_text())
    assert summary["energy"] == pytest.approx(10 * math.pi**2, rel=1e-10)
    assert summary["config"]["params"] == {"h": 2, "k": 1, "u": 0.2}
    csv_lines = (tmp_path / "family_h2_k1_u0.2.csv").read_text().splitlines()
    assert csv_lines[0].split(",")[:4] == ["t", "gx", "gy", "gz"]
    assert len(csv_lines) == 257


def test_family_circle_report(runner, tmp_path):
    res = runner.invoke(
        main,
        ["--out", str(tmp_path), "--grid-size", "128", "family",
         "--h", "1", "--k", "1", "--u", "0", "--skip-linking"],
    )
    assert res.exit_code == 0, res.output
    summary = json.loads((tmp_path / "family_h1_k1_u0.json").read_text())
    assert summary["predicted_knot"]["kind"] == "circle"
    assert summary["predicted_knot"]["cover"] == 1


def test_validation_exit_code(runner, tmp_path):
    res = runner.invoke(
        main,
        ["--out", str(tmp_path), "family", "--h", "0", "--k", "0", "--u", "0.5"],
    )
    assert res.exit_code == 2


def test_bad_u_rejected(runner, tmp_path):
    res = runner.invoke(
        main, ["--out", str(tmp_path), "family", "--h", "2", "--k", "1", "--u", "1.5"]
    )
    assert res.exit_code != 0
