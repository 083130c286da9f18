import json
import math

import numpy as np

from rodlab.exports import curve_csv, flow_csv, json_dumps, tube_obj
from rodlab.families import FamilyParams, family


def small_curve():
    _, fc = family(FamilyParams(2, 1, 0.2), grid_size=64)
    return fc


def test_curve_csv_shape():
    fc = small_curve()
    lines = curve_csv(fc).splitlines()
    assert lines[0] == "t,gx,gy,gz,vx,vy,vz,speed,kappa1,kappa2,tw,st"
    assert len(lines) == 65
    row = [float(x) for x in lines[1].split(",")]
    assert len(row) == 12
    assert row[0] == 0.0
    assert np.allclose(row[1:4], fc.gamma[0])


def test_flow_csv():
    traj = np.array([[0, 10.0, 1e-2, 1e-3], [5, 9.5, 1e-3, 2e-3]])
    lines = flow_csv(traj).splitlines()
    assert lines[0] == "iteration,energy,residual,step"
    assert lines[1].startswith("0,10,")


def test_tube_obj_structure():
    fc = small_curve()
    content = tube_obj(fc, n_around=8)
    v = [ln for ln in content.splitlines() if ln.startswith("v ")]
    vn = [ln for ln in content.splitlines() if ln.startswith("vn ")]
    f = [ln for ln in content.splitlines() if ln.startswith("f ")]
    n_rings = len(v) // 8
    assert len(v) == len(vn)
    assert len(f) == 2 * len(v)  # two triangles per quad, closed both ways
    # faces reference valid vertices
    idx = {int(part.split("//")[0]) for ln in f for part in ln.split()[1:]}
    assert min(idx) == 1 and max(idx) == len(v)


def test_json_dumps_17_digits_and_deterministic():
    blob = {"x": 1 / 3, "z": complex(1.0, -2.5), "arr": np.array([1.0, 2.0])}
    s1, s2 = json_dumps(blob), json_dumps(blob)
    assert s1 == s2
    data = json.loads(s1)
    assert data["x"] == 1 / 3  # full precision survives the round trip
    assert data["z"] == {"re": 1.0, "im": -2.5}
    assert data["arr"] == [1.0, 2.0]
