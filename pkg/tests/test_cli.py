import json
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from faraday_qnd.cli import main
from faraday_qnd.feasibility import Axis, sweep_tau_q
from faraday_qnd.io import read_boundaries, read_csv, region_rows
from faraday_qnd.paramfile import load

Q850 = """\
omega_p = 1.7e15
gamma_p = 2 THz
omega_ex = 2.1e15
gamma_ex = 10 GHz
omega_rabi = {rabi}
omega_probe = 1.7e15
power_w = {power}
tau = 5 ns
"""


def write(tmp_path, text, name="p.params"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def micropost_with(tmp_path, **changes):
    lines = []
    for line in (resources.files("faraday_qnd") / "data" / "micropost.params").read_text().splitlines():
        key = line.split("=", 1)[0].strip()
        if key in changes:
            line = f"{key} = {changes.pop(key)}"
        lines.append(line)
    lines += [f"{k} = {v}" for k, v in changes.items()]
    return write(tmp_path, "\n".join(lines) + "\n", "micropost_mod.params")


def test_rabi_prints_value(capsys):
    assert main(["rabi", "--params", "bundled:micropost"]) == 0
    out = capsys.readouterr().out
    assert "2.868e+11 rad/s" in out and "300 GHz" in out


def test_rabi_json(tmp_path):
    assert main(["rabi", "--params", "bundled:micropost", "--out", str(tmp_path), "--format", "json"]) == 0
    doc = json.loads((tmp_path / "rabi.json").read_text())
    assert doc["omega_rabi"] == pytest.approx(2.868e11, rel=1e-3)
    assert doc["omega_rabi_override"] == 3e11


def test_check_operating_point_feasible(tmp_path, capsys):
    assert main(["check", "--params", "bundled:micropost", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["feasible"] and set(doc["conditions"]) == {"a", "b", "c", "d"}
    assert "FEASIBLE" in capsys.readouterr().out


def test_check_over_critical_linewidth_infeasible(tmp_path):
    for tau in ("0.1 ns", "1 ns", "10 ns", "100 ns"):
        path = micropost_with(tmp_path, gamma_p="3 THz", tau=tau)
        assert main(["check", "--params", path, "--out", str(tmp_path)]) == 1


def test_check_short_window_fails_c(tmp_path):
    path = micropost_with(tmp_path, tau="1e-13")
    assert main(["check", "--params", path, "--out", str(tmp_path)]) == 1
    doc = json.loads((tmp_path / "report.json").read_text())
    c = doc["conditions"]["c"]
    assert not c["passed"] and c["margin"] == pytest.approx(0.023, rel=1e-9)
    # (a) also scales with tau and starts from a smaller margin, so it binds
    assert doc["binding"] == "a"


def test_check_five_ns_window_overexcites(tmp_path):
    # exact loss at this point gives (1 - |r|^2) N_in tau ~ 5, so (b) fails
    path = micropost_with(tmp_path, tau="5 ns")
    assert main(["check", "--params", path, "--out", str(tmp_path)]) == 1
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["binding"] == "b" and doc["conditions"]["b"]["margin"] < 1


def test_check_spin_lifetime_flag(tmp_path):
    assert main(["check", "--params", "bundled:micropost", "--out", str(tmp_path), "--spin-lifetime", "1e-10"]) == 1
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["binding"] == "d" and doc["feasible_without_d"]


@pytest.mark.parametrize("argv", [
    ["check", "--params", "bundled:missing"],
    ["response", "--params", "bundled:micropost", "--grid", "offset_gamma:1:1:5:lin"],
    ["response", "--params", "bundled:micropost", "--grid", "bogus:0:1:5:lin"],
    ["tau-q", "--params", "bundled:micropost", "--n-ex", "2"],
])
def test_config_errors_exit_two(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_key_exits_two(tmp_path):
    path = write(tmp_path, "omega_p = 2e15\ngamma_pp = 1\n")
    assert main(["rabi", "--params", path]) == 2


def test_argparse_usage_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["response"])
    assert info.value.code == 2


def test_response_columns_and_round_trip(tmp_path):
    path = write(tmp_path, Q850.format(rabi="300 GHz", power="10 mW"))
    assert main(["response", "--params", path, "--out", str(tmp_path)]) == 0
    data = read_csv(tmp_path / "response.csv")
    assert list(data) == ["offset", "abs_r0", "arg_r0", "abs_r", "arg_r", "dtheta"]
    assert len(data["offset"]) == 2001
    assert data["offset"][0] == pytest.approx(-2e13) and data["offset"][-1] == pytest.approx(2e13)
    assert np.max(np.abs(data["abs_r0"] - 1)) < 1e-12
    assert np.all(np.diff(data["arg_r0"]) > 0)


def test_response_shift_from_zero_crossing(tmp_path):
    path = write(tmp_path, Q850.format(rabi="300 GHz", power="10 mW"))
    main(["response", "--params", path, "--out", str(tmp_path)])
    d = read_csv(tmp_path / "response.csv")

    def crossing(phase):
        i = np.flatnonzero(np.diff(np.sign(phase)))[0]
        x0, x1, y0, y1 = d["offset"][i], d["offset"][i + 1], phase[i], phase[i + 1]
        return x0 - y0 * (x1 - x0) / (y1 - y0)

    shift = crossing(d["arg_r0"]) - crossing(d["arg_r"])
    expected = (3e11) ** 2 / (4 * 4e14)
    assert abs(shift - expected) / expected < 0.02
    # curves sit on top of each other at full scale
    assert np.max(np.abs(d["arg_r"] - d["arg_r0"])) < 1e-3


def test_response_without_coupling_has_no_phase_difference(tmp_path):
    path = write(tmp_path, Q850.format(rabi="0", power="10 mW"))
    assert main(["response", "--params", path, "--out", str(tmp_path),
                 "--grid", "offset_gamma:-3:3:301:lin"]) == 0
    d = read_csv(tmp_path / "response.csv")
    assert len(d["dtheta"]) == 301 and not np.any(d["dtheta"])


def test_feasibility_outputs(tmp_path):
    assert main(["feasibility", "--params", "bundled:micropost", "--out", str(tmp_path),
                 "--grid", "detuning:1:1e6:61:log", "--grid", "photons:1e2:1e18:33:log"]) == 0
    region = read_csv(tmp_path / "region.csv")
    assert len(region["detuning"]) == 61 * 33
    assert set(region) == {"detuning", "photons", "margin_a", "margin_b", "margin_c", "feasible", "boundary"}
    summary = json.loads((tmp_path / "feasibility.json").read_text())
    assert summary["detuning_threshold"] > 1
    b = read_boundaries(tmp_path / "boundaries.csv")
    assert set(b) == {"a", "b", "c"}


def test_tau_q_emits_three_triangles(tmp_path):
    assert main(["tau-q", "--params", "bundled:micropost", "--out", str(tmp_path)]) == 0
    b = read_boundaries(tmp_path / "boundaries.csv")
    tri = sorted(k for k in b if k.startswith("triangle:"))
    assert len(tri) == 3
    assert {"critical", "c"} <= set(b)
    union = read_csv(tmp_path / "union.csv")
    assert len(union["q"]) == 200 * 200 and union["feasible"].any()


def test_region_csv_round_trip(tmp_path):
    args = ["tau-q", "--params", "bundled:micropost", "--out", str(tmp_path),
            "--grid", "q:1e2:1e6:23:log", "--grid", "tau:1e-12:1e-6:19:log", "--n-ex", "0.01", "--n-ex", "0.1"]
    assert main(args) == 0
    ps = load("bundled:micropost")
    grid = sweep_tau_q(ps.cavity(), ps.exciton(), [0.01, 0.1],
                       [Axis.from_range("q", 1e2, 1e6, 23), Axis.from_range("tau", 1e-12, 1e-6, 19)])
    header, cols = region_rows(grid)
    back = read_csv(tmp_path / "region.csv")
    assert list(back) == header
    for name, col in zip(header, cols):
        assert np.array_equal(back[name], np.asarray(col, dtype=float)), name
    b = read_boundaries(tmp_path / "boundaries.csv")
    for key, poly in grid.boundaries.items():
        assert np.array_equal(b[key], poly)


def test_response_json_format(tmp_path):
    path = write(tmp_path, Q850.format(rabi="300 GHz", power="10 mW"))
    assert main(["response", "--params", path, "--out", str(tmp_path), "--format", "json",
                 "--grid", "offset_gamma:-1:1:11:lin"]) == 0
    doc = json.loads((tmp_path / "response.json").read_text())
    assert len(doc["dtheta"]) == 11


def simulate_args(path, out, seed=3):
    return ["simulate", "--params", path, "--out", str(out), "--seed", str(seed),
            "--trials", "2000", "--samples", "201"]


def test_simulate_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    assert main(simulate_args("bundled:micropost", a)) == 0
    assert main(simulate_args("bundled:micropost", b)) == 0
    for name in ("trajectory.csv", "readout.json", "simulate.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_simulate_steady_state_matches(tmp_path):
    assert main(simulate_args("bundled:micropost", tmp_path) + ["--grid", "offset_gamma:-5:5:20:lin"]) == 0
    doc = json.loads((tmp_path / "simulate.json").read_text())
    assert doc["steady_state"]["relative_error"] < 1e-6
    assert doc["sweep_max_relative_error"] < 1e-6
    ss = read_csv(tmp_path / "steady_state.csv")
    assert len(ss["offset"]) == 20
    traj = read_csv(tmp_path / "trajectory.csv")
    assert list(traj) == ["t", "re_a", "im_a", "re_sigma", "im_sigma", "re_aout", "im_aout"]


def test_simulate_zero_drive(tmp_path):
    path = write(tmp_path, Q850.format(rabi="300 GHz", power="0 W"))
    assert main(simulate_args(path, tmp_path)) == 0
    traj = read_csv(tmp_path / "trajectory.csv")
    for col in ("re_a", "im_a", "re_sigma", "im_sigma", "re_aout", "im_aout"):
        assert not np.any(traj[col])


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "faraday_qnd.cli", "rabi", "--params", "bundled:micropost"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "rad/s" in proc.stdout
