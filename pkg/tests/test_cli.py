import json
import subprocess
import sys

import numpy as np

from corrdyn import cli


def write_config(path, **overrides):
    cfg = {
        "sites": 2,
        "fields": [[0.8, 0.0, 0.0], [0.6, 0.0, 0.0]],
        "couplings": [{"i": 0, "j": 1, "tensor": [[0, 0, 0], [0, 0, 0], [0, 0, 1.0]]}],
        "initial_state": {"named": {"name": "cat", "phase": 0.0}},
        "time": {"t_max": 2.0, "dt": 0.01, "stride": 50},
        "observables": ["z0", "x0 x1"],
        "tasks": ["evolve"],
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return path


def test_run_evolve_writes_trajectory(tmp_path):
    cfg = write_config(tmp_path / "c.json")
    assert cli.run(cfg, tmp_path / "out") == 0
    lines = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,z0,x0 x1"
    assert len(lines) == 2 + 4  # header + t=0 + 4 recorded steps
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert abs(float(first[2]) - 1.0) < 1e-12  # cat xx at t=0


def test_free_spin_larmor_trace(tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        sites=1,
        fields=[[0.0, 0.0, 1.0]],
        couplings=[],
        initial_state={"product": [[1.0, 0.0, 0.0]]},
        observables=["x0"],
        time={"t_max": 2.0, "dt": 0.001, "stride": 250},
    )
    assert cli.run(cfg, tmp_path / "out") == 0
    lines = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()[1:]
    for line in lines:
        t, x = (float(v) for v in line.split(","))
        assert abs(x - np.cos(t)) < 1e-9


def test_spectrum_task(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["spectrum"])
    assert cli.run(cfg, tmp_path / "out") == 0
    lines = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "omega,multiplicity"
    rows = [ln.split(",") for ln in lines[1:]]
    freqs = [float(r[0]) for r in rows]
    mults = [int(r[1]) for r in rows]
    e1, e2 = 0.5 * np.sqrt(2.96), 0.5 * np.sqrt(1.04)
    assert np.allclose(freqs, sorted([e1 - e2, 2 * e2, e1 + e2, 2 * e1]), atol=1e-9)
    assert mults == [2, 1, 2, 1]


def test_spectrum_density_output(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["spectrum"], spectrum={"broadening": 0.05})
    assert cli.run(cfg, tmp_path / "out") == 0
    lines = (tmp_path / "out" / "density.csv").read_text().splitlines()
    assert lines[0] == "omega,density"
    dens = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.all(dens[:, 1] >= 0.0)
    # peaks concentrate around the four frequencies
    assert dens[:, 1].max() > 1.0


def test_validate_task(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["validate"])
    assert cli.run(cfg, tmp_path / "out") == 0
    report = dict(
        line.split("=", 1)
        for line in (tmp_path / "out" / "validate.txt").read_text().splitlines()
    )
    assert report["status"] == "ok"
    assert float(report["max_abs_deviation"]) < 1e-8
    assert int(report["kernel_dim"]) == 3


def test_decompose_task(tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        sites=3,
        fields=[[0, 0, 0]] * 3,
        couplings=[],
        initial_state={"named": {"name": "ghz"}},
        tasks=["decompose"],
    )
    assert cli.run(cfg, tmp_path / "out") == 0
    text = (tmp_path / "out" / "decomposition.txt").read_text()
    report = dict(
        line.split("=", 1) for line in text.splitlines() if "subset" not in line
    )
    assert float(report["reconstruction_error"]) < 1e-12
    assert float(report["cumulant_reconstruction_error"]) < 1e-12
    assert float(report["max_single_cell_trace"]) < 1e-12
    assert "subset=0,1,2 " in text


def test_resolvent_task(tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        tasks=["resolvent"],
        observables=["z0", "x0 x1"],
        resolvent={"z": [[0.5, 0.5]]},
    )
    assert cli.run(cfg, tmp_path / "out") == 0
    lines = (tmp_path / "out" / "resolvent.csv").read_text().splitlines()
    assert lines[0] == "re_z,im_z,row,col,re_g,im_g"
    assert len(lines) == 1 + 4  # 2x2 entries for one z


def test_byte_identical_reruns(tmp_path):
    cfg = write_config(
        tmp_path / "c.json", tasks=["evolve", "spectrum", "decompose", "validate"]
    )
    assert cli.run(cfg, tmp_path / "a") == 0
    assert cli.run(cfg, tmp_path / "b") == 0
    for name in ("trajectory.csv", "spectrum.csv", "decomposition.txt", "validate.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_ladder_observable_columns(tmp_path):
    cfg = write_config(tmp_path / "c.json", observables=["+0"])
    assert cli.run(cfg, tmp_path / "out") == 0
    header = (tmp_path / "out" / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,+0.re,+0.im"


def test_product_and_correlator_initial_states(tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        initial_state={"product": [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]},
    )
    assert cli.run(cfg, tmp_path / "a") == 0
    cfg = write_config(
        tmp_path / "c2.json",
        initial_state={"correlators": {"x0": 1.0, "z1": 1.0, "x0 z1": 1.0}},
    )
    assert cli.run(cfg, tmp_path / "b") == 0
    a = (tmp_path / "a" / "trajectory.csv").read_bytes()
    b = (tmp_path / "b" / "trajectory.csv").read_bytes()
    assert a == b  # the same product state through both entrances


def test_parse_failures_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.run(bad, tmp_path / "out") == 2

    cfg = write_config(tmp_path / "c.json", observables=["q0"])
    assert cli.run(cfg, tmp_path / "out") == 2

    cfg = write_config(tmp_path / "c.json", observables=["z0 z0"])
    assert cli.run(cfg, tmp_path / "out") == 2

    cfg = write_config(tmp_path / "c.json", tasks=["fly"])
    assert cli.run(cfg, tmp_path / "out") == 2

    cfg = write_config(tmp_path / "c.json", couplings=[{"i": 1, "j": 0, "tensor": [[0] * 3] * 3}])
    assert cli.run(cfg, tmp_path / "out") == 2


def test_numeric_failures_exit_3(tmp_path):
    cfg = write_config(tmp_path / "c.json", time={"t_max": 1.0, "dt": 5.0})
    assert cli.run(cfg, tmp_path / "out") == 3

    cfg = write_config(
        tmp_path / "c.json",
        tasks=["resolvent"],
        resolvent={"z": [[0.0, 0.0]]},  # the kernel pole
    )
    assert cli.run(cfg, tmp_path / "out") == 3


def test_size_cap_exit_4(tmp_path):
    cfg = write_config(
        tmp_path / "c.json",
        sites=7,
        fields=[[0.0, 0.0, 1.0]] * 7,
        couplings=[],
        initial_state={"named": {"name": "ghz"}},
        tasks=["spectrum"],
    )
    assert cli.run(cfg, tmp_path / "out") == 4


def test_error_lines_are_prefixed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert cli.run(bad, tmp_path / "out") == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and err.count("\n") == 1


def test_console_entry_point(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["spectrum"])
    proc = subprocess.run(
        [sys.executable, "-m", "corrdyn.cli", "spectrum", str(cfg), "--out-dir", str(tmp_path / "out")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "out" / "spectrum.csv").exists()


def test_validate_subcommand_overrides_tasks(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["evolve"])
    assert cli.main(["validate", str(cfg), "--out-dir", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "validate.txt").exists()
    assert not (tmp_path / "out" / "trajectory.csv").exists()


def test_seventeen_digit_floats(tmp_path):
    cfg = write_config(tmp_path / "c.json", tasks=["spectrum"])
    assert cli.run(cfg, tmp_path / "out") == 0
    freq = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()[1].split(",")[0]
    # round trips exactly through repr
    assert float(freq) == float(format(float(freq), ".17g"))
    assert len(freq.replace(".", "").replace("-", "").lstrip("0")) >= 16
