import json

import numpy as np
import pytest

from topopolariton import io
from topopolariton.cli import EXIT_CONFIG, EXIT_OK, parse_grid, run


def body(path):
    return path.read_bytes()


def test_eigen_bare_cavity(tmp_path):
    assert run(["eigen", "--preset", "fig2", "--n-atoms", "0", "--out-dir", str(tmp_path)]) == EXIT_OK
    cols = io.read_csv(tmp_path / "eigenvalues.csv")
    assert len(cols["re"]) == 3
    assert np.allclose(sorted(cols["re"]), [-np.sqrt(800 - (19 / 4) ** 2), 0, np.sqrt(800 - (19 / 4) ** 2)])


def test_rerun_is_byte_identical(tmp_path):
    args = ["scatter", "--preset", "fig3-weak", "--grid", "delta=-20:20:101"]
    assert run(args + ["--out-dir", str(tmp_path / "a")]) == EXIT_OK
    assert run(args + ["--out-dir", str(tmp_path / "b")]) == EXIT_OK
    assert body(tmp_path / "a" / "scatter.csv") == body(tmp_path / "b" / "scatter.csv")
    assert io.verify_manifest(tmp_path / "a" / "manifest.json") == []


def test_manifest_contents(tmp_path):
    run(["lifetime", "--preset", "fig2", "--J0", "6Gamma", "--out-dir", str(tmp_path)])
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["command"] == "lifetime" and m["config"]["system"]["J0"] == 30.0
    assert m["preset"] == "fig2" and m["version"] and m["wall_time_s"] >= 0
    assert m["outputs"][0]["path"] == "lifetime.csv" and len(m["outputs"][0]["sha256"]) == 64


def test_manifest_detects_tampering(tmp_path):
    run(["emission", "--grid", "omega=-5:5:11", "--out-dir", str(tmp_path)])
    (tmp_path / "emission.csv").write_text("x\n")
    assert io.verify_manifest(tmp_path / "manifest.json")


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[system]\nJ0 = 4Gamma\nn_atoms = 5\n")
    out = tmp_path / "o"
    assert run(["eigen", "--config", str(cfg), "--J0", "2Gamma", "--out-dir", str(out)]) == EXIT_OK
    m = json.loads((out / "manifest.json").read_text())
    assert m["config"]["system"]["J0"] == 10.0 and m["config"]["system"]["n_atoms"] == 5


@pytest.mark.parametrize("argv", [
    ["eigen", "--J0", "-3"],
    ["eigen", "--preset", "nope"],
    ["eigen", "--bogus"],
    ["disorder"],
    ["lifetime", "--grid", "J0=1:2"],
    ["sweep", "--grid", "delta=-1:1:3"],
    ["disorder", "--position-frac", "0.02", "--coupling-frac", "0.1", "--n-realizations", "1"],
])
def test_config_errors_exit_1(tmp_path, argv):
    assert run(argv + ["--out-dir", str(tmp_path)]) == EXIT_CONFIG


def test_disorder_command(tmp_path):
    args = ["disorder", "--preset", "fig2", "--n-atoms", "7", "--frequency-halfwidth", "2",
            "--n-realizations", "3", "--seed", "5", "--grid", "J0=4Gamma:8Gamma:2"]
    assert run(args + ["--out-dir", str(tmp_path / "a")]) == EXIT_OK
    assert run(args + ["--jobs", "2", "--out-dir", str(tmp_path / "b")]) == EXIT_OK
    for name in ("disorder.csv", "realizations.csv"):
        assert body(tmp_path / "a" / name) == body(tmp_path / "b" / name)
    cols = io.read_csv(tmp_path / "a" / "disorder.csv")
    assert list(cols["J0"]) == [20.0, 40.0] and np.all(cols["failed"] == 0)
    m = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert m["seeds"]["disorder"] == 5 and m["config"]["disorder"]["frequency_halfwidth"] == 2.0


@pytest.mark.parametrize("argv,name", [
    (["bands", "--preset", "mirror", "--n-atoms", "5", "--grid", "d=0:1:5"], "bands.csv"),
    (["dynamics", "--grid", "t=0:1:21"], "populations.csv"),
    (["dissipation", "--n-atoms", "5"], "polariton_rates.csv"),
    (["sweep", "--n-atoms", "5", "--grid", "phi_dim=0:0.5pi:3", "--grid", "delta=-5:5:5"], "sweep.csv"),
    (["lifetime", "--n-atoms", "5", "--grid", "varphi=1.4pi:1.6pi:3"], "lifetime.csv"),
    (["lifetime", "--n-atoms", "5", "--grid", "J0=0:8Gamma:2", "--grid", "N=3:5:2"], "lifetime.csv"),
    (["scatter", "--mirror", "--preset", "mirror", "--n-atoms", "3"], "scatter.csv"),
])
def test_commands_write_csv(tmp_path, argv, name):
    assert run(argv + ["--out-dir", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / name).exists()
    assert io.verify_manifest(tmp_path / "manifest.json") == []


def test_parse_grid():
    axis, v = parse_grid("varphi=1.3pi:1.7pi:41")
    assert axis == "varphi" and len(v) == 41 and np.isclose(v[20], 1.5 * np.pi)


def test_reproduce_figure(tmp_path):
    assert run(["reproduce", "figS4", "--out-dir", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "figS4" / "dissipation_spectrum.csv").exists()
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["figure"] == "figS4" and io.verify_manifest(tmp_path / "manifest.json") == []


def test_partial_sweep_exit_code(tmp_path, monkeypatch):
    import topopolariton.ensemble as ens
    real = ens.qe_lifetime

    def flaky(h, *a, **k):
        if h.realization.index == 1:
            raise np.linalg.LinAlgError("singular")
        return real(h, *a, **k)

    monkeypatch.setattr(ens, "qe_lifetime", flaky)
    argv = ["disorder", "--n-atoms", "5", "--position-frac", "0.01", "--n-realizations", "3",
            "--out-dir", str(tmp_path)]
    assert run(argv) == 3
    cols = io.read_csv(tmp_path / "disorder.csv")
    assert cols["failed"][0] == 1 and np.isfinite(cols["mean"][0])
    assert json.loads((tmp_path / "manifest.json").read_text())["exit_code"] == 3


def test_numeric_failure_exit_code(tmp_path, monkeypatch):
    import topopolariton.cli as cli

    def boom(h):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(cli, "analyze", boom)
    assert run(["eigen", "--out-dir", str(tmp_path)]) == 2
