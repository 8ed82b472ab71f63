import json

import numpy as np
import pytest

from activeflux import cli


def test_run_writes_csv_and_meta(tmp_path, capsys):
    code = cli.main(["run", "--problem", "burgers_square", "--n", "40", "--t-final", "0.05",
                     "--output-dir", str(tmp_path)])
    assert code == cli.EXIT_OK
    avg = (tmp_path / "averages.csv").read_text().splitlines()
    assert avg[0] == "x_center,u" and len(avg) == 41
    pts = (tmp_path / "points.csv").read_text().splitlines()
    assert pts[0] == "x_interface,u" and len(pts) == 42
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["status"] == "ok" and meta["n_cells"] == 40 and meta["final_time"] == 0.05
    assert sum(meta["dt_history"]) == pytest.approx(0.05)


def test_csv_round_trips_exactly(tmp_path):
    cli.main(["run", "--problem", "double_rarefaction", "--n", "30", "--t-final", "0.01",
              "--output-dir", str(tmp_path)])
    data = np.loadtxt(tmp_path / "averages.csv", delimiter=",", skiprows=1)
    res = cli.execute(cli.RunConfig("double_rarefaction", n_cells=30, t_final=0.01))
    np.testing.assert_array_equal(data[:, 1:], res.state.averages)
    header = (tmp_path / "points.csv").read_text().splitlines()[0]
    assert header == "x_interface,rho,m,E"


def test_abort_exit_code_and_diagnostic(tmp_path, capsys):
    code = cli.main(["run", "--problem", "double_rarefaction", "--no-limiters", "--output-dir", str(tmp_path)])
    assert code == cli.EXIT_ABORT
    assert "negative" in capsys.readouterr().err
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["status"] == "aborted" and "negative" in meta["abort"]["message"]


@pytest.mark.parametrize("argv", [
    ["run"],
    ["run", "--problem", "nowhere"],
    ["run", "--problem", "sedov", "--n", "800"],
    ["run", "--problem", "advection", "--cfl", "1.5"],
    ["run", "--problem", "euler_accuracy", "--bp-average", "local"],
    ["run", "--problem", "burgers_square", "--splitting", "vh"],
])
def test_configuration_errors_exit_one(argv, tmp_path):
    try:
        code = cli.main(argv + ["--output-dir", str(tmp_path)])
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_CONFIG


def test_output_directory_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
    assert cli.output_directory(str(tmp_path / "flag"), str(tmp_path / "default")) == tmp_path / "flag"
    assert cli.output_directory(None, str(tmp_path / "default")) == tmp_path / "env"
    monkeypatch.delenv(cli.OUTPUT_ENV)
    assert cli.output_directory(None, str(tmp_path / "default")) == tmp_path / "default"
    assert (tmp_path / "default").is_dir()


def test_convergence_command(tmp_path, capsys):
    code = cli.main(["convergence", "--problem", "advection_sine", "--splitting", "js",
                     "--meshes", "20", "40", "--output-dir", str(tmp_path)])
    assert code == cli.EXIT_OK
    rows = json.loads((tmp_path / "convergence.json").read_text())["rows"]
    assert rows[1]["order"][0] > 2.5
    assert (tmp_path / "convergence.csv").read_text().startswith("n,err_u,order_u")


def test_sweep_rows_and_labels(tmp_path):
    rows = cli.sweep(cli.RunConfig("advection", n_cells=40, t_final=0.1))
    assert len(rows) == len(cli.SWEEP_ROWS) == 16
    assert [r["label"] for r in rows] == [r[0] for r in cli.SWEEP_ROWS]
    both = rows[[r[0] for r in cli.SWEEP_ROWS].index("global MP for average + global MP for point")]
    assert both["bounded"]


def test_verify_command_writes_report(tmp_path, capsys):
    code = cli.main(["verify", "--suite", "rk3-stability", "--suite", "splitting-signs", "--cases", "200",
                     "--output-dir", str(tmp_path)])
    assert code == cli.EXIT_OK
    report = json.loads((tmp_path / "verify.json").read_text())
    assert [s["name"] for s in report["suites"]] == ["rk3-stability", "splitting-signs"]
    assert report["seed"] == cli.DEFAULT_SEED
