"""Command-line interface: subcommands, overrides, and exit codes."""

import numpy as np
import pytest

from spectralrk import read_checkpoint, read_diagnostics_csv
from spectralrk.cli import main

RUN_CFG = """
[grid]
shape = 16 16

[problem]
kind = taylor_green
reynolds = 100

[run]
integrator = rk4
mode = fixed
h = 0.1
t_end = 0.5
"""

BENCH_CFG = """
[grid]
shape = 16 16

[problem]
kind = taylor_green
reynolds = 100

[run]
integrator = rk4
mode = fixed
h = 0.1
t_end = 0.5

[matrix]
integrators = rk4
fixed_h = 0.05

[reference]
h = 0.005
"""


@pytest.fixture
def run_cfg(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(RUN_CFG)
    return path


class TestRun:
    def test_basic_run(self, run_cfg, capsys):
        assert main(["run", str(run_cfg)]) == 0
        out = capsys.readouterr().out
        assert "finished t=0.5" in out
        assert "5 steps" in out
        assert "21 rhs evaluations" in out

    def test_outputs_written(self, run_cfg, tmp_path):
        out = tmp_path / "results"
        assert main(["run", str(run_cfg), "--out", str(out)]) == 0
        rows = read_diagnostics_csv(out / "diagnostics.csv")
        assert rows[-1].t == 0.5
        data = read_checkpoint(out / "final.srkl")
        assert data.time == 0.5

    def test_overrides(self, run_cfg, capsys):
        rc = main(
            [
                "run",
                str(run_cfg),
                "--integrator",
                "bs5",
                "--dt",
                "0.05",
                "--t-end",
                "0.2",
                "--grid",
                "8x8",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "finished t=0.2" in out
        assert "4 steps" in out

    def test_missing_config_is_io_error(self, tmp_path, capsys):
        rc = main(["run", str(tmp_path / "nope.ini")])
        assert rc == 3
        assert "category=io" in capsys.readouterr().err

    def test_bad_integrator_is_config_error(self, run_cfg, capsys):
        rc = main(["run", str(run_cfg), "--integrator", "euler"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "category=config" in err and "euler" in err

    def test_bad_grid_override(self, run_cfg, capsys):
        rc = main(["run", str(run_cfg), "--grid", "16xbig"])
        assert rc == 2
        assert "category=config" in capsys.readouterr().err

    def test_blowup_is_numerics_error(self, tmp_path, capsys):
        cfg = tmp_path / "hit.ini"
        cfg.write_text(
            """
[grid]
shape = 8 8 8

[problem]
kind = hit
reynolds = 1e12
seed = 2

[run]
integrator = rk4
mode = fixed
h = 1.0
t_end = 100.0
"""
        )
        with np.errstate(over="ignore", invalid="ignore"):
            rc = main(["run", str(cfg)])
        assert rc == 4
        assert "category=numerics" in capsys.readouterr().err


class TestBench:
    def test_sweep_writes_report(self, tmp_path, capsys):
        cfg = tmp_path / "bench.ini"
        cfg.write_text(BENCH_CFG)
        out = tmp_path / "report"
        assert main(["bench", str(cfg), "--out", str(out)]) == 0
        text = (out / "work_precision.csv").read_text()
        assert "integrator,mode,setting" in text
        assert "rk4" in capsys.readouterr().out

    def test_missing_matrix_section(self, tmp_path, capsys):
        cfg = tmp_path / "bench.ini"
        cfg.write_text(RUN_CFG)
        assert main(["bench", str(cfg)]) == 2
        assert "category=config" in capsys.readouterr().err


class TestSpectrum:
    def test_prints_shell_csv(self, run_cfg, tmp_path, capsys):
        out = tmp_path / "results"
        main(["run", str(run_cfg), "--out", str(out)])
        capsys.readouterr()  # drop the run summary
        rc = main(["spectrum", str(out / "final.srkl")])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "k,E"
        values = np.array([line.split(",") for line in lines[1:]], dtype=float)
        # TG energy lives in shell 1; total matches the final E_kin
        rows = read_diagnostics_csv(out / "diagnostics.csv")
        assert np.isclose(values[:, 1].sum(), rows[-1].e_kin, rtol=1e-12)
        assert values[1, 1] > 0.99 * values[:, 1].sum()

    def test_writes_file(self, run_cfg, tmp_path):
        out = tmp_path / "results"
        main(["run", str(run_cfg), "--out", str(out)])
        dest = tmp_path / "spec.csv"
        rc = main(["spectrum", str(out / "final.srkl"), "--out", str(dest)])
        assert rc == 0
        assert dest.read_text().startswith("k,E")

    def test_corrupt_checkpoint_is_format_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.srkl"
        bad.write_bytes(b"not a checkpoint at all")
        rc = main(["spectrum", str(bad)])
        assert rc == 5
        assert "category=format" in capsys.readouterr().err

    def test_missing_checkpoint_is_io_error(self, tmp_path, capsys):
        rc = main(["spectrum", str(tmp_path / "absent.srkl")])
        assert rc == 3
        assert "category=io" in capsys.readouterr().err
