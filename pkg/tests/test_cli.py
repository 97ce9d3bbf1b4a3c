import subprocess
import sys

import pytest

from catmood.cli import EXIT_CONFIG, EXIT_FATAL, EXIT_OK, main


def test_solve_ok(tmp_path, capsys):
    code = main(["solve", "--case", "advection1d", "--scheme", "catmood6", "--nx", "32",
                 "--tfinal", "0.05", "--outdir", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "L1 density error" in out and "mean share per scheme" in out
    assert (tmp_path / "field_final.csv").exists()


def test_solve_from_config_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("case=rp3\nscheme=hllc\nnx=8\nny=8\ntfinal=0.01\n")
    assert main(["solve", "--config", str(cfg), "--scheme", "rusanov"]) == EXIT_OK
    assert "scheme=rusanov" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["solve", "--case", "vortex", "--scheme", "cat3"],
    ["solve", "--case", "nowhere"],
    ["solve", "--config", "/nonexistent/run.cfg"],
    ["solve", "--case", "vortex", "--cfl", "-1"],
    ["converge", "--case", "advection1d", "--scheme", "cat2", "--resolutions", "a,b"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_bad_config_line_reported(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("case=vortex\nwhatever=3\n")
    assert main(["solve", "--config", str(cfg)]) == EXIT_CONFIG
    assert "line 2" in capsys.readouterr().err


def test_fatal_exit_3(tmp_path, capsys):
    cfg = tmp_path / "jet.cfg"
    cfg.write_text("case=jet scheme=cat6 nx=30 ny=15 tfinal=0.001 detection=false\n")
    assert main(["solve", "--config", str(cfg)]) == EXIT_FATAL
    assert "solver failure" in capsys.readouterr().err


def test_converge_table(capsys):
    code = main(["converge", "--case", "advection1d", "--scheme", "cat4",
                 "--resolutions", "32,64", "--tfinal", "0.25"])
    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "N | L1 error | order"
    assert lines[1].startswith("32 | ") and lines[1].endswith(" | -")
    assert float(lines[2].split("|")[2]) > 3.8


def test_console_module_entry():
    out = subprocess.run([sys.executable, "-m", "catmood.cli", "--help"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "solve" in out.stdout and "converge" in out.stdout
