import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catmood.driver import ConfigError, ConvergenceRow, RunConfig, StepStats, build_schemes, run
from catmood.grid import Mesh
from catmood.io import (OutputFrame, apply_overrides, parse_config, read_field_csv,
                        write_convergence_table, write_field_csv, write_mood_stats, write_vtk)
from catmood.models import Euler


def test_parse_minimal_defaults():
    cfg = parse_config("case=vortex scheme=catmood6 nx=50 ny=50")
    assert (cfg.case, cfg.scheme, cfg.nx, cfg.ny) == ("vortex", "catmood6", 50, 50)
    assert cfg.cfl == 0.4 and cfg.eps1 == 1e-4 and cfg.eps2 == 1e-3
    assert cfg.limiter == "minmod" and cfg.parachute == "hllc"


def test_parse_sections_comments_and_alias():
    cfg = parse_config("[run]\ncase=sedov  # blast\n\n[numerics]\nscheme=hll tfinal=0.5\n")
    assert cfg.case == "sedov" and cfg.scheme == "hll" and cfg.t_final == 0.5


def test_parse_high_cfl_warns_and_proceeds():
    with pytest.warns(UserWarning, match="line 2"):
        cfg = parse_config("case=vortex\ncfl=0.9")
    assert cfg.cfl == 0.9


def test_parse_cascade_four_stages():
    cfg = parse_config("scheme=catmood6 cascade=6,4,2,1")
    assert [s.name for s in build_schemes(cfg)] == ["CAT6", "CAT4", "CAT2", "HLLC"]


@pytest.mark.parametrize("text,line,word", [
    ("case=vortex\nbogus=1", 2, "unknown key"),
    ("case=vortex\n\nnx=abc", 3, "invalid value"),
    ("justaword", 1, "key=value"),
    ("case=vortex\ncfl=-1", 2, "cfl"),
    ("scheme=cat5", 1, "even"),
    ("case=nowhere", 1, "nowhere"),
    ("case=vortex\nlimiter=koren", 2, "limiter"),
])
def test_parse_errors_carry_line(text, line, word):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    msg = str(err.value)
    assert msg.startswith(f"line {line}:") and word in msg


def test_apply_overrides():
    cfg = apply_overrides(RunConfig(), nx=10, ny=None, scheme="cat4")
    assert cfg.nx == 10 and cfg.ny is None and cfg.scheme == "cat4"
    with pytest.raises(ConfigError):
        apply_overrides(RunConfig(), cfl=0.0)


def test_csv_single_cell_two_lines(tmp_path):
    mesh = Mesh(1, 1, 0.0, 1.0, 0.0, 1.0, ghost=1)
    u = np.array([1.0, 0.0, 0.0, 1.0 / 0.4]).reshape(4, 1, 1)
    p = tmp_path / "f.csv"
    write_field_csv(OutputFrame.from_state(mesh, u, Euler(1.4)), p)
    text = p.read_text()
    lines = text.splitlines()
    assert text.endswith("\n") and len(lines) == 2
    assert lines[0] == "x,y,rho,u,v,p"
    assert [float(v) for v in lines[1].split(",")] == pytest.approx([0.5, 0.5, 1.0, 0.0, 0.0, 1.0], abs=1e-15)


def test_csv_row_order_j_outer(tmp_path):
    mesh = Mesh(3, 2, 0.0, 3.0, 0.0, 2.0, ghost=1)
    u = np.zeros((4, 3, 2))
    u[0] = np.arange(6.0).reshape(3, 2) + 1
    u[3] = 1.0
    p = tmp_path / "f.csv"
    write_field_csv(OutputFrame.from_state(mesh, u, Euler(1.4)), p)
    rows = [l.split(",") for l in p.read_text().splitlines()[1:]]
    xy = [(float(r[0]), float(r[1])) for r in rows]
    assert xy == [(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (0.5, 1.5), (1.5, 1.5), (2.5, 1.5)]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**31 - 1), st.booleans())
def test_csv_round_trip(nx, ny, seed, with_mask):
    import tempfile
    from pathlib import Path
    r = np.random.default_rng(seed)
    mesh = Mesh(nx, ny, -1.0, 2.0, 0.5, 3.0, ghost=1)
    u = np.empty((4, nx, ny))
    u[0] = r.uniform(0.1, 10, (nx, ny))
    u[1:3] = r.normal(size=(2, nx, ny)) * u[0]
    u[3] = r.uniform(5, 20, (nx, ny))
    mask = r.integers(0, 3, (nx, ny)) if with_mask else None
    fr = OutputFrame.from_state(mesh, u, Euler(1.4), mask=mask)
    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "f.csv"
        write_field_csv(fr, p)
        back = read_field_csv(p, nx, ny)
    for c in ("x", "y", "rho", "u", "v", "p"):
        np.testing.assert_allclose(getattr(back, c), getattr(fr, c), rtol=1e-15, atol=0)
    if with_mask:
        np.testing.assert_array_equal(back.mask, mask)
    else:
        assert back.mask is None


def test_csv_reader_rejects_wrong_count(tmp_path):
    mesh = Mesh(2, 2, 0.0, 1.0, 0.0, 1.0, ghost=1)
    u = np.ones((4, 2, 2)); u[1:3] = 0
    p = tmp_path / "f.csv"
    write_field_csv(OutputFrame.from_state(mesh, u, Euler(1.4)), p)
    with pytest.raises(ValueError, match="expected 9 rows"):
        read_field_csv(p, 3, 3)


def test_write_errors_carry_path(tmp_path):
    mesh = Mesh(1, 1, 0.0, 1.0, 0.0, 1.0, ghost=1)
    fr = OutputFrame.from_state(mesh, np.ones((4, 1, 1)), Euler(1.4))
    bad = tmp_path / "missing" / "f.csv"
    with pytest.raises(OSError, match="missing"):
        write_field_csv(fr, bad)
    with pytest.raises(OSError, match="missing"):
        write_vtk(fr, tmp_path / "missing" / "f.vtk")


def test_vtk_layout(tmp_path):
    mesh = Mesh(4, 3, 0.0, 4.0, 0.0, 3.0, ghost=1)
    u = np.ones((4, 4, 3)); u[1:3] = 0
    p = tmp_path / "f.vtk"
    write_vtk(OutputFrame.from_state(mesh, u, Euler(1.4), mask=np.zeros((4, 3), int)), p)
    lines = p.read_text().splitlines()
    assert lines[0] == "# vtk DataFile Version 3.0"
    assert "DIMENSIONS 4 3 1" in lines and "DATASET STRUCTURED_POINTS" in lines
    assert "POINT_DATA 12" in lines
    scalars = [l for l in lines if l.startswith("SCALARS")]
    assert [s.split()[1] for s in scalars] == ["rho", "u", "v", "p", "mask"]


def test_convergence_table_layout():
    rows = [ConvergenceRow(50, 8.46e-4), ConvergenceRow(100, 1.56e-5, 5.76)]
    assert write_convergence_table(rows) == (
        "N | L1 error | order\n50 | 8.46e-04 | -\n100 | 1.56e-05 | 5.76\n")


def test_mood_stats_csv(tmp_path):
    p = tmp_path / "s.csv"
    write_mood_stats([StepStats(1, 0.1, 0.1, [95.0, 3.0, 2.0])], ["CAT6", "CAT2", "HLLC"], p)
    lines = p.read_text().splitlines()
    assert lines[0] == "step,time,dt,pct_CAT6,pct_CAT2,pct_HLLC"
    assert lines[1] == "1,0.1,0.1,95.000000,3.000000,2.000000"


def test_output_deterministic(tmp_path):
    out = []
    for k in range(2):
        d = tmp_path / str(k)
        run(RunConfig(case="rp3", scheme="catmood6", nx=16, ny=16, t_final=0.05, outdir=str(d)))
        out.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert out[0] == out[1] and len(out[0]) >= 3
