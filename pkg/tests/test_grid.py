import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catmood.cases import jet_ic_bc
from catmood.grid import (BoundaryCondition, DirichletInflow, Field, Mesh, Periodic,
                          ZeroNeumann, cell_center, fill_ghosts)
from catmood.models import Euler, to_conserved


def mesh1d(n=4, g=2):
    return Mesh(n, 1, 0.0, 1.0, ghost=g, dim=1)


def test_periodic_1d_example():
    m = mesh1d()
    f = Field.from_interior(m, np.array([[1.0, 2, 3, 4]]))
    f.fill(BoundaryCondition.all(Periodic))
    np.testing.assert_array_equal(f.data[0], [3, 4, 1, 2, 3, 4, 1, 2])


def test_neumann_1d_example():
    m = mesh1d()
    f = Field.from_interior(m, np.array([[1.0, 2, 3, 4]]))
    f.fill(BoundaryCondition.all(ZeroNeumann))
    np.testing.assert_array_equal(f.data[0], [1, 1, 1, 2, 3, 4, 4, 4])


@pytest.mark.parametrize("i,x", [(0, 0.25), (1, 0.75)])
def test_cell_center_unit(i, x):
    assert cell_center(Mesh(2, 2, 0.0, 1.0), i, 0)[0] == pytest.approx(x)


def test_cell_center_vortex_box():
    m = Mesh(100, 100, -10.0, 10.0, -10.0, 10.0)
    assert cell_center(m, 0, 0) == pytest.approx((-9.9, -9.9))
    assert cell_center(m, -1, 0)[0] == pytest.approx(-10.1)
    with pytest.raises(IndexError):
        cell_center(m, 100 + m.ghost, 0)


def test_mesh_geometry():
    m = Mesh(10, 5, 0.0, 2.0, -1.0, 1.0, ghost=3)
    assert (m.dx, m.dy) == (0.2, 0.4)
    assert m.padded_shape == (16, 11)
    X, Y = m.cell_centers()
    assert X.shape == (10, 5)
    assert X[0, 0] == pytest.approx(0.1) and Y[0, 0] == pytest.approx(-0.8)
    assert m.cell_volume == pytest.approx(0.08)
    with pytest.raises(ValueError):
        Mesh(0, 1, 0.0, 1.0)


def test_periodic_pairing_enforced():
    with pytest.raises(ValueError, match="paired"):
        BoundaryCondition(Periodic(), ZeroNeumann(), Periodic(), Periodic())


def test_inflow_extent_checked():
    m = Mesh(4, 4, 0.0, 1.0, -0.25, 0.25)
    bc = BoundaryCondition(DirichletInflow(np.ones(4), -0.5, 0.1), ZeroNeumann(),
                           ZeroNeumann(), ZeroNeumann())
    with pytest.raises(ValueError, match="outside"):
        bc.check(m)


def test_jet_inflow_ghosts():
    case = jet_ic_bc()
    mesh = case.mesh(20, 10)
    f = Field.from_interior(mesh, case.init(mesh)).fill(case.bc)
    gas = Euler(5.0 / 3.0).gas
    inflow = to_conserved(np.array([5.0, 800.0, 0.0, 0.4127]), gas)
    ambient = to_conserved(np.array([0.5, 0.0, 0.0, 0.4127]), gas)
    g = mesh.ghost
    yc = mesh.y0 + (np.arange(mesh.ny) + 0.5) * mesh.dy
    for jj, y in enumerate(yc):
        ghost = f.data[:, g - 1, g + jj]
        want = inflow if abs(y) <= 0.05 else ambient
        np.testing.assert_allclose(ghost, want)
    np.testing.assert_allclose(f.data[:, -1, g + 5], ambient)


@settings(max_examples=40, deadline=None)
@given(nx=st.integers(1, 7), ny=st.integers(1, 7), g=st.integers(1, 3),
       kx=st.sampled_from(["p", "n"]), ky=st.sampled_from(["p", "n"]), seed=st.integers(0, 99))
def test_fill_idempotent_and_periodic_images(nx, ny, g, kx, ky, seed):
    side = {"p": Periodic, "n": ZeroNeumann}
    bc = BoundaryCondition(side[kx](), side[kx](), side[ky](), side[ky]())
    m = Mesh(nx, ny, 0.0, 1.0, ghost=g)
    f = Field.from_interior(m, np.random.default_rng(seed).random((2, nx, ny)))
    once = f.fill(bc).data.copy()
    np.testing.assert_array_equal(f.fill(bc).data, once)
    if kx == "p" and nx >= g:
        for k in range(1, g + 1):
            np.testing.assert_array_equal(once[:, g - k, g:g + ny], f.interior[:, nx - k, :])


def test_fill_ghosts_returns_array():
    m = mesh1d(4, 1)
    u = np.zeros((1, 6))
    assert fill_ghosts(u, m, BoundaryCondition.all(Periodic)) is u
