import numpy as np
import pytest

from catmood.cases import (BURGERS_BREAK, CASE_IDS, RIEMANN_STATES, SEDOV_ENERGY, burgers_exact,
                           burgers_u0, get_case, jet_mach, riemann2d_ic, riemann2d_primitive,
                           sedov_ic, vortex_exact, vortex_ic)
from catmood.grid import Mesh
from catmood.models import Euler, to_primitive


def test_vortex_far_field():
    w = vortex_ic(np.array(10.0), np.array(-10.0))
    np.testing.assert_allclose(w, [1, 1, 1, 1], atol=1e-40 + 1e-17)


def test_vortex_origin():
    g, b = 1.4, 5.0
    w = vortex_ic(np.array(0.0), np.array(0.0))
    dT = -(g - 1) * b**2 * np.e / (8 * g * np.pi**2)
    np.testing.assert_allclose(w, [(1 + dT) ** 2.5, 1.0, 1.0, (1 + dT) ** 3.5], rtol=1e-14)


def test_vortex_period():
    m = Mesh(40, 40, -10.0, 10.0, -10.0, 10.0)
    X, Y = m.cell_centers()
    np.testing.assert_allclose(vortex_exact(X, Y, 20.0), vortex_ic(X, Y), rtol=1e-13)
    np.testing.assert_allclose(vortex_exact(X, Y, 0.0), vortex_ic(X, Y), rtol=0)


def test_vortex_boundary_mismatch_tiny():
    y = np.linspace(-10, 10, 101)
    left = vortex_ic(np.full_like(y, -10.0), y)
    right = vortex_ic(np.full_like(y, 10.0), y)
    assert np.abs(left - right).max() < 1e-17


def test_sedov_deposition():
    m = Mesh(100, 100, -1.2, 1.2, -1.2, 1.2)
    u = sedov_ic(m)
    w = to_primitive(u, Euler(1.4).gas)
    p_origin = 0.4 * SEDOV_ENERGY / 0.024**2
    np.testing.assert_allclose(w[3, 49:51, 49:51], p_origin, rtol=1e-12)
    assert w[3, 0, 0] == pytest.approx(1e-13)
    assert u[3, 0, 0] == pytest.approx(1e-13 / 0.4)
    background = 1e-13 / 0.4 * (m.nx * m.ny - 4) * m.cell_volume
    deposited = u[3].sum() * m.cell_volume - background
    assert deposited == pytest.approx(4 * SEDOV_ENERGY, abs=1e-12)


def test_sedov_odd_rejected():
    with pytest.raises(ValueError):
        get_case("sedov").mesh(51, 50)


@pytest.mark.parametrize("cfg,quad,want", [
    (3, 0, (1.5, 0.0, 0.0, 1.5)),
    (6, 3, (3.0, -0.75, -0.5, 1.0)),
    (17, 1, (2.0, 0.0, -0.3, 1.0)),
])
def test_riemann_tables(cfg, quad, want):
    assert RIEMANN_STATES[cfg][quad] == want


def test_riemann_quadrants():
    X = np.array([[0.5, -0.5], [-0.5, 0.5]])
    Y = np.array([[0.5, 0.5], [-0.5, -0.5]])
    w = riemann2d_primitive(X, Y, 3)
    np.testing.assert_allclose(w[:, 0, 0], RIEMANN_STATES[3][0])
    np.testing.assert_allclose(w[:, 0, 1], RIEMANN_STATES[3][1])
    np.testing.assert_allclose(w[:, 1, 0], RIEMANN_STATES[3][2])
    np.testing.assert_allclose(w[:, 1, 1], RIEMANN_STATES[3][3])
    with pytest.raises(ValueError):
        riemann2d_ic(5)


def test_jet():
    case = get_case("jet")
    assert case.model.gamma == pytest.approx(5 / 3)
    mesh = case.mesh()
    w = to_primitive(case.init(mesh), case.model.gas)
    np.testing.assert_allclose(w[:, 3, 3], [0.5, 0, 0, 0.4127])
    assert jet_mach() == pytest.approx(800 / np.sqrt(5 / 3 * 0.4127 / 5))
    assert 2100 < jet_mach() < 2200


def test_burgers_exact_before_break():
    x = np.linspace(0, 1, 50)
    t = 0.1
    u = burgers_exact(x, t)
    # characteristic identity u = u0(x - u t)
    np.testing.assert_allclose(u, burgers_u0(x - u * t), atol=1e-12)
    assert BURGERS_BREAK == pytest.approx(1 / (2 * np.pi))
    assert get_case("burgers1d").t_final < BURGERS_BREAK


@pytest.mark.parametrize("name", CASE_IDS)
def test_every_case_admissible(name):
    case = get_case(name)
    mesh = case.mesh(20, 20)
    u = case.init(mesh)
    assert u.shape == (case.model.m,) + mesh.shape
    assert np.all(case.model.admissible(u))


def test_unknown_case():
    with pytest.raises(ValueError, match="unknown case"):
        get_case("kelvin")
