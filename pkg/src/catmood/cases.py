"""Benchmark problems: initial data, boundary conditions and exact solutions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import BoundaryCondition, DirichletInflow, Mesh, Periodic, ZeroNeumann
from .models import Burgers, Euler, LinearAdvection, Model, to_conserved

Array = np.ndarray

CASE_IDS = ("vortex", "sedov", "rp3", "rp6", "rp11", "rp17", "jet", "advection1d", "burgers1d")


@dataclass
class CaseSpec:
    """A runnable problem.

    Attributes:
        init: ``init(mesh) -> conserved interior array (m, *mesh.shape)``.
        exact: optional ``exact(mesh, t) -> conserved interior array``.
    """

    name: str
    dim: int
    bounds: tuple
    bc: BoundaryCondition
    model: Model
    init: Callable
    t_final: float
    exact: Optional[Callable] = None
    nx: int = 100
    ny: int = 100
    even_cells: bool = False

    def mesh(self, nx: int | None = None, ny: int | None = None, ghost: int = 3) -> Mesh:
        nx = nx or self.nx
        ny = (ny or self.ny) if self.dim == 2 else 1
        if self.even_cells and (nx % 2 or ny % 2):
            raise ValueError(f"case {self.name!r} needs an even number of cells per direction")
        x0, x1, y0, y1 = self.bounds
        mesh = Mesh(nx, ny, x0, x1, y0, y1, ghost, self.dim)
        self.bc.check(mesh)
        return mesh


def _periodic() -> BoundaryCondition:
    return BoundaryCondition.all(Periodic)


def _neumann() -> BoundaryCondition:
    return BoundaryCondition.all(ZeroNeumann)


# --------------------------------------------------------------------------
# isentropic vortex

VORTEX_BETA = 5.0
VORTEX_GAMMA = 1.4
VORTEX_L = 20.0


def vortex_ic(x, y, gamma: float = VORTEX_GAMMA, beta: float = VORTEX_BETA) -> Array:
    """Primitive ``(rho, u, v, p)`` of the isentropic vortex centred at the origin."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    e = np.exp(0.5 * (1.0 - r2))
    du = -y * beta / (2 * np.pi) * e
    dv = x * beta / (2 * np.pi) * e
    dT = -(gamma - 1.0) * beta**2 / (8 * gamma * np.pi**2) * e * e
    T = 1.0 + dT
    rho = T ** (1.0 / (gamma - 1.0))
    return np.stack([rho, 1.0 + du, 1.0 + dv, rho * T])


def _wrap(z, lo=-10.0, L=VORTEX_L):
    return lo + np.mod(z - lo, L)


def vortex_exact(x, y, t, gamma: float = VORTEX_GAMMA) -> Array:
    """Primitive exact solution: the initial vortex advected with velocity (1, 1)."""
    return vortex_ic(_wrap(np.asarray(x) - t), _wrap(np.asarray(y) - t), gamma)


def vortex_case() -> CaseSpec:
    gas = Euler(VORTEX_GAMMA)

    def init(mesh):
        X, Y = mesh.cell_centers()
        return to_conserved(vortex_ic(X, Y), gas.gas)

    def exact(mesh, t):
        X, Y = mesh.cell_centers()
        return to_conserved(vortex_exact(X, Y, t), gas.gas)

    return CaseSpec("vortex", 2, (-10.0, 10.0, -10.0, 10.0), _periodic(), gas, init, 20.0, exact)


# --------------------------------------------------------------------------
# Sedov blast

# energy of one quadrant of the symmetric blast; each origin-adjacent cell holds one quadrant
SEDOV_ENERGY = 0.244816


def sedov_ic(mesh: Mesh, gamma: float = 1.4) -> Array:
    """Quiescent gas with ``SEDOV_ENERGY`` in each of the four cells at the origin.

    Every cell is the corner cell of one quadrant, so the full-plane blast
    carries ``4 * SEDOV_ENERGY`` and the shock reaches ``r = 1`` at ``t = 1``.
    """
    if mesh.nx % 2 or mesh.ny % 2:
        raise ValueError("Sedov initialisation needs even nx and ny")
    shape = mesh.shape
    w = np.stack([np.ones(shape), np.zeros(shape), np.zeros(shape), np.full(shape, 1e-13)])
    cx, cy = mesh.nx // 2, mesh.ny // 2
    w[3, cx - 1:cx + 1, cy - 1:cy + 1] = (gamma - 1.0) * SEDOV_ENERGY / (mesh.dx * mesh.dy)
    return to_conserved(w, Euler(gamma).gas)


def sedov_case() -> CaseSpec:
    return CaseSpec("sedov", 2, (-1.2, 1.2, -1.2, 1.2), _neumann(), Euler(1.4),
                    sedov_ic, 1.0, None, even_cells=True)


# --------------------------------------------------------------------------
# 2D Riemann problems; quadrant states (rho, u, v, p) for Q1..Q4

RIEMANN_STATES = {
    3: ((1.5, 0.0, 0.0, 1.5), (0.5323, 1.206, 0.0, 0.3),
        (0.138, 1.206, 1.206, 0.029), (0.5323, 0.0, 1.206, 0.3)),
    6: ((1.5, 0.75, -0.5, 1.0), (2.0, 0.75, 0.5, 1.0),
        (1.0, -0.75, 0.5, 1.0), (3.0, -0.75, -0.5, 1.0)),
    11: ((1.0, 0.1, 0.0, 1.0), (0.5313, 0.8276, 0.0, 0.4),
         (0.8, 0.1, 0.0, 0.4), (0.5313, 0.1, 0.0, 0.4)),
    17: ((1.0, 0.0, -0.4, 1.0), (2.0, 0.0, -0.3, 1.0),
         (1.0625, 0.0, 0.2145, 0.4), (0.5197, 0.0, -1.1259, 0.4)),
}


def riemann2d_primitive(X, Y, config_id: int) -> Array:
    q1, q2, q3, q4 = (np.asarray(s)[:, None, None] for s in RIEMANN_STATES[config_id])
    right = X > 0
    top = Y > 0
    return np.where(top, np.where(right, q1, q2), np.where(right, q4, q3))


def riemann2d_ic(config_id: int) -> CaseSpec:
    if config_id not in RIEMANN_STATES:
        raise ValueError(f"2D Riemann configuration must be one of {sorted(RIEMANN_STATES)}")
    gas = Euler(1.4)

    def init(mesh):
        X, Y = mesh.cell_centers()
        return to_conserved(riemann2d_primitive(X, Y, config_id), gas.gas)

    return CaseSpec(f"rp{config_id}", 2, (-1.0, 1.0, -1.0, 1.0), _neumann(), gas, init, 0.3,
                    nx=200, ny=200)


# --------------------------------------------------------------------------
# Mach 2000 astrophysical jet

JET_GAMMA = 5.0 / 3.0
JET_AMBIENT = (0.5, 0.0, 0.0, 0.4127)
JET_INFLOW = (5.0, 800.0, 0.0, 0.4127)
JET_HALF_WIDTH = 0.05


def jet_ic_bc() -> CaseSpec:
    gas = Euler(JET_GAMMA)
    inflow = to_conserved(np.array(JET_INFLOW), gas.gas)
    bc = BoundaryCondition(DirichletInflow(inflow, -JET_HALF_WIDTH, JET_HALF_WIDTH),
                           ZeroNeumann(), ZeroNeumann(), ZeroNeumann())

    def init(mesh):
        w = np.array(JET_AMBIENT)[:, None, None] * np.ones((4,) + mesh.shape)
        return to_conserved(w, gas.gas)

    return CaseSpec("jet", 2, (0.0, 1.0, -0.25, 0.25), bc, gas, init, 0.001, nx=150, ny=75)


def jet_mach() -> float:
    rho, u, _, p = JET_INFLOW
    return u / np.sqrt(JET_GAMMA * p / rho)


# --------------------------------------------------------------------------
# 1D scalar problems


def advection1d_case() -> CaseSpec:
    model = LinearAdvection(1.0)

    def init(mesh):
        (x,) = mesh.cell_centers()
        return np.sin(2 * np.pi * x)[None]

    def exact(mesh, t):
        (x,) = mesh.cell_centers()
        return np.sin(2 * np.pi * (x - t))[None]

    return CaseSpec("advection1d", 1, (0.0, 1.0, 0.0, 1.0), _periodic(), model, init, 1.0, exact,
                    nx=64)


def burgers_u0(x):
    return 0.5 + np.sin(2 * np.pi * x)


def burgers_exact(x, t, tol: float = 1e-14, maxit: int = 100) -> Array:
    """Smooth Burgers solution by Newton iteration on the foot of the characteristic."""
    x = np.asarray(x, dtype=float)
    x0 = x - burgers_u0(x) * t
    for _ in range(maxit):
        g = x0 + burgers_u0(x0) * t - x
        dg = 1.0 + 2 * np.pi * np.cos(2 * np.pi * x0) * t
        step = g / dg
        x0 = x0 - step
        if np.max(np.abs(step)) < tol:
            break
    return burgers_u0(x0)


BURGERS_BREAK = 1.0 / (2 * np.pi)


def burgers1d_case() -> CaseSpec:
    model = Burgers()

    def init(mesh):
        (x,) = mesh.cell_centers()
        return burgers_u0(x)[None]

    def exact(mesh, t):
        (x,) = mesh.cell_centers()
        return burgers_exact(x, t)[None]

    return CaseSpec("burgers1d", 1, (0.0, 1.0, 0.0, 1.0), _periodic(), model, init, 0.1, exact,
                    nx=64)


def get_case(name: str) -> CaseSpec:
    key = name.strip().lower()
    if key == "vortex":
        return vortex_case()
    if key == "sedov":
        return sedov_case()
    if key.startswith("rp") and key[2:].isdigit():
        return riemann2d_ic(int(key[2:]))
    if key == "jet":
        return jet_ic_bc()
    if key == "advection1d":
        return advection1d_case()
    if key == "burgers1d":
        return burgers1d_case()
    raise ValueError(f"unknown case {name!r}; choose from {', '.join(CASE_IDS)}")
