"""Uniform Cartesian meshes, ghost layers and boundary conditions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Array = np.ndarray


@dataclass(frozen=True)
class Mesh:
    """Uniform mesh of ``nx`` (x ``ny``) cells with ``ghost`` layers per side.

    For a 1D mesh ``ny`` is 1 and ``dim`` is 1; the y direction is ignored.
    """

    nx: int
    ny: int
    x0: float
    x1: float
    y0: float = 0.0
    y1: float = 1.0
    ghost: int = 3
    dim: int = 2

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("mesh needs at least one cell per direction")
        if self.ghost < 1:
            raise ValueError("ghost width must be >= 1")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.nx

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / self.ny

    @property
    def shape(self) -> tuple:
        return (self.nx,) if self.dim == 1 else (self.nx, self.ny)

    @property
    def padded_shape(self) -> tuple:
        g = self.ghost
        if self.dim == 1:
            return (self.nx + 2 * g,)
        return (self.nx + 2 * g, self.ny + 2 * g)

    @property
    def interior(self) -> tuple:
        g = self.ghost
        if self.dim == 1:
            return (slice(g, g + self.nx),)
        return (slice(g, g + self.nx), slice(g, g + self.ny))

    def with_ghost(self, ghost: int) -> "Mesh":
        return Mesh(self.nx, self.ny, self.x0, self.x1, self.y0, self.y1, ghost, self.dim)

    def cell_centers(self, padded: bool = False):
        """Cell-centre coordinates; ``(x,)`` in 1D, meshgrid ``(X, Y)`` (ij) in 2D."""
        g = self.ghost if padded else 0
        x = self.x0 + (np.arange(-g, self.nx + g) + 0.5) * self.dx
        if self.dim == 1:
            return (x,)
        y = self.y0 + (np.arange(-g, self.ny + g) + 0.5) * self.dy
        return tuple(np.meshgrid(x, y, indexing="ij"))

    @property
    def cell_volume(self) -> float:
        return self.dx if self.dim == 1 else self.dx * self.dy


def cell_center(mesh: Mesh, i: int, j: int = 0) -> tuple[float, float]:
    """Centre of cell ``(i, j)``; 0-based interior indexing, ghosts at negative or ``>= n``."""
    g = mesh.ghost
    if not (-g <= i < mesh.nx + g and -g <= j < mesh.ny + g):
        raise IndexError(f"cell ({i}, {j}) outside the padded mesh")
    return (mesh.x0 + (i + 0.5) * mesh.dx, mesh.y0 + (j + 0.5) * mesh.dy)


# --------------------------------------------------------------------------
# boundary sides


class Side:
    kind = "side"


class Periodic(Side):
    kind = "periodic"

    def __repr__(self):
        return "Periodic()"


class ZeroNeumann(Side):
    """Zero-gradient (transmissive) boundary: ghosts copy the nearest interior cell."""

    kind = "neumann"

    def __repr__(self):
        return "ZeroNeumann()"


@dataclass
class DirichletInflow(Side):
    """Prescribed conserved ``state`` on ghosts whose tangential centre lies in
    ``[lo, hi]``; zero-gradient elsewhere on that side."""

    state: Array
    lo: float = -np.inf
    hi: float = np.inf
    kind = "inflow"

    def __post_init__(self):
        self.state = np.asarray(self.state, dtype=float)


@dataclass
class BoundaryCondition:
    """Sides ordered ``(x_lo, x_hi, y_lo, y_hi)``."""

    x_lo: Side = field(default_factory=Periodic)
    x_hi: Side = field(default_factory=Periodic)
    y_lo: Side = field(default_factory=Periodic)
    y_hi: Side = field(default_factory=Periodic)

    def __post_init__(self):
        for a, b, name in ((self.x_lo, self.x_hi, "x"), (self.y_lo, self.y_hi, "y")):
            if isinstance(a, Periodic) != isinstance(b, Periodic):
                raise ValueError(f"periodic boundary on {name} must be paired on both sides")

    @classmethod
    def all(cls, side_factory) -> "BoundaryCondition":
        return cls(side_factory(), side_factory(), side_factory(), side_factory())

    @property
    def periodic_x(self) -> bool:
        return isinstance(self.x_lo, Periodic)

    @property
    def periodic_y(self) -> bool:
        return isinstance(self.y_lo, Periodic)

    @property
    def fully_periodic(self) -> bool:
        return self.periodic_x and self.periodic_y

    def check(self, mesh: "Mesh") -> "BoundaryCondition":
        """Raise ``ValueError`` if a finite inflow extent leaves its side's range."""
        ranges = ((self.x_lo, self.x_hi, mesh.y0, mesh.y1), (self.y_lo, self.y_hi, mesh.x0, mesh.x1))
        for lo_side, hi_side, a, b in ranges:
            for side in (lo_side, hi_side):
                if not isinstance(side, DirichletInflow):
                    continue
                lo = side.lo if np.isfinite(side.lo) else a
                hi = side.hi if np.isfinite(side.hi) else b
                if not (a <= lo <= hi <= b):
                    raise ValueError(f"inflow extent [{side.lo}, {side.hi}] outside [{a}, {b}]")
        return self


def _fill_axis(a: Array, g: int, n: int, axis: int, lo: Side, hi: Side, tang: Array | None):
    """Fill ghosts along array ``axis`` (1 = x, 2 = y) of ``a`` with shape (m, ...)."""

    def sl(s):
        idx = [slice(None)] * a.ndim
        idx[axis] = s
        return tuple(idx)

    if isinstance(lo, Periodic):
        # modular images also cover ghost widths larger than n
        src = g + np.mod(np.arange(-g, 0), n)
        a[sl(slice(0, g))] = np.take(a, src, axis=axis)
        src = g + np.mod(np.arange(n, n + g), n)
        a[sl(slice(n + g, n + 2 * g))] = np.take(a, src, axis=axis)
        return
    for side, ghost_range, src in (
        (lo, range(0, g), g),
        (hi, range(n + g, n + 2 * g), n + g - 1),
    ):
        for k in ghost_range:
            a[sl(k)] = a[sl(src)]
        if isinstance(side, DirichletInflow):
            for k in ghost_range:
                view = a[sl(k)]  # (m,) in 1D, (m, ntang) in 2D
                if tang is None:
                    view[...] = side.state
                else:
                    sel = (tang >= side.lo) & (tang <= side.hi)
                    view[:, sel] = side.state[:, None]


def fill_ghosts(u: Array, mesh: Mesh, bc: BoundaryCondition) -> Array:
    """Fill ghost layers of the padded array ``u`` (shape ``(m, *padded_shape)``) in place.

    The x sides are filled first over interior rows, then the y sides over
    the full padded x range, so corner ghosts take their values from the
    y sweep.
    """
    g = mesh.ghost
    if mesh.dim == 1:
        _fill_axis(u, g, mesh.nx, 1, bc.x_lo, bc.x_hi, None)
        return u
    yc = mesh.y0 + (np.arange(-g, mesh.ny + g) + 0.5) * mesh.dy
    xc = mesh.x0 + (np.arange(-g, mesh.nx + g) + 0.5) * mesh.dx
    inner = u[:, :, g:g + mesh.ny]
    _fill_axis(inner, g, mesh.nx, 1, bc.x_lo, bc.x_hi, yc[g:g + mesh.ny])
    _fill_axis(u, g, mesh.ny, 2, bc.y_lo, bc.y_hi, xc)
    return u


@dataclass
class Field:
    """Conserved variables on a padded mesh.

    Attributes:
        data: array of shape ``(m, *mesh.padded_shape)``.
    """

    mesh: Mesh
    data: Array

    @classmethod
    def zeros(cls, mesh: Mesh, m: int) -> "Field":
        return cls(mesh, np.zeros((m,) + mesh.padded_shape))

    @classmethod
    def from_interior(cls, mesh: Mesh, interior: Array) -> "Field":
        interior = np.asarray(interior, dtype=float)
        f = cls.zeros(mesh, interior.shape[0])
        f.data[(slice(None),) + mesh.interior] = interior
        return f

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def interior(self) -> Array:
        return self.data[(slice(None),) + self.mesh.interior]

    def fill(self, bc: BoundaryCondition) -> "Field":
        fill_ghosts(self.data, self.mesh, bc)
        return self
