"""Physical flux models: linear advection, Burgers and 2D compressible Euler.

States are stored component-first, ``u.shape == (m, ...)``.  The vectorized
``Model.flux`` is unchecked and returns NaN for non-admissible Euler states,
which lets the CAT recursion carry an admissibility flag through Taylor
states without branching.  The module-level functions validate their input
and raise :class:`AdmissibilityError` instead.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

Array = np.ndarray

MODEL_ADVECTION = 0
MODEL_BURGERS = 1
MODEL_EULER = 2


class AdmissibilityError(ValueError):
    """Raised when a state has non-positive density or pressure, or is not finite."""


@dataclass(frozen=True)
class GasParams:
    """Ideal gas closure ``p = (gamma - 1) * rho * e``."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


class Model:
    """Base class.  Subclasses set ``m``, ``model_id`` and ``params``."""

    m: int = 1
    model_id: int = -1
    name: str = "model"
    is_euler: bool = False

    @property
    def params(self) -> Array:
        return np.zeros(2)

    def flux(self, u: Array, axis: int) -> Array:
        raise NotImplementedError

    def wave_speed(self, u: Array, axis: int) -> Array:
        """Spectral radius of the flux Jacobian along ``axis``."""
        raise NotImplementedError

    def char_speeds(self, u: Array, axis: int) -> tuple[Array, Array]:
        """Smallest and largest characteristic speed along ``axis``."""
        raise NotImplementedError

    def admissible(self, u: Array) -> Array:
        """Boolean mask of finite, physically admissible states."""
        return np.all(np.isfinite(u), axis=0)

    def dflux_diag(self, u: Array, axis: int) -> Array:
        """Per-component characteristic speed used to pick an upwind side."""
        raise NotImplementedError


class LinearAdvection(Model):
    """``u_t + a u_x + b u_y = 0``."""

    m = 1
    model_id = MODEL_ADVECTION
    name = "advection"

    def __init__(self, a: float = 1.0, b: float = 0.0):
        self.a = float(a)
        self.b = float(b)

    @property
    def params(self) -> Array:
        return np.array([self.a, self.b])

    def flux(self, u, axis):
        return (self.a if axis == 0 else self.b) * u

    def wave_speed(self, u, axis):
        return np.full(u.shape[1:], abs(self.a if axis == 0 else self.b))

    def char_speeds(self, u, axis):
        c = self.a if axis == 0 else self.b
        s = np.full(u.shape[1:], c)
        return s, s

    def dflux_diag(self, u, axis):
        return np.full(u.shape, self.a if axis == 0 else self.b)


class Burgers(Model):
    """Inviscid Burgers ``u_t + (u^2/2)_x + (u^2/2)_y = 0``."""

    m = 1
    model_id = MODEL_BURGERS
    name = "burgers"

    def flux(self, u, axis):
        return 0.5 * u * u

    def wave_speed(self, u, axis):
        return np.abs(u[0])

    def char_speeds(self, u, axis):
        return u[0], u[0]

    def dflux_diag(self, u, axis):
        return np.array(u, dtype=float)


class Euler(Model):
    """2D Euler equations in conserved variables ``(rho, mx, my, E)``."""

    m = 4
    model_id = MODEL_EULER
    name = "euler"
    is_euler = True

    def __init__(self, gamma: float = 1.4):
        self.gas = GasParams(gamma)
        self.gamma = self.gas.gamma

    @property
    def params(self) -> Array:
        return np.array([self.gamma, 0.0])

    def pressure(self, u):
        rho, mx, my, E = u
        return (self.gamma - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)

    def flux(self, u, axis):
        with np.errstate(divide="ignore", invalid="ignore"):
            rho, mx, my, E = u
            p = self.pressure(u)
            vn = (mx if axis == 0 else my) / rho
            out = np.empty_like(u, dtype=float)
            out[0] = rho * vn
            out[1] = mx * vn
            out[2] = my * vn
            out[1 + axis] += p
            out[3] = (E + p) * vn
            bad = ~((rho > 0) & (p > 0))
            if np.any(bad):
                out[:, bad] = np.nan
        return out

    def admissible(self, u):
        with np.errstate(divide="ignore", invalid="ignore"):
            p = self.pressure(u)
            return np.all(np.isfinite(u), axis=0) & (u[0] > 0) & (p > 0)

    def sound_speed(self, u):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.sqrt(self.gamma * self.pressure(u) / u[0])

    def wave_speed(self, u, axis):
        a = self.sound_speed(u)
        return np.abs(u[1 + axis] / u[0]) + a

    def char_speeds(self, u, axis):
        a = self.sound_speed(u)
        vn = u[1 + axis] / u[0]
        return vn - a, vn + a

    def dflux_diag(self, u, axis):
        # normal velocity, shared by all components
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.broadcast_to(u[1 + axis] / u[0], u.shape).copy()


# --------------------------------------------------------------------------
# checked public helpers


def _check_euler(u: Array, gas: GasParams) -> Array:
    u = np.asarray(u, dtype=float)
    if u.shape[0] != 4:
        raise ValueError(f"expected 4 conserved components, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise AdmissibilityError("non-finite state")
    if np.any(u[0] <= 0):
        raise AdmissibilityError("non-positive density")
    p = (gas.gamma - 1.0) * (u[3] - 0.5 * (u[1] ** 2 + u[2] ** 2) / u[0])
    if np.any(p <= 0):
        raise AdmissibilityError("non-positive pressure")
    return u


def flux_x(u: Array, gas: GasParams = GasParams()) -> Array:
    """Euler flux in x.

    Raises:
        AdmissibilityError: if any state has ``rho <= 0`` or ``p <= 0``.
    """
    return Euler(gas.gamma).flux(_check_euler(u, gas), 0)


def flux_y(u: Array, gas: GasParams = GasParams()) -> Array:
    """Euler flux in y; see :func:`flux_x`."""
    return Euler(gas.gamma).flux(_check_euler(u, gas), 1)


def to_primitive(u: Array, gas: GasParams = GasParams()) -> Array:
    """Conserved ``(rho, mx, my, E)`` to primitive ``(rho, u, v, p)``."""
    u = _check_euler(u, gas)
    rho = u[0]
    vx = u[1] / rho
    vy = u[2] / rho
    p = (gas.gamma - 1.0) * (u[3] - 0.5 * rho * (vx * vx + vy * vy))
    return np.stack([rho, vx, vy, p])


def to_conserved(w: Array, gas: GasParams = GasParams()) -> Array:
    """Primitive ``(rho, u, v, p)`` to conserved ``(rho, mx, my, E)``.

    Raises:
        AdmissibilityError: if ``rho <= 0`` or ``p <= 0``.
    """
    w = np.asarray(w, dtype=float)
    rho, vx, vy, p = w
    if not np.all(np.isfinite(w)) or np.any(rho <= 0) or np.any(p <= 0):
        raise AdmissibilityError("non-admissible primitive state")
    E = p / (gas.gamma - 1.0) + 0.5 * rho * (vx * vx + vy * vy)
    return np.stack([rho, rho * vx, rho * vy, E])


def sound_speed(u: Array, gas: GasParams = GasParams()) -> Array:
    """``sqrt(gamma p / rho)`` of conserved states."""
    w = to_primitive(u, gas)
    return np.sqrt(gas.gamma * w[3] / w[0])


def max_wave_speeds(u: Array, gas: GasParams = GasParams()) -> tuple[float, float]:
    """Largest ``|u|+a`` and ``|v|+a`` over all states."""
    w = to_primitive(u, gas)
    a = np.sqrt(gas.gamma * w[3] / w[0])
    return float(np.max(np.abs(w[1]) + a)), float(np.max(np.abs(w[2]) + a))


def scalar_flux(kind: str, u: Array, axis: int = 0, a: float = 1.0, b: float = 0.0) -> Array:
    """Flux of a scalar model (``"advection"`` or ``"burgers"``)."""
    u = np.asarray(u, dtype=float)
    if kind == "advection":
        return (a if axis == 0 else b) * u
    if kind == "burgers":
        return 0.5 * u * u
    raise ValueError(f"unknown scalar model {kind!r}")


# --------------------------------------------------------------------------
# pointwise kernels for compiled loops


@njit(cache=True, inline="always")
def point_flux(model_id, params, u, axis, out):
    """Write the flux of the single state ``u`` into ``out``; NaN if non-admissible."""
    if model_id == MODEL_ADVECTION:
        c = params[0] if axis == 0 else params[1]
        out[0] = c * u[0]
    elif model_id == MODEL_BURGERS:
        out[0] = 0.5 * u[0] * u[0]
    else:
        g = params[0]
        rho = u[0]
        mx = u[1]
        my = u[2]
        E = u[3]
        p = (g - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)
        if not (rho > 0.0 and p > 0.0):
            for c in range(4):
                out[c] = np.nan
            return
        vn = (mx if axis == 0 else my) / rho
        out[0] = rho * vn
        out[1] = mx * vn
        out[2] = my * vn
        out[1 + axis] += p
        out[3] = (E + p) * vn


@njit(cache=True, inline="always")
def point_flux_xy(model_id, params, u, fx, fy):
    """Both directional fluxes of one state; NaN if non-admissible."""
    if model_id == MODEL_ADVECTION:
        fx[0] = params[0] * u[0]
        fy[0] = params[1] * u[0]
    elif model_id == MODEL_BURGERS:
        fx[0] = 0.5 * u[0] * u[0]
        fy[0] = fx[0]
    else:
        g = params[0]
        rho = u[0]
        mx = u[1]
        my = u[2]
        E = u[3]
        p = (g - 1.0) * (E - 0.5 * (mx * mx + my * my) / rho)
        if not (rho > 0.0 and p > 0.0):
            for c in range(4):
                fx[c] = np.nan
                fy[c] = np.nan
            return
        vx = mx / rho
        vy = my / rho
        fx[0] = rho * vx
        fx[1] = mx * vx + p
        fx[2] = my * vx
        fx[3] = (E + p) * vx
        fy[0] = rho * vy
        fy[1] = mx * vy
        fy[2] = my * vy + p
        fy[3] = (E + p) * vy
