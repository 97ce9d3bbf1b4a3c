"""First-order approximate Riemann solvers (the parachute schemes).

All solvers take left/right conserved states with the component axis first
and return the numerical flux along ``axis`` (0 = x, 1 = y).
"""
from __future__ import annotations

import numpy as np

from .models import AdmissibilityError, Model

Array = np.ndarray


def _check(uL, uR, model):
    if not (np.all(model.admissible(uL)) and np.all(model.admissible(uR))):
        raise AdmissibilityError("Riemann solver called with a non-admissible state")


def rusanov(uL: Array, uR: Array, model: Model, axis: int = 0) -> Array:
    """Local Lax-Friedrichs flux with ``smax = max(|vn|+a)`` of both sides.

    Raises:
        AdmissibilityError: if either side is not admissible (also for HLL/HLLC).
    """
    _check(uL, uR, model)
    fL = model.flux(uL, axis)
    fR = model.flux(uR, axis)
    smax = np.maximum(model.wave_speed(uL, axis), model.wave_speed(uR, axis))
    return 0.5 * (fL + fR) - 0.5 * smax * (uR - uL)


def _davis_speeds(uL, uR, model, axis):
    lL, rL = model.char_speeds(uL, axis)
    lR, rR = model.char_speeds(uR, axis)
    return np.minimum(lL, lR), np.maximum(rL, rR)


def hll(uL: Array, uR: Array, model: Model, axis: int = 0) -> Array:
    """Harten-Lax-van Leer flux with Davis wave-speed estimates."""
    _check(uL, uR, model)
    fL = model.flux(uL, axis)
    fR = model.flux(uR, axis)
    sL, sR = _davis_speeds(uL, uR, model, axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = (sR * fL - sL * fR + sL * sR * (uR - uL)) / (sR - sL)
    return np.where(sL >= 0, fL, np.where(sR <= 0, fR, mid))


def hllc(uL: Array, uR: Array, model: Model, axis: int = 0) -> Array:
    """HLLC flux for Euler (contact restored); scalar models fall back to HLL."""
    if not model.is_euler:
        return hll(uL, uR, model, axis)
    _check(uL, uR, model)
    n = 1 + axis
    rL, rR = uL[0], uR[0]
    vL, vR = uL[n] / rL, uR[n] / rR
    pL, pR = model.pressure(uL), model.pressure(uR)
    fL = model.flux(uL, axis)
    fR = model.flux(uR, axis)
    sL, sR = _davis_speeds(uL, uR, model, axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        sM = (pR - pL + rL * vL * (sL - vL) - rR * vR * (sR - vR)) / (rL * (sL - vL) - rR * (sR - vR))

        def star(u, r, v, p, s):
            fac = r * (s - v) / (s - sM)
            us = np.empty_like(u)
            us[0] = fac
            us[1] = fac * u[1] / r
            us[2] = fac * u[2] / r
            us[n] = fac * sM
            us[3] = fac * (u[3] / r + (sM - v) * (sM + p / (r * (s - v))))
            return us

        fLs = fL + sL * (star(uL, rL, vL, pL, sL) - uL)
        fRs = fR + sR * (star(uR, rR, vR, pR, sR) - uR)
    out = np.where(sL >= 0, fL, np.where(sM >= 0, fLs, np.where(sR > 0, fRs, fR)))
    return out


SOLVERS = {"rusanov": rusanov, "hll": hll, "hllc": hllc}


def get_solver(name: str):
    try:
        return SOLVERS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown Riemann solver {name!r}; choose from {sorted(SOLVERS)}") from None


def first_order_fluxes(u: Array, mesh, model: Model, solver: str = "hllc"):
    """First-order fluxes on every face of a padded field with filled ghosts.

    Returns:
        ``Fx`` of shape ``(m, nx+1[, ny])`` and, in 2D, ``Fy`` of shape
        ``(m, nx, ny+1)`` (``None`` in 1D).
    """
    fn = get_solver(solver)
    g = mesh.ghost
    nx = mesh.nx
    if mesh.dim == 1:
        uL = u[:, g - 1:g + nx]
        uR = u[:, g:g + nx + 1]
        return fn(uL, uR, model, 0), None
    ny = mesh.ny
    Fx = fn(u[:, g - 1:g + nx, g:g + ny], u[:, g:g + nx + 1, g:g + ny], model, 0)
    Fy = fn(u[:, g:g + nx, g - 1:g + ny], u[:, g:g + nx, g:g + ny + 1], model, 1)
    return Fx, Fy
