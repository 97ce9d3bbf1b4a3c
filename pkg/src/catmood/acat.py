"""A priori limited (adaptive) CAT fluxes.

ACAT2 blends the second-order CAT flux with a first-order flux through a
TVD flux limiter.  ACAT2P picks, per interface, the widest CAT flux whose
nested stencils are all flagged smooth by the indicators ``psi^p`` and falls
back to ACAT2 when none are.
"""
from __future__ import annotations

from math import factorial

import numpy as np

from . import stencil
from .cat_core import cat2_flux_closed_form, cat_fluxes_1d, cat_fluxes_2d
from .models import Model
from .riemann import first_order_fluxes, get_solver

Array = np.ndarray

LIMITERS = ("minmod", "superbee", "vanleer")
EPS_SPEED = 1e-8
EPS_WEIGHT = 1e-8
LARGE = 1e12
PSI_CLIP = 0.95


def flux_limiter_phi(r, kind: str = "minmod"):
    """TVD limiter value ``phi(r)``; NaN ratios map to 0."""
    r = np.asarray(r, dtype=float)
    if kind == "minmod":
        phi = np.maximum(0.0, np.minimum(1.0, r))
    elif kind == "superbee":
        phi = np.maximum.reduce([np.zeros_like(r), np.minimum(2 * r, 1.0), np.minimum(r, 2.0)])
    elif kind == "vanleer":
        with np.errstate(invalid="ignore"):
            phi = (r + np.abs(r)) / (1.0 + np.abs(r))
        # r = +inf: limit 2
        phi = np.where(np.isposinf(r), 2.0, phi)
    else:
        raise ValueError(f"unknown limiter {kind!r}; choose from {LIMITERS}")
    return np.where(np.isnan(r), 0.0, phi)


def _safe_ratio(num, den):
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    return np.where(den == 0, np.sign(num) * LARGE, r)


def upwind_ratio(W: Array, model: Model, axis: int = 0) -> Array:
    """Slope ratio at ``i+1/2`` from ``W = u_{i-1..i+2}`` (stencil on axis 1).

    The upwind side follows the sign of the secant speed ``df/du``, taken
    per component; where the jump is below ``1e-8`` the derivative at
    ``u_i`` is used instead (exact for scalar laws, the normal velocity for
    Euler).

    Returns:
        ``r`` with shape ``(m, ...)``.
    """
    W = np.asarray(W, dtype=float)
    um, u0, u1, u2 = (W[:, k] for k in range(4))
    f0 = model.flux(u0, axis)
    f1 = model.flux(u1, axis)
    du = u1 - u0
    with np.errstate(divide="ignore", invalid="ignore"):
        secant = (f1 - f0) / du
    a = np.where(np.abs(du) > EPS_SPEED, secant, model.dflux_diag(u0, axis))
    rL = _safe_ratio(u0 - um, du)
    rR = _safe_ratio(u2 - u1, du)
    return np.where(a > 0, rL, rR)


def acat2_flux(W: Array, dx: float, dt: float, model: Model, limiter: str = "minmod",
               low: str = "rusanov", axis: int = 0) -> Array:
    """ACAT2 flux at ``i+1/2`` from ``W = u_{i-1..i+2}`` (stencil on axis 1)."""
    W = np.asarray(W, dtype=float)
    phi = flux_limiter_phi(upwind_ratio(W, model, axis), limiter)
    F2 = cat2_flux_closed_form(W[:, 1], W[:, 2], model, dt, dx, axis)
    Fl = get_solver(low)(W[:, 1], W[:, 2], model, axis)
    return phi * F2 + (1.0 - phi) * Fl


def smoothness_psi(samples: Array, p: int) -> Array:
    """Smoothness indicator on ``2p`` samples ``j = -p+1..p`` (stencil on axis 0).

    Values of at least 0.95 are clipped to 1.
    """
    s = np.asarray(samples, dtype=float)
    if s.shape[0] != 2 * p:
        raise ValueError(f"need {2 * p} samples for p={p}, got {s.shape[0]}")
    d2 = np.diff(s, axis=0) ** 2  # d2[k] = (f_{k+1} - f_k)^2, local node k = j + p - 1
    wL = d2[: p - 1].sum(axis=0) + EPS_WEIGHT
    wR = d2[p:].sum(axis=0) + EPS_WEIGHT
    w = wL * wR / (wL + wR)
    g = stencil.coeffs(p, 2 * p - 1, stencil.HALF)
    tau = (factorial(2 * p - 1) * np.tensordot(g, s, axes=(0, 0))) ** 2
    psi = w / (w + tau)
    return np.where(psi >= PSI_CLIP, 1.0, psi)


def select_order(U: Array, P: int) -> Array:
    """``p_max`` per interface (0 when no stencil is smooth).

    Args:
        U: stencils of shape ``(m, 2P, ...)``.  The indicator of each
            conserved component is evaluated and the minimum kept.
    """
    U = np.asarray(U, dtype=float)
    pmax = np.zeros(U.shape[2:], dtype=int)
    ok = np.ones(U.shape[2:], dtype=bool)
    for p in range(2, P + 1):
        sub = U[:, P - p:P + p]
        psi = np.min(smoothness_psi(np.moveaxis(sub, 1, 0), p), axis=0)
        ok &= psi >= 1.0
        pmax = np.where(ok, p, pmax)
    return pmax


def acat2p_flux(U: Array, dx: float, dt: float, model: Model, P: int,
                limiter: str = "minmod", low: str = "rusanov", axis: int = 0) -> Array:
    """ACAT2P flux at one interface from ``U`` of shape ``(m, 2P)``, ``P >= 2``."""
    from .cat_core import cat_flux_1d

    U = np.asarray(U, dtype=float)
    pmax = int(select_order(U[:, :, None], P)[0])
    if pmax == 0:
        return acat2_flux(U[:, P - 2:P + 2], dx, dt, model, limiter, low, axis)
    return cat_flux_1d(U[:, P - pmax:P + pmax], model, dt, dx, pmax, axis)


# --------------------------------------------------------------------------
# full-domain assembly


def face_windows(u: Array, mesh, P: int, axis: int) -> Array:
    """Stencils ``j = -P+1..P`` of every face normal to ``axis``.

    Returns:
        ``(m, 2P, nfaces)`` in 1D; ``(m, 2P, nx+1, ny)`` or ``(m, 2P, nx, ny+1)`` in 2D.
    """
    g = mesh.ghost
    nx = mesh.nx
    swv = np.lib.stride_tricks.sliding_window_view
    if mesh.dim == 1:
        w = swv(u, 2 * P, axis=1)[:, g - P:g - P + nx + 1]
        return np.moveaxis(w, -1, 1)
    ny = mesh.ny
    if axis == 0:
        w = swv(u[:, :, g:g + ny], 2 * P, axis=1)[:, g - P:g - P + nx + 1]
    else:
        w = swv(u[:, g:g + nx, :], 2 * P, axis=2)[:, :, g - P:g - P + ny + 1]
    return np.moveaxis(w, -1, 1)


def acat_fluxes(u: Array, mesh, bc, model: Model, dt: float, P: int,
                limiter: str = "minmod", low: str = "rusanov"):
    """ACAT2P fluxes on all faces of a padded field with filled ghosts.

    In 2D the selection is done direction by direction from the 1D data
    along each face normal, and the selected fluxes are the 2D CAT fluxes.
    """
    if mesh.ghost < max(P, 2):
        raise ValueError("ghost width too small for ACAT")
    axes = (0,) if mesh.dim == 1 else (0, 1)
    Flow = first_order_fluxes(u, mesh, model, low)
    cat = {}
    for p in range(1, P + 1):
        if mesh.dim == 1:
            cat[p] = (cat_fluxes_1d(u, mesh, bc, model, dt, p), None)
        else:
            cat[p] = cat_fluxes_2d(u, mesh, model, dt, p)
    out = []
    for axis in axes:
        W4 = face_windows(u, mesh, 2, axis)
        phi = flux_limiter_phi(upwind_ratio(W4, model, axis), limiter)
        F = phi * cat[1][axis] + (1.0 - phi) * Flow[axis]
        if P >= 2:
            pmax = select_order(face_windows(u, mesh, P, axis), P)
            for p in range(2, P + 1):
                F = np.where(pmax == p, cat[p][axis], F)
        out.append(F)
    if mesh.dim == 1:
        out.append(None)
    return out[0], out[1]
