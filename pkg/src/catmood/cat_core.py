"""Compact Approximate Taylor (CAT) numerical fluxes of order 2P.

The flux at an interface is built from the ``2P`` (1D) or ``2P x 2P`` (2D)
cells around it.  Time derivatives of the flux are obtained by the compact
Cauchy-Kovalevskaya recursion: space derivatives of the previous flux
derivative give ``u^{(k)}`` at every stencil node, local Taylor polynomials in
time give ``2P`` predicted states per node, and a finite difference in time of
the fluxes of those states gives ``f^{(k)}``.

The 1D code is plain numpy, vectorised over a batch of stencils.  The 2D
full-domain fluxes use a compiled kernel that walks over ``2P x 2P`` blocks;
each block anchored at the vertex ``(i+1/2, j+1/2)`` yields the x-flux at
``(i+1/2, j)`` and the y-flux at ``(i, j+1/2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numba import njit

from . import stencil
from .grid import BoundaryCondition, Mesh, fill_ghosts
from .models import Model, point_flux, point_flux_xy

Array = np.ndarray


@dataclass
class FlopCounter:
    """Operation tally, charged phase by phase while a flux is computed.

    Attributes:
        flops: arithmetic operations, with the per-phase costs of the scalar
            cost model (see ``flop_budget``).
        fevals: physical flux evaluations.
    """

    flops: int = 0
    fevals: int = 0

    def reset(self):
        self.flops = 0
        self.fevals = 0


def flop_budget(P: int) -> tuple[int, int]:
    """Closed-form cost of one CAT2P interface flux for a scalar 1D law.

    Returns:
        ``(flops, fevals)`` with ``n = 2P``: ``3.5 n^3 - 1.5 n^2 + n`` and
        ``n^3 - 2 n^2 + n + 1``.
    """
    if P < 1:
        raise ValueError("P must be >= 1")
    n = 2 * P
    flops = (7 * n**3 - 3 * n**2 + 2 * n) // 2
    fevals = n**3 - 2 * n**2 + n + 1
    return flops, fevals


def _precompute_flops(n: int) -> int:
    # dt^k for k < n: k-1 products each; (r dt)^k/k! for r != 0: (k+1)(n-1);
    # dt^{k-1}/k!: one each
    return sum(k - 1 for k in range(1, n)) + sum((k + 1) * (n - 1) for k in range(1, n)) + (n - 1)


def taylor_weights(P: int, dt: float) -> Array:
    """``c[r, m] = (r dt)^m / m!`` for ``r = -P+1..P`` (rows) and ``m = 0..2P-1``."""
    n = 2 * P
    r = stencil.nodes(P).astype(float) * dt
    return np.array([[ri**m / factorial(m) for m in range(n)] for ri in r])


# --------------------------------------------------------------------------
# closed forms


def lw_flux_linear(uL, uR, a: float, dt: float, dx: float):
    """Lax-Wendroff flux for ``u_t + a u_x = 0``."""
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    return 0.5 * a * (uL + uR) - 0.5 * a * a * dt / dx * (uR - uL)


def cat2_flux_closed_form(uL, uR, model: Model, dt: float, dx: float, axis: int = 0):
    """Second-order CAT flux from the two-cell closed form.

    ``uL`` and ``uR`` have the component axis first.
    """
    uL = np.asarray(uL, dtype=float)
    uR = np.asarray(uR, dtype=float)
    fL = model.flux(uL, axis)
    fR = model.flux(uR, axis)
    u1 = -(fR - fL) / dx
    return 0.25 * (fL + fR + model.flux(uL + dt * u1, axis) + model.flux(uR + dt * u1, axis))


def cat4_flux_stepwise(U, model: Model, dt: float, dx: float, axis: int = 0):
    """Fourth-order CAT flux written out step by step on ``u_{i-1..i+2}``.

    Args:
        U: states of shape ``(m, 4)`` or ``(m, 4, ...)``; the second axis
            runs over the stencil ``i-1, i, i+1, i+2``.

    Returns:
        The interface flux at ``i+1/2``, shape ``(m, ...)``.
    """
    U = np.asarray(U, dtype=float)
    P = 2
    J = range(4)  # local node index a <-> j = a - 1
    g_mid = stencil.flux_weights(P)
    g_d1 = [stencil.coeffs(P, 1, a - 1) for a in J]
    g_t = [stencil.coeffs(P, k, 0) for k in range(4)]
    rs = [-1, 0, 1, 2]
    fn = [model.flux(U[:, a], axis) for a in J]

    def interp(vals):
        return sum(g_mid[a] * vals[a] for a in J)

    def du(fk):
        return [-sum(g_d1[a][s] * fk[s] for s in J) / dx for a in J]

    def dtflux(k, states):
        out = []
        for a in J:
            acc = 0.0
            for ri, r in enumerate(rs):
                fr = fn[a] if r == 0 else model.flux(states[a][ri], axis)
                acc = acc + g_t[k][ri] * fr
            out.append(acc / dt**k)
        return out

    # step 1
    f0 = interp(fn)
    # steps 2-5
    u1 = du(fn)
    s1 = [[U[:, a] + r * dt * u1[a] for r in rs] for a in J]
    f1 = dtflux(1, s1)
    f1h = interp(f1)
    # steps 6-9
    u2 = du(f1)
    s2 = [[U[:, a] + r * dt * u1[a] + (r * dt) ** 2 / 2 * u2[a] for r in rs] for a in J]
    f2 = dtflux(2, s2)
    f2h = interp(f2)
    # steps 10-13
    u3 = du(f2)
    s3 = [
        [U[:, a] + r * dt * u1[a] + (r * dt) ** 2 / 2 * u2[a] + (r * dt) ** 3 / 6 * u3[a] for r in rs]
        for a in J
    ]
    f3 = dtflux(3, s3)
    f3h = interp(f3)
    # step 14: Taylor weights dt^k / (k+1)! of the time-averaged flux
    return f0 + dt / 2 * f1h + dt**2 / 6 * f2h + dt**3 / 24 * f3h


# --------------------------------------------------------------------------
# generic 1D recursion


def cat_flux_1d(
    U,
    model: Model,
    dt: float,
    dx: float,
    P: int,
    axis: int = 0,
    counter: FlopCounter | None = None,
    f0=None,
):
    """CAT2P interface flux from a batch of 1D stencils.

    Args:
        U: stencil states, shape ``(m, 2P)`` or ``(B, m, 2P)``; the last axis
            runs over ``j = -P+1..P`` relative to the left cell of the face.
        f0: optional precomputed nodal fluxes of ``U`` (same shape).  When
            given, nodal evaluations are not charged to ``counter``.
        counter: if given, charged with the operations of each phase.

    Returns:
        Fluxes of shape ``(m,)`` or ``(B, m)``.
    """
    U = np.asarray(U, dtype=float)
    single = U.ndim == 2
    if single:
        U = U[None]
        f0 = None if f0 is None else np.asarray(f0)[None]
    B, m, n = U.shape
    if n != 2 * P:
        raise ValueError(f"stencil of length {n} does not match P={P}")
    tab = stencil.table(P)
    c = taylor_weights(P, dt)
    r0 = P - 1  # row of r = 0

    def flux(states):
        # states (..., m, n) -> flux over the component axis
        s = np.moveaxis(states, -2, 0)
        return np.moveaxis(model.flux(s, axis), 0, -2)

    if f0 is None:
        f0 = flux(U)
        if counter is not None:
            counter.fevals += B * n
    fk = f0
    with np.errstate(invalid="ignore", over="ignore"):
        Fsum = fk @ tab.mid
        derivs = []
        for k in range(1, n):
            uk = -(fk @ tab.deriv1.T) / dx
            derivs.append(uk)
            acc = tab.time[k][r0] * f0
            for ri in range(n):
                if ri == r0:
                    continue
                state = U.copy()
                for mm, ud in enumerate(derivs, start=1):
                    state = state + c[ri, mm] * ud
                acc = acc + tab.time[k][ri] * flux(state)
            fk = acc / dt**k
            Fsum = Fsum + dt**k / factorial(k + 1) * (fk @ tab.mid)
            if counter is not None:
                counter.flops += B * (n * (n + 1) + n * (n - 1) + n * (n + 1))
                counter.fevals += B * n * (n - 1)
    if counter is not None:
        # midpoint interpolation of every f^(k), final sum, precomputed constants
        counter.flops += B * (n * n + (n - 1) + _precompute_flops(n))
    return Fsum[0] if single else Fsum


def _windows_1d(a: Array, g: int, P: int, nfaces: int) -> Array:
    # a: (m, N+2g); window for face fi covers padded cells g+fi-P .. g+fi+P-1
    w = np.lib.stride_tricks.sliding_window_view(a, 2 * P, axis=1)
    return np.moveaxis(w[:, g - P:g - P + nfaces, :], 1, 0)


def cat_fluxes_1d(u: Array, mesh: Mesh, bc: BoundaryCondition, model: Model, dt: float,
                  P: int, counter: FlopCounter | None = None) -> Array:
    """CAT2P fluxes at all ``nx+1`` faces of a 1D padded field (ghosts already filled).

    On a periodic mesh the nodal fluxes are evaluated once per cell and the
    last face reuses the first one.
    """
    g = mesh.ghost
    if g < P:
        raise ValueError(f"ghost width {g} too small for P={P}")
    N = mesh.nx
    if bc.periodic_x:
        fin = model.flux(u[:, g:g + N], 0)
        if counter is not None:
            counter.fevals += N
        fpad = np.concatenate([fin[:, N - g:], fin, fin[:, :g]], axis=1)
        nf = N
    else:
        fpad = model.flux(u, 0)
        if counter is not None:
            counter.fevals += u.shape[1]
        nf = N + 1
    U = _windows_1d(u, g, P, nf)
    F0 = _windows_1d(fpad, g, P, nf)
    F = cat_flux_1d(U, model, dt, mesh.dx, P, 0, counter, f0=F0).T
    if bc.periodic_x:
        F = np.concatenate([F, F[:, :1]], axis=1)
    return F


def cat_step_1d(u: Array, mesh: Mesh, bc: BoundaryCondition, model: Model, dt: float,
                P: int, counter: FlopCounter | None = None) -> Array:
    """One CAT2P step in 1D; returns the new interior ``(m, nx)``."""
    fill_ghosts(u, mesh, bc)
    F = cat_fluxes_1d(u, mesh, bc, model, dt, P, counter)
    if counter is not None:
        counter.flops += 2 * mesh.nx
    g = mesh.ghost
    return u[:, g:g + mesh.nx] - dt / mesh.dx * (F[:, 1:] - F[:, :-1])


# --------------------------------------------------------------------------
# 2D


def cat_flux_2d_block(Ub, model: Model, dt: float, dx: float, dy: float, P: int):
    """Reference 2D CAT2P fluxes from one ``2P x 2P`` block (readable numpy version).

    Args:
        Ub: states of shape ``(m, 2P, 2P)``; ``Ub[:, a, b]`` is the cell with
            offsets ``(a-P+1, b-P+1)`` from the block base ``(i, j)``.

    Returns:
        ``(F, G)``: the x-flux at ``(i+1/2, j)`` and the y-flux at ``(i, j+1/2)``.
    """
    Ub = np.asarray(Ub, dtype=float)
    m, n, _ = Ub.shape
    tab = stencil.table(P)
    c = taylor_weights(P, dt)
    r0 = P - 1
    f0 = model.flux(Ub, 0)
    g0 = model.flux(Ub, 1)
    fk, gk = f0, g0
    F = f0[:, :, r0] @ tab.mid
    G = g0[:, r0, :] @ tab.mid
    derivs = []
    with np.errstate(invalid="ignore", over="ignore"):
        for k in range(1, n):
            uk = (-np.einsum("as,csb->cab", tab.deriv1, fk) / dx
                  - np.einsum("bs,cas->cab", tab.deriv1, gk) / dy)
            derivs.append(uk)
            fa = tab.time[k][r0] * f0
            ga = tab.time[k][r0] * g0
            for ri in range(n):
                if ri == r0:
                    continue
                state = Ub.copy()
                for mm, ud in enumerate(derivs, start=1):
                    state = state + c[ri, mm] * ud
                fa = fa + tab.time[k][ri] * model.flux(state, 0)
                ga = ga + tab.time[k][ri] * model.flux(state, 1)
            fk = fa / dt**k
            gk = ga / dt**k
            w = dt**k / factorial(k + 1)
            F = F + w * (fk[:, :, r0] @ tab.mid)
            G = G + w * (gk[:, r0, :] @ tab.mid)
    return F, G


@njit(cache=True, fastmath={"contract", "reassoc", "nsz", "arcp"})
def _cat2d_kernel(u, f0, g0, gh, nx, ny, P, dx, dy, model_id, params,
                  D1, T, mid, C, wk, need_F, need_G, Fx, Fy):
    m = u.shape[0]
    n = 2 * P
    r0 = P - 1
    # block-local arrays are laid out (a, b, component)
    fk = np.empty((n, n, m))
    gk = np.empty((n, n, m))
    U0 = np.empty((n, n, m))
    F0 = np.empty((n, n, m))
    G0 = np.empty((n, n, m))
    der = np.empty((n, n, n, m))
    st = np.empty(m)
    fo = np.empty(m)
    go = np.empty(m)
    fa = np.empty(m)
    ga = np.empty(m)
    Facc = np.empty(m)
    Gacc = np.empty(m)
    idx = 1.0 / dx
    idy = 1.0 / dy
    for bi in range(-1, nx):
        for bj in range(-1, ny):
            doF = bj >= 0 and need_F[bi + 1, bj]
            doG = bi >= 0 and need_G[bi, bj + 1]
            if not (doF or doG):
                continue
            oi = gh + bi - P + 1
            oj = gh + bj - P + 1
            for a in range(n):
                for b in range(n):
                    for c in range(m):
                        U0[a, b, c] = u[c, oi + a, oj + b]
                        F0[a, b, c] = f0[c, oi + a, oj + b]
                        G0[a, b, c] = g0[c, oi + a, oj + b]
                        fk[a, b, c] = F0[a, b, c]
                        gk[a, b, c] = G0[a, b, c]
            for c in range(m):
                s1 = 0.0
                s2 = 0.0
                for a in range(n):
                    s1 += mid[a] * F0[a, r0, c]
                    s2 += mid[a] * G0[r0, a, c]
                Facc[c] = s1
                Gacc[c] = s2
            for k in range(1, n):
                last = k == n - 1
                # u^(k) at every node from the previous flux derivatives
                for a in range(n):
                    for b in range(n):
                        for c in range(m):
                            sx = 0.0
                            sy = 0.0
                            for s in range(n):
                                sx += D1[a, s] * fk[s, b, c]
                                sy += D1[b, s] * gk[a, s, c]
                            der[k, a, b, c] = -sx * idx - sy * idy
                for a in range(n):
                    for b in range(n):
                        wantf = (not last) or (doF and b == r0)
                        wantg = (not last) or (doG and a == r0)
                        if not (wantf or wantg):
                            continue
                        for c in range(m):
                            fa[c] = T[k, r0] * F0[a, b, c]
                            ga[c] = T[k, r0] * G0[a, b, c]
                        for ri in range(n):
                            if ri == r0:
                                continue
                            for c in range(m):
                                v = U0[a, b, c]
                                for mm in range(1, k + 1):
                                    v += C[ri, mm] * der[mm, a, b, c]
                                st[c] = v
                            tw = T[k, ri]
                            if wantf and wantg:
                                point_flux_xy(model_id, params, st, fo, go)
                                for c in range(m):
                                    fa[c] += tw * fo[c]
                                    ga[c] += tw * go[c]
                            elif wantf:
                                point_flux(model_id, params, st, 0, fo)
                                for c in range(m):
                                    fa[c] += tw * fo[c]
                            else:
                                point_flux(model_id, params, st, 1, go)
                                for c in range(m):
                                    ga[c] += tw * go[c]
                        for c in range(m):
                            fk[a, b, c] = fa[c] * wk[k, 0]
                            gk[a, b, c] = ga[c] * wk[k, 0]
                for c in range(m):
                    s1 = 0.0
                    s2 = 0.0
                    for a in range(n):
                        s1 += mid[a] * fk[a, r0, c]
                        s2 += mid[a] * gk[r0, a, c]
                    Facc[c] += wk[k, 1] * s1
                    Gacc[c] += wk[k, 1] * s2
            if doF:
                for c in range(m):
                    Fx[c, bi + 1, bj] = Facc[c]
            if doG:
                for c in range(m):
                    Fy[c, bi, bj + 1] = Gacc[c]


def cat_fluxes_2d(u: Array, mesh: Mesh, model: Model, dt: float, P: int,
                  need_F: Array | None = None, need_G: Array | None = None,
                  Fx: Array | None = None, Fy: Array | None = None):
    """CAT2P fluxes on all (or selected) faces of a 2D padded field.

    Ghosts must already be filled.  ``Fx`` has shape ``(m, nx+1, ny)`` and
    ``Fy`` has shape ``(m, nx, ny+1)``; face ``Fx[:, i, j]`` separates cells
    ``i-1`` and ``i``.  Faces not selected by ``need_F``/``need_G`` keep the
    values of the supplied output arrays.
    """
    g = mesh.ghost
    if g < P:
        raise ValueError(f"ghost width {g} too small for P={P}")
    nx, ny = mesh.nx, mesh.ny
    m = u.shape[0]
    if need_F is None:
        need_F = np.ones((nx + 1, ny), dtype=np.bool_)
    if need_G is None:
        need_G = np.ones((nx, ny + 1), dtype=np.bool_)
    if Fx is None:
        Fx = np.zeros((m, nx + 1, ny))
    if Fy is None:
        Fy = np.zeros((m, nx, ny + 1))
    tab = stencil.table(P)
    n = 2 * P
    C = taylor_weights(P, dt)
    wk = np.array([[dt**-k, dt**k / factorial(k + 1)] for k in range(n)])
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        f0 = model.flux(u, 0)
        g0 = model.flux(u, 1)
    f0 = np.ascontiguousarray(f0, dtype=float)
    g0 = np.ascontiguousarray(g0, dtype=float)
    _cat2d_kernel(np.ascontiguousarray(u, dtype=float), f0, g0, g, nx, ny, P,
                  mesh.dx, mesh.dy, model.model_id, model.params,
                  np.ascontiguousarray(tab.deriv1), np.ascontiguousarray(tab.time),
                  np.ascontiguousarray(tab.mid), C, wk,
                  np.ascontiguousarray(need_F), np.ascontiguousarray(need_G), Fx, Fy)
    return Fx, Fy


def flux_divergence(Fx: Array, Fy: Array | None, mesh: Mesh, dt: float) -> Array:
    """``dt/dx (F_{i+1/2}-F_{i-1/2}) [+ dt/dy (G_{j+1/2}-G_{j-1/2})]``."""
    d = dt / mesh.dx * (Fx[:, 1:] - Fx[:, :-1])
    if Fy is not None:
        d = d + dt / mesh.dy * (Fy[:, :, 1:] - Fy[:, :, :-1])
    return d


def cat_step_2d(u: Array, mesh: Mesh, bc: BoundaryCondition, model: Model, dt: float,
                P: int) -> Array:
    """One CAT2P step in 2D; returns the new interior ``(m, nx, ny)``."""
    fill_ghosts(u, mesh, bc)
    Fx, Fy = cat_fluxes_2d(u, mesh, model, dt, P)
    g = mesh.ghost
    return u[:, g:g + mesh.nx, g:g + mesh.ny] - flux_divergence(Fx, Fy, mesh, dt)


__all__ = [
    "FlopCounter", "flop_budget", "lw_flux_linear", "cat2_flux_closed_form",
    "cat4_flux_stepwise", "cat_flux_1d", "cat_fluxes_1d", "cat_step_1d",
    "cat_flux_2d_block", "cat_fluxes_2d", "cat_step_2d", "flux_divergence",
    "taylor_weights",
]
