"""A posteriori MOOD limiting: detectors, troubled-cell mask and the cascade loop.

The cascade is applied at face level.  At each stage the faces whose two
adjacent cells are both troubled (mask != 0) are recomputed with the next
scheme, and every troubled cell is re-updated with the resulting fluxes.
Each face therefore carries one flux used by both neighbours, which keeps
the update conservative, and cells with mask 0 are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter, minimum_filter

from .cat_core import flux_divergence
from .models import Model

Array = np.ndarray


class SolverFatalError(RuntimeError):
    """Unrecoverable state, e.g. the parachute scheme produced an inadmissible cell."""

    def __init__(self, message: str, cell=None, state=None, info=None):
        super().__init__(message)
        self.cell = cell
        self.state = state
        self.info = info or {}


@dataclass(frozen=True)
class DetectionParams:
    """Relaxation of the numerical detector ``delta = max(eps1, eps2*(max-min))``."""

    eps1: float = 1e-4
    eps2: float = 1e-3
    detect_vars: tuple = ("rho", "p")
    use_cad: bool = True
    use_pad: bool = True
    use_nad: bool = True

    def __post_init__(self):
        if not (self.eps1 > 0 and self.eps2 > 0):
            raise ValueError("eps1 and eps2 must be positive")


@dataclass
class MoodMask:
    """Outcome of one MOOD step.

    Attributes:
        marker: mask after the first detection pass (1 failed, -1 neighbour, 0 valid).
        final_stage: cascade index that produced each cell's final value.
        counts: number of cells finalized per cascade entry (sums to the cell count).
        names: cascade entry names, aligned with ``counts``.
        fluxes: the face fluxes ``(Fx, Fy)`` actually used for the update.
    """

    marker: Array
    final_stage: Array
    counts: list = field(default_factory=list)
    names: list = field(default_factory=list)
    fluxes: tuple = (None, None)

    @property
    def percentages(self) -> list:
        n = max(int(self.final_stage.size), 1)
        return [100.0 * c / n for c in self.counts]


# --------------------------------------------------------------------------
# detectors


def cad_check(u: Array) -> Array:
    """True where the state is computable (no NaN or infinity in any component)."""
    return np.all(np.isfinite(np.asarray(u, dtype=float)), axis=0)


def pad_check(u: Array, gamma: float = 1.4) -> Array:
    """True where ``rho > 0`` and ``p > 0``."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (gamma - 1.0) * (u[3] - 0.5 * (u[1] ** 2 + u[2] ** 2) / u[0])
        return (u[0] > 0) & (p > 0)


def nad_check(w_star, w_min, w_max, params: DetectionParams = DetectionParams()):
    """Relaxed discrete maximum principle; True where ``w_star`` is accepted."""
    w_min = np.asarray(w_min, dtype=float)
    w_max = np.asarray(w_max, dtype=float)
    delta = np.maximum(params.eps1, params.eps2 * (w_max - w_min))
    return (w_star >= w_min - delta) & (w_star <= w_max + delta)


def _detect_values(u: Array, model: Model) -> list:
    if model.is_euler:
        with np.errstate(divide="ignore", invalid="ignore"):
            return [u[0], model.pressure(u)]
    return [u[0]]


def neighborhood_bounds(u_pad: Array, mesh, model: Model, P: int):
    """Min and max of the detected variables over the ``(2P+1)^d`` block at ``t^n``.

    Returns:
        Lists ``(mins, maxs)`` of interior-shaped arrays, one per variable.
    """
    if mesh.ghost < P:
        raise ValueError("ghost width smaller than the detection neighbourhood")
    size = 2 * P + 1
    mins, maxs = [], []
    for w in _detect_values(u_pad, model):
        mins.append(minimum_filter(w, size=size, mode="nearest")[mesh.interior])
        maxs.append(maximum_filter(w, size=size, mode="nearest")[mesh.interior])
    return mins, maxs


def detect_failures(cand: Array, u_pad: Array, mesh, model: Model, P: int,
                    params: DetectionParams = DetectionParams(), bounds=None) -> Array:
    """Boolean interior array, True where the candidate fails CAD, PAD or NAD."""
    ok = np.ones(cand.shape[1:], dtype=bool)
    if params.use_cad:
        ok &= cad_check(cand)
    if model.is_euler and params.use_pad:
        ok &= pad_check(cand, model.gamma)
    if params.use_nad:
        mins, maxs = bounds if bounds is not None else neighborhood_bounds(u_pad, mesh, model, P)
        with np.errstate(invalid="ignore"):
            for w, lo, hi in zip(_detect_values(cand, model), mins, maxs):
                ok &= nad_check(w, lo, hi, params)
    return ~ok


def _dilate(failed: Array, periodic: tuple) -> Array:
    """Cells within one (face or corner) neighbour of a failed cell."""
    out = failed.copy()
    for axis, per in enumerate(periodic):
        src = out.copy()
        for s in (1, -1):
            if per:
                out |= np.roll(src, s, axis=axis)
            else:
                shifted = np.zeros_like(src)
                sl_dst = [slice(None)] * src.ndim
                sl_src = [slice(None)] * src.ndim
                if s == 1:
                    sl_dst[axis] = slice(1, None)
                    sl_src[axis] = slice(None, -1)
                else:
                    sl_dst[axis] = slice(None, -1)
                    sl_src[axis] = slice(1, None)
                shifted[tuple(sl_dst)] = src[tuple(sl_src)]
                out |= shifted
    return out


def mark(failed: Array, periodic: tuple, mask: Array | None = None) -> Array:
    """Update a mask: failed cells get 1, their valid (0) neighbours get -1."""
    if mask is None:
        mask = np.zeros(failed.shape, dtype=np.int8)
    near = _dilate(failed, periodic)
    mask = mask.copy()
    mask[(mask == 0) & near] = -1
    mask[failed] = 1
    return mask


def detect(cand: Array, u_pad: Array, mesh, model: Model, P: int, bc,
           params: DetectionParams = DetectionParams()) -> Array:
    """Full MOOD mask of a candidate field."""
    failed = detect_failures(cand, u_pad, mesh, model, P, params)
    return mark(failed, _periodicity(mesh, bc))


def _periodicity(mesh, bc) -> tuple:
    return (bc.periodic_x,) if mesh.dim == 1 else (bc.periodic_x, bc.periodic_y)


def face_selection(troubled: Array, periodic: tuple):
    """Faces whose two adjacent cells are both troubled.

    Face ``k`` along an axis separates cells ``k-1`` and ``k``.  Ghost cells
    take the mask of their periodic image, or of the adjacent interior cell
    on a non-periodic side.
    """
    out = []
    for axis, per in enumerate(periodic):
        first = np.take(troubled, [0], axis=axis)
        last = np.take(troubled, [-1], axis=axis)
        lo_ghost, hi_ghost = (last, first) if per else (first, last)
        left = np.concatenate([lo_ghost, troubled], axis=axis)
        right = np.concatenate([troubled, hi_ghost], axis=axis)
        out.append(left & right)
    return out


def mood_step(u_pad: Array, mesh, bc, model: Model, dt: float, cascade: list,
              params: DetectionParams = DetectionParams(), detector=None):
    """One MOOD-limited step.

    Args:
        u_pad: padded field at ``t^n`` with ghosts filled.
        cascade: schemes from highest order down to the first-order parachute.
        detector: optional replacement for :func:`detect_failures`, called as
            ``detector(cand, u_pad, mesh, model, P, params)`` and returning the
            boolean failure array.

    Returns:
        ``(new_interior, MoodMask)``.

    Raises:
        SolverFatalError: if the parachute update is not computable or not
            admissible even with first-order fluxes on every face of the cell.
    """
    if not cascade[-1].first_order:
        raise ValueError("cascade must end with a first-order parachute")
    detector = detector or detect_failures
    periodic = _periodicity(mesh, bc)
    u_int = u_pad[(slice(None),) + mesh.interior]
    ncells = int(np.prod(mesh.shape))

    head = cascade[0]
    Fx, Fy = head.fluxes(u_pad, mesh, bc, model, dt)
    Fx = np.array(Fx, copy=True)
    Fy = None if Fy is None else np.array(Fy, copy=True)
    cand = u_int - flux_divergence(Fx, Fy, mesh, dt)
    final_stage = np.zeros(mesh.shape, dtype=np.int8)
    if len(cascade) == 1:
        return cand, MoodMask(np.zeros(mesh.shape, np.int8), final_stage, [ncells], [head.name],
                              (Fx, Fy))

    failed = detector(cand, u_pad, mesh, model, head.P, params)
    mask = mark(failed, periodic)
    marker = mask.copy()
    for s in range(1, len(cascade)):
        troubled = mask != 0
        if not troubled.any():
            break
        scheme = cascade[s]
        sel = face_selection(troubled, periodic)
        need_F = sel[0]
        need_G = sel[1] if mesh.dim == 2 else None
        Gx, Gy = scheme.fluxes(u_pad, mesh, bc, model, dt, need_F, need_G)
        Fx[:, need_F] = Gx[:, need_F]
        if Fy is not None:
            Fy[:, need_G] = Gy[:, need_G]
        new = u_int - flux_divergence(Fx, Fy, mesh, dt)
        cand[:, troubled] = new[:, troubled]
        final_stage[troubled] = s
        if scheme.first_order:
            _parachute_closure(u_pad, mesh, bc, model, dt, scheme, cand, Fx, Fy,
                               mask, final_stage, s, periodic)
            break
        f = detector(cand, u_pad, mesh, model, scheme.P, params) & troubled
        # troubled cells are re-judged from scratch; accepted ones drop to 0
        mask = mark(f, periodic, np.where(troubled, 0, mask).astype(np.int8))
    counts = [int(np.sum(final_stage == s)) for s in range(len(cascade))]
    return cand, MoodMask(marker, final_stage, counts, [c.name for c in cascade], (Fx, Fy))


def _parachute_closure(u_pad, mesh, bc, model, dt, scheme, cand, Fx, Fy, mask,
                       final_stage, s, periodic):
    """Widen the first-order region until every updated cell is admissible."""
    u_int = u_pad[(slice(None),) + mesh.interior]
    troubled = mask != 0
    for _ in range(ncells_bound(mesh)):
        bad = ~cad_check(cand)
        if model.is_euler:
            bad |= ~pad_check(cand, model.gamma)
        if not bad.any():
            return
        sel_now = face_selection(troubled, periodic)
        fully = _all_faces_selected(sel_now, mesh)
        hopeless = bad & fully
        if hopeless.any():
            idx = tuple(int(i[0]) for i in np.nonzero(hopeless))
            raise SolverFatalError(
                f"non-admissible state from the first-order scheme at cell {idx}",
                cell=idx, state=cand[(slice(None),) + idx].copy(),
                info={"u_n": u_pad[(slice(None),) + tuple(i + mesh.ghost for i in idx)].copy()},
            )
        troubled = troubled | _dilate(bad, periodic)
        sel = face_selection(troubled, periodic)
        Gx, Gy = scheme.fluxes(u_pad, mesh, bc, model, dt, sel[0], sel[1] if mesh.dim == 2 else None)
        Fx[:, sel[0]] = Gx[:, sel[0]]
        if Fy is not None:
            Fy[:, sel[1]] = Gy[:, sel[1]]
        new = u_int - flux_divergence(Fx, Fy, mesh, dt)
        cand[:, troubled] = new[:, troubled]
        final_stage[troubled] = s
        mask[troubled & (mask == 0)] = -1
    raise SolverFatalError("parachute closure did not converge")


def ncells_bound(mesh) -> int:
    return int(np.prod(mesh.shape)) + 1


def _all_faces_selected(sel, mesh) -> Array:
    ok = sel[0][:-1] & sel[0][1:]
    if mesh.dim == 2:
        ok = ok & sel[1][:, :-1] & sel[1][:, 1:]
    return ok
