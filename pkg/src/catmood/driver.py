"""Time marching, CFL control, scheme dispatch and convergence studies."""
from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .cases import CaseSpec, get_case
from .cat_core import flux_divergence
from .grid import Field, fill_ghosts
from .mood import DetectionParams, MoodMask, SolverFatalError, mood_step
from .models import Model
from .schemes import Scheme, parse_cascade, parse_scheme

log = logging.getLogger(__name__)

Array = np.ndarray

CFL_WARN = 0.5


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    """Everything needed for one run.

    ``scheme`` is one of ``catN``, ``acatN``, ``catmoodN``, ``rusanov``,
    ``hll``, ``hllc``.  For ``catmoodN`` the cascade defaults to ``N,2,1``
    and can be overridden by ``cascade`` (e.g. ``"6,4,2,1"``).
    """

    case: str = "vortex"
    scheme: str = "catmood6"
    cascade: Optional[str] = None
    parachute: str = "hllc"
    limiter: str = "minmod"
    nx: Optional[int] = None
    ny: Optional[int] = None
    cfl: float = 0.4
    t_final: Optional[float] = None
    outdir: Optional[str] = None
    output_every: int = 0
    eps1: float = 1e-4
    eps2: float = 1e-3
    detection: bool = True
    gamma: Optional[float] = None
    max_steps: int = 10_000_000

    def validate(self):
        if not self.cfl > 0:
            raise ConfigError(f"cfl must be positive, got {self.cfl}")
        if self.cfl > CFL_WARN:
            warnings.warn(f"cfl={self.cfl} exceeds the recommended bound {CFL_WARN}", stacklevel=2)
        if self.t_final is not None and not self.t_final > 0:
            raise ConfigError(f"t_final must be positive, got {self.t_final}")
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be >= 1, got {v}")
        if not (self.eps1 > 0 and self.eps2 > 0):
            raise ConfigError("eps1 and eps2 must be positive")
        if self.limiter not in ("minmod", "superbee", "vanleer"):
            raise ConfigError(f"unknown limiter {self.limiter!r}")
        if self.parachute not in ("rusanov", "hll", "hllc"):
            raise ConfigError(f"unknown parachute {self.parachute!r}")
        try:
            build_schemes(self)
            get_case(self.case)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        return self


def build_schemes(cfg: RunConfig) -> list[Scheme]:
    """Cascade for MOOD runs, or a one-element list for a plain scheme."""
    key = cfg.scheme.strip().lower()
    if key.startswith("catmood"):
        order = int(key[7:] or 6)
        spec = cfg.cascade or ",".join(str(o) for o in sorted({order, 2, 1}, reverse=True))
        cascade = parse_cascade(spec, cfg.parachute)
        if cascade[0].first_order or 2 * cascade[0].P != order:
            raise ValueError(f"cascade {spec!r} does not start with order {order}")
        return cascade
    if cfg.cascade:
        raise ValueError("a cascade is only meaningful for catmood schemes")
    return [parse_scheme(key, cfg.limiter, cfg.parachute)]


@dataclass
class ConvergenceRow:
    n: int
    l1_error: float
    order: Optional[float] = None


@dataclass
class StepStats:
    step: int
    time: float
    dt: float
    pct: list


@dataclass
class RunResult:
    """Final state and diagnostics of a run."""

    case: CaseSpec
    mesh: object
    u: Array
    t: float
    steps: int
    totals0: Array
    totals: Array
    boundary_outflow: Array
    stats: list = field(default_factory=list)
    scheme_names: list = field(default_factory=list)
    last_mask: Optional[MoodMask] = None
    wall_time: float = 0.0
    abs_totals0: Optional[Array] = None

    @property
    def drift(self) -> Array:
        """Relative conservation error per component, boundary fluxes accounted for.

        Scaled by ``max(|sum u0|, sum |u0|)`` so zero-mean components stay meaningful.
        """
        scale = np.abs(self.totals0)
        if self.abs_totals0 is not None:
            scale = np.maximum(scale, self.abs_totals0)
        scale = np.maximum(scale, 1e-300)
        return np.abs(self.totals + self.boundary_outflow - self.totals0) / scale

    def mean_share(self, stage: int = 0) -> float:
        if not self.stats:
            return 100.0 if stage == 0 else 0.0
        return float(np.mean([s.pct[stage] for s in self.stats]))


def compute_dt(u: Array, mesh, model: Model, cfl: float) -> float:
    """``cfl * min(dx / max|lambda_x|, dy / max|lambda_y|)`` over interior states.

    Raises:
        SolverFatalError: if a state is not admissible (the speeds are undefined).
        ConfigError: if every wave speed is zero.
    """
    ok = model.admissible(u)
    if not np.all(ok):
        idx = tuple(int(i[0]) for i in np.nonzero(~ok))
        raise SolverFatalError(f"non-admissible state at cell {idx}", cell=idx,
                               state=u[(slice(None),) + idx].copy())
    lam = [float(np.max(model.wave_speed(u, 0)))]
    h = [mesh.dx]
    if mesh.dim == 2:
        lam.append(float(np.max(model.wave_speed(u, 1))))
        h.append(mesh.dy)
    rates = [l / d for l, d in zip(lam, h)]
    if max(rates) <= 0:
        raise ConfigError("all wave speeds vanish; the time step is undefined")
    return cfl / max(rates)


def _boundary_outflow(Fx, Fy, mesh, dt) -> Array:
    """Net amount of each component leaving through the domain boundary in one step."""
    if mesh.dim == 1:
        return dt * (Fx[:, -1] - Fx[:, 0])
    out = dt * mesh.dy * (Fx[:, -1, :].sum(axis=1) - Fx[:, 0, :].sum(axis=1))
    out += dt * mesh.dx * (Fy[:, :, -1].sum(axis=1) - Fy[:, :, 0].sum(axis=1))
    return out


def totals(u: Array, mesh) -> Array:
    axes = tuple(range(1, u.ndim))
    return u.sum(axis=axes) * mesh.cell_volume


def run(cfg: RunConfig, detector=None, on_step=None) -> RunResult:
    """March a case to its final time.

    Args:
        detector: optional failure detector passed to the MOOD step (testing hook).
        on_step: optional callback ``on_step(result_so_far, mood_mask_or_None)``;
            ``result_so_far.u`` is a view of the current interior state.

    Raises:
        SolverFatalError: inadmissible state from an unlimited scheme or from
            the parachute, or a time step underflow.
    """
    cfg.validate()
    case = get_case(cfg.case)
    if cfg.gamma is not None and case.model.is_euler:
        case.model = type(case.model)(cfg.gamma)
    schemes = build_schemes(cfg)
    mood = len(schemes) > 1
    ghost = max(max(s.ghost for s in schemes), 2)
    mesh = case.mesh(cfg.nx, cfg.ny, ghost=ghost)
    t_final = cfg.t_final if cfg.t_final is not None else case.t_final
    model = case.model
    params = DetectionParams(cfg.eps1, cfg.eps2)
    if not cfg.detection:
        params = DetectionParams(cfg.eps1, cfg.eps2, use_cad=False, use_pad=False, use_nad=False)

    fld = Field.from_interior(mesh, case.init(mesh))
    u = fld.data
    t0 = totals(fld.interior, mesh)
    res = RunResult(case, mesh, fld.interior.copy(), 0.0, 0, t0, t0.copy(), np.zeros_like(t0),
                    scheme_names=[s.name for s in schemes],
                    abs_totals0=totals(np.abs(fld.interior), mesh))
    outdir = Path(cfg.outdir) if cfg.outdir else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    tic = time.perf_counter()
    t = 0.0
    step = 0
    while t < t_final * (1 - 1e-14):
        if step >= cfg.max_steps:
            raise SolverFatalError(f"step limit {cfg.max_steps} reached at t={t}")
        u_int = u[(slice(None),) + mesh.interior]
        dt = compute_dt(u_int, mesh, model, cfg.cfl)
        if t + dt > t_final:
            dt = t_final - t
        if dt < 1e-14 * t_final:
            raise SolverFatalError(f"time step underflow (dt={dt:g}) at t={t:g}")
        fill_ghosts(u, mesh, case.bc)
        mask = None
        if mood:
            new, mask = mood_step(u, mesh, case.bc, model, dt, schemes, params, detector)
            Fx, Fy = mask.fluxes
            res.stats.append(StepStats(step + 1, t + dt, dt, mask.percentages))
        else:
            Fx, Fy = schemes[0].fluxes(u, mesh, case.bc, model, dt)
            new = u_int - flux_divergence(Fx, Fy, mesh, dt)
        # never accept a non-admissible state, whichever path produced it
        bad = ~model.admissible(new)
        if np.any(bad):
            idx = tuple(int(i[0]) for i in np.nonzero(bad))
            who = schemes[0].name if not mood else schemes[int(mask.final_stage[idx])].name
            raise SolverFatalError(
                f"non-admissible state from {who} at cell {idx}, t={t + dt:g}",
                cell=idx, state=new[(slice(None),) + idx].copy(),
            )
        res.boundary_outflow += _boundary_outflow(Fx, Fy, mesh, dt)
        u[(slice(None),) + mesh.interior] = new
        t += dt
        step += 1
        res.t, res.steps, res.last_mask = t, step, mask
        res.u = u[(slice(None),) + mesh.interior]  # live view; copied at the end
        if on_step is not None:
            on_step(res, mask)
        if outdir is not None and cfg.output_every and step % cfg.output_every == 0:
            _write_frame(outdir, res, u, mesh, model, mask, step)
    res.wall_time = time.perf_counter() - tic
    res.u = u[(slice(None),) + mesh.interior].copy()
    res.totals = totals(res.u, mesh)
    if outdir is not None:
        _write_frame(outdir, res, u, mesh, model, res.last_mask, "final")
        if mood:
            from .io import write_mood_stats

            write_mood_stats(res.stats, res.scheme_names, outdir / "mood_stats.csv")
    return res


def _write_frame(outdir, res, u, mesh, model, mask, tag):
    from .io import OutputFrame, write_field_csv, write_vtk

    frame = OutputFrame.from_state(mesh, u[(slice(None),) + mesh.interior], model, res.t,
                                   res.steps, None if mask is None else mask.marker)
    write_field_csv(frame, outdir / f"field_{tag}.csv")
    write_vtk(frame, outdir / f"field_{tag}.vtk")


def l1_error(res: RunResult, component: int = 0, normalize: bool = False) -> float:
    """``sum |u - u_exact| dx dy`` of one conserved component (density by default).

    With ``normalize`` the sum is divided by the domain measure, i.e. the
    mean absolute error; this is the scale used for published vortex tables.
    """
    if res.case.exact is None:
        raise ValueError(f"case {res.case.name!r} has no exact solution")
    ex = res.case.exact(res.mesh, res.t)
    err = float(np.sum(np.abs(res.u[component] - ex[component])) * res.mesh.cell_volume)
    if normalize:
        err /= res.mesh.cell_volume * int(np.prod(res.mesh.shape))
    return err


def observed_orders(ns, errs) -> list:
    out = [None]
    for k in range(1, len(ns)):
        out.append(math.log(errs[k - 1] / errs[k]) / math.log(ns[k] / ns[k - 1]))
    return out


def convergence_study(case: str, scheme: str, resolutions, normalize: bool = True,
                      **overrides) -> list[ConvergenceRow]:
    """L1 density errors (per unit measure by default) and observed orders."""
    errs = []
    ns = list(resolutions)
    for n in ns:
        cfg = RunConfig(case=case, scheme=scheme, nx=n, ny=n, **overrides)
        res = run(cfg)
        errs.append(l1_error(res, normalize=normalize))
        log.info("%s %s N=%d L1=%.3e", case, scheme, n, errs[-1])
    return [ConvergenceRow(n, e, o) for n, e, o in zip(ns, errs, observed_orders(ns, errs))]
