"""Configuration parsing and output writers."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .driver import CFL_WARN, ConfigError, RunConfig

Array = np.ndarray


# --------------------------------------------------------------------------
# configuration


def _to_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


_KEYS = {
    "case": str,
    "scheme": str,
    "cascade": str,
    "parachute": str,
    "limiter": str,
    "nx": int,
    "ny": int,
    "cfl": float,
    "t_final": float,
    "tfinal": float,
    "outdir": str,
    "output_every": int,
    "eps1": float,
    "eps2": float,
    "detection": _to_bool,
    "gamma": float,
    "max_steps": int,
}
_ALIASES = {"tfinal": "t_final"}


def parse_config(text: str) -> RunConfig:
    """Parse ``key=value`` tokens into a validated :class:`RunConfig`.

    Tokens are separated by whitespace or newlines; ``#`` starts a comment
    and ``[section]`` headers are accepted and ignored.

    Raises:
        ConfigError: on a malformed token, unknown key or invalid value; the
            message includes the line number.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        for tok in line.split():
            if "=" not in tok:
                raise ConfigError(f"line {lineno}: expected key=value, got {tok!r}")
            key, val = tok.split("=", 1)
            key = key.strip().lower()
            if key not in _KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            try:
                values[_ALIASES.get(key, key)] = (_KEYS[key](val), lineno)
            except ValueError:
                raise ConfigError(f"line {lineno}: invalid value {val!r} for {key!r}") from None
    cfg = RunConfig(**{k: v for k, (v, _) in values.items()})
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg.validate()
    except ConfigError as e:
        line = _blame(values, str(e))
        raise ConfigError(f"line {line}: {e}" if line else str(e)) from None
    if cfg.cfl > CFL_WARN:
        line = values["cfl"][1]
        warnings.warn(f"line {line}: cfl={cfg.cfl} exceeds the recommended bound {CFL_WARN}",
                      stacklevel=2)
    return cfg


def _blame(values, msg) -> Optional[int]:
    for key, (_, lineno) in values.items():
        if key in msg or key.replace("_", "") in msg:
            return lineno
    for key in ("scheme", "cascade", "case"):
        if key in values:
            return values[key][1]
    return None


def apply_overrides(cfg: RunConfig, **kw) -> RunConfig:
    """Copy of ``cfg`` with non-``None`` keyword overrides, re-validated."""
    data = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    data.update({k: v for k, v in kw.items() if v is not None})
    return RunConfig(**data).validate()


# --------------------------------------------------------------------------
# field frames


@dataclass
class OutputFrame:
    """Cell-centred primitive snapshot.

    Arrays are ``(nx, ny)`` (``ny = 1`` in 1D).  ``u``/``v``/``p`` hold zeros
    for scalar models, with the scalar itself stored in ``rho``.
    """

    step: int
    time: float
    nx: int
    ny: int
    x: Array
    y: Array
    rho: Array
    u: Array
    v: Array
    p: Array
    mask: Optional[Array] = None
    origin: tuple = (0.0, 0.0)
    spacing: tuple = (1.0, 1.0)

    @classmethod
    def from_state(cls, mesh, u: Array, model, t: float = 0.0, step: int = 0,
                   mask: Optional[Array] = None) -> "OutputFrame":
        shape = (mesh.nx, mesh.ny)
        cc = mesh.cell_centers()
        if mesh.dim == 1:
            X = cc[0][:, None]
            Y = np.full_like(X, mesh.y0 + 0.5 * mesh.dy)
        else:
            X, Y = cc
        if model.is_euler:
            with np.errstate(divide="ignore", invalid="ignore"):
                rho = u[0]
                vx = u[1] / rho
                vy = u[2] / rho
                p = model.pressure(u)
        else:
            rho = u[0]
            vx = vy = p = np.zeros_like(rho)
        r = lambda a: np.asarray(a, dtype=float).reshape(shape)  # noqa: E731
        m = None if mask is None else np.asarray(mask).reshape(shape)
        return cls(step, t, mesh.nx, mesh.ny, r(X), r(Y), r(rho), r(vx), r(vy), r(p), m,
                   (mesh.x0, mesh.y0), (mesh.dx, mesh.dy))


FIELD_COLUMNS = ("x", "y", "rho", "u", "v", "p")


def write_field_csv(frame: OutputFrame, path) -> None:
    """CSV with header ``x,y,rho,u,v,p[,mask]``; rows run over i fastest, then j."""
    path = Path(path)
    cols = list(FIELD_COLUMNS) + (["mask"] if frame.mask is not None else [])
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for j in range(frame.ny):
                for i in range(frame.nx):
                    row = [repr(float(getattr(frame, c)[i, j])) for c in FIELD_COLUMNS]
                    if frame.mask is not None:
                        row.append(str(int(frame.mask[i, j])))
                    w.writerow(row)
    except OSError as e:
        raise OSError(f"cannot write field CSV to {path}: {e}") from e


def read_field_csv(path, nx: int, ny: int) -> OutputFrame:
    """Inverse of :func:`write_field_csv` (time/step are not stored)."""
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if len(body) != nx * ny:
        raise ValueError(f"{path}: expected {nx * ny} rows, found {len(body)}")
    data = {c: np.empty((nx, ny)) for c in header}
    for k, row in enumerate(body):
        j, i = divmod(k, nx)
        for c, val in zip(header, row):
            data[c][i, j] = float(val)
    mask = data["mask"].astype(int) if "mask" in data else None
    return OutputFrame(0, 0.0, nx, ny, data["x"], data["y"], data["rho"], data["u"],
                       data["v"], data["p"], mask)


def write_vtk(frame: OutputFrame, path) -> None:
    """Legacy ASCII VTK ``STRUCTURED_POINTS`` file with one scalar per variable."""
    path = Path(path)
    names = ["rho", "u", "v", "p"] + (["mask"] if frame.mask is not None else [])
    lines = [
        "# vtk DataFile Version 3.0",
        f"field t={frame.time:.17g} step={frame.step}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {frame.nx} {frame.ny} 1",
        f"ORIGIN {frame.origin[0] + 0.5 * frame.spacing[0]:.17g} "
        f"{frame.origin[1] + 0.5 * frame.spacing[1]:.17g} 0",
        f"SPACING {frame.spacing[0]:.17g} {frame.spacing[1]:.17g} 1",
        f"POINT_DATA {frame.nx * frame.ny}",
    ]
    for name in names:
        arr = getattr(frame, name)
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(repr(float(arr[i, j])) for j in range(frame.ny) for i in range(frame.nx))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise OSError(f"cannot write VTK file {path}: {e}") from e


# --------------------------------------------------------------------------
# tables


def write_convergence_table(rows) -> str:
    """Text table ``N | L1 error | order``."""
    out = ["N | L1 error | order"]
    for r in rows:
        order = "-" if r.order is None else f"{r.order:.2f}"
        out.append(f"{r.n} | {r.l1_error:.2e} | {order}")
    return "\n".join(out) + "\n"


def write_mood_stats(stats, names, path) -> None:
    """Per-step CSV ``step,time,dt,pct_<scheme>...``."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "time", "dt"] + [f"pct_{n}" for n in names])
        for s in stats:
            w.writerow([s.step, repr(s.time), repr(s.dt)] + [f"{p:.6f}" for p in s.pct])
