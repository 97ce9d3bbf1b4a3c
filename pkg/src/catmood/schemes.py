"""Face-flux schemes with a common interface.

Every scheme returns ``(Fx, Fy)`` on a padded field whose ghosts are filled;
``Fy`` is ``None`` in 1D.  Optional boolean ``need_F``/``need_G`` masks
restrict the work to selected faces; unselected entries are undefined.
"""
from __future__ import annotations

import numpy as np

from .acat import acat_fluxes
from .cat_core import cat_fluxes_1d, cat_fluxes_2d
from .riemann import first_order_fluxes, get_solver

Array = np.ndarray


class Scheme:
    name = "scheme"
    P = 1
    first_order = False

    @property
    def ghost(self) -> int:
        return self.P

    def fluxes(self, u, mesh, bc, model, dt, need_F=None, need_G=None):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class CAT(Scheme):
    """Unlimited CAT2P."""

    def __init__(self, P: int):
        if P < 1:
            raise ValueError("CAT order 2P needs P >= 1")
        self.P = P
        self.name = f"CAT{2 * P}"

    def fluxes(self, u, mesh, bc, model, dt, need_F=None, need_G=None):
        if mesh.dim == 1:
            return cat_fluxes_1d(u, mesh, bc, model, dt, self.P), None
        return cat_fluxes_2d(u, mesh, model, dt, self.P, need_F, need_G)


class FirstOrder(Scheme):
    """First-order Godunov-type scheme with an approximate Riemann solver."""

    first_order = True

    def __init__(self, kind: str = "hllc"):
        get_solver(kind)
        self.kind = kind.lower()
        self.P = 1
        self.name = self.kind.upper() if self.kind != "rusanov" else "Rusanov"

    def fluxes(self, u, mesh, bc, model, dt, need_F=None, need_G=None):
        return first_order_fluxes(u, mesh, model, self.kind)


class ACAT(Scheme):
    """A priori limited ACAT2P."""

    def __init__(self, P: int, limiter: str = "minmod", low: str = "rusanov"):
        self.P = P
        self.limiter = limiter
        self.low = low
        self.name = f"ACAT{2 * P}"

    @property
    def ghost(self) -> int:
        return max(self.P, 2)

    def fluxes(self, u, mesh, bc, model, dt, need_F=None, need_G=None):
        return acat_fluxes(u, mesh, bc, model, dt, self.P, self.limiter, self.low)


def parse_scheme(name: str, limiter: str = "minmod", parachute: str = "hllc") -> Scheme:
    """Single scheme from a name such as ``cat6``, ``acat4``, ``hllc``."""
    key = name.strip().lower()
    if key.startswith("acat"):
        return ACAT(int(key[4:]) // 2, limiter, parachute)
    if key.startswith("cat") and key[3:].isdigit():
        order = int(key[3:])
        if order % 2 or order < 2:
            raise ValueError(f"CAT order must be even and >= 2, got {order}")
        return CAT(order // 2)
    if key in ("rusanov", "hll", "hllc"):
        return FirstOrder(key)
    raise ValueError(f"unknown scheme {name!r}")


def parse_cascade(spec, parachute: str = "hllc") -> list[Scheme]:
    """Cascade from orders, e.g. ``"6,4,2,1"`` or ``[6, 2, 1]``; ``1`` is the parachute.

    A missing trailing parachute is appended.
    """
    if isinstance(spec, str):
        items = [s for s in spec.replace(" ", "").split(",") if s]
    else:
        items = list(spec)
    out: list[Scheme] = []
    for it in items:
        order = int(it)
        if order == 1:
            out.append(FirstOrder(parachute))
        elif order >= 2 and order % 2 == 0:
            out.append(CAT(order // 2))
        else:
            raise ValueError(f"cascade entries must be 1 or even orders, got {order}")
    if not out:
        raise ValueError("empty cascade")
    if not out[-1].first_order:
        out.append(FirstOrder(parachute))
    if any(s.first_order for s in out[:-1]):
        raise ValueError("the first-order parachute must be the last cascade entry")
    orders = [2 * s.P if not s.first_order else 1 for s in out]
    if orders != sorted(orders, reverse=True) or len(set(orders)) != len(orders):
        raise ValueError(f"cascade orders must strictly decrease, got {orders}")
    return out
