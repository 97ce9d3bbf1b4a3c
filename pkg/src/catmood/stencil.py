"""Interpolation and differentiation weights on the compact 2P-point stencil.

The weights ``gamma[k, q, P][j]``, ``j = -P+1..P``, are those of the unique
degree ``2P-1`` Lagrange interpolant through the nodes ``j*delta``,
differentiated ``k`` times and evaluated at ``q*delta``.  The ``1/delta**k``
factor is *not* folded in; :func:`apply` takes care of it.

The same tables are used along space (spacing ``dx``) and along time
(spacing ``dt``) when approximating time derivatives of the flux.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Union

import numpy as np

Offset = Union[int, Fraction]

HALF = Fraction(1, 2)


def nodes(P: int) -> np.ndarray:
    """Integer node positions ``-P+1, ..., P``."""
    return np.arange(-P + 1, P + 1)


def _normalize_offset(P: int, q) -> Fraction:
    q = Fraction(q)
    if q == HALF or (q.denominator == 1 and -P + 1 <= q <= P):
        return q
    raise ValueError(f"offset q={q} not in {{-P+1..P}} U {{1/2}} for P={P}")


@lru_cache(maxsize=None)
def _flux_weights_cached(P: int) -> np.ndarray:
    n = 2 * P
    x = nodes(P).astype(float)
    # sample j stands for the average of a polynomial over [j-1/2, j+1/2];
    # the weights recover its point value at 1/2 for degree <= 2P-1
    V = np.array([((x + 0.5) ** (m + 1) - (x - 0.5) ** (m + 1)) / (m + 1) for m in range(n)])
    rhs = 0.5 ** np.arange(n)
    w = np.linalg.solve(V, rhs)
    w.setflags(write=False)
    return w


def flux_weights(P: int) -> np.ndarray:
    """Interface weights of the conservative flux on the 2P-point stencil.

    Unlike ``coeffs(P, 0, 1/2)`` these make the flux difference
    ``(F[i+1/2] - F[i-1/2]) / dx`` reproduce ``f'`` to order ``2P``:
    ``[1/2, 1/2]`` for P=1, ``[-1, 7, 7, -1]/12`` for P=2.
    """
    if P < 1:
        raise ValueError(f"half-width P must be >= 1, got {P}")
    return _flux_weights_cached(P)


@lru_cache(maxsize=None)
def _coeffs_cached(P: int, k: int, q: Fraction) -> np.ndarray:
    n = 2 * P
    x = nodes(P).astype(float)
    qf = float(q)
    # exactness on the monomials x^m, m = 0..n-1
    V = np.vander(x, n, increasing=True).T
    rhs = np.zeros(n)
    for m in range(k, n):
        rhs[m] = factorial(m) / factorial(m - k) * qf ** (m - k)
    g = np.linalg.solve(V, rhs)
    g.setflags(write=False)
    return g


def coeffs(P: int, k: int, q: Offset) -> np.ndarray:
    """Weights of ``A^{k,q}_P``; a read-only array of length ``2P``.

    Raises:
        ValueError: if ``P < 1``, ``k`` is outside ``0..2P-1`` or ``q`` is not
            an admissible offset.
    """
    if P < 1:
        raise ValueError(f"half-width P must be >= 1, got {P}")
    if not 0 <= k <= 2 * P - 1:
        raise ValueError(
            f"derivative order k={k} needs an interpolant of degree >= k; "
            f"a {2 * P}-point stencil supports k <= {2 * P - 1}"
        )
    return _coeffs_cached(P, k, _normalize_offset(P, q))


def apply(weights: np.ndarray, samples: np.ndarray, delta: float, k: int) -> np.ndarray:
    """Evaluate ``(1/delta**k) * sum_j weights[j] * samples[j]``.

    ``samples`` has the stencil on its first axis; any trailing axes (state
    components, batches) are carried through.
    """
    weights = np.asarray(weights)
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != weights.shape[0]:
        raise ValueError(
            f"stencil length mismatch: {weights.shape[0]} weights, "
            f"{samples.shape[0]} samples"
        )
    return np.tensordot(weights, samples, axes=(0, 0)) / delta**k


class CoeffTable:
    """Dense weight tables for one half-width ``P``.

    Attributes:
        deriv1: ``(2P, 2P)``; row ``a`` holds the first-derivative weights
            evaluated at node ``a - P + 1``.
        time: ``(2P, 2P)``; row ``k`` holds ``A^{k,0}_P`` (row 0 is the
            identity at the centre node).
        mid: ``(2P,)``; conservative interface weights, see :func:`flux_weights`.
        interp: ``(2P,)``; Lagrange interpolation weights at ``1/2``.
    """

    def __init__(self, P: int):
        self.P = P
        n = 2 * P
        self.deriv1 = np.array([coeffs(P, 1, j) for j in nodes(P)])
        self.time = np.array([coeffs(P, k, 0) for k in range(n)])
        self.mid = np.array(flux_weights(P))
        self.interp = np.array(coeffs(P, 0, HALF))
        for arr in (self.deriv1, self.time, self.mid, self.interp):
            arr.setflags(write=False)


@lru_cache(maxsize=None)
def table(P: int) -> CoeffTable:
    return CoeffTable(P)
