from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catmood import stencil
from catmood.stencil import HALF, apply, coeffs, flux_weights, nodes


def lagrange_oracle(P, k, q):
    """Exact rational weights from the Lagrange basis polynomials."""
    xs = [Fraction(j) for j in range(-P + 1, P + 1)]
    out = []
    for a, xa in enumerate(xs):
        # basis polynomial coefficients, lowest degree first
        poly = [Fraction(1)]
        for b, xb in enumerate(xs):
            if b == a:
                continue
            d = xa - xb
            new = [Fraction(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i] += -xb * c / d
                new[i + 1] += c / d
            poly = new
        val = sum(c * (factorial(i) // factorial(i - k)) * Fraction(q) ** (i - k)
                  for i, c in enumerate(poly) if i >= k)
        out.append(val)
    return out


@pytest.mark.parametrize("P,k,q,expected", [
    (1, 0, HALF, [0.5, 0.5]),
    (1, 1, 0, [-1.0, 1.0]),
    (2, 1, 0, [-1 / 3, -1 / 2, 1.0, -1 / 6]),
    (2, 0, HALF, [-1 / 16, 9 / 16, 9 / 16, -1 / 16]),
])
def test_coeff_examples(P, k, q, expected):
    np.testing.assert_allclose(coeffs(P, k, q), expected, rtol=0, atol=1e-14)


@pytest.mark.parametrize("P", [1, 2, 3, 4])
def test_coeffs_match_rational_oracle(P):
    for k in range(2 * P):
        for q in list(range(-P + 1, P + 1)) + [HALF]:
            ref = np.array([float(v) for v in lagrange_oracle(P, k, q)])
            np.testing.assert_allclose(coeffs(P, k, q), ref, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("P", [1, 2, 3, 4, 5])
def test_partition_and_annihilation(P):
    for q in list(range(-P + 1, P + 1)) + [HALF]:
        assert abs(coeffs(P, 0, q).sum() - 1.0) < 1e-12
        for k in range(1, 2 * P):
            assert abs(coeffs(P, k, q).sum()) < 1e-9


def test_invalid_arguments():
    with pytest.raises(ValueError, match="k <= 3"):
        coeffs(2, 4, 0)
    with pytest.raises(ValueError):
        coeffs(0, 0, 0)
    with pytest.raises(ValueError):
        coeffs(2, 0, Fraction(1, 3))
    with pytest.raises(ValueError):
        coeffs(2, 0, 3)


def test_coeffs_read_only():
    w = coeffs(2, 1, 0)
    with pytest.raises(ValueError):
        w[0] = 1.0


def test_apply_examples():
    g = coeffs(2, 1, 0)
    assert abs(apply(g, np.full(4, 3.7), 0.1, 1)) < 1e-12
    x = nodes(2) * 0.25
    assert abs(apply(g, x, 0.25, 1) - 1.0) < 1e-13
    assert abs(apply(g, nodes(2).astype(float) ** 3, 1.0, 1)) < 1e-13


def test_apply_systems_and_mismatch():
    g = coeffs(1, 0, HALF)
    s = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_allclose(apply(g, s, 1.0, 0), [2.0, 3.0])
    with pytest.raises(ValueError, match="mismatch"):
        apply(g, np.ones(3), 1.0, 0)


@settings(max_examples=150, deadline=None)
@given(P=st.integers(1, 4), data=st.data())
def test_polynomial_exactness(P, data):
    k = data.draw(st.integers(0, 2 * P - 1))
    q = data.draw(st.sampled_from(list(range(-P + 1, P + 1)) + [HALF]))
    deg = data.draw(st.integers(0, 2 * P - 1))
    cs = np.array(data.draw(st.lists(st.floats(-1, 1), min_size=deg + 1, max_size=deg + 1)))
    delta = data.draw(st.floats(0.05, 2.0))
    poly = np.polynomial.Polynomial(cs)
    samples = poly(nodes(P) * delta)
    got = apply(coeffs(P, k, q), samples, delta, k)
    want = poly.deriv(k)(float(q) * delta) if k else poly(float(q) * delta)
    scale = max(1.0, np.abs(cs).sum() / delta**k)
    assert abs(got - want) <= 1e-10 * scale


@pytest.mark.parametrize("P", [1, 2, 3])
def test_time_direction_reuse(P):
    # same weights approximate d^k/dt^k at t=0 from samples at r*dt
    dt = 0.01
    poly = np.polynomial.Polynomial(np.linspace(0.3, -0.7, 2 * P))
    ts = nodes(P) * dt
    for k in range(2 * P):
        want = poly.deriv(k)(0.0) if k else poly(0.0)
        got = apply(coeffs(P, k, 0), poly(ts), dt, k)
        assert abs(got - want) <= 1e-7 * max(1, abs(want))


@pytest.mark.parametrize("P,expected", [
    (1, [0.5, 0.5]),
    (2, [-1 / 12, 7 / 12, 7 / 12, -1 / 12]),
    (3, [1 / 60, -8 / 60, 37 / 60, 37 / 60, -8 / 60, 1 / 60]),
])
def test_flux_weights(P, expected):
    np.testing.assert_allclose(flux_weights(P), expected, atol=1e-14)


@pytest.mark.parametrize("P", [1, 2, 3, 4])
def test_flux_weights_conservative_derivative(P):
    # (F[i+1/2] - F[i-1/2]) reproduces h * f'(x_i) for polynomials of degree <= 2P
    w = flux_weights(P)
    h = 1.0
    for deg in range(2 * P + 1):
        f = np.polynomial.Polynomial([0] * deg + [1])
        right = w @ f(nodes(P) * h)
        left = w @ f((nodes(P) - 1) * h)
        assert abs((right - left) / h - f.deriv()(0.0)) < 1e-10


def test_table_layout():
    tab = stencil.table(2)
    for a, j in enumerate(nodes(2)):
        np.testing.assert_array_equal(tab.deriv1[a], coeffs(2, 1, j))
    for k in range(4):
        np.testing.assert_array_equal(tab.time[k], coeffs(2, k, 0))
    np.testing.assert_array_equal(tab.interp, coeffs(2, 0, HALF))
    assert stencil.table(2) is tab
