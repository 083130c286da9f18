import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rodlab.fourier import AffineFourier, FourierSeries


def e(k, c=1.0):
    return FourierSeries.basis(k, c)


# ---------------------------------------------------------------- strategies

coeffs = st.complex_numbers(
    min_magnitude=1e-6, max_magnitude=10.0, allow_nan=False, allow_infinity=False
)


@st.composite
def series(draw, min_k=-8, max_k=8, parity=None):
    ks = draw(st.lists(st.integers(min_k, max_k), min_size=0, max_size=6, unique=True))
    if parity is not None:
        ks = [2 * k + (0 if parity == "even" else 1) for k in ks]
    return FourierSeries({k: draw(coeffs) for k in ks})


# ------------------------------------------------------------------ evaluate


def test_eval_constants():
    assert e(0).eval(0.7) == pytest.approx(1.0)
    assert e(2).eval(1.0) == pytest.approx(-1.0)
    s = e(1, 0.5) + e(-1, 0.5)
    assert abs(s.eval(1.0)) < 1e-15  # cos(pi/2)


def test_eval_vectorized():
    t = np.linspace(0, 2, 17)
    vals = e(3, 2.0 - 1.0j).eval(t)
    ref = (2.0 - 1.0j) * np.exp(1j * math.pi * 3 * t / 2)
    assert np.allclose(vals, ref, atol=1e-15)


# ----------------------------------------------------------------- structure


def test_zero_coefficients_pruned():
    s = FourierSeries({0: 1.0, 2: 0.0})
    assert s.support == (0,)
    assert (e(1) - e(1)).support == ()


def test_parity():
    assert e(2).parity == "even"
    assert e(1).parity == "odd"
    assert (e(1) + e(2)).parity == "mixed"
    assert FourierSeries.zero().parity == "even"


def test_parity_closure_semantics():
    # even parity: smoothly closed; odd parity: derivatives negate
    ev, od = e(2) + e(-4, 0.3j), e(1) + e(3, 2.0)
    for k in range(4):
        dev = ev
        dod = od
        for _ in range(k):
            dev, dod = dev.derivative(), dod.derivative()
        assert dev.eval(2.0) == pytest.approx(dev.eval(0.0))
        assert dod.eval(2.0) == pytest.approx(-dod.eval(0.0))


# ---------------------------------------------------------------- arithmetic


def test_product_exponent_addition():
    assert (e(1) * e(1)).support == (2,)
    assert (e(1) * e(-1)).support == (0,)
    assert (e(1) * e(-1)).coeffs[0] == pytest.approx(1.0)


@settings(max_examples=100, deadline=None)
@given(series(), series())
def test_product_matches_pointwise(a, b):
    t = np.linspace(0, 2, 7)
    lhs = (a * b).eval(t)
    rhs = a.eval(t) * b.eval(t)
    scale = max(1.0, np.max(np.abs(rhs)))
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(series())
def test_conjugate_pointwise(a):
    t = np.linspace(0, 2, 7)
    assert np.max(np.abs(a.conjugate().eval(t) - np.conj(a.eval(t)))) < 1e-12 * max(
        1.0, np.max(np.abs(a.eval(t)))
    )


def test_derivative_of_basis():
    d = e(4).derivative()
    assert d.support == (4,)
    assert d.coeffs[4] == pytest.approx(1j * math.pi * 2)


@settings(max_examples=100, deadline=None)
@given(series())
def test_derivative_antiderivative_roundtrip(a):
    anti = a.derivative().antiderivative(a.eval(0.0))
    # derivative kills the DC mode; the antiderivative restores it as constant
    t = np.linspace(0, 2, 9)
    scale = max(1.0, np.max(np.abs(a.eval(t))))
    assert np.max(np.abs(anti.eval(t) - a.eval(t))) < 1e-10 * scale


def test_antiderivative_dc_gives_linear():
    anti = e(0, 3.0).antiderivative(1.0)
    assert isinstance(anti, AffineFourier)
    assert anti.linear == pytest.approx(3.0)
    assert anti.eval(2.0) == pytest.approx(7.0)


# --------------------------------------------------------------------- inner


def test_norm_of_basis_is_two():
    # raw measure on [0, 2]: ||e(k)||^2 = 2
    assert e(5).norm_sq() == pytest.approx(2.0)
    assert e(5).inner(e(3)) == pytest.approx(0.0)


@settings(max_examples=50, deadline=None)
@given(series(parity="even"), series(parity="even"))
def test_inner_matches_quadrature(a, b):
    t = np.linspace(0, 2, 4096, endpoint=False)
    quad = np.sum(a.eval(t) * np.conj(b.eval(t))) * (2.0 / 4096)
    scale = max(1.0, abs(quad))
    assert abs(a.inner(b) - quad) < 1e-9 * scale


@settings(max_examples=50, deadline=None)
@given(series(parity="odd"))
def test_norm_matches_quadrature_odd(a):
    t = np.linspace(0, 2, 4096, endpoint=False)
    quad = np.sum(np.abs(a.eval(t)) ** 2) * (2.0 / 4096)
    assert a.norm_sq() == pytest.approx(quad, abs=1e-9 * max(1.0, quad))


# ---------------------------------------------------------------------- JSON


@settings(max_examples=50, deadline=None)
@given(series())
def test_json_roundtrip(a):
    assert FourierSeries.from_json(a.to_json()) == a


def test_chop():
    s = e(1) + e(3, 1e-15)
    assert s.chop(1e-13).support == (1,)
