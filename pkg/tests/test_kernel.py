import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from sharecast import KernelParams, normalize, phi, phi_mass, sample_delay, total_mass


@pytest.fixture
def k():
    return KernelParams(c=0.1 / 60, s0=600.0, theta=1.0)


def test_phi_constant_region(k):
    assert phi(5 * 60, k) == pytest.approx(0.1 / 60, rel=0, abs=0)


def test_phi_power_tail(k):
    # (s/s0)^-2 = 2^-2 at s = 2*s0
    assert phi(1200.0, k) == pytest.approx(0.025 / 60, rel=1e-12)


def test_phi_continuous_at_cutoff(k):
    eps = 1e-9
    assert phi(k.s0, k) == k.c
    assert phi(k.s0 + eps, k) == pytest.approx(k.c, rel=1e-6)


def test_phi_rejects_negative(k):
    with pytest.raises(ValueError):
        phi(-1.0, k)


def test_phi_mass_empty_interval(k):
    assert phi_mass(123.0, 123.0, k) == 0.0


def test_phi_mass_constant_region(k):
    assert phi_mass(0.0, k.s0, k) == pytest.approx(k.c * k.s0, rel=1e-15)


def test_phi_mass_hand_value(k):
    # theta=1: tail integral over [s0, 2*s0] is c*s0/2
    assert phi_mass(0.0, 2 * k.s0, k) == pytest.approx(1.5 * k.c * k.s0, rel=1e-14)


def test_phi_mass_rejects_bad_interval(k):
    with pytest.raises(ValueError):
        phi_mass(10.0, 5.0, k)
    with pytest.raises(ValueError):
        phi_mass(-1.0, 5.0, k)


def test_normalize_hand_value():
    k = normalize(KernelParams(c=1.0, s0=300.0, theta=0.242))
    assert k.c == pytest.approx(6.494900697799249e-4, rel=1e-12)
    assert total_mass(k) == 1.0
    assert phi_mass(0.0, math.inf, k) == pytest.approx(1.0, abs=1e-12)


def test_normalize_trivial_and_idempotent():
    k = normalize(KernelParams(c=3.0, s0=1.0, theta=1.0))
    assert k.c == 0.5
    assert normalize(k) == k


@given(
    s0=st.floats(1.0, 5000.0),
    theta=st.floats(0.05, 5.0),
    scale=st.floats(0.01, 10.0),
)
@settings(max_examples=60, deadline=None)
def test_total_mass_is_one_after_normalize(s0, theta, scale):
    # Exactly 1.0 whenever a representable c exists; never off by more
    # than one ulp otherwise.
    k = normalize(KernelParams(c=scale, s0=s0, theta=theta))
    assert abs(total_mass(k) - 1.0) <= 2 ** -52


@given(
    a=st.floats(0.0, 5000.0),
    width=st.floats(0.0, 5000.0),
    extra=st.floats(0.0, 5000.0),
)
@settings(max_examples=100, deadline=None)
def test_phi_mass_additive(a, width, extra):
    k = KernelParams(c=0.002, s0=400.0, theta=0.7)
    b, c = a + width, a + width + extra
    left = phi_mass(a, b, k) + phi_mass(b, c, k)
    assert left == pytest.approx(phi_mass(a, c, k), rel=1e-12, abs=1e-15)


@given(
    a=st.floats(0.0, 3000.0),
    width=st.floats(0.0, 3000.0),
    s0=st.floats(10.0, 1000.0),
    theta=st.floats(0.1, 3.0),
)
@settings(max_examples=50, deadline=None)
def test_phi_mass_matches_quadrature(a, width, s0, theta):
    k = KernelParams(c=0.01, s0=s0, theta=theta)
    b = a + width
    expected, _ = quad(lambda s: phi(s, k), a, b, points=[s0] if a < s0 < b else None, limit=200)
    assert phi_mass(a, b, k) == pytest.approx(expected, rel=1e-8, abs=1e-12)


def test_phi_non_increasing(k):
    s = np.linspace(0, 5000, 2000)
    vals = phi(s, k)
    assert np.all(np.diff(vals) <= 1e-18)
    assert np.all(vals >= 0)


def test_sample_delay_inverts_cdf():
    k = normalize(KernelParams(c=1.0, s0=300.0, theta=0.242))
    for u in (0.0, 0.1, 0.19, 0.3, 0.6, 0.95, 0.999):
        s = sample_delay(u, k)
        assert phi_mass(0.0, s, k) == pytest.approx(u, abs=1e-9)


def test_sample_delay_head_tail_split():
    k = normalize(KernelParams(c=1.0, s0=100.0, theta=1.0))
    # head mass = theta/(1+theta) = 0.5 -> quantile 0.5 maps to s0
    assert sample_delay(0.5, k) == pytest.approx(k.s0, rel=1e-9)
    assert sample_delay(0.25, k) == pytest.approx(k.s0 / 2, rel=1e-9)


def test_sample_delay_requires_normalized(k):
    with pytest.raises(ValueError):
        sample_delay(0.5, k)
