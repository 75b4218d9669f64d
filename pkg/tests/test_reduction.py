import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aristotelian import conserved as cs
from aristotelian import reduction as rd
from aristotelian.errors import ReducedSingular, VerticalSlope
from aristotelian.model import Couplings, auxiliary_rhs
from aristotelian.numdiff import gradient
from tests.conftest import random_states

FULL = Couplings(1, 1, 1)
GEN = Couplings(1, 2, 3)
reals = st.floats(-5, 5, allow_nan=False)


def test_plane_coordinates_example():
    pt = rd.to_plane([5, 1, 0])
    assert pt.zeta == pytest.approx(2 * math.sqrt(3))
    assert pt.eta == pytest.approx(2 * math.sqrt(2))
    assert pt.xi == pytest.approx(math.sqrt(6))


@settings(max_examples=200, deadline=None)
@given(reals, reals, reals)
def test_roundtrip_and_norm(u, v, w):
    s = np.array([u, v, w], dtype=complex)
    pt = rd.to_plane(s)
    assert np.allclose(rd.from_plane(pt), s, atol=1e-13)
    assert np.linalg.norm(pt.as_array()) == pytest.approx(np.linalg.norm(s), abs=1e-12)


def test_zeta_is_frozen_and_plane_field_matches():
    for s in random_states(5, 20):
        pf = rd.pushforward(s, GEN)
        pt = rd.to_plane(s)
        assert abs(pf[0]) < 1e-13 * np.abs(pf).sum()
        assert np.allclose(pf[1:], rd.reduced_rhs(pt.eta, pt.xi, GEN), rtol=1e-12, atol=1e-12)


def test_reduced_singular():
    with pytest.raises(ReducedSingular):
        rd.reduced_rhs(0.0, 1.0, GEN)


def test_reduced_potential_gradient_by_finite_differences():
    for s in random_states(6, 10, sort=True):
        pt = rd.to_plane(s)
        x = np.array([pt.eta.real, pt.xi.real])
        fd = gradient(lambda y: rd.reduced_potential(y[0], y[1], GEN), x)
        assert np.allclose(rd.reduced_rhs(*x, GEN), fd, rtol=1e-7)


def test_potential_offset_is_constant():
    offsets = []
    for s in random_states(7, 10, sort=True):
        pt = rd.to_plane(s)
        offsets.append(cs.potential(s, GEN).real - rd.reduced_potential(pt.eta.real, pt.xi.real, GEN))
    assert np.ptp(offsets) < 1e-12
    assert offsets[0] == pytest.approx((GEN.c - GEN.a - GEN.b) * math.log(2) / 2)


def test_slope_homogeneous_and_consistent():
    e, x = 0.7, 1.9
    ed, xd = rd.reduced_rhs(e, x, GEN)
    sl = rd.characteristic_slope(e, x, GEN)
    assert sl == pytest.approx(xd / ed, rel=1e-12)
    for k in (2.0, -3.0, 0.5):
        assert rd.characteristic_slope(k * e, k * x, GEN) == pytest.approx(sl, rel=1e-12)


def test_vertical_slope():
    # den = (a+b+c) eta^2 - 3 c xi^2 vanishes on eta = xi for a=b=c=1
    with pytest.raises(VerticalSlope):
        rd.characteristic_slope(1.0, 1.0, FULL)


def test_h_full_in_plane_coordinates():
    for s in random_states(8, 10):
        pt = rd.to_plane(s)
        assert cs.h_full(s) == pytest.approx(rd.h_full_plane(pt.eta, pt.xi), rel=1e-12, abs=1e-12)


def test_symplectic_calibration_constant():
    ks = []
    for s in random_states(9, 20, accept=lambda x: abs(rd.to_plane(x).eta) > 0.05):
        pt = rd.to_plane(s)
        k, res, scale = rd.symplectic_residual(pt.eta.real, pt.xi.real, FULL, rd.conformal_factor_full,
                                               rd.grad_h_full_plane)
        assert res <= 1e-12 * scale
        ks.append(k)
    assert np.allclose(ks, -math.sqrt(3), rtol=1e-12)


def test_invariant_density_is_reciprocal_factor():
    e, x = 0.6, 1.3

    def inv(a, b):
        return 1 / rd.conformal_factor_full(a, b)

    r_inv, sc = rd.liouville_residual(inv, e, x, FULL)
    assert abs(r_inv) <= 1e-6 * sc
    r_phi, sc = rd.liouville_residual(rd.conformal_factor_full, e, x, FULL)
    assert abs(r_phi) > 1e-3 * sc


def test_reduced_divergence_matches_analytic_laplacian():
    # Laplacian of c ln eta + b ln(sqrt3 xi + eta) + a ln(sqrt3 xi - eta)
    e, x = 0.5, 1.2
    a, b, c = GEN.a, GEN.b, GEN.c
    dp, dm = math.sqrt(3) * x + e, math.sqrt(3) * x - e
    exact = -c / e ** 2 - 4 * b / dp ** 2 - 4 * a / dm ** 2
    assert rd.reduced_divergence(e, x, GEN) == pytest.approx(exact, rel=1e-6)


def test_potential_gradient_plane_equals_field():
    s = np.array([2.0, -1.0, 0.5], dtype=complex)
    g = rd.potential_gradient_plane(s, GEN)
    assert np.allclose(g, rd.pushforward(s, GEN), atol=1e-13)
    assert np.allclose(auxiliary_rhs(s, GEN), rd.from_plane(rd.PlanePoint(*rd.pushforward(s, GEN))), atol=1e-13)
