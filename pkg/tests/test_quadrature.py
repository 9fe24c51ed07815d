import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logpot.basis import basis_function
from logpot.errors import DomainError, SingularityError, SizeError
from logpot.params import SpectralParams
from logpot.quadrature import (
    angular_log_integral,
    angular_log_integral_numeric,
    build_disk_rule,
    disk_grid,
    disk_weights,
    transform_numeric,
    weighted_inner_product,
)

NU1 = SpectralParams(1.0, 0)


# --- rule -------------------------------------------------------------------

def test_rule_weights_sum_to_one():
    for n in (2, 7, 64, 200):
        assert abs(build_disk_rule(n, 8).w.sum() - 1.0) < 1e-14


@pytest.mark.parametrize("n_radial, n_angular", [(1, 16), (8, 7), (8, 6), (8, 9), (2.5, 16)])
def test_rule_size_errors(n_radial, n_angular):
    with pytest.raises(SizeError):
        build_disk_rule(n_radial, n_angular)


def test_rule_integrals():
    q = build_disk_rule(8, 16)
    one = lambda z: np.ones_like(z)  # noqa: E731
    assert weighted_inner_product(one, one, NU1, q).real == pytest.approx(math.pi, abs=1e-13)
    assert weighted_inner_product(lambda z: z, lambda z: z, NU1, q).real == pytest.approx(math.pi / 2, abs=1e-13)
    assert weighted_inner_product(one, one, SpectralParams(2.0, 0), q).real == pytest.approx(math.pi / 3, abs=1e-13)


def test_inner_product_examples():
    q = build_disk_rule()
    assert weighted_inner_product(lambda z: z, lambda z: z * z, NU1, q) == pytest.approx(0.0, abs=1e-14)
    p = SpectralParams(2.0, 1)
    for k in (0, 1, 4):
        phi = basis_function(p, k)
        assert weighted_inner_product(phi, phi, p, q).real == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [2, 5, 16])
def test_radial_exactness(n):
    q = build_disk_rule(n, 8)
    for d in range(2 * n):
        assert abs(np.sum(q.w * q.t ** d) - 1.0 / (d + 1)) < 1e-13


def test_angular_aliasing():
    q = build_disk_rule(4, 16)
    theta = q.angles()
    for ell in range(1, 16):
        assert abs(np.sum(np.exp(1j * ell * theta))) < 1e-12
    assert abs(np.sum(np.exp(16j * theta))) == pytest.approx(16.0)


def test_grid_and_weights_shapes():
    q = build_disk_rule(6, 10)
    assert disk_grid(q).shape == (6, 10)
    assert disk_weights(q, NU1).sum() == pytest.approx(math.pi, rel=1e-14)


# --- angular log integral ------------------------------------------------------

@pytest.mark.parametrize("n, rho, r, expected", [
    (0, 0.5, 0.25, math.log(2.0)),
    (0, 0.25, 0.5, math.log(2.0)),
    (2, 0.5, 0.25, 1.0 / 16.0),
])
def test_angular_log_examples(n, rho, r, expected):
    assert angular_log_integral_numeric(n, rho, r).real == pytest.approx(expected, abs=1e-12)
    assert angular_log_integral(n, rho, r).real == pytest.approx(expected, abs=1e-15)


def test_angular_log_closed_form_grid():
    grid = (0.1, 0.3, 0.5, 0.7, 0.9)
    for n in range(7):
        for rho in grid:
            for r in grid:
                if rho == r:
                    continue
                assert abs(angular_log_integral_numeric(n, rho, r) - angular_log_integral(n, rho, r)) < 1e-9


@pytest.mark.parametrize("n", [0, 1, 3])
def test_angular_log_continuity(n):
    rho = 0.4
    a = angular_log_integral_numeric(n, rho, rho + 1e-6)
    b = angular_log_integral_numeric(n, rho, rho - 1e-6)
    assert abs(a - b) < 1e-4


def test_angular_log_phase():
    assert angular_log_integral(3, 0.2, 0.6, t=0.7) == pytest.approx(
        angular_log_integral(3, 0.2, 0.6) * cmath.exp(2.1j), abs=1e-15)


# --- transform oracle ---------------------------------------------------------

def test_transform_of_zero():
    q = build_disk_rule()
    z = np.array([0.0, 0.3 + 0.1j, -0.8j])
    assert np.all(transform_numeric(lambda w: np.zeros_like(w), z, NU1, q) == 0)


def test_transform_domain():
    with pytest.raises(DomainError):
        transform_numeric(lambda w: w, 1.0, NU1, build_disk_rule())


def test_transform_unknown_method():
    with pytest.raises(ValueError):
        transform_numeric(lambda w: w, 0.5, NU1, build_disk_rule(), method="simpson")


def test_transform_reference_value():
    # L_1[xi / sqrt(pi/2)](0.5); frozen from a 2-D mpmath quadrature split at r = 0.5
    f = basis_function(NU1, 1)
    coarse = transform_numeric(f, 0.5, NU1, build_disk_rule(64, 128))
    fine = transform_numeric(f, 0.5, NU1, build_disk_rule(128, 256))
    assert abs(coarse - fine) < 1e-8
    assert coarse == pytest.approx(0.548324935075531, abs=1e-12)


def test_transform_monopole():
    # for a radial f, the potential at 0 is int f (-log r) dmu; f = 1/sqrt(pi) gives sqrt(pi)/2
    f = basis_function(NU1, 0)
    q = build_disk_rule()
    assert transform_numeric(f, 0.0, NU1, q) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-14)
    for rho in (1e-6, 0.3, 0.9):
        assert transform_numeric(f, rho, NU1, q).real == pytest.approx(math.sqrt(math.pi) * (1 - rho * rho) / 2,
                                                                        abs=1e-13)


@pytest.mark.parametrize("pair", [(1.0, 0), (2.0, 1), (3.5, 2), (1.25, 0)])
def test_product_and_ring_methods_agree(pair):
    p = SpectralParams(*pair)
    q = build_disk_rule()
    z = np.array([0.0, 1e-3, 0.01 + 0.01j, 0.2, 0.5j, -0.7 + 0.1j, 0.95])
    # a non-polynomial weight (1-t)^(2nu-2) makes both rules converge only algebraically
    tol = 1e-12 if p.weight_exponent == int(p.weight_exponent) else 1e-6
    for k in (0, p.m, p.m + 1, p.m + 5):
        f = basis_function(p, k)
        a = transform_numeric(f, z, p, q)
        b = transform_numeric(f, z, p, q, method="ring")
        assert np.max(np.abs(a - b)) < tol


def test_direct_method_converges_slowly_but_agrees():
    f = basis_function(NU1, 1)
    z = 0.5 * cmath.exp(0.3j)
    q = build_disk_rule(200, 400)
    exact = transform_numeric(f, z, NU1, q)
    assert abs(transform_numeric(f, z, NU1, q, method="direct") - exact) < 1e-3


def test_direct_method_node_collision():
    q = build_disk_rule(16, 16)
    with pytest.raises(SingularityError):
        transform_numeric(lambda w: w, math.sqrt(q.t[3]), NU1, q, method="direct")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 5), st.floats(0.0, 0.9), st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
def test_rotation_commutation(k, r, arg, angle):
    p = SpectralParams(2.0, 1)
    q = build_disk_rule(32, 64)
    f = basis_function(p, k)
    lam = cmath.exp(1j * angle)
    z = r * cmath.exp(1j * arg)
    left = transform_numeric(lambda w: f(lam * w), z, p, q)
    right = transform_numeric(f, lam * z, p, q)
    assert abs(left - right) < 1e-9


@pytest.mark.parametrize("pair", [(1.0, 0), (2.0, 1), (3.5, 2)])
def test_doubling_certification(pair):
    p = SpectralParams(*pair)
    z = np.array([0.05, 0.3 + 0.4j, -0.75, 0.9j])
    q = build_disk_rule()
    for k in (0, p.m, p.m + 3, 12):
        f = basis_function(p, k)
        assert np.max(np.abs(transform_numeric(f, z, p, q) - transform_numeric(f, z, p, q.doubled()))) < 1e-8
