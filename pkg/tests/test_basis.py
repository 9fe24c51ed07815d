import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logpot.basis import (
    eigen_report,
    eigen_residual,
    gram_matrix,
    landau_energy,
    norm_sq,
    norm_sq_hypergeometric,
    normalized_phi,
    phi,
    phi_hypergeometric,
    phi_szego,
    sigma_energy,
)
from logpot.errors import DomainError, ParameterError, StepError
from logpot.params import SpectralParams
from logpot.quadrature import build_disk_rule, weighted_inner_product

TEST_PAIRS = [(1.0, 0), (2.0, 0), (2.0, 1), (3.5, 2)]

disk_points = st.builds(
    lambda r, a: r * cmath.exp(1j * a),
    st.floats(0.0, 0.95),
    st.floats(0.0, 2 * math.pi),
)


# --- parameters -------------------------------------------------------------

def test_params_invariants():
    with pytest.raises(ParameterError, match="2ν>1"):
        SpectralParams(0.4, 0)
    with pytest.raises(ParameterError, match="m ≤"):
        SpectralParams(2.0, 3)
    with pytest.raises(ParameterError):
        SpectralParams(2.0, -1)
    p = SpectralParams(3.5, 2)
    assert p.beta == 2.0
    assert p.weight_exponent == 5.0


# --- phi --------------------------------------------------------------------

def test_phi_examples():
    p = SpectralParams(1.0, 0)
    assert phi(p, 0, 0.3 + 0.4j) == 1.0
    assert phi(p, 2, 0.5) == pytest.approx(0.25, abs=1e-16)
    # frozen from an mpmath evaluation of the Jacobi form
    q = SpectralParams(2.5, 1)
    assert phi(q, 3, 0.6j) == pytest.approx(0.4725, abs=1e-14)
    assert phi_szego(q, 3, 0.6j) == pytest.approx(0.4725, abs=1e-14)


def test_phi_at_origin():
    p = SpectralParams(2.0, 1)
    assert phi(p, 3, 0.0) == 0.0
    assert phi(p, 0, 0.0) == 0.0
    # P_1^(0,1)(1) = 1, sign (-1)^1
    assert phi(p, 1, 0.0) == -1.0


def test_phi_domain():
    with pytest.raises(DomainError):
        phi(SpectralParams(1.0, 0), 1, 1.0)
    with pytest.raises(DomainError):
        phi(SpectralParams(1.0, 0), 1, np.array([0.2, 0.99 + 0.2j]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 12), disk_points)
def test_m0_reduces_to_monomial(k, z):
    p = SpectralParams(1.7, 0)
    assert phi(p, k, z) == pytest.approx(z ** k, abs=1e-14)


@pytest.mark.parametrize("nu, m", [(2.0, 1), (3.5, 2), (2.5, 1), (4.0, 3)])
def test_index_symmetry_forms_agree(nu, m):
    p = SpectralParams(nu, m)
    z = np.array([0.1 + 0.2j, -0.5 + 0.3j, 0.7j, 0.85])
    for k in range(0, m + 6):
        assert np.allclose(phi(p, k, z), phi_szego(p, k, z), atol=1e-10, rtol=1e-10)


@pytest.mark.parametrize("nu, m", TEST_PAIRS + [(2.5, 1)])
def test_hypergeometric_form_is_proportional(nu, m):
    p = SpectralParams(nu, m)
    z = np.array([0.1 + 0.2j, -0.5 + 0.3j, 0.7j])
    for k in range(8):
        a, b = phi(p, k, z), phi_hypergeometric(p, k, z)
        ratio = a / b
        assert np.allclose(ratio, ratio[0], rtol=1e-12)
        assert abs(ratio[0]) ** 2 == pytest.approx(norm_sq(p, k) / norm_sq_hypergeometric(p, k), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(TEST_PAIRS), st.integers(0, 10), disk_points, st.floats(0.0, 2 * math.pi))
def test_rotation_covariance(pair, k, z, angle):
    p = SpectralParams(*pair)
    lam = cmath.exp(1j * angle)
    assert phi(p, k, lam * z) == pytest.approx(lam ** (k - p.m) * phi(p, k, z), rel=1e-12, abs=1e-12)


# --- norms ------------------------------------------------------------------

def test_norm_sq_examples():
    assert norm_sq(SpectralParams(1.0, 0), 0) == pytest.approx(math.pi, rel=1e-15)
    assert norm_sq(SpectralParams(1.0, 0), 1) == pytest.approx(math.pi / 2, rel=1e-15)
    # mpmath quadrature of |phi|^2 (1-t)^2 over the disk gives 2 pi / 5
    assert norm_sq(SpectralParams(2.0, 1), 4) == pytest.approx(1.2566370614359173, rel=1e-8)


@pytest.mark.parametrize("nu, m", TEST_PAIRS)
def test_norm_sq_matches_quadrature(nu, m):
    p = SpectralParams(nu, m)
    quad = build_disk_rule(64, 64)
    for k in range(8):
        got = weighted_inner_product(lambda z: phi(p, k, z), lambda z: phi(p, k, z), p, quad)
        assert got.real == pytest.approx(norm_sq(p, k), rel=1e-10)


def test_normalized_phi_examples():
    p = SpectralParams(1.0, 0)
    assert normalized_phi(p, 0, 0.37 - 0.1j) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    # frozen from mpmath: phi / sqrt(quadrature norm)
    assert normalized_phi(SpectralParams(2.5, 1), 2, 0.4) == pytest.approx(-0.64478809548315004, rel=1e-12)


# --- Gram -------------------------------------------------------------------

def test_gram_small_is_identity():
    g = gram_matrix(SpectralParams(1.0, 0), 3, build_disk_rule())
    assert np.max(np.abs(g - np.eye(4))) < 1e-10


def test_gram_level_two():
    g = gram_matrix(SpectralParams(3.0, 2), 10, build_disk_rule())
    assert np.max(np.abs(g - np.eye(11))) < 1e-8


def test_gram_is_deterministic():
    p, q = SpectralParams(2.0, 1), build_disk_rule(32, 64)
    a = gram_matrix(p, 5, q)
    b = gram_matrix(p, 5, q)
    assert np.array_equal(a, b)


# --- eigenrelation ----------------------------------------------------------

def test_energy_formulas():
    assert landau_energy(SpectralParams(2.5, 1)) == -3.0
    assert sigma_energy(SpectralParams(2.5, 1)) == 12.0
    assert landau_energy(SpectralParams(1.0, 0)) == 0.0


@pytest.mark.parametrize("nu, m, k, tol", [(1.0, 0, 0, 1e-5), (2.5, 0, 3, 1e-4), (2.5, 1, 3, 1e-4)])
def test_eigen_residual_examples(nu, m, k, tol):
    assert eigen_residual(SpectralParams(nu, m), k, 1e-4) <= tol


@pytest.mark.parametrize("nu, m", [(2.5, 1), (3.5, 2), (2.0, 0)])
def test_rayleigh_energy_is_level_energy(nu, m):
    p = SpectralParams(nu, m)
    energies = [eigen_report(p, k)[0] for k in range(6)]
    assert max(energies) - min(energies) < 1e-3
    # the oracle picks 4(nu-m)(1-nu+m), not 4m(2nu-1-m)
    assert np.allclose(energies, landau_energy(p), atol=1e-3)
    if sigma_energy(p) != landau_energy(p):
        assert not np.allclose(energies, sigma_energy(p), atol=1e-1)


def test_wrong_conjugation_is_not_an_eigenfunction():
    p = SpectralParams(2.5, 1)
    assert eigen_report(p, 3, conjugation=-1.0)[1] > 1e-2


@pytest.mark.parametrize("h", [0.0, 1e-9, 0.1])
def test_step_bounds(h):
    with pytest.raises(StepError):
        eigen_residual(SpectralParams(1.0, 0), 0, h)
