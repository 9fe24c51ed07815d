"""Bound-state basis of the hyperbolic Landau level ``m``.

The unnormalised basis functions are

    phi_k(z) = (-1)^min(m,k) (1-|z|^2)^(-m) |z|^|m-k| e^{i(k-m) arg z}
               P_min(m,k)^(|m-k|, 2(nu-m)-1)(1 - 2|z|^2)

with squared norms ``norm_sq(params, k)`` in ``L^{2,nu}``.  At ``z = 0``
the factor ``|z|^|m-k| e^{i(k-m) arg z}`` is taken as 0 for ``k != m`` and
absent for ``k == m``.

The Landau Hamiltonian is applied by finite differences to check that the
basis functions are eigenfunctions.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, StepError
from .params import SpectralParams
from .quadrature import DiskQuadrature, disk_grid, disk_weights
from .specfun import gauss_2f1, jacobi_p, jacobi_t_coefficients, ln_gamma, pochhammer

__all__ = [
    "SpectralParams",
    "phi",
    "phi_hypergeometric",
    "phi_szego",
    "norm_sq",
    "norm_sq_hypergeometric",
    "normalized_phi",
    "basis_function",
    "gram_matrix",
    "landau_energy",
    "sigma_energy",
    "hamiltonian_apply",
    "eigen_report",
    "eigen_residual",
    "SAMPLE_RADII",
    "SAMPLE_ANGLES",
]

SAMPLE_RADII = (0.2, 0.45, 0.7)
SAMPLE_ANGLES = tuple(2.0 * math.pi * j / 8 for j in range(8))


def _check_disk(z):
    z = np.asarray(z, dtype=complex)
    r = np.abs(z)
    if np.any(r >= 1.0):
        raise DomainError("basis functions are defined for |z| < 1 only")
    return z, r


def _with_phase(radial, z, n):
    # radial * e^{i n arg z}
    if n == 0:
        return radial.astype(complex)
    theta = n * np.angle(z)
    out = np.empty(np.shape(z), dtype=complex)
    out.real = radial * np.cos(theta)
    out.imag = radial * np.sin(theta)
    return out


def _ret(out, scalar):
    return complex(out) if scalar else out


def phi(params: SpectralParams, k: int, z):
    """Unnormalised basis function ``phi_k^{nu,m}(z)`` (Jacobi form)."""
    scalar = np.ndim(z) == 0
    z, r = _check_disk(z)
    m = params.m
    n = k - m
    t = r * r
    radial = jacobi_p(min(m, k), abs(n), params.beta, 1.0 - 2.0 * t) if m > 0 else np.ones_like(t)
    if n:
        radial = radial * r ** abs(n)
    if m:
        radial = radial * (-1.0) ** min(m, k) * (1.0 - t) ** (-m)
    return _ret(_with_phase(radial, z, n), scalar)


def phi_hypergeometric(params: SpectralParams, k: int, z):
    """Basis function in the terminating 2F1 form (no Jacobi normalisation)."""
    scalar = np.ndim(z) == 0
    z, r = _check_disk(z)
    m, nu = params.m, params.nu
    d = abs(m - k)
    a = -m + (m - k + d) / 2
    b = 2 * nu - m + (d - m + k) / 2
    t = r * r
    hyp = np.vectorize(lambda x: gauss_2f1(a, b, 1 + d, x))(t)
    out = _with_phase((1.0 - t) ** (-m) * r ** d * hyp, z, k - m)
    return _ret(out, scalar)


def phi_szego(params: SpectralParams, k: int, z):
    """``phi_k`` written as ``z^(k-m) P_m^(k-m, beta)`` for every ``k``.

    For ``k < m`` the first Jacobi index is negative; the polynomial is summed
    from explicit coefficients, so this path does not go through
    :func:`jacobi_p`.  The constant ``m! Gamma(k+beta+1) / (k! Gamma(m+beta+1))``
    comes from the index-shift identity.
    """
    scalar = np.ndim(z) == 0
    z, r = _check_disk(z)
    m, beta = params.m, params.beta
    t = r * r
    coef = jacobi_t_coefficients(m, k - m, beta)
    if k >= m:
        poly = np.polynomial.polynomial.polyval(t, coef)
        out = (-1.0) ** m * (1.0 - t) ** (-m) * z ** (k - m) * poly
    else:
        s = m - k
        # P_m^(-s, beta)(1-2t) = t^s * q(t); the low coefficients vanish
        q = np.polynomial.polynomial.polyval(t, coef[s:])
        const = math.exp(math.lgamma(m + 1) + ln_gamma(k + beta + 1)
                         - math.lgamma(k + 1) - ln_gamma(m + beta + 1))
        out = (-1.0) ** m * const * (1.0 - t) ** (-m) * np.conj(z) ** s * q
    return _ret(out, scalar)


def norm_sq(params: SpectralParams, k: int) -> float:
    """Squared ``L^{2,nu}`` norm of :func:`phi`.

    ``pi/(2(nu-m)-1) * (m v k)! Gamma(2(nu-m) + m ^ k) / ((m ^ k)! Gamma(2(nu-m) + m v k))``
    """
    m = params.m
    lo, hi = min(m, k), max(m, k)
    two = 2.0 * (params.nu - m)
    return math.pi / (two - 1.0) * math.exp(
        math.lgamma(hi + 1) + ln_gamma(two + lo) - math.lgamma(lo + 1) - ln_gamma(two + hi))


def norm_sq_hypergeometric(params: SpectralParams, k: int) -> float:
    """Squared norm of :func:`phi_hypergeometric` (2F1-normalised basis)."""
    m, nu = params.m, params.nu
    d = abs(m - k)
    lo_shift = (d + m - k) / 2
    hi_shift = (d - m + k) / 2
    logv = (2 * math.lgamma(1 + d) + ln_gamma(m - lo_shift + 1) + ln_gamma(2 * nu - m - lo_shift)
            - ln_gamma(m + hi_shift + 1) - ln_gamma(2 * nu - m + hi_shift))
    return math.pi / (2 * (nu - m) - 1) * math.exp(logv)


def normalized_phi(params: SpectralParams, k: int, z):
    """Orthonormal basis function ``Phi_k = phi_k / sqrt(norm_sq)``."""
    return phi(params, k, z) / math.sqrt(norm_sq(params, k))


def basis_function(params: SpectralParams, k: int):
    """``Phi_k`` as a one-argument callable."""
    scale = 1.0 / math.sqrt(norm_sq(params, k))

    def f(z):
        return scale * phi(params, k, z)

    return f


def gram_matrix(params: SpectralParams, kmax: int, quad: DiskQuadrature) -> np.ndarray:
    """Matrix of ``<Phi_j, Phi_k>`` for ``0 <= j, k <= kmax`` under the disk rule.

    Each entry is reduced over the flattened grid in node order.
    """
    z = disk_grid(quad)
    w = disk_weights(quad, params).ravel()
    vals = np.stack([normalized_phi(params, k, z).ravel() for k in range(kmax + 1)])
    g = np.empty((kmax + 1, kmax + 1), dtype=complex)
    for j in range(kmax + 1):
        for k in range(kmax + 1):
            g[j, k] = np.sum(vals[j] * np.conj(vals[k]) * w)
    return g


def landau_energy(params: SpectralParams) -> float:
    """Level energy ``4(nu-m)(1-nu+m)`` of the Landau Hamiltonian."""
    nu, m = params.nu, params.m
    return 4.0 * (nu - m) * (1.0 - nu + m)


def sigma_energy(params: SpectralParams) -> float:
    """Level energy ``4m(sigma-1-m)`` of the shifted operator, ``sigma = 2 nu``."""
    m = params.m
    return 4.0 * m * (2.0 * params.nu - 1.0 - m)


def hamiltonian_apply(params: SpectralParams, f, z, h: float = 1e-4, conjugation: float = 1.0):
    """Apply ``Q^{-1} H_nu Q`` to ``f`` at the points ``z`` by finite differences.

    ``H_nu = 4 L_nu - 4 nu^2`` with the magnetic Laplacian

        L_nu = -(1-|z|^2)^2 d_z d_zbar - nu z (1-|z|^2) d_z + nu zbar (1-|z|^2) d_zbar + nu^2 |z|^2

    and ``Q f = (1-|z|^2)^(conjugation * nu) f``.  ``conjugation=+1`` is the
    map that is unitary from ``L^{2,nu}`` onto ``L^{2,0}``.  The stencil is the
    5-point Laplacian plus central first differences, both ``O(h^2)``.
    """
    if not 1e-7 <= h <= 1e-2:
        raise StepError(f"grid step {h} outside the stable range [1e-7, 1e-2]")
    z = np.asarray(z, dtype=complex)
    nu = params.nu
    p = conjugation * nu

    def u(w):
        return (1.0 - np.abs(w) ** 2) ** p * f(w)

    u0 = u(z)
    uxp, uxm = u(z + h), u(z - h)
    uyp, uym = u(z + 1j * h), u(z - 1j * h)
    lap = (uxp + uxm + uyp + uym - 4.0 * u0) / (h * h)
    ux = (uxp - uxm) / (2.0 * h)
    uy = (uyp - uym) / (2.0 * h)
    d_z = 0.5 * (ux - 1j * uy)
    d_zbar = 0.5 * (ux + 1j * uy)
    s = 1.0 - np.abs(z) ** 2
    magnetic = (-s * s * 0.25 * lap - nu * z * s * d_z + nu * np.conj(z) * s * d_zbar
                + nu * nu * np.abs(z) ** 2 * u0)
    return (4.0 * magnetic - 4.0 * nu * nu * u0) / s ** p


def _sample_points():
    return np.array([r * complex(math.cos(a), math.sin(a)) for r in SAMPLE_RADII for a in SAMPLE_ANGLES])


def eigen_report(params: SpectralParams, k: int, grid_step: float = 1e-4, conjugation: float = 1.0):
    """Rayleigh-quotient energy and eigen-residual of ``Phi_k`` on the sample set.

    Returns
    -------
    (energy, residual)
        ``energy`` is ``sum conj(Phi) H Phi / sum |Phi|^2`` over the 24 sample
        points; ``residual`` is ``max |H Phi - energy Phi| / max(1, |Phi|)``.
    """
    z = _sample_points()
    f = basis_function(params, k)
    vals = f(z)
    hv = hamiltonian_apply(params, f, z, grid_step, conjugation)
    energy = float(np.real(np.sum(np.conj(vals) * hv) / np.sum(np.abs(vals) ** 2)))
    residual = float(np.max(np.abs(hv - energy * vals) / np.maximum(1.0, np.abs(vals))))
    return energy, residual


def eigen_residual(params: SpectralParams, k: int, grid_step: float = 1e-4) -> float:
    """Finite-difference eigen-residual of ``Phi_k`` (see :func:`eigen_report`)."""
    return eigen_report(params, k, grid_step)[1]
