"""Quadrature on the weighted unit disk and the brute-force transform oracle.

The disk rule is a tensor product of Gauss-Legendre nodes in ``t = r**2`` and
equispaced angles.  In these coordinates ``dmu = (1/2) dt dtheta``, so a rule
with ``n_radial`` nodes integrates ``p(t) e^{i l theta}`` exactly for
``deg p <= 2 n_radial - 1`` and ``|l| < n_angular``.

:func:`transform_numeric` evaluates

    L_nu[f](z) = int_D f(xi) log(1/|xi - z|) (1 - |xi|^2)^(2nu-2) dmu(xi)

directly from samples of ``f``.  The angular integral is done by product
integration: the discrete Fourier coefficients of ``f`` on each node ring are
paired with the exact Fourier coefficients of the log kernel.  The radial
integral runs over Gauss-Legendre panels whose edges include every ``|z|^2``
(where the kernel has a kink) and a geometric grading towards ``t = 0``
(where ``-log r`` is singular).  For polynomial-times-band-limited ``f`` the
integrand is polynomial in ``t`` on each panel away from 0, so the panels
are exact there.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, SizeError
from .params import SpectralParams

__all__ = [
    "DiskQuadrature",
    "build_disk_rule",
    "disk_grid",
    "disk_weights",
    "weighted_inner_product",
    "transform_numeric",
    "angular_log_integral",
    "angular_log_integral_numeric",
    "DEFAULT_N_RADIAL",
    "DEFAULT_N_ANGULAR",
]

DEFAULT_N_RADIAL = 64
DEFAULT_N_ANGULAR = 256


@dataclass(frozen=True, eq=False)
class DiskQuadrature:
    """Gauss-Legendre nodes ``t`` with weights ``w`` on ``[0, 1]`` plus an angular count."""

    t: np.ndarray
    w: np.ndarray
    n_angular: int

    def __post_init__(self):
        for arr in (self.t, self.w):
            arr.setflags(write=False)

    @property
    def n_radial(self) -> int:
        return len(self.t)

    @property
    def radial_nodes(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.w.tolist()))

    def angles(self, offset: float = 0.0) -> np.ndarray:
        return offset + 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular

    def panel(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Radial nodes and weights mapped from ``[0, 1]`` to ``[a, b]``."""
        return a + (b - a) * self.t, (b - a) * self.w

    def doubled(self) -> "DiskQuadrature":
        return build_disk_rule(2 * self.n_radial, 2 * self.n_angular)


def build_disk_rule(n_radial: int = DEFAULT_N_RADIAL, n_angular: int = DEFAULT_N_ANGULAR) -> DiskQuadrature:
    """Tensor-product rule on the unit disk.

    Raises
    ------
    SizeError
        If ``n_radial < 2`` or ``n_angular`` is odd or below 8.
    """
    if int(n_radial) != n_radial or n_radial < 2:
        raise SizeError(f"n_radial must be an integer >= 2, got {n_radial}")
    if int(n_angular) != n_angular or n_angular < 8 or n_angular % 2:
        raise SizeError(f"n_angular must be an even integer >= 8, got {n_angular}")
    x, wx = np.polynomial.legendre.leggauss(int(n_radial))
    t = 0.5 * (x + 1.0)
    w = 0.5 * wx
    return DiskQuadrature(t=t, w=w, n_angular=int(n_angular))


def disk_grid(quad: DiskQuadrature, offset: float = 0.0) -> np.ndarray:
    """Complex nodes, shape ``(n_radial, n_angular)``."""
    r = np.sqrt(quad.t)[:, None]
    return r * np.exp(1j * quad.angles(offset))[None, :]


def disk_weights(quad: DiskQuadrature, params: SpectralParams) -> np.ndarray:
    """Weights of ``(1-|z|^2)^(2nu-2) dmu`` on :func:`disk_grid`."""
    radial = 0.5 * quad.w * (1.0 - quad.t) ** params.weight_exponent
    return np.repeat(radial[:, None] * (2.0 * np.pi / quad.n_angular), quad.n_angular, axis=1)


def weighted_inner_product(f, g, params: SpectralParams, quad: DiskQuadrature) -> complex:
    """``int f conj(g) (1-|xi|^2)^(2nu-2) dmu`` by the disk rule."""
    z = disk_grid(quad)
    vals = np.asarray(f(z)) * np.conj(np.asarray(g(z))) * disk_weights(quad, params)
    return complex(np.sum(vals.ravel()))


def angular_log_integral(n: int, rho: float, r: float, t: float = 0.0) -> complex:
    """``-(1/2pi) int_0^{2pi} e^{i n theta} log|rho e^{it} - r e^{i theta}| dtheta``.

    Equals ``-log max(rho, r)`` for ``n == 0`` and
    ``(min/max)^|n| e^{i n t} / (2|n|)`` otherwise.
    """
    hi = max(rho, r)
    lo = min(rho, r)
    if n == 0:
        return complex(-math.log(hi))
    return (lo / hi) ** abs(n) / (2.0 * abs(n)) * complex(math.cos(n * t), math.sin(n * t))


def angular_log_integral_numeric(n: int, rho: float, r: float, n_theta: int = 8192) -> complex:
    """Midpoint-offset trapezoid value of :func:`angular_log_integral` at ``t = 0``."""
    theta = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
    vals = np.exp(1j * n * theta) * np.log(np.abs(rho - r * np.exp(1j * theta)))
    return complex(-np.sum(vals) / n_theta)


def _log_grading(lo: float) -> list[float]:
    # edges 4^-j in (lo, 1); -log r has a log singularity at t = 0, so panels
    # near it must shrink geometrically
    out, e = [], 0.25
    while e > lo:
        out.append(e)
        e /= 4.0
    return out


def _radial_panels(rho2: float) -> list[tuple[float, float]]:
    """Panel edges in ``t``: split at the kink ``rho^2``.

    The ``-log r`` kernel is singular at ``t = 0``; panels are graded
    geometrically towards 0 (down to ``1e-14`` when ``rho = 0``, down to
    ``rho^2`` otherwise).
    """
    floor = rho2 if rho2 > 0.0 else 1e-14
    edges = sorted({0.0, 1.0, *(_log_grading(floor)), *([rho2] if rho2 > 0.0 else [])})
    if rho2 <= 0.0:
        edges.insert(1, edges[1] / 4.0)
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _kernel_coefficients(rho: float, r: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    # Fourier coefficients of -log|rho e^{it} - r e^{i theta}| in theta, shape (len(r), len(freqs))
    hi = np.maximum(rho, r)[:, None]
    lo = np.minimum(rho, r)[:, None]
    absf = np.abs(freqs)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.where(absf > 0, (lo / hi) ** absf / (2.0 * np.maximum(absf, 1)), 0.0)
    kern[:, freqs == 0] = -np.log(hi)
    return kern


def _ring_transform(f, rho: float, angles: np.ndarray, params: SpectralParams, quad: DiskQuadrature) -> np.ndarray:
    n_ang = quad.n_angular
    theta = quad.angles()
    freqs = np.fft.fftfreq(n_ang, 1.0 / n_ang)
    coeff = np.zeros(n_ang, dtype=complex)
    for a, b in _radial_panels(rho * rho):
        t, w = quad.panel(a, b)
        r = np.sqrt(t)
        samples = np.asarray(f(r[:, None] * np.exp(1j * theta)[None, :]), dtype=complex)
        fourier = np.fft.fft(samples, axis=1) / n_ang
        radial_w = 0.5 * w * (1.0 - t) ** params.weight_exponent
        coeff += 2.0 * np.pi * np.sum(radial_w[:, None] * fourier * _kernel_coefficients(rho, r, freqs), axis=0)
    return np.exp(1j * np.outer(angles, freqs)) @ coeff


@functools.lru_cache(maxsize=256)
def _unit_legendre(p: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(p)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_size(a: float, b: float, n_radial: int) -> int:
    # Panels touching t = 0 or t = 1 get the full count.  An interior panel of
    # relative width w sees a degree-D polynomial as roughly exp(-D w s), which
    # needs about D w / 2 nodes; n_radial * sqrt(w) + 8 is a safe margin.
    rel = (b - a) / min(b, 1.0 - a) if a > 0.0 and b < 1.0 else 1.0
    return min(n_radial, int(math.ceil(n_radial * math.sqrt(min(rel, 1.0))))) + 8


def _composite_panels(rho2: np.ndarray) -> list[float]:
    inner = [float(x) for x in rho2 if 0.0 < x < 1.0]
    floor = min(inner) if inner else 1.0
    if np.any(rho2 <= 0.0):
        floor = min(floor, 1e-14)
    return sorted({0.0, 1.0, *inner, *_log_grading(floor)})


def _product_transform(f, zs: np.ndarray, params: SpectralParams, quad: DiskQuadrature) -> np.ndarray:
    """Batched product integration on a composite panel grid.

    Every ``|z|^2`` is a panel edge, so the kink of the kernel always falls on
    a panel boundary.  ``f`` is sampled once; the two kernel pieces
    ``(r/rho)^|l|`` and ``(rho/r)^|l|`` are accumulated edge by edge with
    ratio rescaling, which keeps every factor at most 1.
    """
    n_ang = quad.n_angular
    theta = quad.angles()
    freqs = np.fft.fftfreq(n_ang, 1.0 / n_ang)
    absf = np.abs(freqs)
    half_inv = np.where(absf > 0, 0.5 / np.maximum(absf, 1.0), 0.0)
    radii = np.abs(zs)
    edges = _composite_panels(radii * radii)
    n_pan = len(edges) - 1
    nodes, weights, owner = [], [], []
    for i in range(n_pan):
        a, b = edges[i], edges[i + 1]
        t, w = _unit_legendre(_panel_size(a, b, quad.n_radial))
        nodes.append(a + (b - a) * t)
        weights.append((b - a) * w)
        owner.append(np.full(len(t), i))
    t = np.concatenate(nodes)
    w = np.concatenate(weights) * 0.5 * (1.0 - np.concatenate(nodes)) ** params.weight_exponent
    owner = np.concatenate(owner)
    r = np.sqrt(t)
    # weighted Fourier coefficients of f on every node ring, in chunks
    g = np.empty((len(t), n_ang), dtype=complex)
    ring = np.exp(1j * theta)[None, :]
    chunk = max(1, 2 ** 21 // n_ang)
    for s in range(0, len(t), chunk):
        samples = np.asarray(f(r[s:s + chunk, None] * ring), dtype=complex)
        g[s:s + chunk] = np.fft.fft(samples, axis=1) * (w[s:s + chunk, None] / n_ang)
    edge_r = np.sqrt(np.array(edges))
    log_r = np.log(r)
    # inner[i] = sum_{t < edge_i} g (r / R_i)^|l| ; inner0[i] = sum_{t < edge_i} g_0
    inner = np.zeros((n_pan + 1, n_ang), dtype=complex)
    for i in range(1, n_pan + 1):
        sel = owner == i - 1
        ratio = edge_r[i - 1] / edge_r[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            inner[i] = ratio ** absf * inner[i - 1] + np.sum(g[sel] * (r[sel, None] / edge_r[i]) ** absf, axis=0)
    # outer[i] = sum_{t > edge_i} g (R_i / r)^|l|, with -log r in place of the l = 0 kernel
    outer = np.zeros((n_pan + 1, n_ang), dtype=complex)
    log_outer = np.zeros(n_pan + 1, dtype=complex)
    for i in range(n_pan - 1, -1, -1):
        sel = owner == i
        ratio = edge_r[i] / edge_r[i + 1]
        outer[i] = ratio ** absf * outer[i + 1] + np.sum(g[sel] * (edge_r[i] / r[sel, None]) ** absf, axis=0)
        log_outer[i] = log_outer[i + 1] - np.sum(g[sel, 0] * log_r[sel])
    zero = freqs == 0
    out = np.empty(zs.shape, dtype=complex)
    index = {e: i for i, e in enumerate(edges)}
    for rho in np.unique(radii):
        i = index[float(rho * rho)] if rho > 0 else 0
        coeff = 2.0 * np.pi * (inner[i] + outer[i]) * half_inv
        log_in = -math.log(rho) * inner[i, 0] if rho > 0 else 0.0
        coeff[zero] = 2.0 * np.pi * (log_in + log_outer[i])
        sel = radii == rho
        out[sel] = np.exp(1j * np.outer(np.angle(zs[sel]), freqs)) @ coeff
    return out


def _direct_transform(f, z: complex, params: SpectralParams, quad: DiskQuadrature) -> complex:
    rho2 = abs(z) ** 2
    gap = np.min(np.abs(quad.t - rho2))
    if gap < 1e-12:
        raise SingularityError(f"|z|^2={rho2} coincides with a radial node")
    offset = 0.0
    step = 2.0 * np.pi / quad.n_angular
    if abs(z) > 0:
        frac = (math.atan2(z.imag, z.real) / step) % 1.0
        if min(frac, 1.0 - frac) < 1e-9:
            offset = 0.5 * step
    xi = disk_grid(quad, offset)
    vals = np.asarray(f(xi)) * (-np.log(np.abs(xi - z))) * disk_weights(quad, params)
    return complex(np.sum(vals.ravel()))


def transform_numeric(f, z, params: SpectralParams, quad: DiskQuadrature, method: str = "product"):
    """Quadrature value of the weighted logarithmic potential ``L_nu[f](z)``.

    Parameters
    ----------
    f : callable
        Vectorised function of a complex array of disk points.
    z : complex or array of complex
        Evaluation point(s), ``|z| < 1``.
    method : {"product", "ring", "direct"}
        ``"product"`` (default) is batched product integration on a composite
        panel grid with an edge at every ``|z|^2``.  ``"ring"`` redoes the
        product integration separately for each ``|z|`` with two full panels
        split at ``|z|^2``; it is slower and serves as a cross-check.
        ``"direct"`` is the plain tensor rule applied to the singular
        integrand; it converges slowly and is a brute-force check only.
    """
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(zs) >= 1.0):
        raise DomainError("transform_numeric needs |z| < 1")
    out = np.empty(zs.shape, dtype=complex)
    if method == "direct":
        for idx, zz in np.ndenumerate(zs):
            out[idx] = _direct_transform(f, complex(zz), params, quad)
    elif method == "product":
        out = _product_transform(f, zs.ravel(), params, quad).reshape(zs.shape)
    elif method == "ring":
        flat = zs.ravel()
        radii = np.abs(flat)
        res = np.empty(flat.shape, dtype=complex)
        for rho in np.unique(radii):
            sel = radii == rho
            res[sel] = _ring_transform(f, float(rho), np.angle(flat[sel]), params, quad)
        out = res.reshape(zs.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(out[0]) if scalar else out
