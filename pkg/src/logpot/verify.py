"""Verification suites run by ``logpot verify``.

Each suite returns a dict with ``pass``, ``worst`` (the largest residual it
saw), ``tol`` and suite-specific details.  Sample points are fixed constants;
nothing here is random.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .basis import basis_function, eigen_report, gram_matrix
from .params import SpectralParams
from .quadrature import DiskQuadrature, build_disk_rule, transform_numeric
from .spectrum import image_gram, singular_value_oracle
from .transform import ledger_lines, reconcile

__all__ = [
    "ROTATION_POINTS",
    "ROTATIONS",
    "suite_gram",
    "suite_rotation",
    "suite_image_gram",
    "suite_closed_vs_oracle",
    "suite_eigen",
    "suite_certification",
    "run_all",
]

# 12 interior points on three rings, angles chosen off any grid line
ROTATION_POINTS = tuple(r * cmath.exp(1j * (0.37 + 2.0 * math.pi * j / 4)) for r in (0.15, 0.5, 0.85) for j in range(4))
ROTATIONS = tuple(cmath.exp(2j * math.pi * (j + 0.25) / 8) for j in range(8))


def _suite(ok: bool, worst: float, tol: float, **details) -> dict:
    return {"pass": bool(ok), "worst": float(worst), "tol": tol, **details}


def suite_gram(params: SpectralParams, quad: DiskQuadrature, kmax: int = 10, tol: float = 1e-8) -> dict:
    """Orthonormality of ``Phi_0..Phi_kmax`` under the disk rule."""
    g = gram_matrix(params, kmax, quad)
    worst = float(np.max(np.abs(g - np.eye(kmax + 1))))
    return _suite(worst < tol, worst, tol, kmax=kmax)


def suite_rotation(params: SpectralParams, quad: DiskQuadrature, kmax: int = 5, tol: float = 1e-9) -> dict:
    """``L(R_lam Phi_k)(z) = (L Phi_k)(lam z)`` with ``(R_lam f)(z) = f(lam z)``."""
    z = np.array(ROTATION_POINTS)
    worst = 0.0
    for k in range(kmax + 1):
        phi = basis_function(params, k)
        for lam in ROTATIONS:
            left = transform_numeric(lambda w, lam=lam: phi(lam * w), z, params, quad)
            right = transform_numeric(phi, lam * z, params, quad)
            worst = max(worst, float(np.max(np.abs(left - right))))
    return _suite(worst < tol, worst, tol, kmax=kmax)


def suite_image_gram(params: SpectralParams, quad: DiskQuadrature, kmax: int = 10,
                     off_tol: float = 1e-8, diag_tol: float = 1e-7) -> dict:
    """Images ``L Phi_k`` are mutually orthogonal with squared norms ``lambda_k^2``."""
    g = image_gram(params, kmax, quad)
    off = float(np.max(np.abs(g - np.diag(np.diag(g)))))
    lam2 = np.array([singular_value_oracle(params, k, quad) ** 2 for k in range(kmax + 1)])
    diag = float(np.max(np.abs(np.real(np.diag(g)) - lam2) / lam2))
    return _suite(off < off_tol and diag < diag_tol, max(off, diag), off_tol,
                  off_diagonal=off, diagonal_rel=diag, diag_tol=diag_tol, kmax=kmax)


def suite_closed_vs_oracle(params: SpectralParams, quad: DiskQuadrature) -> tuple[dict, list[str]]:
    """Reconciliation of the closed-form action; passes only if every branch is VALID."""
    records = reconcile(params, quad)
    worst = max(r["max_rel_err"] for r in records)
    branches = {r["branch"]: {"status": r["status"], "max_rel_err": r["max_rel_err"],
                              "scaled_err": r["scaled_errors"][r["convention"]]} for r in records}
    ok = all(r["status"] == "VALID" for r in records)
    return _suite(ok, worst, 1e-6, branches=branches), ledger_lines(records)


def suite_eigen(params: SpectralParams, kmax: int = 5, h: float = 1e-4,
                tol: float = 1e-4, spread_tol: float = 1e-3) -> dict:
    """Finite-difference eigenrelation and k-independence of the Rayleigh quotient."""
    energies, residuals = [], []
    for k in range(kmax + 1):
        e, r = eigen_report(params, k, h)
        energies.append(e)
        residuals.append(r)
    spread = max(energies) - min(energies)
    worst = max(residuals)
    return _suite(worst <= tol and spread <= spread_tol, worst, tol,
                  energies=energies, spread=spread, spread_tol=spread_tol)


def suite_certification(params: SpectralParams, quad: DiskQuadrature, kmax: int = 10,
                        tol: float = 1e-8) -> dict:
    """Richardson check: doubling both resolutions moves each ``lambda_k`` by < ``tol``."""
    fine = build_disk_rule(2 * quad.n_radial, 2 * quad.n_angular)
    worst, worst_k = 0.0, 0
    for k in range(kmax + 1):
        a = singular_value_oracle(params, k, quad)
        b = singular_value_oracle(params, k, fine)
        rel = abs(a - b) / abs(b) if b else math.inf
        if not rel <= worst:
            worst, worst_k = rel, k
    return _suite(worst < tol, worst, tol, worst_k=worst_k, kmax=kmax,
                  fine=[fine.n_radial, fine.n_angular])


def run_all(params: SpectralParams, quad: DiskQuadrature | None = None, kmax: int = 10) -> dict:
    """Run every suite; ``kmax`` bounds the certification sweep."""
    quad = quad or build_disk_rule()
    closed, ledger = suite_closed_vs_oracle(params, quad)
    suites = {
        "gram": suite_gram(params, quad),
        "rotation": suite_rotation(params, quad),
        "image_gram": suite_image_gram(params, quad),
        "closed_vs_oracle": closed,
        "eigen": suite_eigen(params),
        "certification": suite_certification(params, quad, kmax),
    }
    return {
        "params": {"nu": params.nu, "m": params.m},
        "resolution": {"n_radial": quad.n_radial, "n_angular": quad.n_angular},
        "suites": suites,
        "all_pass": all(s["pass"] for s in suites.values()),
        "ledger": ledger,
    }
