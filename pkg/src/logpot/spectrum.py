"""Singular values of the weighted logarithmic potential on one Landau level.

The images ``L_nu[Phi_k]`` carry distinct angular frequencies, so they are
mutually orthogonal and the singular values are their norms,

    lambda_k^2 = || L_nu Phi_k ||^2 = pi int_0^1 R_k(sqrt t)^2 (1-t)^(2nu-2) dt.

:func:`singular_value_oracle` takes ``R_k`` from the quadrature transform only.
:func:`singular_value_closed` evaluates series formulas and flags each value
against the oracle.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import basis_function, norm_sq
from .errors import DivergenceError, LogPotError, PoleError, RangeError
from .output import fmt17
from .params import SpectralParams
from .quadrature import (
    DEFAULT_N_ANGULAR,
    DEFAULT_N_RADIAL,
    DiskQuadrature,
    build_disk_rule,
    disk_grid,
    transform_numeric,
)
from .specfun import (
    DEFAULT_POLICY,
    TruncationPolicy,
    gauss_2f1,
    ln_gamma,
    pochhammer,
    reciprocal_gamma,
)
from .transform import _radial_poly, coeff_alpha

__all__ = [
    "SpectrumRow",
    "SpectrumTable",
    "coeff_alpha",
    "series_coefficient_A",
    "series_coefficient_B",
    "j1_comparison",
    "singular_value_closed",
    "singular_value_oracle",
    "oracle_resolution",
    "image_gram",
    "build_table",
    "asymptotic_fit",
    "CLOSED_VARIANTS",
    "CLOSED_TOL",
]

CLOSED_VARIANTS = ("printed", "beta_recomputed", "rederived")
CLOSED_TOL = 1e-4


@dataclass(frozen=True)
class SpectrumRow:
    k: int
    lambda_oracle: float
    lambda_closed: float | None = None
    flag: str = ""
    rel_residual: float | None = None


@dataclass
class SpectrumTable:
    """Rows sorted by ``k``; ``fit`` is ``(slope, constant, (k_min, k_max))`` or ``None``."""

    params: SpectralParams
    rows: list[SpectrumRow] = field(default_factory=list)
    fit: tuple[float, float, tuple[int, int]] | None = None

    def __post_init__(self):
        ks = [r.k for r in self.rows]
        if ks != sorted(set(ks)):
            raise ValueError("rows must be sorted by k without duplicates")
        if any(not r.lambda_oracle >= 0.0 for r in self.rows):
            raise ValueError("oracle singular values must be non-negative")

    @property
    def ks(self) -> np.ndarray:
        return np.array([r.k for r in self.rows])

    @property
    def oracle(self) -> np.ndarray:
        return np.array([r.lambda_oracle for r in self.rows])

    @property
    def any_invalid(self) -> bool:
        return any(r.flag == "INVALID" for r in self.rows)

    def to_csv(self) -> str:
        lines = ["k,lambda_oracle,lambda_closed,flag,rel_residual"]
        for r in self.rows:
            lines.append(f"{r.k},{fmt17(r.lambda_oracle)},{fmt17(r.lambda_closed)},{r.flag},{fmt17(r.rel_residual)}")
        return "\r\n".join(lines) + "\r\n"

    def to_dict(self) -> dict:
        fit = None
        if self.fit is not None:
            slope, const, (lo, hi) = self.fit
            fit = {"slope": fmt17(slope), "constant": fmt17(const), "k_min": lo, "k_max": hi}
        return {
            "params": {"nu": fmt17(self.params.nu), "m": self.params.m},
            "rows": [
                {
                    "k": r.k,
                    "lambda_oracle": fmt17(r.lambda_oracle),
                    "lambda_closed": fmt17(r.lambda_closed) if r.lambda_closed is not None else None,
                    "flag": r.flag,
                    "rel_residual": fmt17(r.rel_residual) if r.rel_residual is not None else None,
                }
                for r in self.rows
            ],
            "fit": fit,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


# --- printed series ---------------------------------------------------------

def _hyp_coeffs(upper, lower, count: int) -> np.ndarray:
    """First ``count`` Taylor coefficients of ``pFq(upper; lower; x)``."""
    # a lower parameter at a non-positive integer gives inf/nan terms, which
    # the series summation reports as divergence
    i = np.arange(count - 1, dtype=float)
    ratio = np.ones(count - 1)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for a in upper:
            ratio *= a + i
        for b in lower:
            ratio /= b + i
        ratio /= i + 1.0
        return np.concatenate(([1.0], np.cumprod(ratio)))


def _cauchy_square(c: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return np.convolve(c, c)[: len(c)]


def _A_sequence(params: SpectralParams, k: int, count: int, variant: str) -> np.ndarray:
    nu, m = params.nu, params.m
    a, b = 1.0 - m, 2.0 * (nu - m) + k
    if variant == "cauchy":
        return _cauchy_square(_hyp_coeffs((a, b), (2.0 + k - m,), count))
    if variant == "printed":
        # (a)_i (b)_i / (2(nu-m))_i, paired i with n-i, over n!
        logfact = np.cumsum(np.log(np.maximum(np.arange(count, dtype=float), 1.0)))
        with np.errstate(over="ignore", invalid="ignore"):
            p = _hyp_coeffs((a, b, 1.0), (2.0 * (nu - m),), count) * np.exp(logfact)
            return _cauchy_square(p) * np.exp(-logfact)
    raise ValueError(f"unknown variant {variant!r}")


def series_coefficient_A(params: SpectralParams, k: int, n: int, variant: str = "cauchy") -> float:
    """Coefficient ``A_n`` of the squared series in the off-diagonal norm.

    ``variant="cauchy"`` gives the ``t^n`` coefficient of
    ``2F1(1-m, 2(nu-m)+k; 2+k-m; t)^2``.  ``variant="printed"`` evaluates the
    published sum, whose denominators ``(2(nu-m))_i`` and prefactor ``1/n!``
    differ from a Cauchy product.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    return float(_A_sequence(params, k, int(n) + 1, variant)[n])


def _B_sequence(params: SpectralParams, count: int) -> np.ndarray:
    nu, m = params.nu, params.m
    c = _hyp_coeffs((1.0 - m, 2.0 * nu - m, 2.0 * (nu - m) + 1.0), (2.0 * (nu - m), 2.0 * nu - m + 2.0), count)
    return _cauchy_square(c)


def series_coefficient_B(params: SpectralParams, n: int) -> float:
    """``(1-rho^2)^n`` coefficient of the squared diagonal 3F2.

    The series is ``3F2(1-m, 2nu-m, 2(nu-m)+1; 2(nu-m), 2nu-m+2 | y)`` as
    written next to the diagonal norm.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n}")
    return float(_B_sequence(params, int(n) + 1)[n])


def _sum_series(term, policy: TruncationPolicy, terminates_after: int | None = None) -> float:
    total, quiet = 0.0, 0
    limit = policy.max_terms if terminates_after is None else min(policy.max_terms, terminates_after + 1)
    for n in range(limit):
        t = term(n)
        if not math.isfinite(t):
            raise DivergenceError(f"series term {n} is not finite")
        total += t
        if terminates_after is None:
            quiet = quiet + 1 if policy.negligible(t, total) else 0
            if quiet >= 2:
                return total
    if terminates_after is None:
        raise DivergenceError(f"series did not converge in {policy.max_terms} terms")
    return total


def _gamma_quotient(num, den) -> float:
    """``prod Gamma(num) / prod Gamma(den)`` with every argument required regular.

    A printed Gamma evaluated at a pole is undefined, in the numerator or the
    denominator, so both raise PoleError.
    """
    sign, logv = 1.0, 0.0
    for x in den:
        r = reciprocal_gamma(x)
        if r == 0.0:
            raise PoleError(f"Gamma({x}) in a printed denominator is singular")
        sign *= math.copysign(1.0, r)
        logv -= ln_gamma(x)
    for x in num:
        r = reciprocal_gamma(x)
        if r == 0.0:
            raise PoleError(f"Gamma({x}) in a printed numerator is singular")
        sign *= math.copysign(1.0, r)
        logv += ln_gamma(x)
    return sign * math.exp(logv)


def _j_terms(params: SpectralParams, k: int, policy: TruncationPolicy, a_variant: str, j1_variant: str):
    nu, m = params.nu, params.m
    c3 = pochhammer(1.0 + k - m, m) / (math.factorial(m) * (k - m + 1.0))
    e = 2.0 * nu - m - 1.0
    alpha = coeff_alpha(params)
    stop = 2 * m - 2 if m >= 1 else None

    seq = _A_sequence(params, k, policy.max_terms if stop is None else stop + 1, a_variant)

    def A(n):
        return float(seq[n])

    def j1_term(n):
        if j1_variant == "printed":
            g = _gamma_quotient((2 * n + 2 * k - 2 * m + 6 - 1, 4 * nu - 2 * m - 1),
                                (2 * n + 2 * k - 4 * m + 4 * nu + 6,))
        else:
            g = 0.5 * _gamma_quotient((n + k - m + 3, 4 * nu - 2 * m - 1), (n + k - m + 4 * nu - 2 * m + 2,))
        return A(n) * g

    def j2_term(n):
        return A(n) * _gamma_quotient((4 * nu - 2 * m - 1, 2 * n + 2), (2 * n + 4 * nu - 2 * m + 1,))

    def j3_term(n):
        return A(n) * _gamma_quotient((k - m + 2, 4 * nu - 2 * m - 1), (4 * nu - k - 3 * m,))

    j1 = c3 * c3 * _sum_series(j1_term, policy, stop)
    j2 = (alpha / e) ** 2 * _sum_series(j2_term, policy, stop)
    j3 = c3 * alpha / e * _sum_series(j3_term, policy, stop)
    return j1, j2, j3


def j1_comparison(params: SpectralParams, k: int, policy: TruncationPolicy = DEFAULT_POLICY,
                  n_nodes: int = 200) -> dict:
    """``int_0^1 I3(rho)^2 rho drho`` three ways, for ``k > m``.

    ``numeric`` integrates the printed ``I3`` expression directly with
    Gauss-Legendre in ``rho^2``; ``printed`` and ``beta_recomputed`` are the two
    Gamma forms of the term-by-term Beta integral with Cauchy ``A_n``.
    """
    nu, m = params.nu, params.m
    c3 = pochhammer(1.0 + k - m, m) / (math.factorial(m) * (k - m + 1.0))
    e = 2.0 * nu - m - 1.0
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    t = 0.5 * (x + 1.0)
    i3 = np.array([c3 * tt ** ((k - m + 2) / 2.0) * (1.0 - tt) ** e
                   * gauss_2f1(1.0 - m, 2.0 * (nu - m) + k, 2.0 + k - m, tt) for tt in t])
    numeric = float(np.sum(0.25 * w * i3 * i3))
    out = {"numeric": numeric}
    for variant in ("printed", "beta_recomputed"):
        try:
            out[variant] = _j_terms(params, k, policy, "cauchy", variant)[0]
        except LogPotError:
            out[variant] = math.nan
    return out


def _lambda_printed(params: SpectralParams, k: int, policy: TruncationPolicy, recomputed: bool) -> float:
    nu, m = params.nu, params.m
    if k == m:
        alpha = coeff_alpha(params)
        pref = alpha * (2.0 * (2.0 * nu - m) - 1.0) / (8.0 * math.pi * (2.0 * nu - m + 1.0))
        stop = 2 * m - 2 if m >= 1 else None
        seq = _B_sequence(params, policy.max_terms if stop is None else stop + 1)
        total = _sum_series(lambda n: float(seq[n]) / (n + 2.0 * nu - m), policy, stop)
        lam2 = pref * total
    else:
        a_variant = "cauchy" if recomputed else "printed"
        j1_variant = "beta_recomputed" if recomputed else "printed"
        lam2 = sum(_j_terms(params, k, policy, a_variant, j1_variant))
    if not lam2 >= 0.0:
        raise DivergenceError(f"printed series gives lambda^2 = {lam2}")
    return math.sqrt(lam2)


def _beta(x: float, y: float) -> float:
    return math.exp(ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y))


def _lambda_rederived(params: SpectralParams, k: int, policy: TruncationPolicy) -> float:
    """Exact Beta-integral sums; finite whenever ``2 nu`` is an integer."""
    nu, m = params.nu, params.m
    w = 2.0 * nu - 1.0  # weight (1-t)^(2nu-2) integrates as Beta(., w)
    if k == m:
        g = (-1.0) ** m / math.sqrt(norm_sq(params, m))
        if m >= 1:
            e = 2.0 * nu - m
            alpha = coeff_alpha(params)
            c = _hyp_coeffs((1.0 - m, e, e), (2.0 * (nu - m), e + 1.0), m)
            pw = [(e + l, 0.5 * alpha / e * c[l]) for l in range(m)]
        else:
            c = 2.0 * nu - 1.0
            if c == math.floor(c):
                pw = [(float(i), 1.0 / (i * c)) for i in range(1, int(c) + 1)]
            else:
                pw = []
                for i in range(policy.max_terms):
                    pw.append((float(i + 1), 1.0 / ((i + 1) * c)))
                    pw.append((c + 1.0 + i, -1.0 / ((c + 1.0 + i) * c)))
                    if (i + 1) ** -2.0 < policy.rel_tol:
                        break
        amp = 0.5 * math.pi * g
        lam2 = sum(ci * cj / (pi + pj + w) for pi, ci in pw for pj, cj in pw)
        return math.sqrt(math.pi * amp * amp * lam2)
    n = abs(k - m)
    q = 2.0 * nu - m - 1.0
    g, coef = _radial_poly(params, k)
    # R(x) = K x^(n/2) [ sum_l u_l x^l + sum_l v_l (1-x)^(q+l) ]
    u = {}
    i = 0
    while True:
        fac = pochhammer(1.0 - q, i) / math.factorial(i)
        if fac == 0.0:
            break
        for j, cj in enumerate(coef):
            u[j + 1 + i] = u.get(j + 1 + i, 0.0) + fac * cj / (n + j + 1.0 + i)
        i += 1
        if i >= policy.max_terms:
            raise DivergenceError("inner series did not terminate")
        if abs(fac) / (n + 1.0 + i) < policy.abs_tol * 1e-2:
            break
    v = {}
    for j, cj in enumerate(coef):
        for i in range(j + 1):
            v[i] = v.get(i, 0.0) + cj * pochhammer(-j, i) / math.factorial(i) / (q + i)
    amp = math.pi * g / (2.0 * n)
    uu = sum(a * b * _beta(n + p + r + 1.0, w) for p, a in u.items() for r, b in u.items())
    uv = sum(a * b * _beta(n + p + 1.0, q + r + w) for p, a in u.items() for r, b in v.items())
    vv = sum(a * b * _beta(n + 1.0, 2.0 * q + p + r + w) for p, a in v.items() for r, b in v.items())
    return math.sqrt(math.pi * amp * amp * (uu + 2.0 * uv + vv))


def singular_value_closed(params: SpectralParams, k: int, policy: TruncationPolicy = DEFAULT_POLICY,
                          variant: str = "printed", oracle: float | None = None):
    """Series value of ``lambda_k`` with a validity flag.

    Parameters
    ----------
    variant : {"printed", "beta_recomputed", "rederived"}
        ``"printed"`` evaluates the published ``J1 + J2 + J3`` (or the diagonal
        ``B_n`` series) verbatim.  ``"beta_recomputed"`` replaces ``J1``'s Gamma
        arguments by the Beta integral of the squared ``I3`` and uses Cauchy
        ``A_n``.  ``"rederived"`` integrates the corrected radial profile.
    oracle : float, optional
        Reference value; computed with :func:`singular_value_oracle` if omitted.

    Returns
    -------
    (value, flag, rel_residual)
        ``flag`` is ``"VALID"`` when the relative residual is below
        :data:`CLOSED_TOL`.  Poles and divergent series give
        ``(None, "INVALID", None)``.
    """
    try:
        if variant == "printed":
            value = _lambda_printed(params, k, policy, recomputed=False)
        elif variant == "beta_recomputed":
            value = _lambda_printed(params, k, policy, recomputed=True)
        elif variant == "rederived":
            value = _lambda_rederived(params, k, policy)
        else:
            raise ValueError(f"unknown variant {variant!r}")
    except (LogPotError, OverflowError, ZeroDivisionError):
        return None, "INVALID", None
    if not math.isfinite(value):
        return None, "INVALID", None
    if oracle is None:
        oracle = singular_value_oracle(params, k)
    resid = abs(value - oracle) / oracle
    return value, ("VALID" if resid < CLOSED_TOL else "INVALID"), resid


# --- oracle -----------------------------------------------------------------

def oracle_resolution(params: SpectralParams, k: int, quad: DiskQuadrature | None = None) -> DiskQuadrature:
    """``quad`` scaled up by integer factors until frequency ``k - m`` is resolved.

    The radial count must cover about ``|k - m| / 2 + 24`` nodes and the
    angular count ``2(|k - m| + 1)``.  Scaling (rather than replacing) keeps a
    deliberately coarse rule coarse, so certification can still catch it.
    """
    quad = quad or build_disk_rule()
    n = abs(k - params.m)
    f_rad = -(-(n // 2 + 24) // DEFAULT_N_RADIAL)
    f_ang = -(-2 * (n + 1) // DEFAULT_N_ANGULAR)
    if f_rad <= 1 and f_ang <= 1:
        return quad
    return build_disk_rule(quad.n_radial * max(1, f_rad), quad.n_angular * max(1, f_ang))


def singular_value_oracle(params: SpectralParams, k: int, quad: DiskQuadrature | None = None,
                          scale: complex = 1.0) -> float:
    """``|| L_nu (scale Phi_k) ||`` from quadrature only.

    The radial factor is sampled with :func:`transform_numeric` at the
    Gauss-Legendre nodes of the (possibly refined) rule and integrated
    against ``pi (1-t)^(2nu-2) dt``.
    """
    rule = oracle_resolution(params, k, quad)
    phi = basis_function(params, k)

    def f(z):
        return scale * phi(z)

    rho = np.sqrt(rule.t)
    vals = transform_numeric(f, rho + 0j, params, rule)
    integrand = np.abs(vals) ** 2 * (1.0 - rule.t) ** params.weight_exponent
    return float(math.sqrt(math.pi * np.sum(rule.w * integrand)))


def image_gram(params: SpectralParams, kmax: int, quad: DiskQuadrature | None = None,
               n_outer_angular: int = 32) -> np.ndarray:
    """Matrix of ``<L Phi_j, L Phi_k>`` for ``j, k <= kmax`` on a 2-D outer grid.

    Images are computed with :func:`transform_numeric` on the radial nodes of
    ``quad`` times ``n_outer_angular`` equispaced angles; the inner products
    use the weighted disk rule on that grid.
    """
    quad = quad or build_disk_rule()
    outer = build_disk_rule(quad.n_radial, n_outer_angular)
    z = disk_grid(outer, offset=math.pi / n_outer_angular)
    wts = (0.5 * outer.w * (1.0 - outer.t) ** params.weight_exponent)[:, None] * (2.0 * math.pi / n_outer_angular)
    images = []
    for k in range(kmax + 1):
        rule = oracle_resolution(params, k, quad)
        images.append(transform_numeric(basis_function(params, k), z, params, rule))
    g = np.empty((kmax + 1, kmax + 1), dtype=complex)
    for j in range(kmax + 1):
        for k in range(kmax + 1):
            g[j, k] = np.sum((images[j] * np.conj(images[k]) * wts).ravel())
    return g


# --- tables and fits --------------------------------------------------------

def build_table(params: SpectralParams, kmax: int, quad: DiskQuadrature | None = None,
                closed_variant: str = "printed", closed_kmax: int | None = None,
                policy: TruncationPolicy = DEFAULT_POLICY, fit_range: tuple[int, int] | None = None) -> SpectrumTable:
    """Oracle singular values ``k = 0..kmax`` with flagged closed-form values.

    Closed forms are evaluated for ``k <= closed_kmax`` (all rows by default).
    A fit block is attached over ``fit_range``, or over
    ``[min(50, kmax // 2), kmax]`` when ``kmax >= 50``.
    """
    rows = []
    for k in range(kmax + 1):
        lam = singular_value_oracle(params, k, quad)
        if closed_kmax is None or k <= closed_kmax:
            val, flag, resid = singular_value_closed(params, k, policy, closed_variant, oracle=lam)
            rows.append(SpectrumRow(k, lam, val, flag, resid))
        else:
            rows.append(SpectrumRow(k, lam))
    table = SpectrumTable(params, rows)
    if fit_range is None and kmax >= 50:
        fit_range = (min(50, kmax // 2), kmax)
    if fit_range is not None:
        slope, const = asymptotic_fit(table, *fit_range)
        table.fit = (slope, const, tuple(fit_range))
    return table


def asymptotic_fit(table: SpectrumTable, k_min: int, k_max: int) -> tuple[float, float]:
    """Least-squares fit ``log lambda_k = slope log k + log C`` over ``[k_min, k_max]``.

    Returns ``(slope, C)``.

    Raises
    ------
    RangeError
        If ``k_min < 10``, the range is empty, or a ``k`` in the range has no row.
    """
    if k_min < 10:
        raise RangeError(f"k_min must be >= 10, got {k_min}")
    if k_max <= k_min:
        raise RangeError(f"empty fit range [{k_min}, {k_max}]")
    have = {r.k: r.lambda_oracle for r in table.rows}
    missing = [k for k in range(k_min, k_max + 1) if k not in have]
    if missing:
        raise RangeError(f"table lacks rows for k in {missing[:5]}{'...' if len(missing) > 5 else ''}")
    ks = np.arange(k_min, k_max + 1, dtype=float)
    lam = np.array([have[int(k)] for k in ks])
    if np.any(lam <= 0.0):
        raise RangeError("non-positive singular value in fit range")
    slope, intercept = np.polyfit(np.log(ks), np.log(lam), 1)
    return float(slope), float(math.exp(intercept))
