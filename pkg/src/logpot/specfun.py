"""Special-function kernel: log-Gamma, Pochhammer symbols, Jacobi polynomials
and the 2F1 / 3F2 series.

Everything here works in plain double precision.  Gamma functions of
negative arguments are handled through the reflection formula with the sign
tracked separately, and reciprocal Gamma is a total function that vanishes at
the poles, which is what lets terminating hypergeometric identities drop terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError, PoleError

__all__ = [
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "ln_gamma",
    "gamma_sign",
    "gamma",
    "reciprocal_gamma",
    "gamma_ratio",
    "digamma",
    "pochhammer",
    "jacobi_p",
    "jacobi_t_coefficients",
    "gauss_2f1",
    "hyp_3f2",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for non-terminating series.

    A term is negligible when ``|term| < abs_tol`` and
    ``|term| < rel_tol * |partial sum|``; a zero tolerance disables its half
    of the test.  Summation stops after two consecutive negligible terms.
    """

    max_terms: int = 10_000
    abs_tol: float = 1e-15
    rel_tol: float = 1e-13

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ParameterError(f"max_terms must be a positive integer, got {self.max_terms}")
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ParameterError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ParameterError("at least one of abs_tol, rel_tol must be positive")

    def negligible(self, term: float, partial: float) -> bool:
        t = abs(term)
        if self.abs_tol > 0 and not t < self.abs_tol:
            return False
        if self.rel_tol > 0 and not t < self.rel_tol * abs(partial):
            return False
        return True


DEFAULT_POLICY = TruncationPolicy()

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    # sin(pi x) with the argument reduced first, so large |x| keeps its digits
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _ln_gamma_positive(x: float) -> float:
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def ln_gamma(x: float) -> float:
    """Return ``log |Gamma(x)|``.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x >= 0.5:
        return _ln_gamma_positive(x)
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return math.log(math.pi) - math.log(abs(_sinpi(x))) - _ln_gamma_positive(1.0 - x)


def gamma_sign(x: float) -> int:
    """Sign of ``Gamma(x)`` (``+1`` or ``-1``); raises PoleError at poles."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return 1
    return 1 if math.floor(x) % 2 == 0 else -1


def gamma(x: float) -> float:
    """``Gamma(x)`` assembled from :func:`ln_gamma` and :func:`gamma_sign`."""
    return gamma_sign(x) * math.exp(ln_gamma(x))


def reciprocal_gamma(x: float) -> float:
    """``1/Gamma(x)``, exactly zero at the non-positive integers."""
    x = float(x)
    if _is_nonpositive_integer(x):
        return 0.0
    lg = ln_gamma(x)
    if lg > 709.0:
        return 0.0
    return gamma_sign(x) * math.exp(-lg)


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)`` with pole semantics.

    * ``b`` at a pole, ``a`` regular: returns 0.
    * both at poles: returns the limit obtained by shifting both arguments by
      the same infinitesimal amount, ``(-1)**(p-q) q!/p!`` for ``a=-p, b=-q``.
      This is the relevant limit for coefficients whose Gamma arguments move
      together with a continuous parameter.
    * ``a`` at a pole, ``b`` regular: PoleError.
    """
    a_pole = _is_nonpositive_integer(a)
    b_pole = _is_nonpositive_integer(b)
    if a_pole and b_pole:
        p, q = int(-a), int(-b)
        sign = -1.0 if (p - q) % 2 else 1.0
        return sign * math.exp(math.lgamma(q + 1) - math.lgamma(p + 1))
    if b_pole:
        return 0.0
    if a_pole:
        raise PoleError(f"Gamma({a}) is singular while Gamma({b}) is finite")
    return gamma_sign(a) * gamma_sign(b) * math.exp(ln_gamma(a) - ln_gamma(b))


def digamma(x: float) -> float:
    """Logarithmic derivative of Gamma."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x}")
    if x < 0.5:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # asymptotic series with Bernoulli numbers B2..B12
    tail = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (1 / 240 - inv2 * (1 / 132 - inv2 * 691 / 32760)))))
    return acc + math.log(x) - 0.5 / x - tail


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``a (a+1) ... (a+n-1)``; ``1`` for ``n == 0``."""
    if n < 0 or int(n) != n:
        raise ParameterError(f"pochhammer needs a non-negative integer n, got {n}")
    out = 1.0
    for j in range(int(n)):
        f = a + j
        if f == 0:
            return 0.0
        out *= f
    return out


def jacobi_t_coefficients(n: int, alpha: float, beta: float) -> np.ndarray:
    """Coefficients ``c_j`` with ``P_n^{(alpha,beta)}(1 - 2t) = sum_j c_j t**j``.

    Uses the form ``c_j = (-1)^j (alpha+j+1)_{n-j}/(n-j)! (alpha+beta+n+1)_j/j!``,
    which has no denominator that can vanish.
    """
    n = int(n)
    coef = np.empty(n + 1)
    for j in range(n + 1):
        coef[j] = ((-1.0) ** j * pochhammer(alpha + j + 1, n - j) / math.factorial(n - j)
                   * pochhammer(alpha + beta + n + 1, j) / math.factorial(j))
    return coef


def _jacobi_sum(n, alpha, beta, x):
    # P_n = (1+alpha)_n / n! * 2F1(-n, 1+alpha+beta+n; 1+alpha; (1-x)/2)
    y = (1.0 - x) / 2.0
    c = 1.0 + alpha
    b = 1.0 + alpha + beta + n
    term = np.ones_like(y)
    total = np.ones_like(y)
    for j in range(n):
        term = term * ((-n + j) * (b + j) / ((c + j) * (j + 1))) * y
        total = total + term
    return pochhammer(c, n) / math.factorial(n) * total


def jacobi_p(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial ``P_n^{(alpha, beta)}(x)``.

    Evaluated through the terminating 2F1 sum.  When ``1 + alpha`` is a
    non-positive integer inside the summation range the sum is degenerate and
    the index-shift identity

        Gamma(n+1)/Gamma(n-s+1) P_n^{(-s,b)}(u)
            = Gamma(n+b+1)/Gamma(n-s+b+1) ((u-1)/2)^s P_{n-s}^{(s,b)}(u)

    is used instead.  ``x`` may be a scalar or an array.
    """
    if int(n) != n or n < 0:
        raise ParameterError(f"Jacobi degree must be a non-negative integer, got {n}")
    n = int(n)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if n == 0:
        out = np.ones_like(x)
    elif _is_nonpositive_integer(1.0 + alpha) and -(1.0 + alpha) < n:
        s = int(-alpha)
        if not 1 <= s <= n:
            raise ParameterError(f"degenerate Jacobi parameters n={n}, alpha={alpha}")
        # Gamma(n+b+1)/Gamma(n-s+b+1) = (n-s+b+1)_s ; Gamma(n-s+1)/Gamma(n+1) = 1/(n-s+1)_s
        num = pochhammer(n - s + beta + 1, s)
        den = pochhammer(n - s + 1, s)
        if not math.isfinite(num):
            raise ParameterError(f"degenerate Jacobi parameters n={n}, alpha={alpha}, beta={beta}")
        out = num / den * ((x - 1.0) / 2.0) ** s * _jacobi_sum(n - s, float(s), beta, x)
    else:
        out = _jacobi_sum(n, alpha, beta, x)
    return float(out) if scalar else out


def _terminating_length(params) -> int | None:
    lengths = [int(-p) for p in params if _is_nonpositive_integer(p)]
    return min(lengths) if lengths else None


def _hyp_series(upper, lower, x, policy):
    """Generic pFq series with termination detection."""
    x = float(x)
    n_term = _terminating_length(upper)
    if n_term is not None:
        for b in lower:
            if _is_nonpositive_integer(b) and int(-b) < n_term:
                raise PoleError(f"lower parameter {b} hits a pole before the series terminates")
        term = 1.0
        total = 1.0
        for j in range(n_term):
            num = 1.0
            for a in upper:
                num *= a + j
            den = float(j + 1)
            for b in lower:
                den *= b + j
            term = term * num / den * x
            total += term
        return total
    for b in lower:
        if _is_nonpositive_integer(b):
            raise PoleError(f"lower parameter {b} is a non-positive integer")
    if x == 0.0:
        return 1.0
    term = 1.0
    total = 1.0
    quiet = 0
    for j in range(policy.max_terms):
        num = 1.0
        for a in upper:
            num *= a + j
        den = float(j + 1)
        for b in lower:
            den *= b + j
        term = term * num / den * x
        total += term
        if not math.isfinite(total):
            raise DivergenceError("series overflowed")
        if policy.negligible(term, total):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise DivergenceError(f"series did not converge within {policy.max_terms} terms (x={x})")


def gauss_2f1(a: float, b: float, c: float, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for real arguments.

    Terminating series are summed exactly.  Otherwise the power series is used
    for ``-0.9 < x < 0.9``; for ``0.9 <= x < 1`` the argument is mapped to
    ``1 - x`` by the two-term connection formula (non-integer ``c - a - b``
    only), for ``-1 < x <= -0.9`` by the Pfaff transformation, and ``x == 1``
    uses Gauss's summation theorem.
    """
    x = float(x)
    if _terminating_length((a, b)) is not None:
        return _hyp_series((a, b), (c,), x, policy)
    if _is_nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter {c} is a non-positive integer")
    if abs(x) < 0.9:
        return _hyp_series((a, b), (c,), x, policy)
    s = c - a - b
    if x == 1.0:
        if s <= 0:
            raise DivergenceError(f"2F1 diverges at x=1 when c-a-b={s} <= 0")
        return gamma(c) * gamma(s) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)
    if 0.9 <= x < 1.0:
        if s == math.floor(s):
            raise DivergenceError(f"2F1 near x=1 with integer c-a-b={s} is not supported")
        y = 1.0 - x
        first = gamma(c) * gamma(s) * reciprocal_gamma(c - a) * reciprocal_gamma(c - b)
        second = gamma(c) * gamma(-s) * reciprocal_gamma(a) * reciprocal_gamma(b)
        out = 0.0
        if first != 0.0:
            out += first * gauss_2f1(a, b, a + b - c + 1, y, policy)
        if second != 0.0:
            out += second * y ** s * gauss_2f1(c - a, c - b, s + 1, y, policy)
        return out
    if -1.0 < x <= -0.9:
        w = x / (x - 1.0)
        return (1.0 - x) ** (-a) * gauss_2f1(a, c - b, c, w, policy)
    raise DivergenceError(f"2F1 is outside its convergence regime at x={x}")


def hyp_3f2(a1: float, a2: float, a3: float, b1: float, b2: float, x: float,
            policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Generalized hypergeometric ``3F2(a1, a2, a3; b1, b2; x)``.

    Terminating series are summed exactly; otherwise the power series is used
    for ``|x| < 1``.
    """
    x = float(x)
    upper = (a1, a2, a3)
    if _terminating_length(upper) is None and not abs(x) < 1.0:
        raise DivergenceError(f"non-terminating 3F2 needs |x| < 1, got {x}")
    return _hyp_series(upper, (b1, b2), x, policy)
