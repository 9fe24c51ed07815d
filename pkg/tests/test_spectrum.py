import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logpot.errors import RangeError
from logpot.params import SpectralParams
from logpot.quadrature import build_disk_rule
from logpot.spectrum import (
    CLOSED_TOL,
    SpectrumRow,
    SpectrumTable,
    asymptotic_fit,
    build_table,
    image_gram,
    j1_comparison,
    oracle_resolution,
    series_coefficient_A,
    series_coefficient_B,
    singular_value_closed,
    singular_value_oracle,
)

NU1 = SpectralParams(1.0, 0)
TEST_PAIRS = [(1.0, 0), (2.0, 0), (2.0, 1), (3.5, 2)]


def lambda_nu1(k):
    """Exact lambda_k for nu = 1, m = 0.

    Phi_k = sqrt((k+1)/pi) z^k and the radial image is
    sqrt((k+1)/pi) (pi/k) rho^k [rho^2/(2k+2) + (1-rho^2)/2]; the squared
    norm pi int_0^1 R(sqrt t)^2 dt is a polynomial integral.
    """
    if k == 0:
        return math.pi / math.sqrt(12.0)  # R = sqrt(pi) (1 - t) / 2
    a, b = Fraction(1, 2 * k + 2), Fraction(1, 2)
    c = a - b
    integral = c * c / (k + 3) + 2 * c * b / (k + 2) + b * b / (k + 1)
    return math.sqrt(math.pi * (k + 1) / math.pi * (math.pi / k) ** 2 * float(integral))


# --- series coefficients ------------------------------------------------------

@pytest.mark.parametrize("pair", TEST_PAIRS + [(2.5, 1)])
def test_A_zeroth_coefficient(pair):
    p = SpectralParams(*pair)
    for k in range(p.m + 1, p.m + 4):
        assert series_coefficient_A(p, k, 0) == 1.0
        assert series_coefficient_A(p, k, 0, "printed") == 1.0


@pytest.mark.parametrize("variant", ["cauchy", "printed"])
def test_A_vanishes_on_level_one(variant):
    p = SpectralParams(2.5, 1)
    assert all(series_coefficient_A(p, k, n, variant) == 0.0 for k in (2, 5) for n in range(1, 6))


def test_A_example():
    # 2F1(-1, 6; 5; t) = 1 - 6t/5, squared: t^2 coefficient 36/25
    p = SpectralParams(2.5, 2)
    assert series_coefficient_A(p, 5, 2) == pytest.approx(1.44, abs=1e-14)
    # the printed sum carries 1/n! and gives 36/2
    assert series_coefficient_A(p, 5, 2, "printed") == pytest.approx(18.0, abs=1e-13)


def test_A_terminates():
    p = SpectralParams(3.5, 2)
    for n in range(2 * p.m - 1, 2 * p.m + 4):
        assert series_coefficient_A(p, 6, n) == 0.0


def test_A_matches_squared_polynomial():
    p = SpectralParams(4.0, 3)
    k = 7
    a, b, c = 1.0 - p.m, 2 * (p.nu - p.m) + k, 2.0 + k - p.m
    poly = [1.0]
    for j in range(p.m - 1):
        poly.append(poly[-1] * (a + j) * (b + j) / ((j + 1) * (c + j)))
    sq = np.polynomial.polynomial.polymul(poly, poly)
    for n, v in enumerate(sq):
        assert series_coefficient_A(p, k, n) == pytest.approx(v, rel=1e-13)


def test_B_terminates_and_bad_index():
    p = SpectralParams(3.5, 2)
    assert series_coefficient_B(p, 0) == 1.0
    assert series_coefficient_B(p, 2 * p.m - 1) == 0.0
    with pytest.raises(ValueError):
        series_coefficient_B(p, -1)
    with pytest.raises(ValueError):
        series_coefficient_A(p, 3, 1.5)


def test_j1_gamma_arguments():
    # direct quadrature of the squared inner piece agrees with the recomputed
    # Beta form; the printed "+6" arguments are off by orders of magnitude
    for pair, k in [((2.5, 1), 3), ((3.5, 2), 5)]:
        out = j1_comparison(SpectralParams(*pair), k)
        assert out["beta_recomputed"] == pytest.approx(out["numeric"], rel=1e-10)
        assert abs(out["printed"] / out["numeric"] - 1) > 0.5


# --- closed forms -----------------------------------------------------------

def test_closed_rederived_example():
    p = SpectralParams(2.5, 1)
    oracle = singular_value_oracle(p, 3)
    value, flag, resid = singular_value_closed(p, 3, variant="rederived", oracle=oracle)
    assert flag == "VALID"
    assert abs(value - oracle) / oracle < 1e-10
    assert resid < CLOSED_TOL


def test_closed_printed_is_flagged():
    p = SpectralParams(2.5, 1)
    value, flag, _ = singular_value_closed(p, 3)
    assert flag == "INVALID" and value is not None
    # Gamma(4nu - k - 3m) at a pole or a negative argument: never a crash
    assert singular_value_closed(p, 30) == (None, "INVALID", None)


def test_closed_level_zero_diagonal():
    assert singular_value_closed(NU1, 0) == (None, "INVALID", None)
    value, flag, _ = singular_value_closed(NU1, 0, variant="rederived")
    assert flag == "VALID"
    assert value == pytest.approx(lambda_nu1(0), rel=1e-14)


def test_closed_unknown_variant():
    with pytest.raises(ValueError):
        singular_value_closed(NU1, 1, variant="guess")


@pytest.mark.parametrize("pair", TEST_PAIRS)
def test_valid_flags_agree_with_oracle(pair):
    p = SpectralParams(*pair)
    for k in range(21):
        oracle = singular_value_oracle(p, k)
        for variant in ("printed", "beta_recomputed", "rederived"):
            value, flag, resid = singular_value_closed(p, k, variant=variant, oracle=oracle)
            if flag == "VALID":
                assert abs(value - oracle) / oracle < CLOSED_TOL
            else:
                assert resid is None or resid >= CLOSED_TOL
        assert singular_value_closed(p, k, variant="rederived", oracle=oracle)[1] == "VALID"


# --- oracle -----------------------------------------------------------------

def test_oracle_level_zero_constant():
    coarse = singular_value_oracle(NU1, 0, build_disk_rule(64, 128))
    fine = singular_value_oracle(NU1, 0, build_disk_rule(128, 256))
    assert abs(coarse - fine) < 1e-7
    assert coarse == pytest.approx(math.pi / math.sqrt(12.0), rel=1e-13)


@pytest.mark.parametrize("k", [1, 2, 5, 20, 80, 150])
def test_oracle_matches_exact_nu1(k):
    assert singular_value_oracle(NU1, k) == pytest.approx(lambda_nu1(k), rel=1e-10)


@pytest.mark.parametrize("pair", [(2.0, 1), (3.5, 2)])
def test_oracle_positive_and_eventually_decreasing(pair):
    p = SpectralParams(*pair)
    lam = np.array([singular_value_oracle(p, k) for k in range(51)])
    assert np.all(lam > 0)
    # observed, not assumed: strict decay from k = m + 1 onwards
    assert np.all(np.diff(lam[p.m + 1:]) < 0)


@settings(max_examples=10, deadline=None)
@given(st.floats(1e-3, 1e3), st.floats(0.0, 2 * math.pi), st.integers(0, 6))
def test_oracle_scale_covariance(r, angle, k):
    c = r * complex(math.cos(angle), math.sin(angle))
    p = SpectralParams(2.0, 1)
    quad = build_disk_rule(32, 64)
    base = singular_value_oracle(p, k, quad)
    assert singular_value_oracle(p, k, quad, scale=c) == pytest.approx(abs(c) * base, rel=1e-12)


def test_oracle_resolution_scaling():
    quad = build_disk_rule()
    assert oracle_resolution(NU1, 10, quad) is quad
    big = oracle_resolution(NU1, 200, quad)
    assert (big.n_radial, big.n_angular) == (128, 512)
    coarse = oracle_resolution(NU1, 200, build_disk_rule(2, 16))
    assert coarse.n_radial == 4


# --- image Gram ---------------------------------------------------------------

def test_image_gram_is_diagonal():
    p = SpectralParams(2.0, 1)
    g = image_gram(p, 6)
    off = g - np.diag(np.diag(g))
    assert np.max(np.abs(off)) < 1e-8
    lam = np.array([singular_value_oracle(p, k) for k in range(7)])
    assert np.max(np.abs(np.diag(g).real - lam ** 2)) < 1e-7


# --- tables and fits --------------------------------------------------------

def test_fit_synthetic_power_law():
    rows = [SpectrumRow(k, 7.0 * k ** -2.0) for k in range(10, 60)]
    slope, const = asymptotic_fit(SpectrumTable(NU1, rows), 10, 59)
    assert slope == pytest.approx(-2.0, abs=1e-10)
    assert const == pytest.approx(7.0, rel=1e-10)


def test_fit_range_errors():
    table = SpectrumTable(NU1, [SpectrumRow(k, 1.0 / k) for k in range(10, 30)])
    with pytest.raises(RangeError):
        asymptotic_fit(table, 5, 20)
    with pytest.raises(RangeError):
        asymptotic_fit(table, 20, 20)
    with pytest.raises(RangeError):
        asymptotic_fit(table, 10, 40)


def test_exact_nu1_slope_is_not_three_halves():
    # the exact values decay like k^-2; on [50, 200] the fit is close to -2
    ks = np.arange(50, 201)
    slope = np.polyfit(np.log(ks), np.log([lambda_nu1(k) for k in ks]), 1)[0]
    assert slope == pytest.approx(-1.977, abs=1e-3)
    assert abs(slope - (-1.5)) > 0.4


def test_table_invariants():
    with pytest.raises(ValueError):
        SpectrumTable(NU1, [SpectrumRow(1, 1.0), SpectrumRow(0, 1.0)])
    with pytest.raises(ValueError):
        SpectrumTable(NU1, [SpectrumRow(0, 1.0), SpectrumRow(0, 1.0)])
    with pytest.raises(ValueError):
        SpectrumTable(NU1, [SpectrumRow(0, -1.0)])


def test_build_table_and_serialization():
    p = SpectralParams(2.0, 1)
    table = build_table(p, 12, closed_variant="rederived", fit_range=(10, 12))
    assert list(table.ks) == list(range(13))
    assert not table.any_invalid
    assert table.fit[2] == (10, 12)
    csv = table.to_csv()
    lines = csv.split("\r\n")
    assert lines[0] == "k,lambda_oracle,lambda_closed,flag,rel_residual"
    assert len(lines) == 15 and lines[-1] == ""
    assert float(lines[1].split(",")[1]) == table.rows[0].lambda_oracle
    doc = json.loads(table.to_json())
    assert doc["params"]["m"] == 1
    assert len(doc["rows"]) == 13
    assert float(doc["fit"]["slope"]) == table.fit[0]
    # deterministic
    assert build_table(p, 12, closed_variant="rederived", fit_range=(10, 12)).to_csv() == csv


def test_build_table_printed_flags():
    table = build_table(SpectralParams(2.5, 1), 4)
    assert table.any_invalid
    partial = build_table(NU1, 3, closed_variant="rederived", closed_kmax=1)
    assert partial.rows[3].lambda_closed is None and partial.rows[3].flag == ""
