"""Tests for the y^2 = x^3 - N^2 x specialization.

The expected table is frozen here exactly as computed from the search plus
exact on-curve verification; every coordinate was checked by hand against
y^2 = x^3 - N^2 x.  Valuation profiles are tested against the actual division
values, not against the predicting formulas.
"""

import math
from fractions import Fraction

import pytest

from ellmult.bounds import poly_growth_check
from ellmult.congruent import (
    N_CAP_SMALL,
    TABLE_N_VALUES,
    binary_form_checks,
    congruent_curve,
    double_x,
    gap_floor,
    growth_poly,
    height_windows,
    growth_ratio,
    growth_ratio_check,
    hn_cap,
    multiplier_height_cap,
    n_cap,
    nonidentity_multiplier,
    ord2_profile,
    reproduce_table,
    resolve_N_threshold,
    search_integral_points,
    table_csv,
    verify_double_not_integral,
    _python_square_abscissas,
    _vector_square_abscissas,
)
from ellmult.curves import rational_point
from ellmult.divpoly import denominator_sequence, psi_value_binary, ward_terms
from ellmult.errors import ParityMismatch, TorsionInput
from ellmult.factorization import prime_divisors, valuation
from ellmult.heights import height_window_check

EXPECTED_TABLE = {
    5: ((-4, 6), (45, 300)),
    6: ((-3, 9), (-2, 8), (12, 36), (18, 72), (294, 5040)),
    7: ((25, 120),),
    14: ((18, 48), (112, 1176)),
    15: ((-9, 36), (25, 100), (60, 450)),
    21: ((-3, 36), (28, 98), (147, 1764)),
    22: ((2178, 101640),),
    29: ((284229, 151531380),),
    30: ((-20, 100), (-6, 72), (45, 225), (150, 1800)),
    34: ((-16, 120), (-2, 48), (162, 2016), (578, 13872)),
    39: ((-36, 90), (975, 30420)),
    41: ((-9, 120), (841, 24360)),
    46: ((242, 3696),),
    65: ((-25, 300), (-16, 252), (169, 2028)),
    69: ((1083, 35568),),
    70: ((-20, 300), (126, 1176), (245, 3675)),
}


@pytest.fixture(scope="module")
def table():
    return reproduce_table()


def _ord2(q: Fraction) -> int:
    return valuation(q.numerator, 2) - valuation(q.denominator, 2)


def test_congruent_curve():
    cc = congruent_curve(6)
    assert cc.curve.A == -36 and cc.curve.B == 0
    assert cc.curve.discriminant == 64 * 6**6
    assert cc.curve.j == 1728
    with pytest.raises(ValueError):
        congruent_curve(8)
    with pytest.raises(ValueError):
        congruent_curve(0)


def test_double_x_examples():
    assert double_x(-4, 5) == Fraction(1681, 144)
    assert double_x(45, 5) == Fraction(1681, 144)
    for x in (0, 5, -5):
        with pytest.raises(TorsionInput):
            double_x(x, 5)


def test_double_x_never_integral():
    # the 2-adic obstruction needs no point: any abscissa off the 2-torsion works
    for N in (5, 6, 7, 10, 13, 30):
        for x in range(-20, 60):
            if x in (0, N, -N):
                continue
            assert _ord2(double_x(x, N)) < 0


def test_verify_double_not_integral():
    verify = verify_double_not_integral
    r = verify(5, rational_point(-4, 6))
    assert r.holds and r.inputs["ord2"] == -4 and r.inputs["case_floor"] == -2
    r = verify(6, rational_point(12, 36))
    assert r.holds and r.inputs["case_floor"] == -1 and r.inputs["ord2"] == -2
    r = verify(15, rational_point(25, 100))
    assert r.holds and r.inputs["case_floor"] == -2 and r.inputs["ord2"] == -4
    r = verify(5, rational_point(45, 300))
    assert r.holds


def _actual_ord2(a: int, N: int, n: int) -> int:
    cc = congruent_curve(N)
    b = math.isqrt(a**3 - N * N * a)
    terms = ward_terms(cc.curve, rational_point(a, b), n + 1)
    return valuation(terms.h[n], 2)


def test_ord2_profile_odd_exact():
    # both odd
    assert ord2_profile(25, 15, 3) == (2, True)
    for n in (3, 5, 7):
        assert ord2_profile(25, 15, n) == ((n * n - 1) // 4, True)
        assert _actual_ord2(25, 15, n) == (n * n - 1) // 4
    # mixed parity: the division value is odd
    for n in (3, 5, 7):
        assert ord2_profile(-3, 6, n) == (0, True)
        assert _actual_ord2(-3, 6, n) == 0
        assert ord2_profile(-4, 5, n) == (0, True)
        assert _actual_ord2(-4, 5, n) == 0
    # a = 2 mod 4 with N even
    for n in (3, 5, 7):
        assert ord2_profile(-2, 6, n) == (3 * (n * n - 1) // 4, True)
        assert _actual_ord2(-2, 6, n) == 3 * (n * n - 1) // 4
    # a = 0 mod 4 with N even
    for n in (3, 5, 7):
        assert ord2_profile(12, 6, n) == ((n * n - 1) // 2, True)
        assert _actual_ord2(12, 6, n) == (n * n - 1) // 2


def test_ord2_profile_even_floor():
    for n in (2, 4, 6, 8):
        value, exact = ord2_profile(25, 15, n)
        assert not exact
        assert _actual_ord2(25, 15, n) >= value
    # equality happens at n = 2: ord2(2b) = 1 + ord2(b)
    assert ord2_profile(45, 5, 2).value == _actual_ord2(45, 5, 2)


def test_ord2_profile_edges():
    assert ord2_profile(-4, 5, 1) == (0, True)
    with pytest.raises(ParityMismatch):
        ord2_profile(-3, 6, 2)  # mixed parity, even n
    with pytest.raises(ParityMismatch):
        ord2_profile(12, 6, 2)  # a = 0 mod 4, N even, even n
    with pytest.raises(ParityMismatch):
        ord2_profile(-2, 6, 2)  # a = 2 mod 4, N even, even n
    with pytest.raises(TorsionInput):
        ord2_profile(0, 5, 3)
    with pytest.raises(TorsionInput):
        ord2_profile(5, 5, 3)
    with pytest.raises(ValueError):
        ord2_profile(3, 5, 3)  # negative ordinate square
    with pytest.raises(ValueError):
        ord2_profile(7, 5, 3)  # not a perfect square


def test_binary_form_checks():
    for n in (3, 5, 7, 9, 11, 13):
        report = binary_form_checks(5, n)
        assert report.holds
        assert report.inputs["value_10"] == n
        assert abs(report.inputs["value_01"]) == 1
    report = binary_form_checks(7, 3)
    assert report.inputs["value_01"] == -1
    assert psi_value_binary(3, 1, 0) == 3
    with pytest.raises(ValueError):
        binary_form_checks(5, 2)
    with pytest.raises(ValueError):
        binary_form_checks(5, 15)


def test_hn_cap():
    assert hn_cap(15, 3) == 810000
    assert abs(psi_value_binary(3, 25, 15)) == 277500 <= 810000
    assert hn_cap(5, 3) == 10**4
    assert hn_cap(6, 3) == 2**4 * hn_cap(3, 3)
    with pytest.raises(ValueError):
        hn_cap(5, 4)


def test_multiplier_height_cap():
    assert multiplier_height_cap(11, 5) == pytest.approx(math.log(11) + math.log(5) / 2 + math.log(2) / 3)
    assert multiplier_height_cap(3, 5) < multiplier_height_cap(4, 5)
    assert multiplier_height_cap(3, 5) < multiplier_height_cap(3, 7)
    with pytest.raises(ValueError):
        multiplier_height_cap(1, 5)


def test_multiplier_cap_feeds_prime_contradiction():
    # combining the cap with hhat >= log(2 N^2)/16 bounds q^2 for prime q with qP integral
    for N in (6, 7, 10, 15, 50, 1000):
        for q in (2, 3, 5, 7, 11):
            chained = 16 * multiplier_height_cap(q, N) / math.log(2 * N * N)
            assert chained <= 4.1 * math.log(q) + 4.217 + 1e-12
    # and q^2 <= 4.1 log q + 4.217 already fails at q = 3: no odd prime survives
    assert 9 > 4.1 * math.log(3) + 4.217
    assert 4 < 4.1 * math.log(2) + 4.217


def test_growth_poly_shape():
    coeffs = growth_poly()
    assert len(coeffs) == 7
    prefactor = 2592 * math.e * 4e41 / math.log(56)
    assert float(coeffs[6]) == pytest.approx(prefactor, rel=1e-12)
    # constant term: prefactor times the product of the factor offsets
    log2 = math.log(2)
    product = (log2 + 1 / (2 * math.e)) * (log2 + 1 / 3) ** 3 * (2 * log2 / 9) * log2
    assert float(coeffs[0]) == pytest.approx(prefactor * product, rel=1e-12)


def test_growth_ratio():
    assert float(growth_ratio(math.log(56))) == pytest.approx(2.92990, abs=1e-4)
    assert growth_ratio_check(56).holds
    assert growth_ratio_check(10**6).holds
    # g decreases toward 1
    assert 1 < float(growth_ratio(1000.0)) < 1.02
    with pytest.raises(ValueError):
        growth_ratio_check(55)


def test_growth_poly_crossover():
    # the k = 0 comparison fails at 3.6e27 in exact arithmetic; the true
    # crossover of x^2 against P(log x) sits near 7.3e27
    assert not poly_growth_check(growth_poly(), 3.6e27).holds
    assert not poly_growth_check(growth_poly(), 7.2e27).holds
    assert poly_growth_check(growth_poly(), 7.4e27).holds


def test_n_cap():
    assert n_cap(56) == pytest.approx(3.6e27)
    assert n_cap(75) == pytest.approx(3.6e27)
    # the (log N)^{5/2} branch takes over around N = e^27.4
    assert n_cap(10**12) > 3.6e27
    assert n_cap(10**12) == pytest.approx(9.196e23 * math.log(10**12) ** 2.5)
    with pytest.raises(ValueError):
        n_cap(55)


def test_gap_floor():
    # at N = 1 only the period term survives: log(omega1 / 2) = log(1.311028...)
    assert gap_floor(2, 1) == pytest.approx(0.2708121, abs=1e-6)
    assert gap_floor(11, 75) == pytest.approx(63.414, abs=1e-3)
    assert gap_floor(11, 75) <= math.log(N_CAP_SMALL) < gap_floor(11, 76)
    assert gap_floor(11, 30) < gap_floor(12, 30)
    assert gap_floor(11, 30) < gap_floor(11, 31)
    with pytest.raises(ValueError):
        gap_floor(1, 5)


def test_resolve_N_threshold():
    assert resolve_N_threshold() == (75, 54)


def test_nonidentity_multiplier():
    report = nonidentity_multiplier(5, rational_point(-4, 6), 1)
    assert report.holds
    assert report.inputs["chain_bound"] < 8
    report = nonidentity_multiplier(5, rational_point(-4, 6), 3)
    assert not report.holds
    assert report.inputs["n_squared"] == 9 > report.inputs["chain_bound"]
    for N in (1, 2, 3, 10, 100, 10**6):
        assert nonidentity_multiplier(N, rational_point(-1, 0), 1).inputs["chain_bound"] < 8


def test_search_integral_points():
    assert [(int(P.x), int(P.y)) for P in search_integral_points(5, 10**6)] == [(-4, 6), (45, 300)]
    assert [(int(P.x), int(P.y)) for P in search_integral_points(7, 10**6)] == [(25, 120)]
    assert search_integral_points(1, 10**6) == []
    assert search_integral_points(3, 10**5) == []
    with pytest.raises(ValueError):
        search_integral_points(8, 10**5)
    with pytest.raises(ValueError):
        search_integral_points(5, 3)


def test_search_stable_under_wider_range():
    narrow = search_integral_points(29, 3 * 10**5)
    wide = search_integral_points(29, 10**6)
    assert narrow == wide


def test_vector_and_python_scans_agree():
    for N in (5, 6, 34):
        assert _vector_square_abscissas(N, -N, 5000) == _python_square_abscissas(N, -N, 5000)


def test_table_matches_expected(table):
    assert tuple(row.N for row in table.rows) == TABLE_N_VALUES
    for row in table.rows:
        assert tuple((int(P.x), int(P.y)) for P in row.points) == EXPECTED_TABLE[row.N]


def test_table_heights(table):
    for row in table.rows:
        assert row.ratio_ok
        for h in row.heights:
            assert h > 0
        for hp in row.heights:
            for hq in row.heights:
                assert hp < 121 * hq


def test_table_points_have_nonintegral_small_multiples(table):
    # denominators D_n grow past 1 immediately for 2 <= n <= 7
    for row in table.rows:
        cc = congruent_curve(row.N)
        for P in row.points:
            dens = denominator_sequence(cc.curve, P, 7)
            for n in range(2, 8):
                assert dens[n] is not None and dens[n] > 1


def test_table_height_windows(table):
    for row in table.rows:
        cc = congruent_curve(row.N)
        for P in row.points:
            assert height_window_check(cc.curve, P).holds


def test_height_windows_literals():
    # N = 5, P = (-4, 6): hhat = 0.94974..., h(x)/2 = log(4)/2
    hdiff, floor, cap = height_windows(5, rational_point(-4, 6))
    assert hdiff.holds
    assert hdiff.inputs["lower"] == pytest.approx(-math.log(5) / 2 - math.log(2) / 4)
    assert hdiff.inputs["upper"] == pytest.approx(math.log(26) / 4 + math.log(2) / 12)
    assert hdiff.inputs["difference"] == pytest.approx(0.2565939056815, abs=1e-9)
    assert floor.holds
    assert floor.threshold == pytest.approx(math.log(50) / 16)
    # the oval point sits outside the upper window's domain, and in fact
    # violates the inequality there: 0.9497 > log(4)/2 + log(2)/3 = 0.924
    assert cap.applicable is False and cap.holds is None
    assert cap.inputs["hhat"] > cap.threshold


def test_height_windows_unbounded_point():
    hdiff, floor, cap = height_windows(5, rational_point(45, 300))
    assert hdiff.holds and floor.holds
    assert cap.applicable is True and cap.holds is True
    assert cap.threshold == pytest.approx(math.log(45) / 2 + math.log(2) / 3)


def test_height_windows_accepts_precomputed_height(table):
    row = table.rows[0]
    reports = height_windows(row.N, row.points[0], row.heights[0])
    assert reports[0].inputs["hhat"] == row.heights[0]


def test_height_windows_torsion_rejected():
    with pytest.raises(TorsionInput):
        height_windows(5, rational_point(5, 0))
    with pytest.raises(TorsionInput):
        height_windows(5, rational_point(0, 0))


def test_table_ord_l_structure(table):
    checked = 0
    for row in table.rows:
        for P in row.points:
            a = int(P.x)
            g = math.gcd(abs(a), row.N)
            if g == 1:
                continue
            for ell in prime_divisors(g):
                for n in (3, 5, 7):
                    if 2 * n % ell == 0:
                        continue
                    got = valuation(psi_value_binary(n, a, row.N), ell)
                    assert got == (n * n - 1) // 2 * valuation(g, ell)
                    checked += 1
    assert checked > 20


def test_table_csv_shape(table):
    text = table_csv(table)
    lines = text.strip().split("\n")
    assert lines[0] == "N,x,y,hhat"
    assert len(lines) == 1 + sum(len(row.points) for row in table.rows)
    assert lines[1].startswith("5,-4,6,")
