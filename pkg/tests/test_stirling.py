import math
from fractions import Fraction

import numpy as np
import pytest

from spectralwalk import (
    SpectralwalkError,
    moment_spectrum,
    mspec_from_pspec,
    pk_closed,
    poisson_spectrum,
    pspec_from_mspec,
    regular_moments_closed,
    solve_hierarchies,
    stirling_first_signed,
    stirling_second,
)

from helpers import box_domain, cycle_arc_domain, relerr, tree_domain


def second_kind_explicit(k, n):
    # alternating-sum formula, exact rational arithmetic
    total = sum((-1) ** (n - m) * math.comb(n, m) * m**k for m in range(1, n + 1))
    value = Fraction(total, math.factorial(n))
    assert value.denominator == 1
    return int(value)


def falling_factorial_coefficients(k):
    # expand x(x-1)...(x-k+1); coeffs[n] is the coefficient of x^n
    coeffs = [0, 1]  # polynomial x
    for j in range(1, k):
        # multiply by (x - j)
        shifted = [0] + coeffs
        coeffs = [s - j * c for s, c in zip(shifted, coeffs + [0])]
    return coeffs


def test_second_kind_against_explicit_formula():
    for k in range(1, 21):
        for n in range(1, k + 1):
            assert stirling_second(k, n) == second_kind_explicit(k, n)


def test_first_kind_against_polynomial_expansion():
    for k in range(1, 21):
        coeffs = falling_factorial_coefficients(k)
        for n in range(1, k + 1):
            assert stirling_first_signed(k, n) == coeffs[n]


def test_stirling_inversion_is_exact():
    for k in range(1, 21):
        for j in range(1, k + 1):
            total = sum(
                stirling_second(k, n) * stirling_first_signed(n, j)
                for n in range(j, k + 1)
            )
            assert total == (1 if j == k else 0)


def test_spot_values():
    assert stirling_second(2, 1) == 1
    assert stirling_second(3, 2) == 3
    assert stirling_first_signed(3, 2) == -3
    assert stirling_first_signed(3, 1) == 2
    for k in (1, 5, 12, 20):
        assert stirling_second(k, k) == 1
        assert stirling_first_signed(k, k) == 1
        assert stirling_second(k, 1) == 1


def test_range_violations():
    for bad in ((0, 0), (3, 0), (3, 4), (21, 1)):
        with pytest.raises(SpectralwalkError):
            stirling_second(*bad)
        with pytest.raises(SpectralwalkError):
            stirling_first_signed(*bad)


# ------------------------------------------------------------ P_k polynomial


def pk_series(x, k, tail=1e-10):
    q = 1.0 - x
    terms = []
    l = 1
    while True:
        t = l**k * q ** (l - 1)
        terms.append(t)
        # geometric tail bound once the ratio falls below 1
        if abs(t) < tail * 1e-2 and l > k:
            break
        if l > 10_000:
            raise AssertionError("series did not converge")
        l += 1
    return x * math.fsum(terms)


def test_pk_base_cases():
    for x in (0.3, 0.7, 1.0, 1.6):
        assert pk_closed(x, 0) == 1.0
        assert pk_closed(x, 1) == pytest.approx(1.0 / x, rel=1e-14)
    assert pk_closed(0.5, 2) == pytest.approx(6.0, rel=1e-13)


def test_pk_closed_matches_series():
    for x in (0.3, 0.5, 1.0, 1.5):
        for k in range(0, 9):
            assert abs(pk_closed(x, k) - pk_series(x, k)) < 1e-8


def test_pk_recursion():
    # P_{k+1}(x) = P_k(x)/x + (x-1) P_k'(x), with P_k' from the closed form
    for x in (0.3, 0.5, 1.0, 1.5):
        for k in range(1, 10):
            coeffs = {
                n: stirling_second(k, n) * math.factorial(n) * (-1.0) ** (k + n)
                for n in range(1, k + 1)
            }
            pk = sum(c * x ** (-n) for n, c in coeffs.items())
            dpk = sum(-n * c * x ** (-n - 1) for n, c in coeffs.items())
            lhs = pk_closed(x, k + 1)
            rhs = pk / x + (x - 1.0) * dpk
            assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(lhs))


def test_pk_domain_checks():
    with pytest.raises(SpectralwalkError):
        pk_closed(0.0, 1)
    with pytest.raises(SpectralwalkError):
        pk_closed(2.0, 1)
    with pytest.raises(SpectralwalkError):
        pk_closed(0.5, 21)


# ------------------------------------------------- closed-form exit moments


def test_regular_moments_fixture_b(fixture_b):
    vecs = regular_moments_closed(fixture_b, 2)
    assert vecs[1] == pytest.approx([1.0, 1.0], rel=1e-12)
    assert vecs[2] == pytest.approx([1.5, 1.5], rel=1e-12)


def test_regular_moments_fixture_a(fixture_a):
    vecs = regular_moments_closed(fixture_a, 2)
    assert vecs[2] == pytest.approx([0.25], rel=1e-12)


def test_regular_moments_k1_is_g1(fixture_b):
    vecs = regular_moments_closed(fixture_b, 1)
    sol = solve_hierarchies(fixture_b, 1)
    assert np.array_equal(vecs[1], sol.g_functions[1])


def test_regular_moments_match_f_hierarchy():
    for d in (box_domain(2, inner_width=4), cycle_arc_domain(12, 6), tree_domain(3, 4)):
        sol = solve_hierarchies(d, 6)
        closed = regular_moments_closed(d, 6)
        for k in range(7):
            assert relerr(closed[k], sol.f_functions[k]) < 1e-10


def test_regular_moments_reject_irregular():
    # a lattice box touching the parent boundary has mixed interior degrees
    from spectralwalk import LatticeSpec, build_lattice, make_domain

    g = build_lattice(LatticeSpec(2, ((0, 4), (0, 4))))
    sel = {i for i, c in g.coords.items() if all(0 <= x <= 2 for x in c)}
    d = make_domain(g, sel)
    with pytest.raises(SpectralwalkError, match="regular"):
        regular_moments_closed(d, 2)


# --------------------------------------------------------- spectra conversion


def test_mspec_from_pspec_fixtures():
    assert mspec_from_pspec([2.0, 2.0, 4.0], 2.0, 2) == pytest.approx([2.0, 2.0, 3.0])
    assert mspec_from_pspec([1.0, 0.5, 0.5], 2.0, 2) == pytest.approx([1.0, 0.5, 0.25])
    a2 = [3.0, 1.5]
    assert mspec_from_pspec(a2, 5.0, 1)[1] == a2[1]


def test_pspec_from_mspec_fixtures():
    assert pspec_from_mspec([2.0, 2.0, 3.0], 2.0, 2) == pytest.approx([2.0, 2.0, 4.0])
    assert pspec_from_mspec([1.0, 0.5, 0.25], 2.0, 2) == pytest.approx([1.0, 0.5, 0.5])


def test_conversion_round_trip():
    rng = np.random.default_rng(3)
    a2 = [float(v) for v in rng.uniform(0.5, 4.0, 9)]
    alpha = 3.0
    back = pspec_from_mspec(mspec_from_pspec(a2, alpha, 8), alpha, 8)
    assert relerr(back, a2) < 1e-10


def test_conversion_insufficient_length():
    with pytest.raises(SpectralwalkError):
        mspec_from_pspec([1.0, 2.0], 2.0, 5)


def test_duality_end_to_end_on_regular_domains():
    domains = [
        cycle_arc_domain(10, 5),
        cycle_arc_domain(20, 12, offset=3),
        box_domain(1, inner_width=5),
        box_domain(2, inner_width=4),
        box_domain(3, inner_width=3),
        tree_domain(3, 4),
        tree_domain(4, 3),
    ]
    for d in domains:
        from spectralwalk import regularity

        alpha = regularity(d).alpha
        assert alpha is not None
        a1 = moment_spectrum(d, 8)
        a2 = poisson_spectrum(d, 8)
        assert relerr(mspec_from_pspec(a2, alpha, 8), a1) < 1e-9
        assert relerr(pspec_from_mspec(a1, alpha, 8), a2) < 1e-9
