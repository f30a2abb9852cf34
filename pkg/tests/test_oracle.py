from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from kstab.exactnum import ExactPolynomial
from kstab.oracle import (
    box_points,
    monomial_points,
    monotone_chain,
    newton_fit,
    run_oracle_check,
    simplex_points,
)


def test_newton_fit_recovers_cubic():
    p = ExactPolynomial([Fraction(1, 3), -2, 0, Fraction(5, 7)])
    vals = [p(k) for k in range(4, 11)]
    assert newton_fit(vals, 4, 3) == p


def test_newton_fit_rejects_non_polynomial():
    with pytest.raises(AssertionError):
        newton_fit([2 ** k for k in range(8)], 0, 3)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5), st.integers(-5, 5))
def test_newton_fit_property(coeffs, start):
    p = ExactPolynomial(coeffs)
    deg = len(coeffs) - 1
    assert newton_fit([p(start + i) for i in range(deg + 3)], start, deg) == p


def test_monotone_chain_drops_interior_and_collinear():
    pts = [(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1), (0, 1)]
    assert sorted(monotone_chain(pts)) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def test_brute_counts_match_binomials():
    for n in (1, 2, 3):
        for k in range(5):
            assert len(simplex_points(n, k)) == comb(k + n, n)
    assert len(box_points((1, 2), 3)) == 4 * 7
    # degree-k monomials in 3 variables avoiding y^2: 2k + 1
    assert [len(monomial_points(3, [(0, 2, 0)], k)) for k in range(1, 6)] == [3, 5, 7, 9, 11]


def test_every_golden_value_agrees():
    results = run_oracle_check()
    assert len(results) >= 20
    bad = [(r.name, r.expected, r.library, r.oracle) for r in results if not r.passed]
    assert not bad
    names = {r.name for r in results}
    assert {"conic F", "P1 F", "P2 F"} <= names
