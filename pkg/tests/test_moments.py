"""Moment experiments: combinatorial coefficients and empirical averages."""

from __future__ import annotations

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from chx.errors import ResourceError
from chx.families import OrderKFamilySpec, _kronecker_column, generate_family
from chx.lfunction import PrimeSumSpec, prime_sum
from chx.moments import (
    MomentSpec,
    QuadFamilySpec,
    b_coefficient,
    b_identity_check,
    b_product_inequality_check,
    diagonal_terms,
    empirical_moment,
)

W5 = PrimeSumSpec(2, 14)  # primes 3, 5, 7, 11, 13


def test_b_coefficient_multinomial():
    assert b_coefficient(1, 7, W5) == 1
    assert b_coefficient(2, 15, W5) == 2          # 3*5 and 5*3
    assert b_coefficient(2, 9, W5) == 1           # 3*3 only
    assert b_coefficient(3, 3 * 5 * 7, W5) == 6   # 3! orderings
    assert b_coefficient(3, 3 * 3 * 5, W5) == 3   # 3!/2!
    assert b_coefficient(2, 21, PrimeSumSpec(2, 6)) == 0  # 7 outside window
    assert b_coefficient(1, 4, W5) == 0
    assert b_coefficient(2, 7, W5) == 0           # wrong number of factors


def test_b_coefficient_bounds():
    for n in range(1, 500):
        for r in (1, 2, 3):
            b = b_coefficient(r, n, W5)
            assert 0 <= b <= math.factorial(r)


def test_b_identity_exact():
    rec = b_identity_check(2, 1, PrimeSumSpec(2, 7))
    assert rec.lhs == rec.rhs == Fraction(64, 225)  # (1/3 + 1/5)^2
    assert rec.equal
    for t in (1, 2, 3, 4, 5):
        for alpha in (1, 2):
            assert b_identity_check(t, alpha, W5).equal


def test_b_identity_guards():
    with pytest.raises(ValueError):
        b_identity_check(7, 1, W5)  # t cap keeps the expansion exact
    with pytest.raises(ResourceError):
        b_identity_check(2, 1, PrimeSumSpec(2, 100))  # too many primes


def test_b_product_inequality_no_violations():
    for r1 in (1, 2, 3):
        for r2 in (1, 2, 3):
            assert b_product_inequality_check(r1, r2, PrimeSumSpec(2, 8), 10**6) == []


def test_diagonal_terms_exact_value():
    # r = 1, k = 2: sum_p b_1(p^2)/p^2 = 1/9 + 1/25 over primes {3, 5}
    assert diagonal_terms(1, 2, PrimeSumSpec(2, 7)) == Fraction(34, 225)
    # bound 2^r r! (sum 1/p^2)^r holds with exact arithmetic
    s = Fraction(1, 9) + Fraction(1, 25)
    for r in (1, 2, 3):
        val = diagonal_terms(r, 2, PrimeSumSpec(2, 7))
        assert val <= 2**r * math.factorial(r) * s**r


def test_diagonal_terms_caps():
    with pytest.raises(ResourceError):
        diagonal_terms(5, 2, PrimeSumSpec(2, 7))


def test_quad_family_spec_d_values():
    fam = QuadFamilySpec(100, delta=1)
    assert fam.d_values().tolist() == [
        5, 13, 17, 21, 29, 33, 37, 41, 53, 57, 61, 65, 69, 73, 77, 85, 89, 93, 97
    ]
    both = QuadFamilySpec(100)
    assert len(both.d_values()) > len(fam.d_values())
    assert 1 not in np.abs(both.d_values()).tolist()


def test_quadratic_moment_brute_force():
    fam = QuadFamilySpec(300, delta=-1)
    window = PrimeSumSpec(2, 30)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = empirical_moment(MomentSpec(fam, 2, window))
    ds = fam.d_values()
    ps = [int(p) for p in window.primes()]
    brute = 0.0
    for d in ds.tolist():
        s = sum(_kronecker_column(np.array([d]), p)[0] / p for p in ps)
        brute += abs(s) ** 4  # r = 2: |sum|^{2r}
    brute /= len(ds)
    assert rec.lhs_avg == pytest.approx(brute, rel=1e-13)


def test_orderk_moment_brute_force():
    spec = OrderKFamilySpec(400, 2)
    window = PrimeSumSpec(2, 30)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = empirical_moment(MomentSpec(spec, 1, window))
    brute = [abs(prime_sum(chi, window)) ** 2 for _, chi in generate_family(spec)]
    assert rec.family_size == len(brute)
    assert rec.lhs_avg == pytest.approx(sum(brute) / len(brute), rel=1e-13)


def test_moment_implied_constant_reasonable():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = empirical_moment(MomentSpec(QuadFamilySpec(1e4), 1, PrimeSumSpec(10, 500)))
    assert 0 < rec.implied_constant <= 10.0
    assert rec.rhs_main > 0


def test_moment_regime_warning_fires():
    # the kept-range guarantee scales like (log Q)^A; far outside it we warn
    with pytest.warns(UserWarning):
        empirical_moment(MomentSpec(QuadFamilySpec(1e4), 3, PrimeSumSpec(10, 5000)))


def test_moment_rejects_empty_family():
    spec = OrderKFamilySpec(400, 11)  # empty pair family
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            empirical_moment(MomentSpec(spec, 1, PrimeSumSpec(2, 30)))


def test_moment_weights_cap():
    window = PrimeSumSpec(2, 30)
    ps = [int(p) for p in window.primes()]
    spec = MomentSpec(QuadFamilySpec(300), 1, window, weights={p: 2.0 for p in ps})
    with pytest.raises(ValueError):
        empirical_moment(spec)
