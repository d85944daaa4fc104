import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf
from mpmath import log as mlog

from benfordbase.digits import (
    DomainError,
    benford_pmf,
    first_two_mass,
    leading_digit,
    leading_digits,
    theoretical_ratio,
)

mp.dps = 40


def digits_by_string(n, b):
    # independent oracle: build the base-b representation and take its head
    out = []
    while n:
        n, r = divmod(n, b)
        out.append(r)
    return out[-1]


@pytest.mark.parametrize("n, b, expected", [(255, 16, 15), (1, 2, 1), (1, 70, 1), (729, 3, 1), (10, 10, 1), (99, 10, 9)])
def test_leading_digit_examples(n, b, expected):
    assert leading_digit(n, b) == expected


@pytest.mark.parametrize("n", [0, -1, -255])
def test_leading_digit_rejects_nonpositive(n):
    with pytest.raises(DomainError):
        leading_digit(n, 10)


def test_leading_digit_rejects_bad_base():
    with pytest.raises(DomainError):
        leading_digit(5, 1)


def test_power_boundaries_exact():
    # the place float logs go wrong
    for b in (3, 7, 10, 16, 70):
        for k in range(1, 40):
            assert leading_digit(b**k, b) == 1
            assert leading_digit(b**k - 1, b) == b - 1


def test_huge_integers():
    n = 7 * 10**400 + 123
    assert leading_digit(n, 10) == 7
    arr = np.array([n, 3 * 16**90], dtype=object)
    assert list(leading_digits(arr, 10)) == [7, digits_by_string(3 * 16**90, 10)]
    assert leading_digits(arr, 16)[1] == 3


@settings(max_examples=300)
@given(st.integers(min_value=1, max_value=10**30), st.integers(min_value=2, max_value=100))
def test_leading_digit_matches_representation(n, b):
    d = leading_digit(n, b)
    assert d == digits_by_string(n, b)
    assert 1 <= d <= b - 1
    assert leading_digit(n * b, b) == d


@given(st.lists(st.integers(min_value=1, max_value=2**62), min_size=1, max_size=50), st.integers(2, 70))
def test_vectorised_matches_scalar(values, b):
    got = leading_digits(np.array(values, dtype=np.int64), b)
    assert list(got) == [leading_digit(v, b) for v in values]


def test_leading_digits_rejects_zero():
    with pytest.raises(DomainError):
        leading_digits(np.array([3, 0, 5]), 10)


def test_pmf_base10_against_high_precision():
    expected = mlog(2) / mlog(10)
    assert benford_pmf(10)[1] == pytest.approx(float(expected), abs=1e-15)
    assert benford_pmf(10)[1] == pytest.approx(0.30102999566398120, abs=1e-15)


def test_pmf_base2():
    assert list(benford_pmf(2).probs) == [1.0]


@pytest.mark.parametrize("b", range(2, 71))
def test_pmf_normalised_and_decreasing(b):
    p = benford_pmf(b)
    assert len(p) == b - 1
    assert math.fsum(p.probs) == pytest.approx(1.0, abs=1e-12)
    assert np.all(p.probs > 0) and np.all(p.probs <= 1)
    assert np.all(np.diff(p.probs) < 0)


def test_pmf_digit_out_of_range():
    with pytest.raises(DomainError):
        benford_pmf(10)[10]
    with pytest.raises(DomainError):
        benford_pmf(10)[0]


def test_theoretical_ratio():
    assert theoretical_ratio(1, 2) == pytest.approx(float(mlog(2) / mlog(mpf(3) / 2)), abs=1e-14)
    assert theoretical_ratio(1, 2) == pytest.approx(1.7095112913514548, abs=1e-14)
    assert theoretical_ratio(4, 4) == 1.0


@given(st.integers(1, 500), st.integers(1, 500))
def test_theoretical_ratio_reciprocal(d1, d2):
    assert theoretical_ratio(d1, d2) * theoretical_ratio(d2, d1) == pytest.approx(1.0, abs=1e-14)


def test_base_cancellation():
    for b in range(3, 71):
        p = benford_pmf(b)
        for d1 in range(1, b):
            for d2 in range(1, b):
                assert abs(p[d1] / p[d2] - theoretical_ratio(d1, d2)) < 1e-12


def test_first_two_mass_values():
    assert first_two_mass(9) == pytest.approx(0.5, abs=1e-15)
    assert first_two_mass(70) == pytest.approx(float(mlog(3) / mlog(70)), abs=1e-14)
    assert first_two_mass(70) == pytest.approx(0.25859, abs=1e-5)
    assert first_two_mass(4) == pytest.approx(0.79248125036057809, abs=1e-14)


def test_first_two_mass_is_pmf_sum():
    for b in range(4, 71):
        p = benford_pmf(b)
        assert first_two_mass(b) == pytest.approx(p[1] + p[2], abs=1e-14)


def test_first_two_mass_lower_bound():
    assert min(first_two_mass(b) for b in range(6, 71)) >= 0.25


@pytest.mark.parametrize("b", [2, 3])
def test_first_two_mass_domain(b):
    with pytest.raises(DomainError):
        first_two_mass(b)
