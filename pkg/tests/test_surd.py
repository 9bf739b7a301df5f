from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from latticesimplex.surd import Surd, parse_surd, squarefree_split

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
primes = st.sampled_from([2, 3, 5, 6, 7, 10])


def surds():
    return st.builds(lambda a, b, p, c, q: a + Surd.sqrt(p, b) + Surd.sqrt(q, c),
                     rationals, rationals, primes, rationals, primes)


def test_squarefree_split():
    assert squarefree_split(72) == (6, 2)
    assert squarefree_split(1) == (1, 1)


def test_parse_and_print_round_trip():
    for text in ["1", "sqrt2", "phi", "3/2 - sqrt(5)/7", "sqrt(8)", "(1+sqrt5)/2", "sqrt2*sqrt3"]:
        s = parse_surd(text)
        assert parse_surd(str(s)) == s
    assert parse_surd("sqrt(8)") == Surd.sqrt(2, 2)
    assert parse_surd("phi") == parse_surd("(1+sqrt5)/2")
    assert parse_surd("sqrt2*sqrt3") == Surd.sqrt(6)


def test_phi_minimal_polynomial():
    phi = parse_surd("phi")
    assert phi * phi == phi + 1
    assert 1 / phi == phi - 1


def test_rational_collapse():
    s = Surd.sqrt(2) * Surd.sqrt(2)
    assert s.is_rational() and s.to_fraction() == 2
    with pytest.raises(ValueError):
        Surd.sqrt(3).to_fraction()


def test_sign_tiny_difference():
    # 99/70 is a convergent of sqrt2, off by about 7e-5; 665857/470832 by 1.6e-12
    assert (Surd.sqrt(2) - Fraction(99, 70)).sign() == -1
    assert (Surd.sqrt(2) - Fraction(665857, 470832)).sign() == -1
    assert (Surd.sqrt(2) - Fraction(1393, 985)).sign() == 1


@settings(max_examples=200, deadline=None)
@given(surds())
def test_sign_and_floor_match_high_precision(s):
    with mpmath.workprec(400):
        v = s.to_mpf(400)
        assert s.sign() == int(mpmath.sign(v))
        assert s.floor() == int(mpmath.floor(v))


@settings(max_examples=100, deadline=None)
@given(surds(), surds())
def test_field_operations(a, b):
    assert (a + b) - b == a
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
    with mpmath.workprec(300):
        assert abs((a * b).to_mpf(300) - a.to_mpf(300) * b.to_mpf(300)) < mpmath.mpf(2) ** -250 * (1 + abs(a.to_mpf(300) * b.to_mpf(300)))


def test_inverse_of_three_prime_surd():
    s = 1 + Surd.sqrt(2) + Surd.sqrt(3) + Surd.sqrt(5)
    assert s * s.inverse() == 1


def test_interval_contains_value():
    s = Surd.sqrt(7, Fraction(3, 5)) - Fraction(1, 3)
    lo, hi = s.interval(60)
    with mpmath.workprec(200):
        v = s.to_mpf(200) * 2 ** 60
        assert lo <= v <= hi and hi - lo <= 4
