from fractions import Fraction

from kelvinwake import ddouble as dd


def test_two_sum_is_exact():
    a, b = 1.0, 1e-30
    s, e = dd.two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


def test_two_prod_is_exact():
    a, b = 1.1, 3.7
    p, e = dd.two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_mul_accuracy():
    x = dd.div_d(dd.ONE, 3.0)          # 1/3 to ~32 digits
    y = dd.mul_d(x, 3.0)
    assert abs(dd.to_float(dd.add_d(y, -1.0))) < 1e-31


def test_div_round_trip():
    x = dd.from_float(1.7)
    q = dd.div(x, dd.from_float(0.3))
    back = dd.mul(q, dd.from_float(0.3))
    assert abs(dd.to_float(back) - 1.7) < 1e-30


def test_from_int_exact_within_106_bits():
    v = 1
    for m in range(1, 25):
        v *= 2 * m - 1                 # 47!! ~ 2.7e30, 101 bits
    hi, lo = dd.from_int(v)
    assert int(hi) + int(lo) == v


def test_from_int_correctly_rounded_beyond():
    v = 1
    for m in range(1, 30):
        v *= 2 * m - 1                 # 57!!, 129 bits: inexact but close
    hi, lo = dd.from_int(v)
    assert abs((int(hi) + int(lo)) - v) <= 2 ** (v.bit_length() - 105)


def test_constants_self_consistent():
    two_over_pi = dd.div((2.0, 0.0), dd.PI)
    prod = dd.mul(two_over_pi, dd.PI)
    assert abs(dd.to_float(prod) - 2.0) < 1e-30
