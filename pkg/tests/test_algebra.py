from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mumford_rec.algebra import (
    LaurentSeries,
    LinearFactor,
    SymbolicPoly,
    Symbol,
    default_window,
    lam,
    laurent_coefficient,
    laurent_expand_rational,
    psi,
    rational_arith,
)
from mumford_rec.localization import FixedLocus, fixed_locus_contribution

SYMS = [psi("0"), psi("inf"), lam("0", 1), lam("inf", 2)]

monomials = st.lists(st.tuples(st.sampled_from(SYMS), st.integers(1, 3)), max_size=2)
polys = st.lists(
    st.tuples(st.integers(-4, 4), st.integers(1, 3), monomials), max_size=4
).map(
    lambda rows: sum(
        (
            _mono(ms).scale(Fraction(n, d))
            for n, d, ms in rows
        ),
        SymbolicPoly(),
    )
)


def _mono(ms):
    out = SymbolicPoly.constant(1)
    for s, e in ms:
        out = out * SymbolicPoly.gen(s, e)
    return out


@settings(max_examples=1000, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == SymbolicPoly()
    assert a * SymbolicPoly.constant(1) == a


@settings(max_examples=40, deadline=None)
@given(polys, st.integers(0, 3))
def test_power_matches_repeated_product(a, n):
    want = SymbolicPoly.constant(1)
    for _ in range(n):
        want = want * a
    assert a ** n == want


def test_rational_arith():
    assert rational_arith(1, Fraction(1, 2), "add") == Fraction(3, 2)
    assert rational_arith(3, 4, "div") == Fraction(3, 4)
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")


def test_lower_drops_constant_in_variable():
    p = SymbolicPoly.gen(psi("inf"), 2) + SymbolicPoly.gen(lam("inf", 1))
    assert p.lower(psi("inf")) == SymbolicPoly.gen(psi("inf"))


def test_geometric_expansion():
    # 1/(t - psi_0) = sum psi_0^k t^(-1-k)
    s = laurent_expand_rational({0: SymbolicPoly.constant(1)}, [LinearFactor(1, -SymbolicPoly.gen(psi("0")))], (-6, 2))
    for k in range(5):
        assert laurent_coefficient(s, -1 - k) == SymbolicPoly.gen(psi("0"), k)
    assert laurent_coefficient(s, 0).is_zero()


def test_coefficient_outside_window_raises():
    s = LaurentSeries({0: SymbolicPoly.constant(1)}, -2, 2)
    with pytest.raises(ValueError):
        s.coefficient(-3)


def test_product_window():
    a = LaurentSeries({0: SymbolicPoly.constant(1)}, -3, 1)
    b = LaurentSeries({1: SymbolicPoly.constant(2)}, -5, 2)
    p = a * b
    assert (p.lo, p.hi) == (max(-3 + 2, -5 + 1), 3)
    assert p.coefficient(1) == SymbolicPoly.constant(2)


def test_unsupported_denominator():
    with pytest.raises(ValueError):
        laurent_expand_rational({0: SymbolicPoly.constant(1)}, [LinearFactor(2, SymbolicPoly())], (-4, 0))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_window_enlargement_stable(g):
    lo, hi = default_window(g)
    for h in range(0, g + 1):
        small = fixed_locus_contribution(g, FixedLocus(g, h))
        big = fixed_locus_contribution(g, FixedLocus(g, h), (lo - 4, hi + 3))
        for k in range(lo, hi + 1):
            assert small.coefficient(k) == big.coefficient(k)


def test_genus_one_f0_coefficient():
    # (1/t)(-1)(t + l1)/(-t(-t - psi)) at t^-4: -psi^2 + l1 psi
    s = fixed_locus_contribution(1, FixedLocus(1, 0))
    pi, l1 = SymbolicPoly.gen(psi("inf")), SymbolicPoly.gen(lam("inf", 1))
    assert laurent_coefficient(s, -4) == -(pi * pi) + l1 * pi


def test_f0_coefficient_at_t_minus_5_genus_two():
    # sign is (-1)^j: hand expansion gives +(psi^4 - l1 psi^3 + l2 psi^2) at j = 2
    s = fixed_locus_contribution(2, FixedLocus(2, 0))
    p = SymbolicPoly.gen(psi("inf"))
    l1, l2 = SymbolicPoly.gen(lam("inf", 1)), SymbolicPoly.gen(lam("inf", 2))
    assert laurent_coefficient(s, -5) == p ** 4 - l1 * p ** 3 + l2 * p ** 2


def test_poly_examples():
    p0, pi, l = SymbolicPoly.gen(psi("0")), SymbolicPoly.gen(psi("inf")), SymbolicPoly.gen(lam("inf", 1))
    assert (pi - l) + (pi - l).scale(-1) == SymbolicPoly()
    assert p0 * (pi - l) == p0 * pi - p0 * l


@settings(max_examples=200, deadline=None)
@given(polys, polys, st.integers(-3, 3), st.integers(-3, 3), st.integers(-6, 1))
def test_laurent_coefficient_linear(p, q, a, b, k):
    s = LaurentSeries({-2: p, 0: q}, -6, 1)
    t = LaurentSeries({-5: q, 1: p * q}, -6, 1)
    comb = s.scale(a) + t.scale(b)
    assert laurent_coefficient(comb, k) == laurent_coefficient(s, k).scale(a) + laurent_coefficient(t, k).scale(b)
