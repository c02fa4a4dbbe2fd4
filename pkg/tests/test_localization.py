import pytest

from mumford_rec.algebra import SymbolicPoly, default_window, lam, laurent_coefficient, psi
from mumford_rec.builders import build_c, mumford_factor, mumford_lhs, theorem_rhs
from mumford_rec.localization import (
    FixedLocus,
    f0_closed_form,
    fixed_locus_contribution,
    fixed_loci,
    remark1_extract,
    replay_derivation,
    verify_cprime,
)
from mumford_rec.strata import expand_decorations


def test_locus_count():
    for g in range(1, 7):
        loci = fixed_loci(g)
        assert len(loci) == g + 1
        assert loci[0].genus_split == (0, g)
        assert all(l.genus_split == (l.h, g - l.h) for l in loci[1:])


def f0_independent(g, j):
    """-(psi^(g+1) - l1 psi^g + ...) generalised to t^(-3-j) by the sign (-1)^j."""
    out = SymbolicPoly()
    for i in range(g + 1):
        t = SymbolicPoly.gen(psi("inf"), g + j - i)
        if i:
            t = t * SymbolicPoly.gen(lam("inf", i))
        out = out + t.scale((-1) ** i)
    return out.scale((-1) ** j)


@pytest.mark.parametrize("g", range(1, 7))
def test_f0_coefficient(g):
    s = fixed_locus_contribution(g, FixedLocus(g, 0))
    assert laurent_coefficient(s, -4) == f0_independent(g, 1)
    assert f0_closed_form(g, 1) == f0_independent(g, 1)


def test_f0_at_t_minus_5_genus_one():
    # hand expansion: -(t + l1) / (t^2 (t + psi)) at t^-5 is psi^3 - l1 psi^2
    s = fixed_locus_contribution(1, FixedLocus(1, 0))
    p, l1 = SymbolicPoly.gen(psi("inf")), SymbolicPoly.gen(lam("inf", 1))
    assert laurent_coefficient(s, -5) == p ** 3 - l1 * p * p


@pytest.mark.parametrize("g", range(1, 7))
def test_cprime_sweep(g):
    for h in range(1, g + 1):
        rep = verify_cprime(g, h)
        assert rep.ok, (g, h, rep.residual)


def test_cprime_genus_one():
    got = laurent_coefficient(fixed_locus_contribution(1, FixedLocus(1, 1)), -4)
    want = SymbolicPoly.gen(psi("0")) - SymbolicPoly.gen(lam("0", 1)) - SymbolicPoly.gen(psi("inf"))
    assert got == want


@pytest.mark.parametrize("g", range(1, 7))
def test_replay(g):
    rep = replay_derivation(g)
    assert rep.ok, rep.mismatches
    assert rep.intermediates["killed_by_psi3"] == [g]
    assert rep.intermediates["dilaton"] == {h: [2 * g if h == 0 else 2 * (g - h)] for h in range(g)}
    assert rep.rhs == (theorem_rhs(g) - mumford_lhs(g)).scale(2 * g)


def test_replay_genus_two_display():
    rep = replay_derivation(2)
    want = mumford_lhs(2).scale(-4) + build_c(2, 1).glued().scale(2)
    assert rep.rhs == want
    assert expand_decorations(rep.lhs) == expand_decorations(want)


@pytest.mark.parametrize("g", range(1, 5))
def test_replay_modes_agree(g):
    a = replay_derivation(g, mode="direct")
    b = replay_derivation(g, mode="corrected")
    assert b.ok and expand_decorations(a.lhs) == expand_decorations(b.lhs)


@pytest.mark.parametrize("g,j", [(1, 2), (2, 2), (3, 2), (2, 3), (4, 3)])
def test_remark1_pattern(g, j):
    rep = remark1_extract(g, j)
    assert rep.ok, rep.mismatches
    # F_0 side after both pushforwards: (-1)^j 2g TM(g + j - 1)
    f0 = mumford_factor(g, g + j - 1).scale((-1) ** j * 2 * g)
    assert (rep.rhs - f0) == sum((build_c(g, h, j=j).glued().scale(2 * (g - h)) for h in range(1, g)), type(f0)(f0.ambient))


def test_window_must_reach_coefficient():
    with pytest.raises(ValueError):
        replay_derivation(2, j=1, window=(-3, 2))


def test_larger_window_same_replay():
    lo, hi = default_window(3)
    a = replay_derivation(3)
    b = replay_derivation(3, window=(lo - 5, hi + 2))
    assert a.lhs == b.lhs and b.ok
