"""Replay of the localization argument on the three-pointed genus-g space.

Each fixed locus contributes a Laurent series in t.  The coefficient of
``t^(-3-j)`` summed over loci vanishes (taken as an input axiom); here the
coefficients are extracted, turned into classes, multiplied by psi_3 and
pushed forward twice, and every intermediate is compared with its closed
form.

Markings: point 1 maps to 0, points 2 and 3 map to infinity.  F_0 has the
whole curve at infinity; F_h has genus h at 0 and genus g - h at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import (
    LaurentSeries,
    LinearFactor,
    Symbol,
    SymbolicPoly,
    default_window,
    lam,
    laurent_coefficient,
    laurent_expand_rational,
    psi,
)
from .builders import (
    RelationReport,
    build_c,
    build_c_prime,
    mumford_factor,
    mumford_lhs,
    theorem_rhs,
)
from .ops import forget_pushforward, psi_multiply
from .strata import Ambient, Decoration, Stratum, TautClass, expand_decorations

__all__ = [
    "FixedLocus",
    "fixed_loci",
    "fixed_locus_contribution",
    "locus_class",
    "verify_cprime",
    "replay_derivation",
    "remark1_extract",
]

AMBIENT_MARKS = ("1", "2", "3")


@dataclass(frozen=True)
class FixedLocus:
    """``h = 0`` is F_0; otherwise genus h sits over 0 and g - h over infinity."""

    g: int
    h: int

    @property
    def tag(self) -> str:
        return f"F_{self.h}"

    @property
    def genus_split(self) -> Tuple[int, int]:
        return (0, self.g) if self.h == 0 else (self.h, self.g - self.h)


def fixed_loci(g: int) -> List[FixedLocus]:
    if g < 1:
        raise ValueError("genus must be >= 1")
    return [FixedLocus(g, h) for h in range(0, g + 1)]


def _hodge_numerator(site: str, genus: int, alternate: bool) -> Dict[int, SymbolicPoly]:
    """``sum_j (+-1)^j lambda_j t^(genus-j)`` as {power: coeff}."""
    out = {}
    for j in range(0, genus + 1):
        c = SymbolicPoly.gen(lam(site, j)) if j else SymbolicPoly.constant(1)
        out[genus - j] = c.scale((-1) ** j if alternate else 1)
    return out


def _poly_mul(a: Dict[int, SymbolicPoly], b: Dict[int, SymbolicPoly]) -> Dict[int, SymbolicPoly]:
    out: Dict[int, SymbolicPoly] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, SymbolicPoly()) + x * y
    return out


T = SymbolicPoly()  # zero shift: the bare factor +-t


def fixed_locus_contribution(g: int, locus: FixedLocus, window: Optional[Tuple[int, int]] = None) -> LaurentSeries:
    """Inverse virtual Euler class of the locus, as a Laurent series."""
    window = window or default_window(g)
    psi_inf = SymbolicPoly.gen(psi("inf"))
    if locus.h == 0:
        # (1/t) (-1)^g (t^g + l1 t^(g-1) + ...) / (-t (-t - psi_inf))
        numer = {k: c.scale((-1) ** g) for k, c in _hodge_numerator("inf", g, False).items()}
        factors = [LinearFactor(1, T), LinearFactor(-1, T), LinearFactor(-1, -psi_inf)]
    else:
        h = locus.h
        psi_0 = SymbolicPoly.gen(psi("0"))
        zero_side = _hodge_numerator("0", h, True)
        inf_side = {k: c.scale((-1) ** (g - h)) for k, c in _hodge_numerator("inf", g - h, False).items()}
        numer = _poly_mul(zero_side, inf_side)
        factors = [
            LinearFactor(1, T),
            LinearFactor(1, -psi_0),
            LinearFactor(-1, T),
            LinearFactor(-1, -psi_inf),
        ]
    return laurent_expand_rational(numer, factors, window)


def _vertex_layout(locus: FixedLocus) -> Tuple[Stratum, Dict[str, Tuple[int, str]]]:
    g, h = locus.g, locus.h
    if h == 0:
        base = Stratum((g,), (AMBIENT_MARKS,), (), (Decoration(),))
        sites = {"inf": (0, "1")}
    else:
        base = Stratum(
            (h, g - h),
            (("1", "#a"), ("#b", "2", "3")),
            (("#a", "#b"),),
            (Decoration(), Decoration()),
        )
        sites = {"0": (0, "#a"), "inf": (1, "#b")}
    return base, sites


def locus_class(locus: FixedLocus, coeff: SymbolicPoly) -> TautClass:
    """Push a coefficient polynomial on the locus into the 3-pointed space."""
    base, sites = _vertex_layout(locus)
    pairs = []
    for mono, c in coeff.terms.items():
        decs = list(base.decorations)
        for sym, e in mono:
            v, leg = sites[sym.site]
            if sym.kind == "psi":
                add = Decoration(((leg, e),))
            else:
                add = Decoration((), ((sym.index, e),))
            decs[v] = decs[v].times(add)
        pairs.append((Stratum(base.genera, base.legs, base.edges, tuple(decs)), c))
    return TautClass.from_terms(Ambient.of(locus.g, AMBIENT_MARKS), pairs)


def verify_cprime(g: int, h: int, j: int = 1) -> RelationReport:
    """Series coefficient at t^(-3-j) of F_h against the closed double sum."""
    series = fixed_locus_contribution(g, FixedLocus(g, h))
    got = laurent_coefficient(series, -3 - j)
    want = build_c_prime(g, h, j).to_poly()
    return RelationReport(got, want, got - want, g, f"cprime:h={h},j={j}")


def f0_closed_form(g: int, j: int = 1) -> SymbolicPoly:
    """``(-1)^j (psi^(g+j) - l1 psi^(g+j-1) + ... + (-1)^g l_g psi^j)`` at infinity."""
    out = SymbolicPoly()
    for i in range(0, g + 1):
        term = SymbolicPoly.gen(psi("inf"), g + j - i)
        if i:
            term = term * SymbolicPoly.gen(lam("inf", i))
        out = out + term.scale((-1) ** (i + j))
    return out


def replay_derivation(g: int, j: int = 1, mode: str = "direct", window: Optional[Tuple[int, int]] = None) -> RelationReport:
    """Run the localization replay for the coefficient of t^(-3-j).

    The report's ``lhs`` is the assembled class on the one-pointed space and
    ``rhs`` is its expected closed form
    ``(-1)^j 2g TM(g+j-1) + sum_{h<g} 2(g-h) iota_h*(c_{h,j})``.
    ``mode`` selects the pushforward implementation (see
    :func:`forget_pushforward`).
    """
    if g < 1 or j < 1:
        raise ValueError("need g >= 1 and j >= 1")
    window = window or default_window(g)
    if -3 - j < window[0]:
        raise ValueError(f"window {window} does not reach t^{-3 - j}")
    mismatches: List[str] = []
    inter: Dict[str, object] = {"dilaton": {}, "killed_by_psi3": [], "loci": g + 1}
    amb1 = Ambient.of(g, ("1",))
    assembled = TautClass(amb1)
    sign = (-1) ** j

    def check(label: str, got: TautClass, want: TautClass) -> None:
        if expand_decorations(got) != expand_decorations(want):
            diff = expand_decorations(got) - expand_decorations(want)
            mismatches.append(f"{label}: differs in {len(diff)} term(s)")

    loci = fixed_loci(g)
    for locus in loci:
        h = locus.h
        coeff = laurent_coefficient(fixed_locus_contribution(g, locus, window), -3 - j)
        cls3 = locus_class(locus, coeff)
        if h == 0:
            if coeff != f0_closed_form(g, j):
                mismatches.append("F_0: extracted coefficient differs from the closed form")
            check("F_0 on M_{g,3}", cls3, mumford_factor(g, g + j, "1", AMBIENT_MARKS).scale(sign))
        else:
            cp = build_c_prime(g, h, j)
            check(f"F_{h} on M_{{g,3}}", cls3, cp.glued())
        step1 = psi_multiply(cls3, "3")
        if h == g:
            if not step1.is_zero():
                mismatches.append(f"F_{g}: psi_3 did not vanish")
            inter["killed_by_psi3"].append(h)
            continue
        trace: list = []
        step2 = forget_pushforward(step1, "3", mode=mode, trace=trace)
        factors = sorted({f for kind, _, _, f in trace if kind == "dilaton"})
        inter["dilaton"][h] = factors
        expected_factor = 2 * g if h == 0 else 2 * (g - h)
        if factors and factors != [expected_factor]:
            mismatches.append(f"F_{h}: dilaton factor {factors} != {expected_factor}")
        if h == 0:
            check("F_0 after dilaton", step2, mumford_factor(g, g + j, "1", ("1", "2")).scale(sign * 2 * g))
        else:
            check(
                f"F_{h} after dilaton",
                step2,
                replace(build_c_prime(g, h, j), right_markings=("2", "inf")).glued().scale(2 * (g - h)),
            )
        step3 = forget_pushforward(step2, "2", mode=mode)
        if h == 0:
            check("F_0 after string", step3, mumford_factor(g, g + j - 1).scale(sign * 2 * g))
        else:
            check(
                f"F_{h} after string",
                step3,
                build_c(g, h, truncate=False, j=j).glued().scale(2 * (g - h)),
            )
        assembled = assembled + step3

    expected = mumford_factor(g, g + j - 1).scale(sign * 2 * g)
    for h in range(1, g):
        expected = expected + build_c(g, h, j=j).glued().scale(2 * (g - h))
    assembled.assert_homogeneous(g + j - 1)
    if j == 1:
        alt = (theorem_rhs(g) - mumford_lhs(g)).scale(2 * g)
        if alt != expected:
            mismatches.append("assembled identity differs from 2g (rhs - lhs)")
    residual = expand_decorations(assembled) - expand_decorations(expected)
    return RelationReport(
        lhs=assembled,
        rhs=expected,
        residual=residual,
        genus=g,
        variant=f"replay:j={j}:{mode}",
        mismatches=mismatches,
        intermediates=inter,
    )


def remark1_extract(g: int, j: int) -> RelationReport:
    """Same pipeline at t^(-3-j); j = 1 is the theorem replay."""
    return replay_derivation(g, j=j)
