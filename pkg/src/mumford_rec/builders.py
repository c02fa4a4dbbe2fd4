"""Named classes and relations.

* :func:`mumford_lhs` -- ``psi^g - lambda_1 psi^(g-1) + ... + (-1)^g lambda_g``
  on the one-pointed genus-g space, kept as a single truncated Mumford factor.
* :func:`build_c`, :func:`build_c_prime` -- the boundary coefficients, as
  sums of (0-side factor) x (inf-side factor) products.
* :func:`theorem_rhs` -- ``sum_h (1 - h/g) iota_h*(c_h)``.
* :func:`remark1_relation`, :func:`remark3_relation` -- the two companion
  relations, as :class:`RelationReport` objects.

The 0-side factor lives on genus h with markings ``("1", "0")``; the
inf-side factor lives on genus g - h with markings ``("inf",)`` (plus
``"2", "3"`` for the three-pointed variant).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple, Union

from .algebra import SymbolicPoly, lam, psi
from .ops import forget_pushforward, glue_pushforward
from .strata import Ambient, Decoration, StrataError, TautClass, expand_decorations, single_vertex

__all__ = [
    "RelationReport",
    "CFormula",
    "mumford_lhs",
    "mumford_factor",
    "build_c",
    "build_c_prime",
    "theorem_rhs",
    "remark1_rhs",
    "remark1_relation",
    "remark3_relation",
]


@dataclass
class RelationReport:
    """Outcome of building or checking one relation.

    ``residual`` is ``lhs - rhs`` (a class or a polynomial); ``mismatches``
    lists intermediate checks that failed.  The relation checks iff both are
    empty.
    """

    lhs: Union[TautClass, SymbolicPoly]
    rhs: Union[TautClass, SymbolicPoly]
    residual: Union[TautClass, SymbolicPoly]
    genus: int
    variant: str
    mismatches: List[str] = field(default_factory=list)
    intermediates: Dict[str, Any] = field(default_factory=dict)
    hard: bool = True

    @property
    def ok(self) -> bool:
        return self.residual.is_zero() and not self.mismatches


def mumford_factor(genus: int, degree: int, leg: str = "1", legs: Tuple[str, ...] = ("1",)) -> TautClass:
    dec = Decoration((), (), (), ((leg, degree),)) if degree else Decoration()
    return TautClass.single(Ambient.of(genus, legs), single_vertex(genus, legs, dec))


def mumford_lhs(g: int) -> TautClass:
    if g < 1:
        raise ValueError("genus must be >= 1")
    return mumford_factor(g, g).assert_homogeneous(g)


def _tm_poly(site: str, genus: int, d: int) -> SymbolicPoly:
    out = SymbolicPoly()
    for j in range(0, min(genus, d) + 1):
        term = SymbolicPoly.gen(psi(site), d - j)
        if j:
            term = term * SymbolicPoly.gen(lam(site, j))
        out = out + term.scale((-1) ** j)
    return out


@dataclass(frozen=True)
class CFormula:
    """``sum sign * TM_0(d0) (x) TM_inf(dinf)`` over the recorded terms.

    ``terms`` holds ``(sign, d0, dinf)`` with d0 the 0-side degree.
    """

    g: int
    h: int
    j: int
    kind: str
    right_markings: Tuple[str, ...]
    terms: Tuple[Tuple[int, int, int], ...]

    @property
    def left_genus(self) -> int:
        return self.h

    @property
    def right_genus(self) -> int:
        return self.g - self.h

    def bidegrees(self) -> set:
        return {(a, b) for _, a, b in self.terms}

    def lowered(self, drop_marking: Optional[str] = None) -> "CFormula":
        """Every power of psi_inf lowered by one (psi^-1 = 0)."""
        terms = tuple((s, a, b - 1) for s, a, b in self.terms if b >= 1)
        marks = tuple(m for m in self.right_markings if m != drop_marking)
        return CFormula(self.g, self.h, self.j, self.kind + "_lowered", marks, terms)

    def to_poly(self) -> SymbolicPoly:
        out = SymbolicPoly()
        for s, a, b in self.terms:
            out = out + (_tm_poly("0", self.h, a) * _tm_poly("inf", self.g - self.h, b)).scale(s)
        return out

    def left_class(self, d0: int) -> TautClass:
        return mumford_factor(self.h, d0, "0", ("0", "1"))

    def right_class(self, dinf: int) -> TautClass:
        return mumford_factor(self.g - self.h, dinf, "inf", self.right_markings)

    def glued(self) -> TautClass:
        """iota_h pushforward of the formula (a class on genus g)."""
        amb = Ambient.of(self.g, ("1",) + tuple(m for m in self.right_markings if m != "inf"))
        total = TautClass(amb)
        for s, a, b in self.terms:
            total = total + glue_pushforward(self.left_class(a), self.right_class(b)).scale(s)
        return total


def _check_h(g: int, h: int) -> None:
    if g < 1 or not 1 <= h <= g:
        raise ValueError(f"need 1 <= h <= g, got g={g}, h={h}")


def build_c(g: int, h: int, truncate: bool = True, j: int = 1) -> CFormula:
    """Coefficient of the h-th boundary term.

    Sum over i of ``(-1)^(h+i+j+1) TM_0(i) (x) TM_inf(g-2+j-i)``; for j = 1
    this is the classical ``(-1)^(h+i)`` with total degree g - 1.  With
    ``truncate`` the products whose factors exceed the factor dimensions
    (3h - 1 and 3(g-h) - 2) are dropped.
    """
    _check_h(g, h)
    total = g - 2 + j
    terms = []
    for i in range(0, total + 1):
        b = total - i
        # for h = g the right factor is the unstable point and is never glued
        if truncate and (i > 3 * h - 1 or (h < g and b > 3 * (g - h) - 2)):
            continue
        terms.append(((-1) ** (h + i + j + 1), i, b))
    return CFormula(g, h, j, "c", ("inf",), tuple(terms))


def build_c_prime(g: int, h: int, j: int = 1) -> CFormula:
    """The three-pointed coefficient read off at t^(-3-j); degree g - 1 + j."""
    _check_h(g, h)
    total = g - 1 + j
    terms = tuple(((-1) ** (h + i + j + 1), i, total - i) for i in range(0, total + 1))
    return CFormula(g, h, j, "c_prime", ("2", "3", "inf"), terms)


def remark1_rhs(g: int, j: int = 1) -> TautClass:
    """``(-1)^(j+1) sum_{h<g} (1 - h/g) iota_h*(c_{h,j})``."""
    if g < 1 or j < 1:
        raise ValueError("need g >= 1 and j >= 1")
    total = TautClass(Ambient.of(g, ("1",)))
    for h in range(1, g):
        coeff = Fraction(g - h, g) * (-1) ** (j + 1)
        total = total + build_c(g, h, j=j).glued().scale(coeff)
    return total.assert_homogeneous(g + j - 1)


@lru_cache(maxsize=None)
def theorem_rhs(g: int) -> TautClass:
    """Boundary expression for the Mumford-type class on genus g, one point.

    The h = g summand has coefficient zero and an unstable factor and is
    omitted.
    """
    return remark1_rhs(g, 1)


def remark1_relation(g: int, j: int) -> RelationReport:
    """Compare the formula for ``TM(g + j - 1)`` against the localization replay."""
    from .localization import remark1_extract

    formula_lhs = mumford_factor(g, g + j - 1)
    formula_rhs = remark1_rhs(g, j)
    rep = remark1_extract(g, j)
    # the replay proves (-1)^j 2g (lhs - rhs) = 0
    replay_rhs = expand_decorations(formula_lhs - rep.lhs.scale(Fraction((-1) ** j, 2 * g)))
    mismatches = list(rep.mismatches)
    if replay_rhs != expand_decorations(formula_rhs):
        mismatches.append("formula right side differs from the localization replay")
    return RelationReport(
        lhs=formula_lhs,
        rhs=formula_rhs,
        residual=replay_rhs - expand_decorations(formula_rhs),
        genus=g,
        variant=f"remark1:j={j}",
        mismatches=mismatches,
        intermediates={"replay": rep.intermediates},
    )


def remark3_relation(g: int) -> RelationReport:
    """``sum_h 2h iota_h*(c_h) + 2g pi_*(TM_2(g+1)) = 0`` on genus g, one point.

    Only emitted and degree-checked; it is not derived here.  The auxiliary
    identity obtained by adding the replayed relation is attached under
    ``intermediates["auxiliary"]``.
    """
    if g < 2:
        raise ValueError("needs g >= 2")
    amb = Ambient.of(g, ("1",))
    bound = TautClass(amb)
    for h in range(1, g):
        bound = bound + build_c(g, h).glued().scale(2 * h)
    top = mumford_factor(g, g + 1, "2", ("1", "2"))
    pushed = forget_pushforward(top, "2")
    lhs = (bound + pushed.scale(2 * g)).assert_homogeneous(g)
    # adding -2g M + sum 2(g-h) iota(c_h) = 0 and dividing by 2g:
    # M = sum_h iota(c_h) + pi_*(TM_2(g+1))
    aux_rhs = TautClass(amb)
    for h in range(1, g):
        aux_rhs = aux_rhs + build_c(g, h).glued()
    aux_rhs = aux_rhs + pushed
    return RelationReport(
        lhs=lhs,
        rhs=TautClass(amb),
        residual=lhs,
        genus=g,
        variant="remark3",
        hard=False,
        intermediates={
            "pushforward": pushed,
            "auxiliary": {"lhs": mumford_lhs(g), "rhs": aux_rhs},
        },
    )
