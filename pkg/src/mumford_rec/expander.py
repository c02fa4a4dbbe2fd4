"""Recursive rewriting of the theorem's right side to a normal form.

A *reducible site* is a truncated Mumford factor TM(q, d) with d >= gamma >= 1
on a vertex of genus gamma.  One step rewrites one site: the vertex is cut
out, the factor is replaced by its boundary expression on the vertex's own
moduli space (E1 for one leg, E2 and its multi-leg analogue otherwise), the
remaining psi powers of the vertex are multiplied back in, and the result is
spliced into the surrounding tree.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .builders import theorem_rhs
from .ops import UnsupportedShape, psi_multiply, reduce_mumford_factor, splice
from .strata import Ambient, Decoration, Stratum, StrataError, TautClass, canonical_form

__all__ = [
    "BudgetExceeded",
    "ExpansionReport",
    "reducible_sites",
    "expand_step",
    "expand_full",
    "expand_class",
    "analyze",
]


class BudgetExceeded(RuntimeError):
    """Raised when the step budget runs out; ``partial`` holds the last state."""

    def __init__(self, msg: str, partial: TautClass, steps: int):
        super().__init__(msg)
        self.partial = partial
        self.steps = steps


Site = Tuple[int, int, str, int]  # vertex, genus, leg, degree


def reducible_sites(s: Stratum) -> List[Site]:
    out = []
    for v, (g, dec) in enumerate(zip(s.genera, s.decorations)):
        if g < 1:
            continue
        for leg, d in dec.tm:
            if d >= g:
                out.append((v, g, leg, d))
    return out


def _site_keys(s: Stratum) -> Counter:
    return Counter((g, d) for _, g, _, d in reducible_sites(s))


def _multiset_less(new: Counter, old: Counter) -> bool:
    """Dershowitz-Manna ordering on multisets of (genus, degree) keys."""
    a, b = new - old, old - new
    if not b:
        return False
    top = max(b)
    return all(k < top for k in a)


def _rewrite_site(s: Stratum, site: Site) -> List[Tuple[Stratum, Fraction]]:
    v, g, q, d = site
    dec = s.decorations[v]
    if dec.lam or dec.kappa or len(dec.tm) != 1:
        raise UnsupportedShape(f"vertex decoration {dec} is not TM times a psi monomial")
    legs = s.legs[v]
    local = {leg: f"L{i}" for i, leg in enumerate(legs)}
    back = {f"L{i}": leg for i, leg in enumerate(legs)}
    cls = reduce_mumford_factor(g, tuple(local[l] for l in legs), local[q], d)
    for leg, a in dec.psi:
        cls = psi_multiply(cls, local[leg], a)
    bare = s.with_decoration(v, Decoration())
    return [(splice(bare, v, t, back), c) for t, c in cls]


def expand_step(c: TautClass, order: str = "canonical") -> Tuple[TautClass, bool]:
    """Rewrite the first reducible site.  Returns ``(class, fixpoint)``."""
    if order not in ("canonical", "reverse"):
        raise ValueError(f"unknown order {order!r}")
    terms = c.sorted_terms()
    if order == "reverse":
        terms = terms[::-1]
    for idx, (s, coeff) in enumerate(terms):
        sites = reducible_sites(s)
        if not sites:
            continue
        site = sites[0] if order == "canonical" else sites[-1]
        new = _rewrite_site(s, site)
        old_keys = _site_keys(s)
        pairs = []
        for t, k in new:
            made = TautClass.from_terms(c.ambient, [(t, 1)], check=False)
            for u, _ in made:
                if not _multiset_less(_site_keys(u), old_keys):
                    raise AssertionError(f"termination measure did not decrease at {site}")
            pairs.append((t, k * coeff))
        rest = TautClass(c.ambient, {t: k for t, k in c if t != s})
        out = rest + TautClass.from_terms(c.ambient, pairs, check=False)
        deg = c.degrees()
        if out.degrees() - deg:
            raise AssertionError("expansion step broke homogeneity")
        return out, False
    return c, True


def expand_class(c: TautClass, max_steps: int = 10**6, order: str = "canonical") -> Tuple[TautClass, int]:
    steps = 0
    while True:
        nxt, done = expand_step(c, order)
        if done:
            return c, steps
        steps += 1
        c = nxt
        if steps >= max_steps and any(reducible_sites(s) for s, _ in c):
            raise BudgetExceeded(f"step budget {max_steps} exhausted", c, steps)


@dataclass
class ExpansionReport:
    genus: int
    normal_form: TautClass
    steps: int
    flags: List[Dict[str, object]] = field(default_factory=list)
    integrality: Dict[str, object] = field(default_factory=dict)
    depth: Optional[int] = None

    @property
    def all_green(self) -> bool:
        return all(f["marked_on_genus0"] and f["terminal"] for f in self.flags)


def _stratum_flags(s: Stratum, coeff: Fraction, aut: int) -> Dict[str, object]:
    marked = s.vertex_of("1")
    terminal = not reducible_sites(s) and all(
        not dec.psi and not dec.lam and not dec.kappa
        for g, dec in zip(s.genera, s.decorations)
        if g > 0
    )
    return {
        "marked_vertex_genus": s.genera[marked],
        "marked_on_genus0": s.genera[marked] == 0,
        "terminal": terminal,
        "coeff": coeff,
        "automorphisms": aut,
        "shape": tuple(sorted(s.genera)),
    }


def analyze(report: ExpansionReport) -> Dict[str, object]:
    """Fill ``report.flags`` and ``report.integrality`` and return a summary."""
    flags = []
    for s, c in report.normal_form.sorted_terms():
        aut = canonical_form(s)[1]
        flags.append(_stratum_flags(s, c, aut))
    report.flags = flags

    def count(vals):
        return sum(1 for x in vals if x.denominator != 1)

    raw = [f["coeff"] for f in flags]
    report.integrality = {
        "terms": len(flags),
        "non_integer_raw": count(raw),
        "non_integer_over_aut": count(Fraction(f["coeff"]) / f["automorphisms"] for f in flags),
        "non_integer_times_aut": count(Fraction(f["coeff"]) * f["automorphisms"] for f in flags),
    }
    shapes = Counter(f["shape"] for f in flags)
    return {
        "genus": report.genus,
        "zero": report.normal_form.is_zero(),
        "all_marked_on_genus0": all(f["marked_on_genus0"] for f in flags),
        "all_terminal": all(f["terminal"] for f in flags),
        "integrality": report.integrality,
        "shapes": {"-".join(map(str, k)): v for k, v in sorted(shapes.items())},
    }


def expand_full(g: int, max_steps: int = 10**6, depth: Optional[int] = None, order: str = "canonical") -> ExpansionReport:
    """Expand ``theorem_rhs(g)``; ``depth=0`` returns it untouched.

    A positive ``depth`` caps the number of rewriting steps without raising.
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    c = theorem_rhs(g)
    if depth is not None and depth >= 0:
        steps = 0
        while steps < depth:
            c, done = expand_step(c, order)
            if done:
                break
            steps += 1
    else:
        c, steps = expand_class(c, max_steps, order)
    c.assert_homogeneous(g) if not c.is_zero() else None
    rep = ExpansionReport(g, c, steps, depth=depth)
    analyze(rep)
    return rep
