"""Operators on tautological classes of compact type.

Gluing pushforward, forgetful pushforward (string, dilaton, kappa), psi
multiplication, forgetful pullback with the boundary corrections for psi,
and the rewrite of a reducible truncated Mumford factor through the
comparison ``psi_q = pi^* psi_q + D_pq``.

Conventions used throughout: ``D_pr`` is the stratum where the new point p
and the leg r sit alone on a genus-0 bubble, ``psi_r . D_pr = 0`` and
``D_pr^2 = -psi_n . D_pr`` with n the node branch on the positive-genus side.
Together these give, for any polynomial f in psi_r,

    pi^* f(psi_r) = f(psi_r) - D_pr . (f(psi_n) - f(0)) / psi_n.
"""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .strata import (
    TRIVIAL,
    Ambient,
    Decoration,
    StrataError,
    Stratum,
    TautClass,
    expand_vertex_decoration,
)

__all__ = [
    "UnsupportedShape",
    "glue_pushforward",
    "glue_strata",
    "psi_multiply",
    "forget_pullback",
    "forget_pushforward",
    "comparison_rewrite",
    "reduce_mumford_factor",
    "relabel_class",
    "splice",
    "dilaton_factor",
]


class UnsupportedShape(StrataError):
    """A decoration the operator cannot handle exactly."""


def dilaton_factor(genus: int, nlegs: int) -> int:
    """2g - 2 + n, with n counted after forgetting the point."""
    return 2 * genus - 2 + nlegs


def _rename_internal(s: Stratum, prefix: str) -> Stratum:
    mapping = {l: f"#{prefix}{k}" for k, l in enumerate(s.internal_legs())}
    return s.relabel(mapping)


def glue_strata(left: Stratum, right: Stratum, left_leg: str, right_leg: str) -> Stratum:
    left = _rename_internal(left, "l").relabel({left_leg: "#gl"})
    right = _rename_internal(right, "r").relabel({right_leg: "#gr"})
    return Stratum(
        left.genera + right.genera,
        left.legs + right.legs,
        left.edges + right.edges + (("#gl", "#gr"),),
        left.decorations + right.decorations,
    )


def glue_pushforward(left: TautClass, right: TautClass, left_leg: str = "0", right_leg: str = "inf") -> TautClass:
    """Pushforward along the map joining ``left_leg`` to ``right_leg``.

    Bilinear in the two factors; coefficients multiply.
    """
    if left_leg not in left.ambient.markings:
        raise StrataError(f"left factor has no leg {left_leg!r}")
    if right_leg not in right.ambient.markings:
        raise StrataError(f"right factor has no leg {right_leg!r}")
    rest = set(left.ambient.markings) - {left_leg}
    rest_r = set(right.ambient.markings) - {right_leg}
    if rest & rest_r:
        raise StrataError(f"markings {sorted(rest & rest_r)} appear on both factors")
    amb = Ambient.of(left.ambient.genus + right.ambient.genus, rest | rest_r)
    pairs = []
    for sl, cl in left.terms.items():
        for sr, cr in right.terms.items():
            pairs.append((glue_strata(sl, sr, left_leg, right_leg), cl * cr))
    out = TautClass.from_terms(amb, pairs)
    _check_degree(out, left, right, +1)
    return out


def _check_degree(out: TautClass, a: TautClass, b: Optional[TautClass], shift: int) -> None:
    if out.is_zero():
        return
    da = a.degrees()
    if b is not None:
        db = b.degrees()
        expect = {x + y + shift for x in da for y in db}
    else:
        expect = {x + shift for x in da}
    if not out.degrees() <= expect:
        raise AssertionError(f"degree law violated: got {sorted(out.degrees())}, expected {sorted(expect)}")


def relabel_class(c: TautClass, mapping: Dict[str, str]) -> TautClass:
    amb = Ambient.of(c.ambient.genus, (mapping.get(m, m) for m in c.ambient.markings))
    return TautClass.from_terms(amb, ((s.relabel(mapping), v) for s, v in c.terms.items()))


def psi_multiply(c: TautClass, leg: str, exp: int = 1) -> TautClass:
    """Multiply by psi at a marking; psi on a 3-pointed genus-0 vertex is 0."""
    if leg not in c.ambient.markings:
        raise StrataError(f"no marking {leg!r} in {c.ambient}")

    def fn(s: Stratum):
        v = s.vertex_of(leg)
        yield s.with_decoration(v, s.decorations[v].with_psi(leg, exp)), 1

    out = c.map_terms(fn, check=False)
    _check_degree(out, c, None, exp)
    return out


# ---------------------------------------------------------------------------
# pullback along forgetting a point


def _lowered_part(dec: Decoration, leg: str, new_leg: str) -> Optional[Decoration]:
    """(f(x) - f(0)) / x for the psi-part f of ``dec`` at ``leg``, placed at ``new_leg``.

    Returns None when f is constant (no correction).
    """
    a = dec.psi_at(leg)
    tms = dec.tm_at(leg)
    if a >= 1:
        psi = ((new_leg, a - 1),) if a > 1 else ()
        return Decoration(psi, (), (), tuple(sorted((new_leg, d) for d in tms)))
    if not tms:
        return None
    if len(tms) > 1:
        raise UnsupportedShape(f"product of truncated Mumford factors at leg {leg!r}")
    return Decoration((), (), (), ((new_leg, tms[0] - 1),))


def _bubble_term(s: Stratum, v: int, p: str, r: str, main_dec: Decoration) -> Stratum:
    """Stratum with p and r moved to a new genus-0 vertex attached to v."""
    n, m = "#pbn", "#pbm"
    legs = list(s.legs)
    legs[v] = tuple(l for l in s.legs[v] if l != r) + (n,)
    decs = list(s.decorations)
    decs[v] = main_dec
    return Stratum(
        s.genera + (0,),
        tuple(legs) + ((p, r, m),),
        s.edges + ((n, m),),
        tuple(decs) + (TRIVIAL,),
    )


def _pullback_stratum(s: Stratum, p: str) -> List[Tuple[Stratum, int]]:
    s = _rename_internal(s, "u")
    out = []
    for v in range(s.nvertices):
        dec = s.decorations[v]
        if dec.kappa:
            raise UnsupportedShape("kappa classes do not pull back to kappa classes")
        legs = list(s.legs)
        legs[v] = s.legs[v] + (p,)
        out.append((replace(s, legs=tuple(legs)), 1))
        for r in s.legs[v]:
            low = _lowered_part(dec, r, "#pbn")
            if low is None:
                continue
            main = dec.without_leg(r).times(low)
            out.append((_bubble_term(s, v, p, r, main), -1))
    return out


def forget_pullback(c: TautClass, p: str) -> TautClass:
    """Pullback along the map forgetting a new marking ``p``."""
    if p in c.ambient.markings:
        raise StrataError(f"marking {p!r} already present")
    amb = Ambient.of(c.ambient.genus, c.ambient.markings + (p,))
    out = c.map_terms(lambda s: _pullback_stratum(s, p), ambient=amb)
    _check_degree(out, c, None, 0)
    return out


# ---------------------------------------------------------------------------
# pushforward along forgetting a point


def _contract(s: Stratum, v: int, p: str) -> Stratum:
    """Forget p on a genus-0 vertex with three legs: remove the vertex."""
    others = [l for l in s.legs[v] if l != p]
    partner = {a: b for e in s.edges for a, b in (e, e[::-1])}
    r, t = others
    edges = [e for e in s.edges if r not in e and t not in e]
    mapping: Dict[str, str] = {}
    if r in partner and t in partner:
        edges.append(tuple(sorted((partner[r], partner[t]))))
    elif r in partner:
        mapping[partner[r]] = t
    elif t in partner:
        mapping[partner[t]] = r
    else:
        raise UnsupportedShape("forgetting a point of the 3-pointed genus-0 space")
    keep = [w for w in range(s.nvertices) if w != v]
    out = Stratum(
        tuple(s.genera[w] for w in keep),
        tuple(s.legs[w] for w in keep),
        tuple(sorted(edges)),
        tuple(s.decorations[w] for w in keep),
    )
    return out.relabel(mapping)


def _split_psi_p(genus: int, dec: Decoration, p: str) -> List[Tuple[int, int, Decoration]]:
    """Write ``dec`` as sum c * psi_p^b * rest with rest free of p."""
    p_tm = [d for l, d in dec.tm if l == p]
    if not p_tm:
        return [(1, dec.psi_at(p), dec.without_leg(p))]
    only_p = Decoration(tuple(x for x in dec.psi if x[0] == p), (), (), tuple((p, d) for d in p_tm))
    rest = dec.without_leg(p)
    out = []
    for c, piece in expand_vertex_decoration(genus, only_p):
        out.append((c, piece.psi_at(p), rest.times(Decoration((), piece.lam))))
    return out


def _push_direct(s: Stratum, p: str, trace: Optional[list]) -> List[Tuple[Stratum, Fraction]]:
    v = s.vertex_of(p)
    g = s.genera[v]
    nafter = len(s.legs[v]) - 1
    dec = s.decorations[v]
    if dec.kappa:
        raise UnsupportedShape("unsupported pushforward shape: kappa on the forgotten vertex")
    if g == 0 and nafter == 2:
        if not dec.is_trivial():
            return []  # decorated M_{0,3} is zero
        return [(_contract(s, v, p), Fraction(1))]
    legs = list(s.legs)
    legs[v] = tuple(l for l in s.legs[v] if l != p)
    base = replace(s, legs=tuple(legs))
    out = []
    for c, b, rest in _split_psi_p(g, dec, p):
        if b == 0:
            for r in legs[v]:
                low = _lowered_part(rest, r, r)
                if low is None:
                    continue
                out.append((base.with_decoration(v, rest.without_leg(r).times(low)), Fraction(c)))
        elif b == 1:
            f = dilaton_factor(g, nafter)
            if trace is not None:
                trace.append(("dilaton", g, nafter, f))
            out.append((base.with_decoration(v, rest), Fraction(c * f)))
        else:
            if trace is not None:
                trace.append(("kappa", g, nafter, b - 1))
            out.append((base.with_decoration(v, rest.times(Decoration((), (), ((b - 1, 1),)))), Fraction(c)))
    return out


def _push_corrected(s: Stratum, p: str, trace: Optional[list]) -> List[Tuple[Stratum, Fraction]]:
    """Same pushforward, computed by splitting the decoration as
    pi^*(rest) + sum_r D_pr . lowered_r(rest) and using the projection formula.
    """
    from .strata import normalize

    s = _rename_internal(s, "c")
    v = s.vertex_of(p)
    g = s.genera[v]
    nafter = len(s.legs[v]) - 1
    dec = s.decorations[v]
    if dec.kappa:
        raise UnsupportedShape("unsupported pushforward shape: kappa on the forgotten vertex")
    if g == 0 and nafter == 2:
        if not dec.is_trivial():
            return []
        return [(_contract(s, v, p), Fraction(1))]
    legs_wo_p = tuple(l for l in s.legs[v] if l != p)
    legs = list(s.legs)
    legs[v] = legs_wo_p
    base = replace(s, legs=tuple(legs))
    out = []
    for c, b, rest in _split_psi_p(g, dec, p):
        # boundary pieces D_pr . lowered_r(rest) [. psi_p^b]
        for r in legs_wo_p:
            low = _lowered_part(rest, r, "#pbn")
            if low is None:
                continue
            bubble = _bubble_term(base, v, p, r, rest.without_leg(r).times(low))
            w = bubble.nvertices - 1
            bubble = bubble.with_decoration(w, Decoration(((p, b),)) if b else TRIVIAL)
            nb = normalize(bubble)
            if nb is None:
                continue
            out.append((_contract(nb, w, p), Fraction(c)))
        # pulled-back piece psi_p^b . pi^*(rest)
        if b == 1:
            f = dilaton_factor(g, nafter)
            if trace is not None:
                trace.append(("dilaton", g, nafter, f))
            out.append((base.with_decoration(v, rest), Fraction(c * f)))
        elif b >= 2:
            if trace is not None:
                trace.append(("kappa", g, nafter, b - 1))
            out.append((base.with_decoration(v, rest.times(Decoration((), (), ((b - 1, 1),)))), Fraction(c)))
    return out


def forget_pushforward(c: TautClass, p: str, mode: str = "direct", trace: Optional[list] = None) -> TautClass:
    """Pushforward along the map forgetting marking ``p``.

    ``mode="direct"`` applies the string / dilaton / kappa rules to the
    decoration as written; ``mode="corrected"`` first splits off the
    boundary corrections explicitly.  Both are exact and must agree.
    ``trace`` collects the dilaton factors and kappa indices used.
    """
    if p not in c.ambient.markings:
        raise StrataError(f"no marking {p!r} in {c.ambient}")
    if mode not in ("direct", "corrected"):
        raise ValueError(f"unknown pushforward mode {mode!r}")
    push = _push_direct if mode == "direct" else _push_corrected
    amb = Ambient.of(c.ambient.genus, (m for m in c.ambient.markings if m != p))
    out = c.map_terms(lambda s: push(s, p, trace), ambient=amb)
    _check_degree(out, c, None, -1)
    return out


# ---------------------------------------------------------------------------
# reducible truncated Mumford factors


def splice(s: Stratum, v: int, local: Stratum, leg_map: Dict[str, str]) -> Stratum:
    """Replace vertex ``v`` of ``s`` by the tree ``local``.

    ``leg_map`` sends the markings of ``local`` to the legs of ``v``.
    """
    local = _rename_internal(local, "x").relabel(leg_map)
    keep = [w for w in range(s.nvertices) if w != v]
    return Stratum(
        tuple(s.genera[w] for w in keep) + local.genera,
        tuple(s.legs[w] for w in keep) + local.legs,
        s.edges + local.edges,
        tuple(s.decorations[w] for w in keep) + local.decorations,
    )


@lru_cache(maxsize=None)
def reduce_mumford_factor(genus: int, legs: Tuple[str, ...], q: str, d: int) -> TautClass:
    """Express TM(q, d), d >= genus >= 1, on the space with markings ``legs``
    as a combination of boundary classes.

    One leg: ``psi^(d-genus)`` times the right side of the theorem.  More legs:
    forget one other leg p and use
    ``TM(q,d) = pi_p^* TM(q,d) + D_pq . TM(n, d-1)``.
    """
    from .builders import theorem_rhs

    if not 1 <= genus <= d:
        raise UnsupportedShape(f"TM of degree {d} is not reducible on genus {genus}")
    if q not in legs:
        raise StrataError(f"{q!r} not among legs {legs}")
    legs = tuple(sorted(legs))
    if len(legs) == 1:
        base = relabel_class(theorem_rhs(genus), {"1": q})
        return psi_multiply(base, q, d - genus) if d > genus else base
    p = max(l for l in legs if l != q)
    rest = tuple(l for l in legs if l != p)
    pulled = forget_pullback(reduce_mumford_factor(genus, rest, q, d), p)
    others = tuple(l for l in legs if l not in (p, q))
    bubble = Stratum(
        (genus, 0),
        (others + ("#n",), (p, q, "#m")),
        (("#m", "#n"),),
        (Decoration((), (), (), (("#n", d - 1),)), TRIVIAL),
    )
    amb = Ambient.of(genus, legs)
    return pulled + TautClass.single(amb, bubble)


def comparison_rewrite(genus: int, d: int, p: str = "p", q: str = "q") -> TautClass:
    """Rewrite TM(q, d) on a genus-``genus`` vertex with legs (p, q).

    Result: pullback of the one-pointed expansion plus the bubble term
    carrying TM(node, d - 1).
    """
    if genus < 1 or d < genus:
        raise UnsupportedShape(f"TM({q}, {d}) on genus {genus} is not reducible")
    return reduce_mumford_factor(genus, (p, q), q, d)
