"""Decorated stable trees and formal linear combinations of them.

A :class:`Stratum` is a compact-type stable graph: vertices with genera,
legs (half-edges) on each vertex, edges joining node half-edges, and a
:class:`Decoration` per vertex.  Legs are strings.  Legs that lie on no edge
are the markings of the ambient space; internal half-edges are named ``#k``
and are renamed freely by canonicalization, so marking labels must not start
with ``#``.

A :class:`TautClass` is a dict ``{canonical stratum: Fraction}``.  A term
stands for the pushforward of its decoration along the gluing map of the
graph; coefficients never absorb automorphism factors.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .algebra import as_rational

__all__ = [
    "StrataError",
    "Decoration",
    "Stratum",
    "Ambient",
    "TautClass",
    "build_stratum",
    "canonical_form",
    "class_combine",
    "codimension",
    "single_vertex",
    "vertex_dimension",
    "expand_decorations",
]

INTERNAL = "#"

PsiT = Tuple[Tuple[str, int], ...]
IdxT = Tuple[Tuple[int, int], ...]


class StrataError(ValueError):
    """Invalid stratum data or an unsupported decoration shape."""


def _merge(pairs: Iterable[Tuple[object, int]]) -> tuple:
    acc: Dict[object, int] = {}
    for k, e in pairs:
        if e:
            acc[k] = acc.get(k, 0) + e
    return tuple(sorted((k, e) for k, e in acc.items() if e))


@dataclass(frozen=True, order=True)
class Decoration:
    """Product of factors on one vertex.

    ``psi``: (leg, exponent) pairs; ``lam`` / ``kappa``: (index, exponent)
    pairs; ``tm``: multiset of (leg, degree) truncated Mumford factors
    ``sum_j (-1)^j lambda_j psi_leg^(degree - j)`` with j up to the vertex
    genus and negative psi powers dropped.
    """

    psi: PsiT = ()
    lam: IdxT = ()
    kappa: IdxT = ()
    tm: Tuple[Tuple[str, int], ...] = ()

    @property
    def degree(self) -> int:
        return (
            sum(e for _, e in self.psi)
            + sum(i * e for i, e in self.lam)
            + sum(i * e for i, e in self.kappa)
            + sum(d for _, d in self.tm)
        )

    def is_trivial(self) -> bool:
        return not (self.psi or self.lam or self.kappa or self.tm)

    def psi_at(self, leg: str) -> int:
        return dict(self.psi).get(leg, 0)

    def tm_at(self, leg: str) -> List[int]:
        return [d for l, d in self.tm if l == leg]

    def legs_used(self) -> set:
        return {l for l, _ in self.psi} | {l for l, _ in self.tm}

    def times(self, other: "Decoration") -> "Decoration":
        return Decoration(
            _merge(self.psi + other.psi),
            _merge(self.lam + other.lam),
            _merge(self.kappa + other.kappa),
            tuple(sorted(self.tm + other.tm)),
        )

    def with_psi(self, leg: str, exp: int = 1) -> "Decoration":
        return replace(self, psi=_merge(self.psi + ((leg, exp),)))

    def without_leg(self, leg: str) -> "Decoration":
        return replace(
            self,
            psi=tuple(p for p in self.psi if p[0] != leg),
            tm=tuple(t for t in self.tm if t[0] != leg),
        )

    def rename(self, mapping: Mapping[str, str]) -> "Decoration":
        return Decoration(
            _merge((mapping.get(l, l), e) for l, e in self.psi),
            self.lam,
            self.kappa,
            tuple(sorted((mapping.get(l, l), d) for l, d in self.tm)),
        )

    def half_info(self, leg: str) -> Tuple[int, Tuple[int, ...]]:
        return (self.psi_at(leg), tuple(sorted(self.tm_at(leg))))


TRIVIAL = Decoration()


def vertex_dimension(genus: int, nlegs: int) -> int:
    return 3 * genus - 3 + nlegs


@dataclass(frozen=True, order=True)
class Stratum:
    genera: Tuple[int, ...]
    legs: Tuple[Tuple[str, ...], ...]
    edges: Tuple[Tuple[str, str], ...]
    decorations: Tuple[Decoration, ...]

    @property
    def nvertices(self) -> int:
        return len(self.genera)

    @property
    def genus(self) -> int:
        return sum(self.genera)

    def node_legs(self) -> set:
        return {l for e in self.edges for l in e}

    @property
    def markings(self) -> Tuple[str, ...]:
        nodes = self.node_legs()
        return tuple(sorted(l for ls in self.legs for l in ls if l not in nodes))

    def vertex_of(self, leg: str) -> int:
        for v, ls in enumerate(self.legs):
            if leg in ls:
                return v
        raise StrataError(f"leg {leg!r} not present")

    def partner(self, leg: str) -> Optional[str]:
        for a, b in self.edges:
            if a == leg:
                return b
            if b == leg:
                return a
        return None

    def codimension(self) -> int:
        return len(self.edges) + sum(d.degree for d in self.decorations)

    def with_decoration(self, v: int, dec: Decoration) -> "Stratum":
        decs = list(self.decorations)
        decs[v] = dec
        return replace(self, decorations=tuple(decs))

    def relabel(self, mapping: Mapping[str, str]) -> "Stratum":
        return Stratum(
            self.genera,
            tuple(tuple(mapping.get(l, l) for l in ls) for ls in self.legs),
            tuple(tuple(sorted((mapping.get(a, a), mapping.get(b, b)))) for a, b in self.edges),
            tuple(d.rename(mapping) for d in self.decorations),
        )

    def internal_legs(self) -> List[str]:
        return sorted(self.node_legs())


def codimension(s: Stratum) -> int:
    return s.codimension()


def single_vertex(genus: int, legs: Sequence[str], dec: Decoration = TRIVIAL) -> Stratum:
    return Stratum((genus,), (tuple(legs),), (), (dec,))


# ---------------------------------------------------------------------------
# validation and decoration normalization


def validate(s: Stratum) -> None:
    n = s.nvertices
    if n == 0:
        raise StrataError("empty graph")
    if not (len(s.legs) == len(s.decorations) == n):
        raise StrataError("vertex data of inconsistent length")
    all_legs = [l for ls in s.legs for l in ls]
    dup = [l for l, c in Counter(all_legs).items() if c > 1]
    if dup:
        raise StrataError(f"leg(s) repeated: {sorted(dup)}")
    where = {l: v for v, ls in enumerate(s.legs) for l in ls}
    for g, ls in zip(s.genera, s.legs):
        if g < 0:
            raise StrataError("negative genus")
        if 2 * g - 2 + len(ls) <= 0:
            raise StrataError(f"unstable vertex: genus {g} with {len(ls)} legs")
    seen = set()
    for a, b in s.edges:
        if a not in where or b not in where:
            raise StrataError(f"edge ({a}, {b}) references a missing leg")
        if a in seen or b in seen or a == b:
            raise StrataError(f"half-edge used twice in edges ({a}, {b})")
        seen.update((a, b))
    if len(s.edges) != n - 1:
        raise StrataError("graph is not a tree (edge count)")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in s.edges:
        ra, rb = find(where[a]), find(where[b])
        if ra == rb:
            raise StrataError("graph contains a cycle")
        parent[ra] = rb
    if len({find(v) for v in range(n)}) != 1:
        raise StrataError("graph is disconnected")
    for l in all_legs:
        if l not in seen and l.startswith(INTERNAL):
            raise StrataError(f"marking label {l!r} may not start with '#'")
    for v, (g, ls, d) in enumerate(zip(s.genera, s.legs, s.decorations)):
        for leg in d.legs_used():
            if leg not in ls:
                raise StrataError(f"decoration refers to leg {leg!r} not on vertex {v}")
        for i, e in d.lam:
            if i < 1 or e < 1:
                raise StrataError("lambda index and exponent must be positive")
            if i > g:
                raise StrataError(f"lambda_{i} exceeds vertex genus {g}")
        for i, e in d.kappa:
            if i < 1 or e < 1:
                raise StrataError("kappa index and exponent must be positive")
        for _, e in d.psi:
            if e < 1:
                raise StrataError("psi exponent must be positive")


def normalize_decoration(genus: int, legs: Sequence[str], dec: Decoration) -> Optional[Decoration]:
    """Return an equivalent normalized decoration, or None if it is zero.

    Rules: lambda_j = 0 for j > genus; on genus 0 a truncated Mumford factor
    is a pure psi power; degree-0 factors are 1 and negative degrees vanish;
    psi_q^a times a reducible factor at q is absorbed into it; a decoration of
    degree above the vertex dimension is zero.
    """
    if any(i > genus for i, _ in dec.lam):
        return None
    psi = dict(dec.psi)
    tms: List[Tuple[str, int]] = []
    for leg, d in dec.tm:
        if d < 0:
            return None
        if d == 0:
            continue
        if genus == 0:
            psi[leg] = psi.get(leg, 0) + d
        else:
            tms.append((leg, d))
    if genus > 0:
        for leg in list(psi):
            idx = [k for k, (l, d) in enumerate(tms) if l == leg and d >= genus]
            if idx:
                k = max(idx, key=lambda k: tms[k][1])
                tms[k] = (leg, tms[k][1] + psi.pop(leg))
    out = Decoration(_merge(psi.items()), dec.lam, dec.kappa, tuple(sorted(tms)))
    if out.degree > vertex_dimension(genus, len(legs)):
        return None
    return out


def normalize(s: Stratum) -> Optional[Stratum]:
    decs = []
    for g, ls, d in zip(s.genera, s.legs, s.decorations):
        nd = normalize_decoration(g, ls, d)
        if nd is None:
            return None
        decs.append(nd)
    return replace(s, decorations=tuple(decs))


# ---------------------------------------------------------------------------
# canonical form (AHU-style encoding of the decorated tree)


def _adjacency(s: Stratum):
    where = {l: v for v, ls in enumerate(s.legs) for l in ls}
    partner = {}
    for a, b in s.edges:
        partner[a], partner[b] = b, a
    return where, partner


def _centers(s: Stratum, where, partner) -> List[int]:
    n = s.nvertices
    nbrs = [set() for _ in range(n)]
    for a, b in s.edges:
        nbrs[where[a]].add(where[b])
        nbrs[where[b]].add(where[a])
    remaining = set(range(n))
    deg = {v: len(nbrs[v]) for v in remaining}
    leaves = [v for v in remaining if deg[v] <= 1]
    while len(remaining) > 2:
        new = []
        for v in leaves:
            remaining.discard(v)
            for w in nbrs[v]:
                if w in remaining:
                    deg[w] -= 1
                    if deg[w] == 1:
                        new.append(w)
        leaves = new
    return sorted(remaining)


class _Encoder:
    def __init__(self, s: Stratum):
        self.s = s
        self.where, self.partner = _adjacency(s)

    def local(self, v: int, parent_half: Optional[str]):
        s = self.s
        d = s.decorations[v]
        marked = tuple(
            sorted((l,) + d.half_info(l) for l in s.legs[v] if l not in self.partner)
        )
        parent = d.half_info(parent_half) if parent_half is not None else (-1, ())
        return (s.genera[v], d.lam, d.kappa, marked, parent)

    def rooted(self, v: int, parent_half: Optional[str]):
        """Return (encoding, automorphism count, ordered children)."""
        s = self.s
        d = s.decorations[v]
        items = []
        for h in s.legs[v]:
            if h == parent_half or h not in self.partner:
                continue
            h2 = self.partner[h]
            w = self.where[h2]
            enc, aut, _ = self.rooted(w, h2)
            item = (d.half_info(h), s.decorations[w].half_info(h2), enc)
            items.append((item, aut, h, h2, w))
        items.sort(key=lambda x: x[0])
        aut = 1
        for _, a, *_ in items:
            aut *= a
        for _, grp in itertools.groupby(items, key=lambda x: x[0]):
            k = len(list(grp))
            for i in range(2, k + 1):
                aut *= i
        enc = (self.local(v, parent_half), tuple(x[0] for x in items))
        return enc, aut, [(h, h2, w) for _, _, h, h2, w in items]


def _canonical(s: Stratum) -> Tuple[Stratum, int]:
    enc = _Encoder(s)
    centers = _centers(s, enc.where, enc.partner)
    if len(centers) == 1:
        root = centers[0]
        _, aut, _ = enc.rooted(root, None)
        roots = [(root, None)]
    else:
        a, b = centers
        ha = next(h for h in s.legs[a] if h in enc.partner and enc.where[enc.partner[h]] == b)
        hb = enc.partner[ha]
        ea, auta, _ = enc.rooted(a, ha)
        eb, autb, _ = enc.rooted(b, hb)
        ia = (s.decorations[a].half_info(ha), ea)
        ib = (s.decorations[b].half_info(hb), eb)
        aut = auta * autb * (2 if ia == ib else 1)
        roots = [(a, ha), (b, hb)] if ia <= ib else [(b, hb), (a, ha)]

    order: List[int] = []
    rename: Dict[str, str] = {}
    counter = itertools.count()

    def visit(v: int, parent_half: Optional[str]):
        order.append(v)
        _, _, children = enc.rooted(v, parent_half)
        for h, h2, w in children:
            rename[h] = f"#{next(counter)}"
            rename[h2] = f"#{next(counter)}"
            visit(w, h2)

    if len(roots) == 1:
        visit(roots[0][0], None)
    else:
        (a, ha), (b, hb) = roots
        rename[ha] = f"#{next(counter)}"
        rename[hb] = f"#{next(counter)}"
        visit(a, ha)
        visit(b, hb)

    def leg_key(l):
        return (0, l) if l not in rename else (1, int(rename[l][1:]))

    genera, legs, decs = [], [], []
    for v in order:
        genera.append(s.genera[v])
        legs.append(tuple(rename.get(l, l) for l in sorted(s.legs[v], key=leg_key)))
        decs.append(s.decorations[v].rename(rename))
    edges = tuple(sorted(tuple(sorted((rename[a], rename[b]), key=lambda x: int(x[1:])))
                         for a, b in s.edges))
    return Stratum(tuple(genera), tuple(legs), edges, tuple(decs)), aut


@lru_cache(maxsize=200_000)
def canonical_form(s: Stratum) -> Tuple[Stratum, int]:
    """Canonical representative and automorphism-group order of ``s``.

    Isomorphic strata (respecting genera, markings and decorations) give
    identical representatives; the representative doubles as the key.
    """
    return _canonical(s)


def build_stratum(data: Mapping) -> Stratum:
    """Build a validated stratum from a plain mapping.

    ``data`` has ``vertices`` (``[{"genus": g, "legs": [...]}, ...]``),
    ``edges`` (pairs of legs) and optional ``decorations``
    (``[{"vertex": v, "factor": {...}}, ...]``) with factors as in the JSON
    schema of :mod:`mumford_rec.serialize`.
    """
    from .serialize import factor_from_json

    verts = data["vertices"]
    genera = tuple(int(v["genus"]) for v in verts)
    legs = tuple(tuple(str(l) for l in v["legs"]) for v in verts)
    edges = tuple(tuple(sorted((str(a), str(b)))) for a, b in data.get("edges", ()))
    decs = [TRIVIAL] * len(verts)
    for item in data.get("decorations", ()):
        v = int(item["vertex"])
        if not 0 <= v < len(verts):
            raise StrataError(f"decoration on missing vertex {v}")
        decs[v] = decs[v].times(factor_from_json(item["factor"]))
    s = Stratum(genera, legs, tuple(sorted(edges)), tuple(decs))
    validate(s)
    return s


# ---------------------------------------------------------------------------
# formal sums


@dataclass(frozen=True)
class Ambient:
    genus: int
    markings: Tuple[str, ...]

    @classmethod
    def of(cls, genus: int, markings: Iterable[str]) -> "Ambient":
        return cls(genus, tuple(sorted(markings)))

    def __str__(self) -> str:
        return f"M({self.genus}; {', '.join(self.markings)})"


class TautClass:
    """Rational linear combination of canonical decorated strata."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: Ambient, terms: Optional[Mapping[Stratum, Fraction]] = None):
        self.ambient = ambient
        self.terms: Dict[Stratum, Fraction] = dict(terms) if terms else {}

    # construction -----------------------------------------------------------------

    @classmethod
    def zero(cls, ambient: Ambient) -> "TautClass":
        return cls(ambient)

    @classmethod
    def from_terms(cls, ambient: Ambient, pairs: Iterable[Tuple[Stratum, object]], check: bool = True) -> "TautClass":
        acc: Dict[Stratum, Fraction] = {}
        for s, c in pairs:
            c = as_rational(c)
            if c == 0:
                continue
            key = cls._key(ambient, s, check)
            if key is None:
                continue
            v = acc.get(key, Fraction(0)) + c
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
        return cls(ambient, acc)

    @classmethod
    def single(cls, ambient: Ambient, s: Stratum, coeff=1) -> "TautClass":
        return cls.from_terms(ambient, [(s, coeff)])

    @staticmethod
    def _key(ambient: Ambient, s: Stratum, check: bool) -> Optional[Stratum]:
        if check:
            validate(s)
            if s.genus != ambient.genus or s.markings != ambient.markings:
                raise StrataError(
                    f"stratum of genus {s.genus} with markings {s.markings} not in {ambient}"
                )
        ns = normalize(s)
        if ns is None:
            return None
        return canonical_form(ns)[0]

    # algebra ---------------------------------------------------------------------

    def _check_ambient(self, other: "TautClass") -> None:
        if self.ambient != other.ambient:
            raise StrataError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def __add__(self, other: "TautClass") -> "TautClass":
        return class_combine(self, other, 1, 1)

    def __sub__(self, other: "TautClass") -> "TautClass":
        return class_combine(self, other, 1, -1)

    def __neg__(self) -> "TautClass":
        return self.scale(-1)

    def scale(self, c) -> "TautClass":
        c = as_rational(c)
        if c == 0:
            return TautClass(self.ambient)
        return TautClass(self.ambient, {s: v * c for s, v in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, TautClass):
            return NotImplemented
        return self.ambient == other.ambient and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Stratum, Fraction]]:
        return iter(self.sorted_terms())

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Stratum, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def degrees(self) -> set:
        return {s.codimension() for s in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def assert_homogeneous(self, degree: Optional[int] = None) -> "TautClass":
        degs = self.degrees()
        if len(degs) > 1 or (degree is not None and degs and degs != {degree}):
            raise AssertionError(f"class not homogeneous of degree {degree}: degrees {sorted(degs)}")
        return self

    def map_terms(self, fn, ambient: Optional[Ambient] = None, check: bool = True) -> "TautClass":
        """Apply ``fn(stratum) -> iterable of (stratum, coeff)`` linearly."""
        amb = ambient or self.ambient
        pairs = []
        for s, c in self.terms.items():
            for s2, c2 in fn(s):
                pairs.append((s2, c * as_rational(c2)))
        return TautClass.from_terms(amb, pairs, check=check)

    def automorphisms(self, s: Stratum) -> int:
        return canonical_form(s)[1]

    def __repr__(self) -> str:
        from .serialize import class_to_text

        return f"TautClass[{self.ambient}]({class_to_text(self)})"


def class_combine(a: TautClass, b: TautClass, coeff_a=1, coeff_b=1) -> TautClass:
    a._check_ambient(b)
    ca, cb = as_rational(coeff_a), as_rational(coeff_b)
    res: Dict[Stratum, Fraction] = {}
    for cls_, c in ((a, ca), (b, cb)):
        if c == 0:
            continue
        for s, v in cls_.terms.items():
            w = res.get(s, Fraction(0)) + c * v
            if w:
                res[s] = w
            else:
                res.pop(s, None)
    return TautClass(a.ambient, res)


# ---------------------------------------------------------------------------
# expansion of truncated Mumford factors into psi/lambda monomials


def _tm_poly(genus: int, leg: str, d: int) -> List[Tuple[int, Decoration]]:
    out = []
    for j in range(0, min(genus, d) + 1):
        psi = ((leg, d - j),) if d - j > 0 else ()
        lam = ((j, 1),) if j > 0 else ()
        out.append(((-1) ** j, Decoration(psi, lam)))
    return out


def expand_vertex_decoration(genus: int, dec: Decoration) -> List[Tuple[int, Decoration]]:
    base = [(1, Decoration(dec.psi, dec.lam, dec.kappa))]
    for leg, d in dec.tm:
        base = [(c1 * c2, d1.times(d2)) for c1, d1 in base for c2, d2 in _tm_poly(genus, leg, d)]
    return base


def expand_stratum(s: Stratum) -> List[Tuple[Stratum, int]]:
    options = [expand_vertex_decoration(g, d) for g, d in zip(s.genera, s.decorations)]
    out = []
    for combo in itertools.product(*options):
        c = 1
        decs = []
        for ci, di in combo:
            c *= ci
            decs.append(di)
        out.append((replace(s, decorations=tuple(decs)), c))
    return out


def expand_decorations(c: TautClass) -> TautClass:
    """Rewrite every truncated Mumford factor as explicit psi/lambda monomials."""
    return c.map_terms(expand_stratum, check=False)
