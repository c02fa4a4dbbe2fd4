"""Exact coefficient arithmetic.

Three layers live here:

* rationals (``fractions.Fraction``; :func:`rational_arith` is a thin checked
  front end),
* :class:`SymbolicPoly`, polynomials over Q in psi / lambda symbols attached to
  sites such as ``"0"`` and ``"inf"``,
* :class:`LaurentSeries`, truncated Laurent series in the equivariant
  parameter ``t`` whose coefficients are :class:`SymbolicPoly`.

Nothing in this module uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Sequence, Tuple

__all__ = [
    "Fraction",
    "rational_arith",
    "as_rational",
    "Symbol",
    "psi",
    "lam",
    "SymbolicPoly",
    "LinearFactor",
    "LaurentSeries",
    "laurent_expand_rational",
    "laurent_coefficient",
    "default_window",
]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def rational_arith(a, b, op: str) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown rational operation {op!r}")


class Symbol(NamedTuple):
    """A generator of the coefficient algebra.

    ``kind`` is ``"lambda"`` or ``"psi"``; psi symbols carry index 0.
    Tuple ordering gives the canonical monomial order (kind, site, index).
    """

    kind: str
    site: str
    index: int = 0

    def __str__(self) -> str:
        if self.kind == "psi":
            return f"psi_{self.site}"
        return f"lambda^{self.site}_{self.index}"


def psi(site: str) -> Symbol:
    return Symbol("psi", site, 0)


def lam(site: str, index: int) -> Symbol:
    if index < 1:
        raise ValueError("lambda index must be >= 1")
    return Symbol("lambda", site, index)


Monomial = Tuple[Tuple[Symbol, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: Dict[Symbol, int] = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted(exps.items()))


class SymbolicPoly:
    """Sparse polynomial with Fraction coefficients.

    Stored as ``{monomial: coeff}``; monomials are sorted tuples of
    ``(Symbol, exponent)`` and zero coefficients are never kept, so two equal
    polynomials have identical term dictionaries.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = as_rational(c)
                if c == 0:
                    continue
                if any(e < 1 for _, e in mono):
                    raise ValueError(f"non-positive exponent in monomial {mono}")
                key = tuple(sorted(mono))
                clean[key] = clean.get(key, Fraction(0)) + c
                if clean[key] == 0:
                    del clean[key]
        self.terms = clean
        self._hash = None

    @classmethod
    def constant(cls, c) -> "SymbolicPoly":
        return cls({(): c})

    @classmethod
    def gen(cls, sym: Symbol, exp: int = 1) -> "SymbolicPoly":
        if exp == 0:
            return cls.constant(1)
        return cls({((sym, exp),): 1})

    @classmethod
    def zero(cls) -> "SymbolicPoly":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymbolicPoly.constant(other)
        if not isinstance(other, SymbolicPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def _coerce(self, other) -> "SymbolicPoly":
        if isinstance(other, SymbolicPoly):
            return other
        return SymbolicPoly.constant(other)

    def __add__(self, other) -> "SymbolicPoly":
        other = self._coerce(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, Fraction(0)) + c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        out = SymbolicPoly()
        out.terms = res
        return out

    __radd__ = __add__

    def __neg__(self) -> "SymbolicPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "SymbolicPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SymbolicPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "SymbolicPoly":
        c = as_rational(c)
        if c == 0:
            return SymbolicPoly()
        out = SymbolicPoly()
        out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def __mul__(self, other) -> "SymbolicPoly":
        if not isinstance(other, SymbolicPoly):
            return self.scale(other)
        res: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = res.get(m, Fraction(0)) + c1 * c2
                if v:
                    res[m] = v
                else:
                    res.pop(m, None)
        out = SymbolicPoly()
        out.terms = res
        return out

    def __rmul__(self, other) -> "SymbolicPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "SymbolicPoly":
        if n < 0:
            raise ValueError("negative power")
        out = SymbolicPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def degree_in(self, sym: Symbol) -> int:
        return max((dict(m).get(sym, 0) for m in self.terms), default=0)

    def lower(self, sym: Symbol) -> "SymbolicPoly":
        """Lower every power of ``sym`` by one; monomials free of ``sym`` vanish."""
        res = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(sym, 0)
            if e == 0:
                continue
            if e == 1:
                del d[sym]
            else:
                d[sym] = e - 1
            res[tuple(sorted(d.items()))] = c
        return SymbolicPoly(res)

    def map_symbols(self, mapping: Mapping[Symbol, Symbol]) -> "SymbolicPoly":
        res: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            mono: Monomial = ()
            for s, e in m:
                mono = _mono_mul(mono, ((mapping.get(s, s), e),))
            res[mono] = res.get(mono, Fraction(0)) + c
        return SymbolicPoly(res)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __repr__(self) -> str:
        return f"SymbolicPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = "*".join(str(s) if e == 1 else f"{s}^{e}" for s, e in mono)
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(factors)
            elif c == -1:
                parts.append("-" + factors)
            else:
                parts.append(f"{c}*{factors}")
        return " + ".join(parts).replace("+ -", "- ")


class LinearFactor(NamedTuple):
    """The denominator factor ``sign*t + shift``."""

    sign: int
    shift: SymbolicPoly


class LaurentSeries:
    """Truncated Laurent series in ``t``.

    Coefficients are exact for every exponent in the window ``[lo, hi]``.
    When ``bounded`` is true the series is also known to vanish above ``hi``,
    which is what makes products exact on a computable window.
    """

    __slots__ = ("coeffs", "lo", "hi", "bounded")

    def __init__(self, coeffs: Mapping[int, SymbolicPoly], lo: int, hi: int, bounded: bool = True):
        if lo > hi:
            raise ValueError(f"empty window [{lo}, {hi}]")
        self.lo, self.hi, self.bounded = lo, hi, bounded
        self.coeffs: Dict[int, SymbolicPoly] = {}
        for k, c in coeffs.items():
            if not lo <= k <= hi:
                raise ValueError(f"exponent {k} outside window [{lo}, {hi}]")
            if not isinstance(c, SymbolicPoly):
                c = SymbolicPoly.constant(c)
            if c:
                self.coeffs[k] = c

    @classmethod
    def monomial(cls, coeff: SymbolicPoly, k: int, lo: int | None = None) -> "LaurentSeries":
        return cls({k: coeff}, k if lo is None else min(lo, k), k)

    def coefficient(self, k: int) -> SymbolicPoly:
        if not self.lo <= k <= self.hi:
            raise ValueError(f"t^{k} is outside the exact window [{self.lo}, {self.hi}]")
        return self.coeffs.get(k, SymbolicPoly())

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        lo = max(self.lo, other.lo)
        if self.bounded and other.bounded:
            hi, bounded = max(self.hi, other.hi), True
        else:
            hi, bounded = min(self.hi, other.hi), False
        out = {}
        for k in range(lo, hi + 1):
            c = self.coeffs.get(k, SymbolicPoly()) + other.coeffs.get(k, SymbolicPoly())
            if c:
                out[k] = c
        return LaurentSeries(out, lo, hi, bounded)

    def scale(self, c) -> "LaurentSeries":
        if isinstance(c, SymbolicPoly):
            coeffs = {k: v * c for k, v in self.coeffs.items()}
        else:
            coeffs = {k: v.scale(c) for k, v in self.coeffs.items()}
        return LaurentSeries(coeffs, self.lo, self.hi, self.bounded)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not (self.bounded and other.bounded):
            raise ValueError("product needs series bounded above")
        hi = self.hi + other.hi
        # below this exponent some contributing coefficient is unknown
        lo = max(self.lo + other.hi, other.lo + self.hi)
        if lo > hi:
            raise ValueError("product has no exact coefficients")
        out: Dict[int, SymbolicPoly] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k < lo:
                    continue
                out[k] = out.get(k, SymbolicPoly()) + a * b
        return LaurentSeries(out, lo, hi, True)

    def restrict(self, lo: int, hi: int) -> "LaurentSeries":
        if lo < self.lo or hi > self.hi and not self.bounded:
            raise ValueError(f"cannot widen window [{self.lo}, {self.hi}] to [{lo}, {hi}]")
        lo = max(lo, self.lo)
        kept = {k: c for k, c in self.coeffs.items() if lo <= k <= hi}
        bounded = self.bounded and all(k <= hi for k in self.coeffs)
        return LaurentSeries(kept, lo, hi, bounded)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.lo, self.hi, self.coeffs) == (other.lo, other.hi, other.coeffs)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*t^{k}" for k, c in sorted(self.coeffs.items(), reverse=True))
        return f"LaurentSeries[{self.lo},{self.hi}]({body or '0'})"


def default_window(g: int) -> Tuple[int, int]:
    return (-(g + 6), 2)


def _inverse_factor(f: LinearFactor, lo: int) -> LaurentSeries:
    """1/(sign*t + s) expanded in t^-1, exact down to exponent ``lo``."""
    if f.sign not in (1, -1):
        raise ValueError("unsupported denominator: t-coefficient must be +1 or -1")
    if f.shift.constant_term() != 0:
        raise ValueError("unsupported denominator: shift must have no constant term")
    # 1/(a t + s) = a / (t + a s) = a * sum_k (-a s)^k t^(-1-k)
    ratio = f.shift.scale(-f.sign)
    coeffs = {}
    power = SymbolicPoly.constant(f.sign)
    lo = min(lo, -1)
    for k in range(0, -1 - lo + 1):
        coeffs[-1 - k] = power
        power = power * ratio
        if power.is_zero():
            break
    return LaurentSeries(coeffs, lo, -1, True)


def laurent_expand_rational(
    numer: Mapping[int, SymbolicPoly],
    factors: Sequence[LinearFactor],
    window: Tuple[int, int],
) -> LaurentSeries:
    """Expand ``numer(t) / prod(factors)`` as a Laurent series in 1/t.

    ``numer`` maps powers of t (>= 0) to coefficients.  Each denominator
    factor is expanded geometrically and the product is exact on ``window``.
    """
    lo, hi = window
    if not numer or all(not c for c in numer.values()):
        return LaurentSeries({}, lo, hi, True)
    top = max(k for k, c in numer.items() if c)
    # each factor contributes at most t^-1, so the product is exact down to lo
    # if factor k is expanded to lo - top + (len(factors) - 1)
    depth = lo - top + (len(factors) - 1)
    # a polynomial numerator is exact arbitrarily far down
    series = LaurentSeries(dict(numer), min(depth, min(numer)), top, True)
    for f in factors:
        series = series * _inverse_factor(f, depth)
    if series.lo > lo:
        raise AssertionError("expansion depth too small")  # pragma: no cover
    return series.restrict(lo, hi)


def laurent_coefficient(s: LaurentSeries, k: int) -> SymbolicPoly:
    return s.coefficient(k)


def poly_from_terms(pairs: Iterable[Tuple[object, Sequence[Tuple[Symbol, int]]]]) -> SymbolicPoly:
    res: Dict[Monomial, Fraction] = {}
    for c, mono in pairs:
        key = tuple(sorted((s, e) for s, e in mono if e))
        res[key] = res.get(key, Fraction(0)) + as_rational(c)
    return SymbolicPoly(res)
