"""JSON, plain-text and LaTeX renderings.

JSON layout of a class::

    {"ambient": {"genus": g, "markings": [...]},
     "terms": [{"coeff": "p/q", "automorphisms": k,
                "graph": {"vertices": [{"genus": g, "legs": [...]}],
                          "edges": [[a, b], ...],
                          "decorations": [{"vertex": v, "factor": {...}}]}}]}

Factors are ``{"type": "psi", "leg", "exp"}``, ``{"type": "lambda", "index",
"exp"}``, ``{"type": "kappa", "index", "exp"}`` and ``{"type": "mumford",
"leg", "degree"}``.  Output is deterministic: terms follow canonical order.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .algebra import Symbol, SymbolicPoly
from .strata import Ambient, Decoration, Stratum, TautClass, canonical_form

__all__ = [
    "factor_from_json",
    "factor_to_json",
    "stratum_to_json",
    "stratum_from_json",
    "class_to_json",
    "class_from_json",
    "poly_to_json",
    "poly_from_json",
    "report_to_json",
    "report_from_json",
    "dumps",
    "class_to_text",
    "class_to_latex",
    "relation_text",
    "relation_latex",
]


def _frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def factor_from_json(f: Dict[str, Any]) -> Decoration:
    t = f.get("type")
    if t == "psi":
        return Decoration(((str(f["leg"]), int(f["exp"])),))
    if t == "lambda":
        return Decoration((), ((int(f["index"]), int(f["exp"])),))
    if t == "kappa":
        return Decoration((), (), ((int(f["index"]), int(f["exp"])),))
    if t == "mumford":
        return Decoration((), (), (), ((str(f["leg"]), int(f["degree"])),))
    raise ValueError(f"unknown factor type {t!r}")


def factor_to_json(dec: Decoration) -> List[Dict[str, Any]]:
    out: List[Dict[str, Any]] = []
    out += [{"type": "psi", "leg": l, "exp": e} for l, e in dec.psi]
    out += [{"type": "lambda", "index": i, "exp": e} for i, e in dec.lam]
    out += [{"type": "kappa", "index": i, "exp": e} for i, e in dec.kappa]
    out += [{"type": "mumford", "leg": l, "degree": d} for l, d in dec.tm]
    return out


def stratum_to_json(s: Stratum) -> Dict[str, Any]:
    decs = [
        {"vertex": v, "factor": f}
        for v, dec in enumerate(s.decorations)
        for f in factor_to_json(dec)
    ]
    return {
        "vertices": [{"genus": g, "legs": list(l)} for g, l in zip(s.genera, s.legs)],
        "edges": [list(e) for e in s.edges],
        "decorations": decs,
    }


def stratum_from_json(d: Dict[str, Any]) -> Stratum:
    from .strata import build_stratum

    return build_stratum(d)


def class_to_json(c: TautClass) -> Dict[str, Any]:
    return {
        "ambient": {"genus": c.ambient.genus, "markings": list(c.ambient.markings)},
        "terms": [
            {"coeff": _frac(k), "automorphisms": canonical_form(s)[1], "graph": stratum_to_json(s)}
            for s, k in c.sorted_terms()
        ],
    }


def class_from_json(d: Dict[str, Any]) -> TautClass:
    amb = Ambient.of(int(d["ambient"]["genus"]), d["ambient"]["markings"])
    pairs = [(stratum_from_json(t["graph"]), _parse_frac(t["coeff"])) for t in d["terms"]]
    return TautClass.from_terms(amb, pairs)


def poly_to_json(p: SymbolicPoly) -> Dict[str, Any]:
    rows = []
    for mono, c in sorted(p.terms.items()):
        rows.append({"coeff": _frac(c), "monomial": [[s.kind, s.site, s.index, e] for s, e in mono]})
    return {"poly": rows}


def poly_from_json(d: Dict[str, Any]) -> SymbolicPoly:
    out = SymbolicPoly()
    for row in d["poly"]:
        term = SymbolicPoly.constant(_parse_frac(row["coeff"]))
        for kind, site, index, e in row["monomial"]:
            term = term * SymbolicPoly.gen(Symbol(kind, site, int(index)), int(e))
        out = out + term
    return out


def _value_to_json(x):
    if isinstance(x, TautClass):
        return {"class": class_to_json(x)}
    if isinstance(x, SymbolicPoly):
        return poly_to_json(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _value_from_json(d):
    if "class" in d:
        return class_from_json(d["class"])
    return poly_from_json(d)


def _plain(x):
    """Make intermediates JSON-safe (fractions as strings, tuples as lists)."""
    if isinstance(x, (TautClass, SymbolicPoly)):
        return _value_to_json(x)
    if isinstance(x, Fraction):
        return _frac(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def report_to_json(r) -> Dict[str, Any]:
    from .builders import RelationReport
    from .expander import ExpansionReport

    if isinstance(r, RelationReport):
        return {
            "kind": "relation",
            "genus": r.genus,
            "variant": r.variant,
            "hard": r.hard,
            "ok": r.ok,
            "lhs": _value_to_json(r.lhs),
            "rhs": _value_to_json(r.rhs),
            "residual": _value_to_json(r.residual),
            "mismatches": list(r.mismatches),
            "intermediates": _plain(r.intermediates),
        }
    if isinstance(r, ExpansionReport):
        return {
            "kind": "expansion",
            "genus": r.genus,
            "steps": r.steps,
            "depth": r.depth,
            "normal_form": class_to_json(r.normal_form),
            "flags": _plain(r.flags),
            "integrality": _plain(r.integrality),
        }
    raise TypeError(f"cannot serialize {type(r).__name__}")


def report_from_json(d: Dict[str, Any]):
    from .builders import RelationReport
    from .expander import ExpansionReport

    if d["kind"] == "relation":
        return RelationReport(
            lhs=_value_from_json(d["lhs"]),
            rhs=_value_from_json(d["rhs"]),
            residual=_value_from_json(d["residual"]),
            genus=d["genus"],
            variant=d["variant"],
            mismatches=list(d["mismatches"]),
            intermediates=d["intermediates"],
            hard=d["hard"],
        )
    if d["kind"] == "expansion":
        flags = []
        for f in d["flags"]:
            f = dict(f)
            f["coeff"] = _parse_frac(f["coeff"])
            f["shape"] = tuple(f["shape"])
            flags.append(f)
        return ExpansionReport(
            genus=d["genus"],
            normal_form=class_from_json(d["normal_form"]),
            steps=d["steps"],
            flags=flags,
            integrality=d["integrality"],
            depth=d["depth"],
        )
    raise ValueError(f"unknown report kind {d.get('kind')!r}")


def dumps(obj: Dict[str, Any]) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# text and LaTeX

MINUS = "−"


def _tm_terms(genus: int, d: int) -> List[Tuple[int, int, int]]:
    """(sign, lambda index, psi power) of TM(d) on genus ``genus``."""
    return [((-1) ** j, j, d - j) for j in range(0, min(genus, d) + 1)]


def _tm_text(genus: int, d: int, sub: str, latex: bool) -> str:
    parts = []
    for k, (sign, j, e) in enumerate(_tm_terms(genus, d)):
        if latex:
            ps = "" if e == 0 else (f"\\psi{sub}" + (f"^{{{e}}}" if e > 1 else ""))
            ls = f"\\lambda_{{{j}}}" if j else ""
        else:
            ps = "" if e == 0 else ("ψ" + sub + (f"^{e}" if e > 1 else ""))
            ls = f"λ{j}" if j else ""
        body = (ls + ps) or "1"
        if k == 0:
            parts.append(body if sign > 0 else ("-" if latex else MINUS) + body)
        else:
            parts.append((" + " if sign > 0 else (" - " if latex else f" {MINUS} ")) + body)
    return "".join(parts)


def _leg_name(leg: str, latex: bool) -> str:
    if leg.startswith("#"):
        return f"h_{{{leg[1:]}}}" if latex else "h" + leg[1:]
    return leg


def _dec_text(genus: int, dec: Decoration, latex: bool) -> str:
    bits = []
    for l, e in dec.psi:
        if latex:
            bits.append(f"\\psi_{{{_leg_name(l, True)}}}" + (f"^{{{e}}}" if e > 1 else ""))
        else:
            bits.append(f"ψ_{_leg_name(l, False)}" + (f"^{e}" if e > 1 else ""))
    for i, e in dec.lam:
        bits.append((f"\\lambda_{{{i}}}" if latex else f"λ{i}") + ((f"^{{{e}}}" if latex else f"^{e}") if e > 1 else ""))
    for i, e in dec.kappa:
        bits.append((f"\\kappa_{{{i}}}" if latex else f"κ{i}") + ((f"^{{{e}}}" if latex else f"^{e}") if e > 1 else ""))
    for l, d in dec.tm:
        sub = f"_{{{_leg_name(l, True)}}}" if latex else f"_{_leg_name(l, False)}"
        bits.append("(" + _tm_text(genus, d, sub, latex) + ")")
    return ("\\," if latex else " ").join(bits)


def _tree_text(s: Stratum, latex: bool) -> str:
    """Nested bracket picture rooted at the vertex carrying the first marking."""
    marks = s.markings
    root = s.vertex_of(marks[0]) if marks else 0

    def render(v: int, parent_leg: Optional[str]) -> str:
        g = s.genera[v]
        own = [l for l in s.legs[v] if not l.startswith("#")]
        head = str(g)
        if own:
            head += (f"_{{{','.join(own)}}}" if latex else ":" + ",".join(own))
        dec = _dec_text(g, s.decorations[v], latex)
        inner = [head] + ([dec] if dec else [])
        for l in s.legs[v]:
            if l == parent_leg or not l.startswith("#"):
                continue
            w_leg = s.partner(l)
            inner.append(render(s.vertex_of(w_leg), w_leg))
        sep = "\\," if latex else " "
        return "[" + sep.join(inner) + "]"

    return render(root, None)


def _coeff_text(c: Fraction, first: bool, latex: bool) -> str:
    neg = c < 0
    a = -c if neg else c
    if latex:
        mag = "" if a == 1 else (str(a.numerator) if a.denominator == 1 else f"\\frac{{{a.numerator}}}{{{a.denominator}}}")
        sign = ("-" if neg else "") if first else (" - " if neg else " + ")
    else:
        mag = "" if a == 1 else str(a)
        sign = (MINUS if neg else "") if first else (f" {MINUS} " if neg else " + ")
    return sign + mag


def _render(c: TautClass, latex: bool) -> str:
    if c.is_zero():
        return "0"
    out = []
    for i, (s, k) in enumerate(c.sorted_terms()):
        out.append(_coeff_text(k, i == 0, latex) + _tree_text(s, latex))
    return "".join(out)


def class_to_text(c: TautClass) -> str:
    return _render(c, latex=False)


def class_to_latex(c: TautClass) -> str:
    return _render(c, latex=True)


def _lhs(g: int, latex: bool) -> str:
    return _tm_text(g, g, "", latex)


def relation_text(g: int, rhs: TautClass) -> str:
    """``lhs = rhs``; for g = 1 this is ``ψ − λ1 = 0``."""
    return f"{_lhs(g, False)} = {class_to_text(rhs)}"


def relation_latex(g: int, rhs: TautClass) -> str:
    return f"{_lhs(g, True)} = {class_to_latex(rhs)}"
