"""Acceptance criteria 1-8.  Each check prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or under pytest; with
pytest the lines are written past the output capture.
"""
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _gen import brute_automorphisms, random_stratum, scramble  # noqa: E402
from mumford_rec.algebra import default_window, laurent_coefficient  # noqa: E402
from mumford_rec.builders import (  # noqa: E402
    build_c,
    build_c_prime,
    mumford_factor,
    mumford_lhs,
    remark1_relation,
    remark3_relation,
    theorem_rhs,
)
from mumford_rec.expander import analyze, expand_full  # noqa: E402
from mumford_rec.localization import (  # noqa: E402
    FixedLocus,
    f0_closed_form,
    fixed_locus_contribution,
    remark1_extract,
    replay_derivation,
    verify_cprime,
)
from mumford_rec.ops import forget_pullback, forget_pushforward, glue_pushforward, psi_multiply  # noqa: E402
from mumford_rec.serialize import (  # noqa: E402
    class_from_json,
    class_to_json,
    dumps,
    relation_text,
    report_from_json,
    report_to_json,
)
from mumford_rec.strata import canonical_form, expand_decorations  # noqa: E402


def _same(a, b):
    return expand_decorations(a) == expand_decorations(b)


def crit1():
    best = None
    for _ in range(5):
        theorem_rhs.cache_clear()
        t = time.perf_counter()
        rhs = theorem_rhs(1)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    text = relation_text(1, rhs)
    ok = rhs.is_zero() and text == "ψ − λ1 = 0" and best < 1e-3
    return ok, f"empty={rhs.is_zero()} text={text!r}", best, 1e-3


def crit2():
    t = time.perf_counter()
    ok = True
    for g in range(1, 7):
        f0 = laurent_coefficient(fixed_locus_contribution(g, FixedLocus(g, 0)), -4)
        ok &= f0 == f0_closed_form(g, 1) and f0 == -f0_closed_form(g, 0) * _psi_inf()
        for h in range(1, g + 1):
            ok &= verify_cprime(g, h).ok
    dt = time.perf_counter() - t
    return ok and dt < 10, "F_0 and c'_h for 1 <= h <= g <= 6", dt, 10


def _psi_inf():
    from mumford_rec.algebra import SymbolicPoly, psi

    return SymbolicPoly.gen(psi("inf"))


def crit3():
    t = time.perf_counter()
    ok = True
    for g in range(1, 7):
        for h in range(1, g + 1):
            low = build_c_prime(g, h).lowered(drop_marking="3")
            ok &= low.to_poly() == build_c(g, h, truncate=False).to_poly()
            ok &= {(s, a, b) for s, a, b in low.terms} == set(build_c(g, h, truncate=False).terms)
    dt = time.perf_counter() - t
    return ok and dt < 1, "g <= 6", dt, 1


def crit4():
    t = time.perf_counter()
    ok = True
    for g in range(1, 7):
        rep = replay_derivation(g)
        want = mumford_lhs(g).scale(-2 * g)
        for h in range(1, g):
            want = want + build_c(g, h).glued().scale(2 * (g - h))
        ok &= rep.ok and rep.rhs == want and _same(rep.lhs, want)
        # divide by 2g: theorem as a class identity
        ok &= _same(rep.lhs.scale(Fraction(1, 2 * g)) + mumford_lhs(g), theorem_rhs(g))
        ok &= rep.intermediates["dilaton"] == {h: [2 * g if h == 0 else 2 * (g - h)] for h in range(g)}
        ok &= rep.intermediates["killed_by_psi3"] == [g]
    dt = time.perf_counter() - t
    return ok and dt < 30, "g <= 6, dilaton 2g / 2(g-h), h = g killed by psi_3", dt, 30


def crit5():
    t = time.perf_counter()
    ok = True
    for g in range(1, 5):
        for j in range(1, 4):
            rep = remark1_extract(g, j)
            f0 = mumford_factor(g, g + j - 1).scale((-1) ** j * 2 * g)
            rest = rep.rhs - f0
            ok &= rep.ok and all(len(s.edges) == 1 for s, _ in rest)
            ok &= remark1_relation(g, j).ok
        ok &= remark1_extract(g, 1).lhs == replay_derivation(g).lhs
    dt = time.perf_counter() - t
    return ok and dt < 30, "g <= 4, j <= 3", dt, 30


def crit6():
    t = time.perf_counter()
    ok = True
    steps = {}
    for g in range(1, 6):
        rep = expand_full(g, max_steps=10**6)
        steps[g] = rep.steps
        if g <= 4:
            for s, _ in rep.normal_form:
                ok &= s.genera[s.vertex_of("1")] == 0
                for gv, dec in zip(s.genera, s.decorations):
                    if gv > 0:
                        ok &= not (dec.psi or dec.lam or dec.kappa)
                        ok &= all(d < gv for _, d in dec.tm)
        if g == 2:
            (s, k), = rep.normal_form.sorted_terms()
            ok &= sorted(s.genera) == [0, 1, 1] and s.genera[s.vertex_of("1")] == 0
            ok &= len(s.edges) == 2 and len(s.legs[s.vertex_of("1")]) == 3
    dt = time.perf_counter() - t
    return ok and dt < 300, f"steps {steps}", dt, 300


def crit7():
    t = time.perf_counter()
    rep = expand_full(5)
    summary = analyze(rep)
    dt = time.perf_counter() - t
    ig = summary["integrality"]
    detail = (
        f"report-only: {ig['terms']} terms, non-integer raw={ig['non_integer_raw']}, "
        f"/aut={ig['non_integer_over_aut']}, *aut={ig['non_integer_times_aut']}, "
        f"marked on genus 0 everywhere={summary['all_marked_on_genus0']}"
    )
    return "integrality" in summary, detail, dt, None


def crit8():
    t = time.perf_counter()
    ok = True
    rng = random.Random(2024)
    # canonicalization fuzz: 1000 relabelings
    base = [random_stratum(rng, max_vertices=6, markings=("1", "2", "3")) for _ in range(50)]
    for i in range(1000):
        s = base[i % len(base)]
        ok &= canonical_form(scramble(rng, s)) == canonical_form(s)
    small = [random_stratum(rng) for _ in range(50)]
    ok &= all(canonical_form(s)[1] == brute_automorphisms(s) for s in small)
    # degree laws and linearity
    x, y = theorem_rhs(3), mumford_factor(3, 3)
    ok &= psi_multiply(x, "1").degrees() == {4}
    ok &= forget_pullback(x, "p").degrees() == {3}
    ok &= forget_pushforward(psi_multiply(forget_pullback(x, "p"), "p", 2), "p").degrees() == {4}
    ok &= glue_pushforward(mumford_factor(1, 1, "0", ("0", "1")), mumford_factor(2, 2, "inf", ("inf",))).degrees() == {4}
    comb = x.scale(Fraction(2, 3)) - y.scale(5)
    ok &= forget_pullback(comb, "p") == forget_pullback(x, "p").scale(Fraction(2, 3)) - forget_pullback(y, "p").scale(5)
    # projection formula round trips
    for g in (2, 3):
        for a in (theorem_rhs(g), mumford_factor(g, g), psi_multiply(theorem_rhs(g), "1")):
            up = forget_pullback(a, "p")
            ok &= forget_pushforward(up, "p").is_zero()
            ok &= _same(forget_pushforward(psi_multiply(up, "p"), "p"), a.scale(2 * g - 1))
    # window enlargement
    for g in (1, 2, 3, 4):
        lo, hi = default_window(g)
        for h in range(g + 1):
            a = fixed_locus_contribution(g, FixedLocus(g, h))
            b = fixed_locus_contribution(g, FixedLocus(g, h), (lo - 4, hi + 3))
            ok &= all(a.coefficient(k) == b.coefficient(k) for k in range(lo, hi + 1))
    # JSON round trip on suite outputs
    outs = [theorem_rhs(g) for g in range(1, 7)]
    reps = [verify_cprime(g, h) for g in range(1, 7) for h in range(1, g + 1)]
    reps += [replay_derivation(g) for g in range(1, 7)]
    reps += [remark1_relation(g, j) for g in range(1, 5) for j in range(1, 4)]
    reps += [remark3_relation(g) for g in range(2, 7)]
    reps += [expand_full(g) for g in range(1, 6)]
    for c in outs:
        ok &= class_from_json(json.loads(dumps(class_to_json(c)))) == c
    for r in reps:
        d = report_to_json(r)
        ok &= dumps(report_to_json(report_from_json(json.loads(dumps(d))))) == dumps(d)
    dt = time.perf_counter() - t
    return ok and dt < 60, "fuzz, degree laws, projection formula, windows, JSON", dt, 60


CRITERIA = {1: crit1, 2: crit2, 3: crit3, 4: crit4, 5: crit5, 6: crit6, 7: crit7, 8: crit8}


def _line(n, ok, detail, dt, limit):
    bound = f" (limit {limit}s)" if limit is not None else ""
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} [{dt:.3f}s{bound}] {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail, dt, limit = CRITERIA[n]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail, dt, limit))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        ok, detail, dt, limit = CRITERIA[n]()
        print(_line(n, ok, detail, dt, limit))
        failed += not ok
    sys.exit(1 if failed else 0)
