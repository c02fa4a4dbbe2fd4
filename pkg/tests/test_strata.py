import random
from fractions import Fraction

import pytest

from _gen import brute_automorphisms, brute_isomorphic, random_stratum, scramble
from mumford_rec.strata import (
    Ambient,
    Decoration,
    StrataError,
    Stratum,
    TautClass,
    build_stratum,
    class_combine,
    codimension,
    canonical_form,
    expand_decorations,
    normalize_decoration,
    single_vertex,
    validate,
)


def test_canonical_form_matches_brute_force_automorphisms():
    rng = random.Random(7)
    for _ in range(150):
        s = random_stratum(rng)
        assert canonical_form(s)[1] == brute_automorphisms(s)


def test_canonical_form_separates_exactly_isomorphism_classes():
    rng = random.Random(11)
    pool = [random_stratum(rng, max_vertices=3, decorate=False) for _ in range(40)]
    for s in pool:
        for t in pool:
            same = canonical_form(s)[0] == canonical_form(t)[0]
            assert same == brute_isomorphic(s, t)


def test_scrambled_copies_share_key():
    rng = random.Random(3)
    for _ in range(50):
        s = random_stratum(rng)
        key = canonical_form(s)
        for _ in range(10):
            assert canonical_form(scramble(rng, s)) == key


def test_chain_automorphism():
    s = build_stratum({
        "vertices": [{"genus": 0, "legs": ["1", "#a", "#b"]}, {"genus": 1, "legs": ["#c"]}, {"genus": 1, "legs": ["#d"]}],
        "edges": [["#a", "#c"], ["#b", "#d"]],
    })
    assert canonical_form(s)[1] == 2


@pytest.mark.parametrize(
    "data, msg",
    [
        ({"vertices": [{"genus": 0, "legs": ["1", "2"]}], "edges": []}, "unstable"),
        ({"vertices": [{"genus": 1, "legs": ["1"]}, {"genus": 1, "legs": ["#a"]}], "edges": []}, "tree"),
        ({"vertices": [{"genus": 1, "legs": ["1", "1"]}], "edges": []}, "repeated"),
        ({"vertices": [{"genus": 1, "legs": ["#x"]}], "edges": []}, "#"),
        (
            {"vertices": [{"genus": 1, "legs": ["1"]}], "edges": [],
             "decorations": [{"vertex": 0, "factor": {"type": "lambda", "index": 2, "exp": 1}}]},
            "exceeds",
        ),
    ],
)
def test_validation_errors(data, msg):
    with pytest.raises(StrataError, match=msg):
        build_stratum(data)


def test_cycle_rejected():
    s = Stratum(
        (1, 1),
        (("1", "#a", "#b"), ("#c", "#d")),
        (("#a", "#c"), ("#b", "#d")),
        (Decoration(), Decoration()),
    )
    with pytest.raises(StrataError):
        validate(s)


def tm(leg, d):
    return Decoration((), (), (), ((leg, d),))


def test_normalization_rules():
    assert normalize_decoration(0, ("a", "b", "c"), tm("a", 2)) is None  # beyond dimension 0
    assert normalize_decoration(0, ("a", "b", "c", "d"), tm("a", 1)) == Decoration((("a", 1),))
    assert normalize_decoration(2, ("a",), tm("a", 0)) == Decoration()
    assert normalize_decoration(2, ("a",), tm("a", -1)) is None
    merged = normalize_decoration(1, ("a", "b"), tm("a", 1).with_psi("a", 1))
    assert merged == tm("a", 2)
    # below the genus the psi power stays separate
    kept = normalize_decoration(3, ("a",), tm("a", 2).with_psi("a", 1))
    assert kept == Decoration((("a", 1),), (), (), (("a", 2),))
    assert normalize_decoration(1, ("a",), Decoration((("a", 2),))) is None


def test_expand_decorations_matches_polynomial():
    amb = Ambient.of(2, ("1",))
    c = TautClass.single(amb, single_vertex(2, ("1",), tm("1", 3)))
    e = expand_decorations(c)
    want = TautClass.from_terms(amb, [
        (single_vertex(2, ("1",), Decoration((("1", 3),))), 1),
        (single_vertex(2, ("1",), Decoration((("1", 2),), ((1, 1),))), -1),
        (single_vertex(2, ("1",), Decoration((("1", 1),), ((2, 1),))), 1),
    ])
    assert e == want


def test_class_arithmetic():
    amb = Ambient.of(1, ("1",))
    s = single_vertex(1, ("1",), Decoration((("1", 1),)))
    a = TautClass.single(amb, s, Fraction(1, 3))
    assert (a + a - a.scale(2)).is_zero()
    assert a.degrees() == {1}
    with pytest.raises(StrataError):
        TautClass.single(Ambient.of(2, ("1",)), s)


def test_fuzz_large_trees():
    rng = random.Random(99)
    n = 0
    while n < 1000:
        s = random_stratum(rng, max_vertices=6, markings=("1", "2", "3"))
        if s.genus > 5:
            continue
        n += 1
        assert canonical_form(scramble(rng, s)) == canonical_form(s)


def test_chain_end_genera_swap():
    def chain(a, b):
        return build_stratum({
            "vertices": [{"genus": a, "legs": ["#x"]}, {"genus": 0, "legs": ["#y", "1", "#z"]}, {"genus": b, "legs": ["#w"]}],
            "edges": [["#x", "#y"], ["#z", "#w"]],
        })

    assert canonical_form(chain(1, 2)) == canonical_form(chain(2, 1))
    assert canonical_form(chain(1, 2))[1] == 1


def test_codimension_counts():
    s = build_stratum({
        "vertices": [{"genus": 1, "legs": ["1", "#a"]}, {"genus": 1, "legs": ["#b"]}],
        "edges": [["#a", "#b"]],
        "decorations": [{"vertex": 0, "factor": {"type": "mumford", "leg": "#a", "degree": 1}}],
    })
    assert codimension(s) == 2
    assert s.codimension() == 2


def test_class_combine_laws():
    rng = random.Random(5)
    amb = Ambient.of(2, ("1", "2"))
    pool = []
    while len(pool) < 9:
        s = random_stratum(rng, max_vertices=3)
        if s.genus == 2:
            pool.append(s)
    x, y, z = (TautClass.from_terms(amb, [(s, Fraction(i + 1, 3)) for i, s in enumerate(pool[k::3])]) for k in range(3))
    assert class_combine(x, y, 2, Fraction(1, 2)) == class_combine(y, x, Fraction(1, 2), 2)
    assert class_combine(class_combine(x, y), z) == class_combine(x, class_combine(y, z))
    assert class_combine(x, x, 1, -1).is_zero()
    with pytest.raises(StrataError):
        class_combine(x, TautClass(Ambient.of(2, ("1",))))
