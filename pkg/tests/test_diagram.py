import random

import pytest

from virtknot.diagram import (
    CLOSED,
    LONG,
    DiagramSum,
    GaussCodeError,
    GaussDiagram,
    canonicalize,
    empty_diagram,
    gauss_formula,
    j_map,
    pair,
    parse_gauss_code,
    sub_diagrams,
)
from virtknot.finitetype import random_diagram

TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"
LONG_VT = "@ O1+ U2+ U1+ O2+"


def test_parse_round_trip():
    d = parse_gauss_code(TREFOIL)
    assert d.kind == CLOSED
    assert d.code() == TREFOIL
    ld = parse_gauss_code(LONG_VT)
    assert ld.kind == LONG
    assert ld.code() == LONG_VT


def test_parse_empty():
    assert parse_gauss_code("@").n_chords == 0
    assert parse_gauss_code("").n_chords == 0
    assert parse_gauss_code("@").kind == LONG
    assert parse_gauss_code("").kind == CLOSED


@pytest.mark.parametrize(
    "bad",
    ["O1+ U1", "O1+ O1+", "O1+ U1-", "O1+", "X1+ Y1+", "O1+ U1+ O1+"],
)
def test_parse_rejects_malformed(bad):
    with pytest.raises(GaussCodeError):
        parse_gauss_code(bad)


def test_closed_rotation_equivalence():
    d = parse_gauss_code(TREFOIL)
    for r in range(6):
        eps = d.endpoints[r:] + d.endpoints[:r]
        assert canonicalize(GaussDiagram(CLOSED, eps)) == canonicalize(d)


def test_canonicalize_idempotent_random():
    rng = random.Random(0)
    for _ in range(100):
        d = random_diagram(rng, rng.randint(1, 6), rng.choice((CLOSED, LONG)))
        c = canonicalize(d)
        assert canonicalize(c) == c
        # relabeling chords must not change the canonical form
        ids = d.chord_ids()
        perm = dict(zip(ids, rng.sample(ids, len(ids))))
        relabeled = GaussDiagram(
            d.kind, tuple((perm[c_], r, s) for c_, r, s in d.endpoints)
        )
        assert canonicalize(relabeled) == c


def test_sub_diagrams_count_and_induced_order():
    d = parse_gauss_code(TREFOIL)
    subs = list(sub_diagrams(d))
    assert len(subs) == 2 ** 3
    sizes = sorted(s.n_chords for s in subs)
    assert sizes == [0, 1, 1, 1, 2, 2, 2, 3]
    one = d.restrict([2])
    assert one.n_chords == 1 and one.sign(2) == 1


def test_j_map_mass():
    rng = random.Random(1)
    for _ in range(20):
        d = random_diagram(rng, rng.randint(0, 6), LONG)
        assert j_map(d).mass() == 2 ** d.n_chords


def test_pair_is_kronecker():
    d = canonicalize(parse_gauss_code(LONG_VT))
    a = DiagramSum.single(d, 3)
    b = DiagramSum.single(d, 2) + DiagramSum.single(empty_diagram(LONG), 5)
    assert pair(a, b) == 6
    assert pair(a, DiagramSum.single(empty_diagram(LONG))) == 0


def test_pair_bilinear():
    rng = random.Random(2)
    d1 = canonicalize(random_diagram(rng, 2, LONG))
    d2 = canonicalize(random_diagram(rng, 3, LONG))
    a = DiagramSum.single(d1, 2) - DiagramSum.single(d2, 1)
    x = j_map(random_diagram(rng, 4, LONG))
    y = j_map(random_diagram(rng, 3, LONG))
    assert pair(a, x + y) == pair(a, x) + pair(a, y)
    assert pair(a.scale(3), x) == 3 * pair(a, x)


def brute_formula(formula, diagram):
    """Independent evaluation: count canonical subdiagram matches."""
    total = 0
    for sub in sub_diagrams(diagram):
        total += formula.terms.get(canonicalize(sub), 0)
    return total


def test_gauss_formula_matches_brute():
    rng = random.Random(3)
    for _ in range(30):
        d = random_diagram(rng, rng.randint(1, 6), rng.choice((CLOSED, LONG)))
        terms = {}
        for _ in range(3):
            a = canonicalize(random_diagram(rng, rng.randint(1, 3), d.kind))
            terms[a] = terms.get(a, 0) + rng.choice((-2, -1, 1, 2))
        formula = DiagramSum(terms, _canonical=True)
        assert gauss_formula(formula, d) == brute_formula(formula, d)


def test_drop_and_restrict_are_complements():
    d = parse_gauss_code(TREFOIL)
    assert d.drop([1, 3]).endpoints == d.restrict([2]).endpoints
