import random

import pytest

from virtknot.diagram import CLOSED, LONG, canonicalize, empty_diagram, parse_gauss_code
from virtknot.finitetype import random_diagram
from virtknot.invariants import f_polynomial, writhe
from virtknot.moves import (
    FORBIDDEN_LF,
    FORBIDDEN_OF,
    R1_DELETE,
    R1_INSERT,
    R2_DELETE,
    R2_INSERT,
    R3,
    MoveTrace,
    SearchBudget,
    StaleSiteError,
    apply_forbidden,
    apply_move,
    enumerate_reidemeister,
    equivalent_search,
    forbidden_sites,
    invert_step,
    parse_trace,
    reverse_trace,
    triangle_at,
    unknot_by_forbidden,
    virtualize,
)

TREFOIL = "O1+ U2+ O3+ U1+ O2+ U3+"
VT = "O1+ U2+ U1+ O2+"


def kinds(sites):
    return {s.kind for s in sites}


def test_r1_delete_on_kink():
    kink = parse_gauss_code("O1+ U1+")
    sites = [s for s in enumerate_reidemeister(kink) if s.kind == R1_DELETE]
    assert sites
    out = apply_move(kink, sites[0])
    assert out.n_chords == 0


def test_trefoil_has_no_deletions_or_r3():
    d = parse_gauss_code(TREFOIL)
    sites = enumerate_reidemeister(d, include_inserts=False)
    assert sites == []


def test_every_insert_is_deletable_back():
    rng = random.Random(4)
    for _ in range(40):
        d = random_diagram(rng, rng.randint(0, 4), rng.choice((CLOSED, LONG)))
        start = canonicalize(d)
        sites = [
            s
            for s in enumerate_reidemeister(start)
            if s.kind in (R1_INSERT, R2_INSERT)
        ]
        site = rng.choice(sites)
        bigger = apply_move(start, site)
        inv = invert_step(start, site, canonicalize(bigger))
        assert canonicalize(apply_move(canonicalize(bigger), inv)) == start


def test_r2_insert_head_first_pairs_exist():
    d = empty_diagram(LONG)
    results = set()
    for s in enumerate_reidemeister(d):
        if s.kind == R2_INSERT:
            results.add(canonicalize(apply_move(d, s)))
    role_patterns = {tuple(r for _, r, _ in x.endpoints) for x in results}
    assert ("U", "U", "O", "O") in role_patterns
    assert ("O", "O", "U", "U") in role_patterns


def test_r3_involution_and_f_preserved():
    rng = random.Random(5)
    seen = 0
    while seen < 15:
        d = random_diagram(rng, 5, rng.choice((CLOSED, LONG)))
        sites = [s for s in enumerate_reidemeister(d, include_inserts=False) if s.kind == R3]
        if not sites:
            continue
        seen += 1
        site = rng.choice(sites)
        moved = apply_move(d, site)
        assert canonicalize(moved) != canonicalize(d) or moved == d
        assert f_polynomial(moved) == f_polynomial(d)
        assert apply_move(moved, site).endpoints == d.endpoints


def test_moves_preserve_writhe_except_r1():
    rng = random.Random(6)
    for _ in range(50):
        d = random_diagram(rng, rng.randint(1, 4), CLOSED)
        for site in enumerate_reidemeister(d):
            out = apply_move(d, site)
            if site.kind in (R1_INSERT, R1_DELETE):
                assert abs(writhe(out) - writhe(d)) == 1
            else:
                assert writhe(out) == writhe(d)


def test_virtualize_removes_chord():
    d = parse_gauss_code(TREFOIL)
    out = virtualize(d, 2)
    assert out.n_chords == 2 and 2 not in out.chord_ids()
    with pytest.raises(KeyError):
        virtualize(out, 2)


def test_forbidden_sites_oracle_values():
    # the alternating trefoil code has no same-role adjacent pairs
    assert forbidden_sites(parse_gauss_code(TREFOIL)) == []
    # the descending code has four
    desc = parse_gauss_code("O1+ O2+ O3+ U1+ U2+ U3+")
    assert len(forbidden_sites(desc)) == 4
    # the closed virtual trefoil has one OF and one LF site
    vt_sites = forbidden_sites(parse_gauss_code(VT))
    assert sorted(t.role for t in vt_sites) == ["heads", "tails"]


def test_forbidden_sign_flips_under_move():
    rng = random.Random(7)
    checked = 0
    while checked < 30:
        d = random_diagram(rng, rng.randint(2, 5), rng.choice((CLOSED, LONG)))
        sites = forbidden_sites(d)
        if not sites:
            continue
        t = rng.choice(sites)
        moved = apply_forbidden(d, t)
        t2 = triangle_at(moved, t.position)
        assert t2 is not None and t2.sign == -t.sign and t2.role == t.role
        # involution
        assert apply_forbidden(moved, t2).endpoints == d.endpoints
        checked += 1


def test_trace_serialize_parse_round_trip():
    kink = canonicalize(parse_gauss_code("O1+ U1+"))
    trace = equivalent_search(kink, empty_diagram(CLOSED))
    assert trace is not None and len(trace.steps) == 1
    text = trace.serialize()
    again = parse_trace(text)
    assert again.start == trace.start
    assert again.steps == trace.steps
    assert again.verify()


def test_reverse_trace_verifies():
    d = canonicalize(parse_gauss_code(VT))
    trace = unknot_by_forbidden(d)
    assert trace is not None and trace.verify()
    back = reverse_trace(trace)
    assert back.verify()
    assert back.start == trace.end and back.end == trace.start


def test_equivalent_search_finds_and_respects_depth():
    k1 = parse_gauss_code("O1+ U1+")
    k2 = parse_gauss_code("O1- U1-")
    trace = equivalent_search(k1, k2, SearchBudget(max_depth=4))
    assert trace is not None and trace.verify()
    assert canonicalize(trace.end) == canonicalize(k2)
    # virtual trefoil is not Reidemeister-trivial at small depth
    assert (
        equivalent_search(
            parse_gauss_code(VT), empty_diagram(CLOSED), SearchBudget(max_depth=4)
        )
        is None
    )


def test_unknot_by_forbidden_virtual_trefoil():
    trace = unknot_by_forbidden(parse_gauss_code(VT))
    assert trace is not None
    assert trace.end.n_chords == 0
    assert any(s.kind in (FORBIDDEN_OF, FORBIDDEN_LF) for s, _ in trace.steps)


def test_stale_site_raises():
    d = parse_gauss_code(TREFOIL)
    from virtknot.moves import MoveSite

    with pytest.raises(StaleSiteError):
        apply_move(d, MoveSite(R1_DELETE, (0,)))
    with pytest.raises(StaleSiteError):
        apply_move(d, MoveSite(R2_DELETE, (0, 2)))
