"""Polynomial invariants on Gauss diagrams.

Kauffman bracket and f-polynomial by state sum over the core circle,
a linear-time transfer-matrix bracket for 2-strand braid closures, the
degree-2 Conway coefficient as a Gauss diagram formula, and a Conway
skein-relation oracle for classical knot codes.
"""

from __future__ import annotations

from itertools import combinations

from .diagram import (
    CLOSED,
    HEAD,
    LONG,
    TAIL,
    CapExceededError,
    DiagramSum,
    GaussDiagram,
    canonicalize,
    parse_gauss_code,
)
from .polys import LaurentPoly

STATE_SUM_CAP = 22

D_LOOP = LaurentPoly({2: -1, -2: -1})  # -A^2 - A^-2


def writhe(diagram):
    """Sum of chord signs."""
    return sum(diagram.sign(cid) for cid in diagram.chord_ids())


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            return True
        return False


def _chord_positions(diagram):
    pos = {}
    for i, (cid, _, _) in enumerate(diagram.endpoints):
        pos.setdefault(cid, []).append(i)
    return list(pos.values())


def kauffman_bracket(diagram, cap=STATE_SUM_CAP):
    """Kauffman bracket by brute-force state sum.

    A state picks an A- or B-smoothing at every chord; its weight is
    A^(#A - #B) * d^(loops - 1) with d = -A^2 - A^-2.  For a positive
    chord the A-smoothing is the orientation-respecting surgery on the
    core circle; for a negative chord it is the other one.  Long
    diagrams are closed up at the base point first (the bracket does
    not see the base point).
    """
    n = diagram.n_chords
    if n > cap:
        raise CapExceededError(f"{n} chords exceeds state-sum cap {cap}")
    L = len(diagram.endpoints)
    if n == 0:
        return LaurentPoly({0: 1})
    chords = _chord_positions(diagram)
    signs = [diagram.endpoints[p][2] for p, _ in chords]
    d_powers = [LaurentPoly({0: 1})]
    for _ in range(n):
        d_powers.append(d_powers[-1] * D_LOOP)

    total = {}
    for state in range(1 << n):
        uf = _UnionFind(L)
        a_count = 0
        for k in range(n):
            p, q = chords[k]
            use_a = not (state >> k) & 1
            if use_a:
                a_count += 1
            # oriented surgery iff (A-smoothing and positive) or
            # (B-smoothing and negative)
            oriented = use_a == (signs[k] > 0)
            if oriented:
                uf.union((p - 1) % L, q)
                uf.union((q - 1) % L, p)
            else:
                uf.union((p - 1) % L, (q - 1) % L)
                uf.union(p, q)
        loops = len({uf.find(i) for i in range(L)})
        exp = a_count - (n - a_count)
        for e, c in d_powers[loops - 1].coeffs.items():
            key = e + exp
            total[key] = total.get(key, 0) + c
    return LaurentPoly(total)


def f_polynomial(diagram, cap=STATE_SUM_CAP):
    """Writhe-normalized bracket: (-A^3)^(-w) * <D>.

    Invariant under all generalized Reidemeister moves (tested, not
    proved here)."""
    w = writhe(diagram)
    norm = LaurentPoly({-3 * w: (-1) ** (w % 2)})
    return norm * kauffman_bracket(diagram, cap=cap)


def max_degree(poly):
    """Largest exponent with nonzero coefficient."""
    return poly.max_degree()


# -- transfer-matrix bracket for 2-strand braid words ---------------------

# connectivities of a smoothed 2-strand tangle
_ID, _SWAP, _CUP = 0, 1, 2

# composition table: (left, right) -> (result, closed loops created)
_COMPOSE = {
    (_ID, _ID): (_ID, 0),
    (_ID, _SWAP): (_SWAP, 0),
    (_ID, _CUP): (_CUP, 0),
    (_SWAP, _ID): (_SWAP, 0),
    (_SWAP, _SWAP): (_ID, 0),
    (_SWAP, _CUP): (_CUP, 0),
    (_CUP, _ID): (_CUP, 0),
    (_CUP, _SWAP): (_CUP, 0),
    (_CUP, _CUP): (_CUP, 1),
}


def bracket_of_braid_closure(word):
    """Bracket of the closure of a 2-strand braid word, linear in length.

    The word is a string over {s, S, v} (positive real, negative real,
    virtual).  The closure convention matches braids.braid_closure: the
    plain closure when the word's permutation is the transposition, and
    a closure with one virtual crossing on the return arc when the
    permutation is the identity (nonempty words only).
    """
    A = LaurentPoly({1: 1})
    Ainv = LaurentPoly({-1: 1})
    one = LaurentPoly({0: 1})
    state = {_ID: one}

    def absorb(target, conn, coeff):
        target[conn] = target.get(conn, LaurentPoly.zero()) + coeff

    swaps = 0
    for letter in word:
        new = {}
        if letter == "v":
            swaps += 1
            for conn, coeff in state.items():
                res, loops = _COMPOSE[(conn, _SWAP)]
                absorb(new, res, coeff * (D_LOOP ** loops))
        elif letter in ("s", "S"):
            swaps += 1
            ida, cupa = (A, Ainv) if letter == "s" else (Ainv, A)
            for conn, coeff in state.items():
                res, loops = _COMPOSE[(conn, _ID)]
                absorb(new, res, ida * coeff * (D_LOOP ** loops))
                res, loops = _COMPOSE[(conn, _CUP)]
                absorb(new, res, cupa * coeff * (D_LOOP ** loops))
        else:
            raise ValueError(f"bad braid letter {letter!r}")
        state = new

    plain = swaps % 2 == 1
    if plain:
        closure_loops = {_ID: 2, _SWAP: 1, _CUP: 1}
    else:
        closure_loops = {_ID: 1, _SWAP: 2, _CUP: 1}
    total = LaurentPoly.zero()
    for conn, coeff in state.items():
        total = total + coeff * (D_LOOP ** (closure_loops[conn] - 1))
    return total


def f_of_braid_closure(word):
    """Writhe-normalized bracket of a 2-strand braid closure, computed in
    transfer mode (linear in word length)."""
    w = sum(1 if c == "s" else -1 for c in word if c in "sS")
    norm = LaurentPoly({-3 * w: (-1) ** (w % 2)})
    return norm * bracket_of_braid_closure(word)


# -- the degree-2 Conway coefficient as a Gauss diagram formula -----------


def _c2_formula():
    """The single 2-chord based arrow diagram of the degree-2 formula,
    summed over both sign assignments with weight = product of signs."""
    terms = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            d = GaussDiagram(
                LONG,
                (
                    (1, TAIL, s1),
                    (2, HEAD, s2),
                    (1, HEAD, s1),
                    (2, TAIL, s2),
                ),
            )
            terms[d] = s1 * s2
    return DiagramSum(terms)


C2_FORMULA = _c2_formula()


def formula_value(formula, diagram):
    """Evaluate a Gauss diagram formula, enumerating only subdiagrams of
    the chord counts present in the formula.

    Agrees with diagram.gauss_formula (the terms it skips pair to zero);
    the equality is exercised by the test suite's brute-force oracle.
    """
    sizes = sorted({d.n_chords for d in formula.terms})
    ids = diagram.chord_ids()
    total = 0
    for k in sizes:
        if k > len(ids):
            continue
        for subset in combinations(ids, k):
            key = canonicalize(diagram.restrict(subset))
            coeff = formula.terms.get(key)
            if coeff:
                total += coeff
    return total


def _as_based(diagram):
    if diagram.kind == LONG:
        return diagram
    return GaussDiagram(LONG, canonicalize(diagram).endpoints)


def c2(diagram):
    """Coefficient of z^2 of the Conway polynomial, via the 2-chord
    Gauss diagram formula.  Closed diagrams are cut open at their
    canonical rotation."""
    return formula_value(C2_FORMULA, _as_based(diagram))


# -- Conway polynomial skein oracle ---------------------------------------


class SkeinBudgetError(RuntimeError):
    """The skein recursion exceeded its step budget."""


def _first_bad(circles):
    """First crossing (by traversal over the ordered circles) whose
    first pass is an under pass; None if the link is descending."""
    seen = set()
    for ci, circle in enumerate(circles):
        for pi, (cid, role, _) in enumerate(circle):
            if cid in seen:
                continue
            seen.add(cid)
            if role == HEAD:
                return ci, pi
    return None


def _switch(circles, cid):
    out = []
    for circle in circles:
        out.append(
            tuple(
                (c, (HEAD if r == TAIL else TAIL), -s) if c == cid else (c, r, s)
                for c, r, s in circle
            )
        )
    return out


def _smooth(circles, cid):
    """Oriented smoothing at one chord: split a circle or merge two."""
    locs = []
    for ci, circle in enumerate(circles):
        for pi, (c, _, _) in enumerate(circle):
            if c == cid:
                locs.append((ci, pi))
    (c1, p1), (c2, p2) = locs
    out = [circle for ci, circle in enumerate(circles) if ci not in (c1, c2)]
    if c1 == c2:
        circle = circles[c1]
        p, q = sorted((p1, p2))
        between = circle[p + 1 : q]
        around = circle[q + 1 :] + circle[:p]
        out.insert(0, around)
        out.insert(1, between)
    else:
        x, y = circles[c1], circles[c2]
        merged = x[:p1] + y[p2 + 1 :] + y[:p2] + x[p1 + 1 :]
        out.insert(0, merged)
    return out


def conway_skein_oracle(diagram, max_steps=200000):
    """Conway polynomial of a classical knot code via the skein relation
    on a descending-diagram unknotting sequence.

    Intended as an oracle: the caller asserts the code is realizable as
    a classical diagram.  Raises SkeinBudgetError if the recursion does
    not resolve within ``max_steps`` skein steps."""
    z = LaurentPoly({1: 1}, var="z")
    one = LaurentPoly({0: 1}, var="z")
    zero = LaurentPoly.zero(var="z")
    steps = 0

    def solve(circles):
        nonlocal steps
        steps += 1
        if steps > max_steps:
            raise SkeinBudgetError("skein recursion budget exceeded")
        bad = _first_bad(circles)
        if bad is None:
            live = len(circles)
            return one if live == 1 else zero
        ci, pi = bad
        cid, _, sign = circles[ci][pi]
        switched = solve(_switch(circles, cid))
        smoothed = solve(_smooth(circles, cid))
        return switched + LaurentPoly({1: sign}, var="z") * smoothed

    return solve([tuple(diagram.endpoints)])


# -- empirical invariance testing -----------------------------------------


def invariance_fuzz(functional, diagram, trials=100, seed=0, max_chords=None):
    """Apply random generalized Reidemeister moves and check that the
    functional never changes.  Returns (passed, violation) where the
    violation is a MoveTrace reaching the offending diagram."""
    import random

    from .moves import MoveTrace, apply_move, enumerate_reidemeister

    rng = random.Random(seed)
    if max_chords is None:
        max_chords = diagram.n_chords + 4
    reference = functional(diagram)
    current = canonicalize(diagram)
    start = current
    steps = []
    for _ in range(trials):
        sites = enumerate_reidemeister(
            current, include_inserts=True, max_chords=max_chords
        )
        if not sites:
            break
        deletions = [s for s in sites if s.kind.endswith("delete") or s.kind == "R3"]
        # bias toward non-growing moves so diagrams stay small
        pool = sites + 3 * deletions
        site = rng.choice(pool)
        current = canonicalize(apply_move(current, site))
        steps.append((site, current))
        if functional(current) != reference:
            return False, MoveTrace(start, tuple(steps))
    return True, None
