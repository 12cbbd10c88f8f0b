"""Finite type machinery: alternating sums over virtualizations and
forbidden moves, semi-virtual / semi-triple expansions, order-bound
checkers, n-similarity witnesses, and the forbidden-move-to-virtualization
lemma verifier.

An invariant has GPV-order <= n (F-order <= n) when every (n+1)-fold
alternating sum over virtualizations (forbidden moves at disjoint
triangles) vanishes.  The checkers here are randomized refuters: "pass"
means no counterexample was found, not a proof.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .diagram import (
    CLOSED,
    LONG,
    DiagramSum,
    GaussDiagram,
    canonicalize,
    gauss_formula,
)
from .moves import (
    SearchBudget,
    Triangle,
    apply_forbidden,
    equivalent_search,
    forbidden_sites,
    virtualize,
)


class Functional:
    """A named evaluation rule on Gauss diagrams, linearly extended to
    diagram sums.  Values live in any abelian group with + and - (ints
    or Laurent polynomials)."""

    def __init__(self, name, fn):
        self.name = name
        self._fn = fn

    def __call__(self, diagram):
        return self._fn(diagram)

    def on_sum(self, dsum):
        total = 0
        for d, c in dsum.items():
            total = total + c * self._fn(d)
        return total

    def __repr__(self):
        return f"Functional({self.name})"


def chord_count_functional():
    return Functional("chord_count", lambda d: d.n_chords)


def constant_functional(value=1):
    return Functional(f"const_{value}", lambda d: value)


def formula_functional(formula, name="formula"):
    """Gauss diagram formula as a functional, with per-diagram caching."""
    from .invariants import formula_value

    cache = {}

    def fn(diagram):
        key = canonicalize(diagram)
        if key not in cache:
            cache[key] = formula_value(formula, key)
        return cache[key]

    return Functional(name, fn)


def c2_functional():
    from .invariants import c2

    cache = {}

    def fn(diagram):
        key = canonicalize(diagram)
        if key not in cache:
            cache[key] = c2(key)
        return cache[key]

    return Functional("c2", fn)


# -- alternating sums -----------------------------------------------------


def gpv_alternating_sum(v, diagram, crossings):
    """Sum over all subsets of the chosen crossings of
    (-1)^|subset| * v(diagram with that subset virtualized)."""
    crossings = list(crossings)
    if len(set(crossings)) != len(crossings):
        raise ValueError("duplicate chord ids")
    present = set(diagram.chord_ids())
    missing = [c for c in crossings if c not in present]
    if missing:
        raise KeyError(f"unknown chord ids {missing}")
    total = 0
    for k in range(len(crossings) + 1):
        for subset in combinations(crossings, k):
            term = v(diagram.drop(subset))
            total = total + ((-1) ** k) * term
    return total


def triangles_disjoint(triangles, n_endpoints, closed):
    positions = set()
    for t in triangles:
        p = t.position
        q = (p + 1) % n_endpoints if closed else p + 1
        if p in positions or q in positions:
            return False
        positions.update((p, q))
    return True


def _apply_triangles(diagram, triangles):
    out = diagram
    for t in triangles:
        out = apply_forbidden(out, t)
    return out


def f_alternating_sum(v, diagram, triangles):
    """Sum over subsets of disjoint triangles of
    (-1)^|subset| * v(diagram with forbidden moves applied there).

    Disjoint transpositions leave each other's positions fixed, so the
    sites stay valid in every term."""
    triangles = list(triangles)
    if not triangles_disjoint(
        triangles, len(diagram.endpoints), diagram.kind == CLOSED
    ):
        raise ValueError("triangles overlap")
    total = 0
    for k in range(len(triangles) + 1):
        for subset in combinations(triangles, k):
            term = v(_apply_triangles(diagram, subset))
            total = total + ((-1) ** k) * term
    return total


# -- semi-virtual and semi-triple expansions ------------------------------


def expand_semi_virtual(diagram, marked):
    """Resolve each marked chord as (kept real) - (virtualized)."""
    marked = sorted(set(marked))
    present = set(diagram.chord_ids())
    missing = [c for c in marked if c not in present]
    if missing:
        raise KeyError(f"unknown chord ids {missing}")
    terms = {}
    for k in range(len(marked) + 1):
        for subset in combinations(marked, k):
            d = canonicalize(diagram.drop(subset))
            terms[d] = terms.get(d, 0) + (-1) ** k
    return DiagramSum(terms, _canonical=True)


def expand_semi_triple(diagram, triangles):
    """Resolve each marked triangle as (positive configuration) -
    (negative configuration).

    A site whose current sign is +1 contributes (as-is) - (transposed);
    a site currently at -1 contributes (transposed) - (as-is)."""
    triangles = list(triangles)
    if not triangles_disjoint(
        triangles, len(diagram.endpoints), diagram.kind == CLOSED
    ):
        raise ValueError("triangles overlap")
    terms = {}
    n = len(triangles)
    for mask in range(1 << n):
        # bit i set = take the negative configuration at triangle i
        coeff = (-1) ** bin(mask).count("1")
        to_flip = []
        for i, t in enumerate(triangles):
            target_is_positive = not ((mask >> i) & 1)
            if (t.sign > 0) != target_is_positive:
                to_flip.append(t)
        d = canonicalize(_apply_triangles(diagram, to_flip))
        terms[d] = terms.get(d, 0) + coeff
        if not terms[d]:
            del terms[d]
    return DiagramSum(terms, _canonical=True)


# -- samplers and verdicts ------------------------------------------------


@dataclass
class DiagramSampler:
    """Deterministic source of random diagrams for the checkers."""

    trials: int = 50
    seed: int = 0
    min_chords: int = 1
    max_chords: int = 6
    kind: str = LONG
    corpus: tuple = ()

    def diagrams(self):
        rng = random.Random(self.seed)
        for d in self.corpus:
            yield d
        for _ in range(self.trials):
            yield random_diagram(
                rng, rng.randint(self.min_chords, self.max_chords), self.kind
            )


def random_diagram(rng, n_chords, kind=LONG):
    toks = [(i + 1, "O") for i in range(n_chords)]
    toks += [(i + 1, "U") for i in range(n_chords)]
    rng.shuffle(toks)
    signs = {i + 1: rng.choice((1, -1)) for i in range(n_chords)}
    return GaussDiagram(kind, tuple((c, r, signs[c]) for c, r in toks))


@dataclass
class Verdict:
    passed: bool
    checked: int
    skipped: int = 0
    counterexample: tuple | None = None  # (diagram, sites, value)

    def __bool__(self):
        return self.passed

    def describe(self):
        if self.passed:
            return f"pass checked={self.checked} skipped={self.skipped}"
        d, sites, value = self.counterexample
        return (
            f"counterexample diagram=[{d.code()}] sites={sites} value={value}"
        )


_EXHAUSTIVE_CHORDS = 6


def check_gpv_order_at_most(v, n, sampler, max_subsets=40):
    """Randomized refutation of "GPV-order <= n": samples diagrams and
    (n+1)-subsets of their chords, exhaustively on small diagrams."""
    rng = random.Random(sampler.seed + 1)
    checked = skipped = 0
    for d in sampler.diagrams():
        ids = d.chord_ids()
        if len(ids) < n + 1:
            skipped += 1
            continue
        subsets = list(combinations(ids, n + 1))
        if d.n_chords > _EXHAUSTIVE_CHORDS and len(subsets) > max_subsets:
            subsets = rng.sample(subsets, max_subsets)
        for subset in subsets:
            value = gpv_alternating_sum(v, d, subset)
            checked += 1
            if value != 0:
                return Verdict(False, checked, skipped, (d, subset, value))
    return Verdict(True, checked, skipped)


def disjoint_triangle_subsets(diagram, size):
    """All size-subsets of pairwise disjoint forbidden-move sites."""
    sites = forbidden_sites(diagram)
    n = len(diagram.endpoints)
    closed = diagram.kind == CLOSED
    out = []
    for subset in combinations(sites, size):
        if triangles_disjoint(subset, n, closed):
            out.append(subset)
    return out


def check_f_order_at_most(v, n, sampler, max_subsets=40):
    """Randomized refutation of "F-order <= n" via disjoint triangle
    (n+1)-subsets."""
    rng = random.Random(sampler.seed + 2)
    checked = skipped = 0
    for d in sampler.diagrams():
        subsets = disjoint_triangle_subsets(d, n + 1)
        if not subsets:
            skipped += 1
            continue
        if d.n_chords > _EXHAUSTIVE_CHORDS and len(subsets) > max_subsets:
            subsets = rng.sample(subsets, max_subsets)
        for subset in subsets:
            value = f_alternating_sum(v, d, subset)
            checked += 1
            if value != 0:
                return Verdict(False, checked, skipped, (d, subset, value))
    return Verdict(True, checked, skipped)


# -- the forbidden-move / virtualization lemma ----------------------------


@dataclass
class F2GPVReport:
    site: Triangle
    confirmed_a1: bool
    confirmed_a2: bool
    confirmed_union: bool

    @property
    def all_confirmed(self):
        return self.confirmed_a1 and self.confirmed_a2 and self.confirmed_union


def verify_lemma_f2gpv(diagram, triangle, budget=None):
    """Check that one forbidden move becomes invisible after virtualizing
    either crossing at its site, or both.

    With D' the moved diagram and a, b the chords whose endpoints the
    site transposes, searches for Reidemeister equivalences between the
    virtualized variants of D and D' for each of {a}, {b}, {a, b}."""
    budget = budget or SearchBudget(max_depth=8)
    current = triangle_chords(diagram, triangle)
    moved = apply_forbidden(diagram, triangle)
    results = []
    a, b = current
    for drop_set in ((a,), (b,), (a, b)):
        left = diagram
        right = moved
        for cid in drop_set:
            left = virtualize(left, cid)
            right = virtualize(right, cid)
        trace = equivalent_search(left, right, budget)
        results.append(trace is not None)
    return F2GPVReport(triangle, *results)


def triangle_chords(diagram, triangle):
    """The two chord ids whose endpoints a triangle site transposes."""
    p = triangle.position
    n = len(diagram.endpoints)
    q = (p + 1) % n if diagram.kind == CLOSED else p + 1
    return diagram.endpoints[p][0], diagram.endpoints[q][0]


# -- n-similarity ---------------------------------------------------------

GPV = "GPV"
F = "F"


@dataclass(frozen=True)
class SimilarityWitness:
    """Base diagram with n pairwise disjoint nonempty site sets.

    For mode GPV the sites are chord ids; for mode F they are Triangles
    (pairwise disjoint as endpoint pairs across the whole family)."""

    base: GaussDiagram
    family: tuple  # of frozensets
    mode: str

    def __post_init__(self):
        if self.mode not in (GPV, F):
            raise ValueError(f"unknown similarity mode {self.mode!r}")
        if not self.family or any(not s for s in self.family):
            raise ValueError("family sets must be nonempty")
        if self.mode == GPV:
            seen = set()
            present = set(self.base.chord_ids())
            for group in self.family:
                for cid in group:
                    if cid in seen:
                        raise ValueError(f"chord {cid} in two family sets")
                    if cid not in present:
                        raise ValueError(f"chord {cid} not in base diagram")
                    seen.add(cid)
        else:
            all_sites = [t for group in self.family for t in group]
            if not triangles_disjoint(
                all_sites, len(self.base.endpoints), self.base.kind == CLOSED
            ):
                raise ValueError("triangles overlap across family sets")

    @property
    def n(self):
        return len(self.family)

    def image(self, selector):
        """Diagram after applying the operation at every site of the
        selected subfamily (an iterable of family indices)."""
        chosen = [self.family[i] for i in selector]
        if self.mode == GPV:
            drop = [cid for group in chosen for cid in group]
            return self.base.drop(drop)
        sites = [t for group in chosen for t in group]
        return _apply_triangles(self.base, sites)

    def subfamily_images(self):
        """All 2^n - 1 nonempty subfamily images, keyed by index tuple."""
        n = self.n
        out = []
        for mask in range(1, 1 << n):
            selector = tuple(i for i in range(n) if (mask >> i) & 1)
            out.append((selector, self.image(selector)))
        return out


def gpv3_commutator_witness():
    """GPV 3-similarity witness: the cut-open closure of the third
    iterated commutator braid, with the real crossings grouped by the
    commutator level they come from.  Virtualizing any nonempty
    subfamily collapses a commutator factor, so every image is an
    unknot diagram."""
    from .braids import braid_closure, commutator_braid, cut_open

    word = commutator_braid(3)
    real_index = {}
    for pos, letter in enumerate(word):
        if letter in "sS":
            real_index[pos] = len(real_index) + 1
    base = cut_open(braid_closure(word))
    # letter positions: outer bracket 0-1 / 10-11, inner b(2) copies at
    # 2-9 and (reversed) 12-19
    outer = frozenset(real_index[p] for p in (1, 10))
    inner_b = frozenset(real_index[p] for p in (3, 6, 15, 18))
    inner_a = frozenset(real_index[p] for p in (4, 9, 12, 17))
    return SimilarityWitness(base, (outer, inner_b, inner_a), GPV)


def f2_triangle_witness():
    """F 2-similarity witness on a two-chord long diagram: applying the
    forbidden move at either marked triangle, or at both, yields
    diagrams of one and the same knot (found by equivalence search and
    frozen)."""
    base = GaussDiagram(
        LONG,
        (
            (2, "U", -1),
            (1, "U", 1),
            (2, "O", -1),
            (1, "O", 1),
        ),
    )
    t1 = Triangle(0, "heads", 1)
    t2 = Triangle(2, "tails", 1)
    return SimilarityWitness(base, (frozenset({t1}), frozenset({t2})), F)


def build_similar_pair(witness):
    """(base, fully moved): the fully moved diagram applies the operation
    at every site of every family set."""
    return witness.base, witness.image(range(witness.n))


def verify_similarity_consequence(witness, v, m):
    """Check the similarity lemma instance: an invariant of order m < n
    takes the same value on the base and on every nonempty-subfamily
    image."""
    if m >= witness.n:
        raise ValueError(f"need m < n = {witness.n}, got m = {m}")
    reference = v(witness.base)
    checked = 0
    for selector, image in witness.subfamily_images():
        value = v(image)
        checked += 1
        if value != reference:
            return Verdict(
                False, checked, 0, (image, selector, (reference, value))
            )
    return Verdict(True, checked)
