"""Moves on Gauss diagrams: Reidemeister, virtualization, forbidden moves.

Purely virtual moves are identities on Gauss diagrams and never appear
here.  The R3 case table is generated from a local planar model of the
triangle (three oriented strands with a total height order, the slide
translating one strand across the opposite crossing); a candidate triple
of sites is an R3 site iff its role/sign/order pattern matches one of the
generated cases.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, permutations, product

from .diagram import (
    CLOSED,
    HEAD,
    LONG,
    TAIL,
    GaussDiagram,
    canonicalize,
    canonicalize_with_map,
)

R1_DELETE = "R1_delete"
R1_INSERT = "R1_insert"
R2_DELETE = "R2_delete"
R2_INSERT = "R2_insert"
R3 = "R3"
VIRTUALIZE = "VIRTUALIZE"
FORBIDDEN_OF = "FORBIDDEN_OF"
FORBIDDEN_LF = "FORBIDDEN_LF"


class StaleSiteError(ValueError):
    """A move site no longer matches the diagram it is applied to."""


@dataclass(frozen=True)
class MoveSite:
    """One applicable move.  ``params`` depend on ``kind``:

    R1_delete: (pos,)               left endpoint of the adjacent pair
    R1_insert: (gap, sign, order)   order is "OU" or "UO"
    R2_delete: (tail_pos, head_pos) left endpoints of the two pairs
    R2_insert: (gap1, gap2, sign, order1, order2)
    R3:        (p1, p2, p3)         left endpoints of the three pairs
    VIRTUALIZE: (chord_id,)
    FORBIDDEN_OF / FORBIDDEN_LF: (pos,)
    """

    kind: str
    params: tuple

    def describe(self):
        return f"{self.kind} {','.join(str(p) for p in self.params)}"


@dataclass(frozen=True)
class Triangle:
    """A forbidden-move site: two cyclically adjacent same-role endpoints
    of distinct chords, with the orientation sign of the configuration."""

    position: int
    role: str  # "tails" (OF) or "heads" (LF)
    sign: int

    def as_move_site(self):
        kind = FORBIDDEN_OF if self.role == "tails" else FORBIDDEN_LF
        return MoveSite(kind, (self.position,))


# -- adjacency helpers ----------------------------------------------------


def adjacent_pairs(diagram):
    """Adjacent endpoint position pairs (p, q).  Cyclic for closed
    diagrams; never across the base point for long ones."""
    n = len(diagram.endpoints)
    if n < 2:
        return []
    pairs = [(p, p + 1) for p in range(n - 1)]
    if diagram.kind == CLOSED:
        pairs.append((n - 1, 0))
    return pairs


def _transpose(diagram, p, q):
    eps = list(diagram.endpoints)
    eps[p], eps[q] = eps[q], eps[p]
    return diagram.with_endpoints(eps)


def _gaps(diagram):
    n = len(diagram.endpoints)
    if diagram.kind == CLOSED:
        return list(range(max(n, 1)))
    return list(range(n + 1))


def _next_chord_id(diagram):
    ids = diagram.chord_ids()
    return (max(ids) + 1) if ids else 1


# -- R3 case table --------------------------------------------------------


def _generate_r3_table():
    """Patterns of valid R3 triples, derived from the planar model.

    Strand geometry: L1 along (1,0), L2 along (0,1), L3 along (-1,1);
    crossings 12, 13, 23.  For every strand height order and every choice
    of strand directions, the pre- and post-move patterns are recorded.
    A pattern lists, per strand, its two crossing passes in traversal
    order as (other strand, role), plus the three crossing signs.
    """
    dirs = {1: (1, 0), 2: (0, 1), 3: (-1, 1)}
    pre_orders = {1: (2, 3), 2: (1, 3), 3: (1, 2)}  # other-strand labels
    pairs = [(1, 2), (1, 3), (2, 3)]

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    table = set()
    for heights in permutations((1, 2, 3)):
        h = {i + 1: heights[i] for i in range(3)}
        for flips in product((1, -1), repeat=3):
            o = {i + 1: flips[i] for i in range(3)}
            signs = {}
            for i, j in pairs:
                over, under = (i, j) if h[i] > h[j] else (j, i)
                du = (o[over] * dirs[over][0], o[over] * dirs[over][1])
                dv = (o[under] * dirs[under][0], o[under] * dirs[under][1])
                signs[(i, j)] = 1 if cross(du, dv) > 0 else -1
            strand_patterns = []
            for i in (1, 2, 3):
                others = pre_orders[i]
                if o[i] < 0:
                    others = others[::-1]
                pat = tuple(
                    (j, TAIL if h[i] > h[j] else HEAD) for j in others
                )
                strand_patterns.append(pat)
            sig = (signs[(1, 2)], signs[(1, 3)], signs[(2, 3)])
            pre = (tuple(strand_patterns), sig)
            post = (
                tuple(pat[::-1] for pat in strand_patterns),
                sig,
            )
            table.add(pre)
            table.add(post)
    return frozenset(table)


_R3_TABLE = _generate_r3_table()


def _r3_matches(diagram, sites):
    """Check whether three disjoint adjacent pairs form an R3 triple."""
    eps = diagram.endpoints
    chords = []
    for p, q in sites:
        a, b = eps[p], eps[q]
        if a[0] == b[0]:
            return False
        chords.append((a, b))
    ids = {e[0] for pair_ in chords for e in pair_}
    if len(ids) != 3:
        return False
    # assign sites to model strands 1..3 in every way
    for perm in permutations(range(3)):
        # strand i+1 is sites[perm[i]]
        site_of_strand = {i + 1: chords[perm[i]] for i in range(3)}
        # chord shared by strands i and j must exist and be unique
        chord_of = {}
        ok = True
        for i, j in ((1, 2), (1, 3), (2, 3)):
            ids_i = {e[0] for e in site_of_strand[i]}
            ids_j = {e[0] for e in site_of_strand[j]}
            common = ids_i & ids_j
            if len(common) != 1:
                ok = False
                break
            chord_of[(i, j)] = next(iter(common))
        if not ok or len(set(chord_of.values())) != 3:
            continue
        other_strand = {}
        for (i, j), cid in chord_of.items():
            other_strand[(i, cid)] = j
            other_strand[(j, cid)] = i
        strand_patterns = []
        for i in (1, 2, 3):
            pat = tuple(
                (other_strand[(i, e[0])], e[1]) for e in site_of_strand[i]
            )
            strand_patterns.append(pat)
        sig = tuple(
            diagram.sign(chord_of[pr]) for pr in ((1, 2), (1, 3), (2, 3))
        )
        if (tuple(strand_patterns), sig) in _R3_TABLE:
            return True
    return False


# -- enumeration ----------------------------------------------------------


def enumerate_reidemeister(diagram, include_inserts=True, max_chords=None):
    """All applicable Reidemeister sites on ``diagram``.

    R1/R2 insertions are included unless ``include_inserts`` is false or
    the insertion would push the chord count past ``max_chords``.
    """
    sites = []
    eps = diagram.endpoints
    pairs = adjacent_pairs(diagram)

    for p, q in pairs:
        if eps[p][0] == eps[q][0]:
            sites.append(MoveSite(R1_DELETE, (p,)))

    # adjacent same-role pairs of distinct chords, keyed by chord pair
    tail_sites = {}
    head_sites = {}
    for p, q in pairs:
        (ca, ra, _), (cb, rb, _) = eps[p], eps[q]
        if ca == cb:
            continue
        key = frozenset((ca, cb))
        if ra == rb == TAIL:
            tail_sites.setdefault(key, []).append(p)
        elif ra == rb == HEAD:
            head_sites.setdefault(key, []).append(p)
    for key, tps in tail_sites.items():
        a, b = tuple(key)
        if diagram.sign(a) == -diagram.sign(b):
            for tp in tps:
                for hp in head_sites.get(key, []):
                    sites.append(MoveSite(R2_DELETE, (tp, hp)))

    distinct_pairs = [
        (p, q) for p, q in pairs if eps[p][0] != eps[q][0]
    ]
    for triple in combinations(distinct_pairs, 3):
        used = [pos for pr in triple for pos in pr]
        if len(set(used)) != 6:
            continue
        if _r3_matches(diagram, triple):
            sites.append(MoveSite(R3, tuple(pr[0] for pr in triple)))

    if include_inserts:
        n = diagram.n_chords
        gaps = _gaps(diagram)
        if max_chords is None or n + 1 <= max_chords:
            for g in gaps:
                for sign in (1, -1):
                    for order in ("OU", "UO"):
                        sites.append(MoveSite(R1_INSERT, (g, sign, order)))
        if max_chords is None or n + 2 <= max_chords:
            for g1 in gaps:
                for g2 in gaps:
                    if g2 < g1:
                        continue
                    for sign in (1, -1):
                        for o1 in ("ab", "ba"):
                            for o2 in ("ab", "ba"):
                                for roles in ("TH", "HT"):
                                    sites.append(
                                        MoveSite(
                                            R2_INSERT,
                                            (g1, g2, sign, o1, o2, roles),
                                        )
                                    )
    return sites


def forbidden_sites(diagram):
    """All forbidden-move sites: adjacent same-role endpoint pairs of
    distinct chords, each carrying its configuration sign."""
    eps = diagram.endpoints
    n = len(eps)
    out = []
    for p, q in adjacent_pairs(diagram):
        (ca, ra, _), (cb, rb, _) = eps[p], eps[q]
        if ca == cb or ra != rb:
            continue
        pa = diagram.position_of(ca, HEAD if ra == TAIL else TAIL)
        pb = diagram.position_of(cb, HEAD if rb == TAIL else TAIL)
        if diagram.kind == LONG:
            sign = 1 if pa < pb else -1
        else:
            # measure partner positions cyclically from just after the site
            base = (q + 1) % n
            da = (pa - base) % n
            db = (pb - base) % n
            sign = 1 if da < db else -1
        out.append(Triangle(p, "tails" if ra == TAIL else "heads", sign))
    return out


def triangle_at(diagram, position):
    """The Triangle at a given left position, or None."""
    for t in forbidden_sites(diagram):
        if t.position == position:
            return t
    return None


# -- application ----------------------------------------------------------


def _pair_at(diagram, p):
    n = len(diagram.endpoints)
    if p < 0 or p >= n:
        raise StaleSiteError(f"position {p} out of range")
    q = p + 1
    if q == n:
        if diagram.kind != CLOSED:
            raise StaleSiteError("pair wraps on a long diagram")
        q = 0
    return p, q


def _insert_pair(eps, gap, items):
    return eps[:gap] + list(items) + eps[gap:]


def apply_move(diagram, site):
    """Apply a MoveSite (Reidemeister, virtualization or forbidden)."""
    eps = list(diagram.endpoints)
    kind, params = site.kind, site.params

    if kind == R1_DELETE:
        p, q = _pair_at(diagram, params[0])
        if eps[p][0] != eps[q][0]:
            raise StaleSiteError("R1_delete endpoints belong to two chords")
        return diagram.with_endpoints(
            e for i, e in enumerate(eps) if i not in (p, q)
        )

    if kind == R1_INSERT:
        gap, sign, order = params
        cid = _next_chord_id(diagram)
        items = [(cid, order[0], sign), (cid, order[1], sign)]
        return diagram.with_endpoints(_insert_pair(eps, gap, items))

    if kind == R2_DELETE:
        tp, tq = _pair_at(diagram, params[0])
        hp, hq = _pair_at(diagram, params[1])
        positions = {tp, tq, hp, hq}
        if len(positions) != 4:
            raise StaleSiteError("R2_delete pairs overlap")
        ids = {eps[tp][0], eps[tq][0]}
        if ids != {eps[hp][0], eps[hq][0]} or len(ids) != 2:
            raise StaleSiteError("R2_delete pairs do not match two chords")
        roles = {eps[tp][1], eps[tq][1], eps[hp][1], eps[hq][1]}
        a, b = tuple(ids)
        if diagram.sign(a) != -diagram.sign(b):
            raise StaleSiteError("R2_delete needs opposite signs")
        if {eps[tp][1], eps[tq][1]} != {TAIL} or {eps[hp][1], eps[hq][1]} != {HEAD}:
            raise StaleSiteError("R2_delete pairs must be tails and heads")
        return diagram.with_endpoints(
            e for i, e in enumerate(eps) if i not in positions
        )

    if kind == R2_INSERT:
        if len(params) == 5:  # older traces: tails at the lower gap
            g1, g2, sign, o1, o2 = params
            roles = "TH"
        else:
            g1, g2, sign, o1, o2, roles = params
        cid_a = _next_chord_id(diagram)
        cid_b = cid_a + 1
        tails = [(cid_a, TAIL, sign), (cid_b, TAIL, -sign)]
        heads = [(cid_a, HEAD, sign), (cid_b, HEAD, -sign)]
        if o1 == "ba":
            tails.reverse()
        if o2 == "ba":
            heads.reverse()
        lo_items, hi_items = (tails, heads) if roles == "TH" else (heads, tails)
        # insert at the higher gap first so the lower index stays valid
        if g1 == g2:
            out = _insert_pair(eps, g1, lo_items + hi_items)
        else:
            out = _insert_pair(eps, g2, hi_items)
            out = _insert_pair(out, g1, lo_items)
        return diagram.with_endpoints(out)

    if kind == R3:
        pairs = [_pair_at(diagram, p) for p in params]
        used = [x for pr in pairs for x in pr]
        if len(set(used)) != 6:
            raise StaleSiteError("R3 pairs overlap")
        if not _r3_matches(diagram, pairs):
            raise StaleSiteError("not a valid R3 configuration")
        out = diagram
        for p, q in pairs:
            out = _transpose(out, p, q)
        return out

    if kind == VIRTUALIZE:
        return diagram.drop([params[0]])

    if kind in (FORBIDDEN_OF, FORBIDDEN_LF):
        p, q = _pair_at(diagram, params[0])
        (ca, ra, _), (cb, rb, _) = eps[p], eps[q]
        want = TAIL if kind == FORBIDDEN_OF else HEAD
        if ca == cb or ra != want or rb != want:
            raise StaleSiteError(f"{kind} site does not match diagram")
        return _transpose(diagram, p, q)

    raise StaleSiteError(f"unknown move kind {kind!r}")


def virtualize(diagram, chord_id):
    """Replace the real crossing of one chord by a virtual one: delete it."""
    return diagram.drop([chord_id])


def apply_forbidden(diagram, triangle):
    """Apply the forbidden move at a Triangle site."""
    current = triangle_at(diagram, triangle.position)
    if current is None or current.role != triangle.role:
        raise StaleSiteError("stale forbidden-move site")
    return apply_move(diagram, triangle.as_move_site())


# -- traces and search ----------------------------------------------------


@dataclass(frozen=True)
class MoveTrace:
    """A replayable move sequence.  Every recorded diagram is canonical;
    each site applies to the previous recorded diagram, and the recorded
    result is ``canonicalize(apply_move(prev, site))``."""

    start: GaussDiagram
    steps: tuple  # of (MoveSite, GaussDiagram)

    @property
    def end(self):
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def verify(self):
        cur = self.start
        for site, result in self.steps:
            cur = canonicalize(apply_move(cur, site))
            if cur != result:
                return False
        return True

    def serialize(self):
        lines = [f"start -> {self.start.code()}"]
        for site, result in self.steps:
            lines.append(f"{site.describe()} -> {result.code()}")
        return "\n".join(lines)


def _parse_params(kind, text):
    if not text:
        return ()
    parts = text.split(",")
    out = []
    for part in parts:
        try:
            out.append(int(part))
        except ValueError:
            out.append(part)
    return tuple(out)


def parse_trace(text):
    """Parse the line format produced by MoveTrace.serialize."""
    from .diagram import parse_gauss_code

    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0]
    if not head.startswith("start ->"):
        raise ValueError("trace must begin with a 'start ->' line")
    start = parse_gauss_code(head.split("->", 1)[1].strip())
    steps = []
    for ln in lines[1:]:
        left, code = ln.split("->", 1)
        bits = left.strip().split()
        kind = bits[0]
        params = _parse_params(kind, bits[1] if len(bits) > 1 else "")
        steps.append((MoveSite(kind, params), parse_gauss_code(code.strip())))
    return MoveTrace(start, tuple(steps))


_INVERSE_KIND = {
    R1_DELETE: R1_INSERT,
    R1_INSERT: R1_DELETE,
    R2_DELETE: R2_INSERT,
    R2_INSERT: R2_DELETE,
    R3: R3,
    FORBIDDEN_OF: FORBIDDEN_OF,
    FORBIDDEN_LF: FORBIDDEN_LF,
}


def _candidate_sites(diagram, kind, max_chords=None):
    if kind in (FORBIDDEN_OF, FORBIDDEN_LF):
        want = "tails" if kind == FORBIDDEN_OF else "heads"
        return [
            t.as_move_site() for t in forbidden_sites(diagram) if t.role == want
        ]
    all_sites = enumerate_reidemeister(
        diagram, include_inserts=True, max_chords=max_chords
    )
    return [s for s in all_sites if s.kind == kind]


def invert_step(prev, site, result):
    """A site on ``result`` whose (canonicalized) application gives back
    ``prev``.  ``prev`` and ``result`` are canonical diagrams."""
    want = canonicalize(prev)
    kind = _INVERSE_KIND[site.kind]
    for cand in _candidate_sites(result, kind, max_chords=prev.n_chords):
        try:
            if canonicalize(apply_move(result, cand)) == want:
                return cand
        except StaleSiteError:
            continue
    raise StaleSiteError("could not invert step")


def reverse_trace(trace):
    """The reversed trace (end to start) built from inverse steps."""
    diagrams = [trace.start] + [d for _, d in trace.steps]
    steps = []
    cur = trace.end
    for i in range(len(trace.steps) - 1, -1, -1):
        prev = diagrams[i]
        site = invert_step(prev, trace.steps[i][0], cur)
        cur = canonicalize(apply_move(cur, site))
        steps.append((site, cur))
    return MoveTrace(trace.end, tuple(steps))


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 6
    max_chords: int | None = None
    max_states: int = 20000


def _expand(diagram, max_chords, with_forbidden=False):
    sites = enumerate_reidemeister(
        diagram, include_inserts=True, max_chords=max_chords
    )
    if with_forbidden:
        sites.extend(t.as_move_site() for t in forbidden_sites(diagram))
    for site in sites:
        try:
            child = canonicalize(apply_move(diagram, site))
        except StaleSiteError:  # pragma: no cover - defensive
            continue
        yield site, child


def _trace_from_parents(parents, start_key, end_key):
    chain = []
    key = end_key
    while key != start_key:
        pkey, site, diag = parents[key]
        chain.append((site, diag))
        key = pkey
    chain.reverse()
    return chain


def equivalent_search(d1, d2, budget=None):
    """Bidirectional BFS for a Reidemeister path between two diagrams.

    Returns a replayable MoveTrace from d1 to (a diagram canonically
    equal to) d2, or None if nothing was found within budget.  Absence
    means "not found", not inequivalence.
    """
    budget = budget or SearchBudget()
    c1, c2 = canonicalize(d1), canonicalize(d2)
    if c1.kind != c2.kind:
        raise ValueError("cannot search between closed and long diagrams")
    max_chords = budget.max_chords
    if max_chords is None:
        max_chords = max(c1.n_chords, c2.n_chords) + 2

    if c1 == c2:
        return MoveTrace(c1, ())

    # parents: key -> (parent_key, site, diagram)
    fwd = {c1: None}
    bwd = {c2: None}
    frontier_f = [c1]
    frontier_b = [c2]
    states = 2
    depth_f = depth_b = 0

    def build(meet):
        forward = _trace_from_parents(fwd, c1, meet) if meet != c1 else []
        backward_chain = _trace_from_parents(bwd, c2, meet) if meet != c2 else []
        back_trace = MoveTrace(c2, tuple(backward_chain))
        reversed_back = reverse_trace(back_trace)
        return MoveTrace(c1, tuple(forward) + reversed_back.steps)

    while frontier_f or frontier_b:
        if depth_f + depth_b >= budget.max_depth:
            return None
        expand_fwd = bool(frontier_f) and (
            not frontier_b or len(frontier_f) <= len(frontier_b)
        )
        here, there = (fwd, bwd) if expand_fwd else (bwd, fwd)
        frontier = frontier_f if expand_fwd else frontier_b
        new_frontier = []
        for node in frontier:
            for site, child in _expand(node, max_chords):
                if child in here:
                    continue
                here[child] = (node, site, child)
                new_frontier.append(child)
                states += 1
                if child in there:
                    return build(child)
                if states >= budget.max_states:
                    return None
        if expand_fwd:
            frontier_f = new_frontier
            depth_f += 1
        else:
            frontier_b = new_frontier
            depth_b += 1
    return None


def unknot_by_forbidden(diagram, budget=None):
    """Search toward the empty diagram with Reidemeister plus forbidden
    moves: best-first on (chord count, depth) with BFS-like expansion."""
    budget = budget or SearchBudget(max_depth=30, max_states=60000)
    start = canonicalize(diagram)
    target = canonicalize(GaussDiagram(diagram.kind, ()))
    if start == target:
        return MoveTrace(start, ())
    max_chords = budget.max_chords
    if max_chords is None:
        max_chords = start.n_chords + 2

    parents = {start: None}
    heap = [(start.n_chords, 0, 0, start)]
    tie = 1
    states = 1
    while heap:
        _, depth, _, node = heapq.heappop(heap)
        if depth >= budget.max_depth:
            continue
        for site, child in _expand(node, max_chords, with_forbidden=True):
            if child in parents:
                continue
            parents[child] = (node, site, child)
            if child == target:
                return MoveTrace(
                    start, tuple(_trace_from_parents(parents, start, child))
                )
            states += 1
            if states >= budget.max_states:
                return None
            heapq.heappush(heap, (child.n_chords, depth + 1, tie, child))
            tie += 1
    return None
