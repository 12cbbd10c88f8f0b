"""Gauss diagrams of (long) virtual knots and the subdiagram pairing.

A Gauss diagram is a circle (or a based line, for long knots) carrying the
preimages of the real crossings of a virtual knot diagram as signed,
directed chords.  The text format is whitespace-separated tokens
``O<k><sign>`` / ``U<k><sign>``; a leading ``@`` selects a long (based)
diagram.  ``O`` marks the over pass of a crossing (the arrow tail), ``U``
the under pass (the arrow head).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

CLOSED = "closed"
LONG = "long"

TAIL = "O"  # over pass, arrow tail
HEAD = "U"  # under pass, arrow head

DEFAULT_CAP = 20


class GaussCodeError(ValueError):
    """Malformed Gauss code text or invalid diagram data."""


class CapExceededError(RuntimeError):
    """An exponential enumeration was asked to exceed its chord cap."""


@dataclass(frozen=True)
class Chord:
    """One real crossing: a signed chord directed toward the under pass."""

    id: int
    sign: int
    tail_pos: int
    head_pos: int


@dataclass(frozen=True)
class GaussDiagram:
    """Immutable Gauss diagram.

    ``endpoints`` is the ordered sequence of chord passes as
    ``(chord id, role, sign)`` triples, with role ``"O"`` (tail) or
    ``"U"`` (head).  For a long diagram the order is absolute with the
    base point before index 0; for a closed diagram it is defined up to
    rotation.
    """

    kind: str
    endpoints: tuple

    def __post_init__(self):
        if self.kind not in (CLOSED, LONG):
            raise GaussCodeError(f"unknown diagram kind {self.kind!r}")
        seen = {}
        for cid, role, sign in self.endpoints:
            if role not in (TAIL, HEAD):
                raise GaussCodeError(f"bad role {role!r} for chord {cid}")
            if sign not in (1, -1):
                raise GaussCodeError(f"bad sign {sign!r} for chord {cid}")
            seen.setdefault(cid, []).append((role, sign))
        for cid, passes in seen.items():
            if len(passes) != 2:
                raise GaussCodeError(
                    f"chord {cid} appears {len(passes)} times, expected 2"
                )
            (r1, s1), (r2, s2) = passes
            if {r1, r2} != {TAIL, HEAD}:
                raise GaussCodeError(f"chord {cid} has two {r1} passes")
            if s1 != s2:
                raise GaussCodeError(f"chord {cid} has mismatched signs")

    # -- basic queries ---------------------------------------------------

    @property
    def n_chords(self):
        return len(self.endpoints) // 2

    def __len__(self):
        return len(self.endpoints)

    def chord_ids(self):
        return sorted({cid for cid, _, _ in self.endpoints})

    def sign(self, cid):
        for c, _, s in self.endpoints:
            if c == cid:
                return s
        raise KeyError(cid)

    def chords(self):
        """All chords with their current endpoint positions."""
        pos = {}
        for i, (cid, role, _) in enumerate(self.endpoints):
            pos.setdefault(cid, {})[role] = i
        return [
            Chord(cid, self.sign(cid), pos[cid][TAIL], pos[cid][HEAD])
            for cid in self.chord_ids()
        ]

    def position_of(self, cid, role):
        for i, (c, r, _) in enumerate(self.endpoints):
            if c == cid and r == role:
                return i
        raise KeyError((cid, role))

    def code(self):
        toks = [f"{r}{cid}{'+' if s > 0 else '-'}" for cid, r, s in self.endpoints]
        if self.kind == LONG:
            return " ".join(["@"] + toks)
        return " ".join(toks) if toks else ""

    def __str__(self):
        return self.code() or "(empty closed)"

    # -- structural edits (all return new diagrams) ----------------------

    def with_endpoints(self, endpoints):
        return GaussDiagram(self.kind, tuple(endpoints))

    def restrict(self, keep_ids):
        """Subdiagram induced by a set of chord ids, order preserved."""
        keep = set(keep_ids)
        return self.with_endpoints(
            e for e in self.endpoints if e[0] in keep
        )

    def drop(self, drop_ids):
        dropped = set(drop_ids)
        unknown = dropped - set(self.chord_ids())
        if unknown:
            raise KeyError(f"unknown chord ids {sorted(unknown)}")
        return self.with_endpoints(
            e for e in self.endpoints if e[0] not in dropped
        )


_TOKEN = re.compile(r"^([OU])([0-9]+)([+-])$")


def parse_gauss_code(text):
    """Parse the Gauss code text format into a diagram.

    Raises GaussCodeError on malformed tokens or inconsistent chords.
    """
    tokens = text.split()
    kind = CLOSED
    if tokens and tokens[0] == "@":
        kind = LONG
        tokens = tokens[1:]
    endpoints = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise GaussCodeError(f"bad token {tok!r}")
        role, cid, sign = m.group(1), int(m.group(2)), m.group(3)
        if cid <= 0:
            raise GaussCodeError(f"chord id must be positive in {tok!r}")
        endpoints.append((cid, role, 1 if sign == "+" else -1))
    return GaussDiagram(kind, tuple(endpoints))


def empty_diagram(kind=LONG):
    return GaussDiagram(kind, ())


# -- canonical forms ------------------------------------------------------


def _relabel(endpoints):
    """Relabel chord ids 1.. in order of first appearance."""
    mapping = {}
    out = []
    for cid, role, sign in endpoints:
        if cid not in mapping:
            mapping[cid] = len(mapping) + 1
        out.append((mapping[cid], role, sign))
    return tuple(out), mapping


def _rotation_key(endpoints):
    # role order O < U matches lexicographic string order already
    return tuple(endpoints)


def canonicalize_with_map(diagram):
    """Canonical form plus the (rotation, relabel) transform used.

    Returns ``(canonical, offset, id_map)`` where position ``p`` of the
    input maps to ``(p - offset) % len`` of the canonical diagram and
    ``id_map`` maps old chord ids to new ones.
    """
    eps = diagram.endpoints
    if diagram.kind == LONG or not eps:
        out, mapping = _relabel(eps)
        return GaussDiagram(diagram.kind, out), 0, mapping
    n = len(eps)
    best = None
    for r in range(n):
        rotated = eps[r:] + eps[:r]
        relab, mapping = _relabel(rotated)
        key = _rotation_key(relab)
        if best is None or key < best[0]:
            best = (key, r, relab, mapping)
    _, offset, relab, mapping = best
    return GaussDiagram(CLOSED, relab), offset, mapping


def canonicalize(diagram):
    """Canonical representative: relabeled, and for closed diagrams the
    lexicographically minimal rotation.  Idempotent."""
    return canonicalize_with_map(diagram)[0]


# -- subdiagrams, J and the pairing ---------------------------------------


def sub_diagrams(diagram, cap=DEFAULT_CAP):
    """All 2^n subdiagrams of ``diagram`` in induced endpoint order."""
    ids = diagram.chord_ids()
    if len(ids) > cap:
        raise CapExceededError(
            f"{len(ids)} chords exceeds enumeration cap {cap}"
        )
    out = []
    for k in range(len(ids) + 1):
        for subset in combinations(ids, k):
            out.append(diagram.restrict(subset))
    return out


class DiagramSum:
    """Finitely supported integer combination of canonical Gauss diagrams."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, *, _canonical=False):
        clean = {}
        if terms:
            for d, c in terms.items():
                if not c:
                    continue
                key = d if _canonical else canonicalize(d)
                clean[key] = clean.get(key, 0) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @classmethod
    def single(cls, diagram, coeff=1):
        return cls({diagram: coeff})

    @classmethod
    def zero(cls):
        return cls()

    def __eq__(self, other):
        if not isinstance(other, DiagramSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return DiagramSum(out, _canonical=True)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return DiagramSum(
            {d: k * c for d, c in self.terms.items()}, _canonical=True
        )

    def items(self):
        return self.terms.items()

    def mass(self):
        """Sum of coefficients."""
        return sum(self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = [f"{c}*[{d}]" for d, c in self.terms.items()]
        return "DiagramSum(" + " + ".join(parts) + ")" if parts else "DiagramSum(0)"


def j_map(diagram, cap=DEFAULT_CAP):
    """J(D): the sum of all subdiagrams of D, in canonical form."""
    terms = {}
    for sub in sub_diagrams(diagram, cap=cap):
        key = canonicalize(sub)
        terms[key] = terms.get(key, 0) + 1
    return DiagramSum(terms, _canonical=True)


def pair(a, b):
    """Bilinear Kronecker pairing of two diagram sums."""
    small, large = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    total = 0
    for d, c in small.terms.items():
        other = large.terms.get(d)
        if other:
            total += c * other
    return total


def gauss_formula(a, diagram, cap=DEFAULT_CAP):
    """The Gauss diagram formula pairing: (A, J(D))."""
    return pair(a, j_map(diagram, cap=cap))
