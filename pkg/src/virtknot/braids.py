"""Two-strand virtual braid words and their closures.

Words are plain strings over the alphabet {s, S, v}: positive real
crossing, negative real crossing, virtual crossing.  The main
construction is the iterated-commutator family b(k), whose closures
supply similarity witnesses, and a small pipeline for decorating family
members with full twists and connected sums.
"""

from __future__ import annotations

from .diagram import CLOSED, GaussCodeError, GaussDiagram, HEAD, LONG, TAIL

ALPHABET = frozenset("sSv")

WORD_CAP = 512

BLOCKS = {
    "A": "sv",
    "Ainv": "vS",
    "B": "vs",
    "Binv": "Sv",
}


class BraidWordError(ValueError):
    pass


def validate_word(word):
    bad = set(word) - ALPHABET
    if bad:
        raise BraidWordError(f"bad braid letters {sorted(bad)}")
    return word


def word_inverse(word):
    """Reverse the word and invert each letter (v is its own inverse)."""
    validate_word(word)
    flip = {"s": "S", "S": "s", "v": "v"}
    return "".join(flip[c] for c in reversed(word))


def word_permutation(word):
    """Permutation of the two strand ends: 0 = identity, 1 = swap."""
    validate_word(word)
    return len(word) % 2


def commutator(x, y):
    return x + y + word_inverse(x) + word_inverse(y)


def commutator_braid(k, cap=WORD_CAP):
    """The iterated commutator b(k).

    b(1) is the block A = sv; b(k) is the commutator of b(k-1) with a
    single block, B for k = 2, 3 mod 4 and A otherwise.  Every b(k) has
    even length, so its closure uses the virtual return arc."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    expected = 6 * 2 ** (k - 1) - 4
    if expected > cap:
        raise BraidWordError(
            f"b({k}) has {expected} letters, over the cap of {cap}"
        )
    word = BLOCKS["A"]
    for j in range(2, k + 1):
        block = BLOCKS["B"] if j % 4 in (2, 3) else BLOCKS["A"]
        word = commutator(block, word)
    return word


def full_twists(word, count):
    """Append ``count`` full twists (two positive crossings each)."""
    validate_word(word)
    if count < 0:
        raise ValueError("twist count must be >= 0")
    out = word + "ss" * count
    if len(out) > WORD_CAP:
        raise BraidWordError(f"{len(out)} letters, over the cap of {WORD_CAP}")
    return out


def braid_closure(word, cap=WORD_CAP):
    """Closed Gauss diagram of the closure of a 2-strand braid word.

    Real crossings become chords (sign + for s, - for S); virtual
    crossings vanish from the Gauss code.  Odd-length words use the
    plain closure; nonempty even-length words (identity permutation)
    are closed with one virtual crossing on the return arc so the result
    is still one circle.  The empty word closes to a 2-component unlink
    and raises."""
    validate_word(word)
    if len(word) > cap:
        raise BraidWordError(f"{len(word)} letters, over the cap of {cap}")
    if not word:
        raise BraidWordError("empty word: closure has 2 components, not a knot")
    # walk both strands bottom to top; at each real crossing record which
    # strand position carries the over pass
    events = [[], []]  # per current strand slot: list of (cid, role, sign)
    next_id = 1
    for letter in word:
        if letter == "v":
            events[0], events[1] = events[1], events[0]
            continue
        sign = 1 if letter == "s" else -1
        # positive generator: the strand entering at slot 0 passes over
        over, under = (0, 1) if letter == "s" else (1, 0)
        events[over].append((next_id, TAIL, sign))
        events[under].append((next_id, HEAD, sign))
        events[0], events[1] = events[1], events[0]
        next_id += 1
    # stored rotation = traversal from just after the first strand's
    # closure arc (the cut point used by cut_open).  With the swap
    # permutation the strand entering at slot 0 ends at top slot 1
    # (plain closure); with the identity it ends at top slot 0 and the
    # return arcs cross virtually to splice the two circles into one.
    if len(word) % 2 == 1:
        circle = events[0] + events[1]
    else:
        circle = events[1] + events[0]
    return GaussDiagram(CLOSED, tuple(circle))


def cut_open(diagram):
    """Long diagram obtained by cutting a closed one at its traversal
    start."""
    if diagram.kind != CLOSED:
        raise GaussCodeError("can only cut open a closed diagram")
    return GaussDiagram(LONG, diagram.endpoints)


def connected_sum(left, right):
    """Concatenation of two long diagrams, right relabeled to keep chord
    ids disjoint."""
    if left.kind != LONG or right.kind != LONG:
        raise GaussCodeError("connected sum needs long diagrams")
    shift = max(left.chord_ids(), default=0)
    shifted = tuple((cid + shift, role, sign) for cid, role, sign in right.endpoints)
    return GaussDiagram(LONG, left.endpoints + shifted)


def family_member(base_word, n, twists=0):
    """Closure of b(n) with optional full twists, connect-summed with a
    base long diagram, returned as a closed diagram.

    With an empty base this is just the (twisted) commutator closure."""
    word = full_twists(commutator_braid(n), twists)
    member = cut_open(braid_closure(word))
    if base_word is not None and base_word.n_chords:
        member = connected_sum(base_word, member)
    return GaussDiagram(CLOSED, member.endpoints)
