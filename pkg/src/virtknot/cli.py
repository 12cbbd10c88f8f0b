"""Command-line front end.

Subcommands: eval (invariants on a code or braid word), check (property
suites), family (commutator-family sweeps), equiv and unknot (move
searches).  Exit codes: 0 pass/found, 1 checked-and-negative, 2
usage/parse error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from .diagram import (
    CapExceededError,
    DiagramSum,
    GaussCodeError,
    GaussDiagram,
    LONG,
    canonicalize,
    empty_diagram,
    parse_gauss_code,
)
from .polys import LaurentPoly

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class _CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _load_code(args):
    if getattr(args, "file", None):
        with open(args.file) as fh:
            text = fh.read().strip()
    else:
        text = args.code
    if text is None:
        raise _CliError("no input code given", EXIT_USAGE)
    return text


def _parse(text):
    try:
        return parse_gauss_code(text)
    except GaussCodeError as exc:
        raise _CliError(f"bad gauss code: {exc}", EXIT_USAGE)


def _diagram_from_args(args):
    if getattr(args, "braid", None) is not None:
        from .braids import BraidWordError, braid_closure

        try:
            return braid_closure(args.braid)
        except BraidWordError as exc:
            raise _CliError(f"bad braid word: {exc}", EXIT_USAGE)
    return _parse(_load_code(args))


def _read_formula(path):
    """Formula file: one `<coeff> <gauss code>` per line."""
    terms = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            coeff_text, code = line.split(None, 1)
            try:
                coeff = int(coeff_text)
            except ValueError:
                raise _CliError(
                    f"bad formula coefficient {coeff_text!r}", EXIT_USAGE
                )
            d = _parse(code)
            terms[d] = terms.get(d, 0) + coeff
    return DiagramSum(terms)


def cmd_eval(args):
    from . import invariants

    d = _diagram_from_args(args)
    name = args.invariant
    try:
        if name == "bracket":
            print(invariants.kauffman_bracket(d))
        elif name == "f":
            print(invariants.f_polynomial(d))
        elif name == "c2":
            print(invariants.c2(d))
        elif name == "writhe":
            print(invariants.writhe(d))
        elif name.startswith("gauss-formula:"):
            formula = _read_formula(name.split(":", 1)[1])
            print(invariants.formula_value(formula, canonicalize(d)))
        else:
            raise _CliError(f"unknown invariant {name!r}", EXIT_USAGE)
    except CapExceededError as exc:
        raise _CliError(str(exc), EXIT_CAP)
    return EXIT_PASS


def _random_formula(rng, max_chord_count, n_terms=3):
    from .finitetype import random_diagram

    terms = {}
    for _ in range(n_terms):
        d = random_diagram(rng, rng.randint(1, max_chord_count), LONG)
        terms[d] = terms.get(d, 0) + rng.choice((-2, -1, 1, 2))
    return DiagramSum(terms)


def _report(lines, passed, started):
    for line in lines:
        print(line)
    print(f"verdict: {'pass' if passed else 'FAIL'}")
    print(f"elapsed: {time.time() - started:.2f}s")
    return EXIT_PASS if passed else EXIT_FAIL


def _check_prop_gpv(args, started):
    from .finitetype import (
        DiagramSampler,
        check_gpv_order_at_most,
        formula_functional,
    )

    rng = random.Random(args.seed)
    orders = [args.n] if args.n else [1, 2, 3]
    lines = []
    passed = True
    for n0 in orders:
        formula = _random_formula(rng, n0)
        v = formula_functional(formula, name=f"formula_n{n0}")
        sampler = DiagramSampler(
            trials=args.trials,
            seed=args.seed + n0,
            min_chords=n0 + 1,
            max_chords=min(n0 + 4, 8),
        )
        verdict = check_gpv_order_at_most(v, n0, sampler)
        passed &= verdict.passed
        lines.append(f"prop-gpv n0={n0}: {verdict.describe()}")
    return _report(lines, passed, started)


def _check_thm2(args, started):
    from .finitetype import DiagramSampler, c2_functional, check_f_order_at_most

    n = args.n or 1
    sampler = DiagramSampler(
        trials=args.trials, seed=args.seed, min_chords=2, max_chords=7
    )
    verdict = check_f_order_at_most(c2_functional(), n, sampler)
    return _report([f"thm2 c2 F-order<={n}: {verdict.describe()}"], verdict.passed, started)


def _check_lemma_f2gpv(args, started):
    from .finitetype import random_diagram, verify_lemma_f2gpv
    from .moves import forbidden_sites

    rng = random.Random(args.seed)
    confirmed = tested = 0
    while tested < args.trials:
        d = random_diagram(rng, rng.randint(2, 6), LONG)
        sites = forbidden_sites(d)
        if not sites:
            continue
        report = verify_lemma_f2gpv(d, rng.choice(sites))
        tested += 1
        confirmed += report.all_confirmed
    lines = [f"lemma-f2gpv: {confirmed}/{tested} confirmed"]
    return _report(lines, confirmed == tested, started)


def _check_similarity(args, started):
    from .finitetype import (
        c2_functional,
        f2_triangle_witness,
        gpv3_commutator_witness,
        verify_similarity_consequence,
    )

    v = c2_functional()
    lines = []
    passed = True
    for label, witness, m in (
        ("gpv3", gpv3_commutator_witness(), 2),
        ("f2", f2_triangle_witness(), 1),
    ):
        verdict = verify_similarity_consequence(witness, v, m)
        passed &= verdict.passed
        lines.append(f"similarity {label}: {verdict.describe()}")
    return _report(lines, passed, started)


def _check_invariance(args, started):
    from .finitetype import random_diagram
    from .invariants import c2, f_polynomial, invariance_fuzz, writhe

    functionals = {"f": f_polynomial, "c2": c2, "writhe": writhe}
    names = [args.invariant] if args.invariant else ["f", "c2"]
    rng = random.Random(args.seed)
    lines = []
    passed = True
    for name in names:
        fn = functionals[name]
        violations = 0
        witness = None
        for t in range(args.trials):
            kind = LONG if name == "c2" else rng.choice((LONG, "closed"))
            d = random_diagram(rng, rng.randint(1, 3), kind)
            ok, viol = invariance_fuzz(
                fn, d, trials=15, seed=args.seed * 1000 + t
            )
            if not ok:
                violations += 1
                witness = witness or viol
        lines.append(f"invariance {name}: {violations}/{args.trials} violations")
        if violations:
            passed = False
            lines.append("violation trace:")
            lines.extend("  " + ln for ln in witness.serialize().splitlines())
    return _report(lines, passed, started)


_SUITES = {
    "prop-gpv": _check_prop_gpv,
    "thm2": _check_thm2,
    "lemma-f2gpv": _check_lemma_f2gpv,
    "similarity": _check_similarity,
    "invariance": _check_invariance,
}


def cmd_check(args):
    return _SUITES[args.suite](args, time.time())


def cmd_family(args):
    from .braids import family_member
    from .invariants import f_polynomial

    base = _parse(args.base) if args.base else empty_diagram(LONG)
    if base.kind != LONG:
        base = GaussDiagram(LONG, canonicalize(base).endpoints)
    try:
        rows = []
        for ell in range(args.lmax + 1):
            member = family_member(base, args.n, ell)
            f = f_polynomial(member)
            rows.append((ell, member.n_chords, f))
    except CapExceededError as exc:
        raise _CliError(str(exc), EXIT_CAP)
    seen = {}
    distinct = True
    print(f"{'l':>3} {'chords':>7} {'maxdeg':>7}  f")
    for ell, size, f in rows:
        dup = str(f) in seen
        distinct &= not dup
        flag = f"  DUPLICATE of l={seen[str(f)]}" if dup else ""
        seen.setdefault(str(f), ell)
        print(f"{ell:>3} {size:>7} {f.max_degree():>7}  {f}{flag}")
    if not distinct:
        print("verdict: FAIL (repeated polynomial)")
        return EXIT_FAIL
    print("verdict: pass (pairwise distinct)")
    return EXIT_PASS


def _print_trace(trace):
    print(trace.serialize())


def cmd_equiv(args):
    from .moves import SearchBudget, equivalent_search

    d1 = _parse(args.code1)
    d2 = _parse(args.code2)
    if d1.kind != d2.kind:
        raise _CliError("cannot compare closed and long diagrams", EXIT_USAGE)
    trace = equivalent_search(d1, d2, SearchBudget(max_depth=args.depth))
    if trace is None:
        print("not found")
        return EXIT_FAIL
    _print_trace(trace)
    return EXIT_PASS


def cmd_unknot(args):
    from .moves import SearchBudget, equivalent_search, unknot_by_forbidden

    d = _diagram_from_args(args)
    if args.moves == "reid":
        trace = equivalent_search(
            d, empty_diagram(d.kind), SearchBudget(max_depth=args.depth)
        )
    else:
        trace = unknot_by_forbidden(
            d, SearchBudget(max_depth=args.depth, max_states=60000)
        )
    if trace is None:
        print("not found")
        return EXIT_FAIL
    _print_trace(trace)
    return EXIT_PASS


def build_parser():
    top = argparse.ArgumentParser(
        prog="virtknot",
        description="Gauss-diagram toolkit for classical and virtual knots",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an invariant")
    p.add_argument("code", nargs="?", help="gauss code")
    p.add_argument("--braid", help="2-strand braid word over {s,S,v}")
    p.add_argument("--file", help="read the gauss code from a file")
    p.add_argument(
        "--invariant",
        default="f",
        help="bracket | f | c2 | writhe | gauss-formula:<file>",
    )
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", choices=sorted(_SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--invariant", choices=["f", "c2", "writhe"])
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("family", help="commutator family sweep")
    p.add_argument("--base", help="long gauss code to connect-sum with")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--lmax", type=int, default=3)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("equiv", help="search for a Reidemeister path")
    p.add_argument("code1")
    p.add_argument("code2")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("unknot", help="search for an unknotting sequence")
    p.add_argument("code", nargs="?")
    p.add_argument("--braid")
    p.add_argument("--file")
    p.add_argument("--depth", type=int, default=30)
    p.add_argument(
        "--moves", choices=["reid", "reid+forbidden"], default="reid+forbidden"
    )
    p.set_defaults(fn=cmd_unknot)
    return top


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
