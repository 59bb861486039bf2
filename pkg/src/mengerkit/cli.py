"""Line-oriented file format and the mengerkit command-line tool.

Exit codes: 0 success / property holds, 1 property fails or counterexample
found, 2 input malformed, 3 capacity exceeded.  All reports are
deterministic: same input, same bytes, whatever --jobs says.
"""

from __future__ import annotations

import argparse
import itertools
import re
import sys
from concurrent.futures import ThreadPoolExecutor

from .core import MengerAlgebra, SELECTOR, build_algebra, verify_superassociativity
from .core import _check_names
from .errors import CapacityError, MengerError
from .principal import full_analysis, is_bistrong, is_l_strong, is_strong, l_analysis, v_analysis
from .enumeration import classify_subsets
from .suite import run_paper_suite
from .terms import format_term, translation_closure, DEFAULT_CLOSURE_CAP


class AlgebraFileError(MengerError):
    """Unparseable algebra file; carries the offending line number when known."""

    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line else message)


def parse_algebra_text(text: str, validate: bool = True) -> MengerAlgebra:
    """Parse the "menger v1" format; blank and #-comment lines are skipped."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append((no, s))
    it = iter(lines)

    def take(what):
        try:
            return next(it)
        except StopIteration:
            raise AlgebraFileError(None, f"unexpected end of file, expected {what}") from None

    no, line = take('header "menger v1"')
    if line != "menger v1":
        raise AlgebraFileError(no, 'expected header "menger v1"')
    no, line = take('"rank <n>"')
    parts = line.split()
    if len(parts) != 2 or parts[0] != "rank" or not parts[1].isdigit():
        raise AlgebraFileError(no, 'expected "rank <n>"')
    rank = int(parts[1])
    if rank < 1:
        raise AlgebraFileError(no, "rank must be >= 1")
    no, line = take('"elements <name>+"')
    parts = line.split()
    if len(parts) < 2 or parts[0] != "elements":
        raise AlgebraFileError(no, 'expected "elements <name>+"')
    names = tuple(parts[1:])
    try:
        _check_names(names)
    except ValueError as exc:
        raise AlgebraFileError(no, str(exc)) from None
    index = {nm: i for i, nm in enumerate(names)}
    no, line = take('"table"')
    if line != "table":
        raise AlgebraFileError(no, 'expected "table"')
    entries = []
    seen = set()
    for no, line in it:
        toks = line.split()
        if len(toks) != rank + 3 or toks[-2] != "->":
            raise AlgebraFileError(
                no, f'malformed entry, expected "<g> <x1> .. <x{rank}> -> <r>"'
            )
        key = []
        for t in toks[: rank + 1]:
            if t not in index:
                raise AlgebraFileError(no, f"unknown element {t!r}")
            key.append(index[t])
        if toks[-1] not in index:
            raise AlgebraFileError(no, f"unknown element {toks[-1]!r}")
        key = tuple(key)
        if key in seen:
            raise AlgebraFileError(
                no, "duplicate entry for (" + " ".join(toks[: rank + 1]) + ")"
            )
        seen.add(key)
        entries.append((key, index[toks[-1]]))
    return build_algebra(rank, names, entries, validate=validate)


def load_algebra(path: str, validate: bool = True) -> MengerAlgebra:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise AlgebraFileError(None, f"cannot read {path}: {exc.strerror}") from None
    return parse_algebra_text(text, validate=validate)


def format_algebra_file(alg: MengerAlgebra) -> str:
    """Inverse of parse_algebra_text, entries in lexicographic order."""
    out = [
        "menger v1",
        f"rank {alg.rank}",
        "elements " + " ".join(alg.names),
        "table",
    ]
    for key in itertools.product(range(alg.size), repeat=alg.rank + 1):
        r = int(alg.table[key])
        out.append(" ".join(alg.names[i] for i in key) + f" -> {alg.names[r]}")
    return "\n".join(out) + "\n"


def _fmt_subset(alg, H):
    return "{" + " ".join(alg.names[i] for i in sorted(H)) + "}"


def _fmt_vector(alg, xs):
    if xs is SELECTOR or xs == SELECTOR:
        return "e"
    return "(" + " ".join(alg.names[x] for x in xs) + ")"


def _split_subset_arg(s):
    return [t for t in re.split(r"[,\s]+", s) if t]


def cmd_validate(args) -> int:
    alg = load_algebra(args.file, validate=False)
    report = verify_superassociativity(alg)
    if report.ok:
        print("OK")
        return 0
    f, gs, hs, lhs, rhs = report.counterexample
    print(
        f"superassociativity fails at f={alg.names[f]} "
        f"g={_fmt_vector(alg, gs)} h={_fmt_vector(alg, hs)}: "
        f"lhs={alg.names[lhs]} rhs={alg.names[rhs]}"
    )
    return 1


_STRONG_LABEL = {"v": "strong", "l": "l-strong", "full": "bistrong"}


def cmd_congruence(args) -> int:
    alg = load_algebra(args.file)
    H = frozenset(alg.element(t) for t in _split_subset_arg(args.subset))
    kind = args.kind
    closure = None
    if kind == "l":
        analysis = l_analysis(alg, H)
        checks = [lambda m=m: is_l_strong(alg, H, method=m) for m in "abc"]
    else:
        closure = translation_closure(alg)
        if kind == "v":
            analysis = v_analysis(alg, closure, H)
            checks = [lambda m=m: is_strong(alg, closure, H, method=m) for m in "abc"]
        else:
            analysis = full_analysis(alg, closure, H)
            checks = [lambda m=m: is_bistrong(alg, closure, H, method=m) for m in "abc"]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            verdicts = [c.ok for c in pool.map(lambda fn: fn(), checks)]
    else:
        verdicts = [fn().ok for fn in checks]
    if len(set(verdicts)) != 1:
        raise AssertionError(f"strongness methods disagree: {verdicts}")
    print(" ".join(_fmt_subset(alg, blk) for blk in analysis.partition.blocks()))
    print("residue: " + (_fmt_subset(alg, analysis.residue) if analysis.residue else "empty"))
    print(f"{_STRONG_LABEL[kind]}: " + ("yes" if verdicts[0] else "no"))
    for fm in analysis.class_family:
        print(f"family: {_fmt_subset(alg, fm.members)} {_family_tag(alg, closure, kind, fm.tag)}")
    if analysis.note:
        print(f"note: {analysis.note}")
    return 0


def _family_tag(alg, closure, kind, tag):
    if tag is None:
        return "residue"
    if kind == "v":
        return f"t={format_term(alg, closure.witness(tag))}"
    if kind == "l":
        return f"arg={_fmt_vector(alg, alg.arg_vectors()[tag])}"
    b, t = divmod(tag, len(closure))
    return (
        f"arg={_fmt_vector(alg, alg.arg_vectors()[b])} "
        f"t={format_term(alg, closure.witness(t))}"
    )


def cmd_classify(args) -> int:
    alg = load_algebra(args.file)
    closure = translation_closure(alg)
    rows = classify_subsets(alg, closure)
    header = [
        "subset",
        "strong",
        "l-strong",
        "bistrong",
        "normal-v",
        "normal-l",
        "normal-bi",
        "l-ideal",
        "s-ideal",
        "sl-ideal",
        "l-consistent",
        "res-v",
        "res-l",
        "res-full",
        "classes-v",
        "classes-l",
        "classes-full",
    ]

    def yn(v):
        return "yes" if v else "no"

    table = [header]
    for r in rows:
        table.append(
            [
                _fmt_subset(alg, r.subset),
                yn(r.strong),
                yn(r.l_strong),
                yn(r.bistrong),
                yn(r.normal_v_complex),
                yn(r.normal_l_complex),
                yn(r.normal_bicomplex),
                yn(r.l_ideal),
                yn(r.s_ideal),
                yn(r.sl_ideal),
                yn(r.l_consistent),
                str(len(r.v_residue)),
                str(len(r.l_residue)),
                str(len(r.bi_residue)),
                str(r.v_classes),
                str(r.l_classes),
                str(r.bi_classes),
            ]
        )
    if args.tsv:
        for row in table:
            print("\t".join(row))
    else:
        widths = [max(len(row[c]) for row in table) for c in range(len(header))]
        for row in table:
            print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return 0


def cmd_suite(args) -> int:
    alg = load_algebra(args.file)
    closure = translation_closure(alg)
    report = run_paper_suite(alg, closure, jobs=args.jobs, corrupt=args.corrupt)
    for item in report.items:
        line = f"{item.ident} {'PASS' if item.passed else 'FAIL'} {item.description}"
        if not item.passed and item.detail:
            line += f": {item.detail}"
        print(line)
    passed = sum(1 for i in report.items if i.passed)
    failed = len(report.items) - passed
    print(f"{len(report.items)} items: {passed} passed, {failed} failed")
    return 0 if report.ok else 1


def cmd_translations(args) -> int:
    alg = load_algebra(args.file)
    closure = translation_closure(alg, cap=args.cap)
    count = len(closure)
    print(f"{count} translation" + ("" if count == 1 else "s"))
    shown = count if args.limit is None else min(args.limit, count)
    for i in range(shown):
        term = format_term(alg, closure.witness(i))
        mapping = " ".join(
            f"{alg.names[g]}->{alg.names[v]}" for g, v in enumerate(closure.tables[i])
        )
        print(f"{term}: {mapping}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mengerkit",
        description="Workbench for finite algebras with one superassociative operation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the table is superassociative")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("congruence", help="analyze the partition induced by a subset")
    p.add_argument("file")
    p.add_argument("--kind", choices=["v", "l", "full"], default="v")
    p.add_argument(
        "--subset",
        required=True,
        help="comma- or space-separated element names; '' for the empty subset",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_congruence)

    p = sub.add_parser("classify", help="classify every subset of the carrier")
    p.add_argument("file")
    p.add_argument("--tsv", action="store_true", help="tab-separated, no padding")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("suite", help="run the structural cross-check battery")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_suite)

    p = sub.add_parser("translations", help="list the translation closure")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=None, help="show at most this many terms")
    p.add_argument("--cap", type=int, default=DEFAULT_CLOSURE_CAP)
    p.set_defaults(fn=cmd_translations)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (MengerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
