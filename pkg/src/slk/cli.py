"""Command-line front end (``slk``).

Exit codes: 0 success, 1 malformed input, 2 domain violation, 3 search
budget exhausted.  In JSON output every integer is written as a decimal
string so that large values survive downstream tools.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from collections import Counter
from fractions import Fraction

from . import linalg as la
from .blowup import FilteredLattice, blowdown, blowup
from .classify import classify, is_equivalent, s_parity
from .diophantine import iter_rank4, markov_reduce, markov_value, rank4_values
from .exceptions import InternalInconsistency, PreconditionError
from .lattice import GramMatrix, SerreLattice, SurfaceType
from .mutation import BraidWord, apply_word, default_max_nodes, orbit_bfs

EXIT_OK, EXIT_MALFORMED, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2, 3


class Malformed(Exception):
    pass


class BudgetExhausted(Exception):
    pass


# -- parsing -------------------------------------------------------------

def _to_int(x) -> int:
    if isinstance(x, bool):
        raise Malformed(f"not an integer: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and re.fullmatch(r"\s*[+-]?\d+\s*", x):
        return int(x)
    raise Malformed(f"not an integer: {x!r}")


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def parse_matrix_text(text: str) -> tuple[tuple[int, ...], ...]:
    """Rows separated by ``;`` or newlines, entries by whitespace or commas.

    JSON input ``{"gram": [[...]]}`` or a bare nested list is also accepted.
    A single row of 3 or 6 entries is read as the upper triangle of a
    unitriangular Gram matrix.
    """
    text = text.strip()
    if not text:
        raise Malformed("empty matrix")
    if text[0] in "{[":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise Malformed(f"bad JSON: {exc}") from None
        grid = doc.get("gram") if isinstance(doc, dict) else doc
        if not isinstance(grid, list) or not all(isinstance(r, list) for r in grid):
            raise Malformed("JSON document needs a 'gram' list of rows")
        rows = [[_to_int(x) for x in r] for r in grid]
    else:
        rows = [[_to_int(x) for x in re.split(r"[\s,]+", line.strip())]
                for line in re.split(r"[;\n]", text) if line.strip()]
    if len(rows) == 1 and len(rows[0]) in (3, 6):
        return GramMatrix.from_upper(rows[0], 3 if len(rows[0]) == 3 else 4).gram
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise Malformed("matrix is not square")
    return la.as_matrix(rows)


def load_lattice(arg: str) -> SerreLattice:
    rows = parse_matrix_text(_read_source(arg))
    try:
        return GramMatrix(rows)
    except ValueError:
        pass
    try:
        return SerreLattice(rows)
    except ValueError as exc:
        raise Malformed(str(exc)) from None


def load_gram(arg: str) -> GramMatrix:
    lat = load_lattice(arg)
    if not isinstance(lat, GramMatrix):
        raise PreconditionError("expected an upper unitriangular Gram matrix")
    return lat


def parse_word(tokens, display_order: bool = False) -> BraidWord:
    text = " ".join(tokens)
    try:
        return BraidWord.from_display(text) if display_order else BraidWord.parse(text)
    except ValueError as exc:
        raise Malformed(str(exc)) from None


def parse_vector(tokens) -> tuple[int, ...]:
    return tuple(_to_int(t) for t in " ".join(tokens).replace(",", " ").split())


# -- output --------------------------------------------------------------

def jsonable(obj):
    """Integers become decimal strings; containers are converted recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def _fmt_matrix(m) -> str:
    width = max(len(str(x)) for r in m for x in r)
    return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in m)


def _emit(args, doc: dict, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(jsonable(doc)))
    else:
        print(text)


def _gram_doc(m) -> list:
    return [list(r) for r in (m.gram if isinstance(m, SerreLattice) else m)]


# -- commands ------------------------------------------------------------

def cmd_check(args) -> int:
    lat = load_lattice(args.input)
    doc: dict = {"rank": lat.rank, "exceptional": isinstance(lat, GramMatrix)}
    doc["unipotent"] = lat.is_unipotent()
    if isinstance(lat, GramMatrix):
        if lat.rank == 3:
            doc["markov_value"] = markov_value(lat.upper())
        elif lat.rank == 4:
            q1, q2 = rank4_values(lat.upper())
            doc["q1"], doc["q2"] = q1, q2
    kind = lat.surface_type()
    doc["surface_type"] = kind.value
    doc["delta"] = None if kind is SurfaceType.NOT_SURFACE else lat.degree()
    doc["s_parity"] = s_parity(lat) if isinstance(lat, GramMatrix) else None
    lines = [f"{k}: {'yes' if v is True else 'no' if v is False else v}" for k, v in doc.items()]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if doc["unipotent"] else EXIT_DOMAIN


def cmd_mutate(args) -> int:
    g = load_gram(args.input)
    word = parse_word(args.word, args.display_order)
    out = apply_word(g, word)
    _emit(args, {"gram": _gram_doc(out), "word": str(word)}, _fmt_matrix(out.gram))
    return EXIT_OK


def cmd_classify(args) -> int:
    v = classify(load_gram(args.input))
    doc = v.as_dict()
    if doc["n"] is None:
        del doc["n"]
    print(json.dumps(jsonable(doc)))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.bound < 0:
        raise Malformed("bound must be nonnegative")
    hist: Counter = Counter()
    rows = []
    count = 0
    for t in iter_rank4(args.bound):
        count += 1
        row: dict = {"coeffs": list(t)}
        if args.classify:
            v = classify(t.gram())
            row["class"] = v.cls.label
            row["witness"] = str(v.witness)
            hist[v.cls.label] += 1
        if args.json:
            rows.append(row)
        else:
            line = " ".join(map(str, t))
            if args.classify:
                line += f"\t{row['class']}\t{row['witness']}"
            print(line)
    if args.json:
        doc = {"bound": args.bound, "count": count, "solutions": rows}
        if args.classify:
            doc["histogram"] = dict(sorted(hist.items()))
        print(json.dumps(jsonable(doc)))
    else:
        print(f"# total {count}")
        for label, k in sorted(hist.items()):
            print(f"# {label} {k}")
    return EXIT_OK


def cmd_orbit(args) -> int:
    g, target = load_gram(args.input), load_gram(args.target)
    budget = args.budget if args.budget is not None else default_max_nodes()
    kw = {"max_nodes": budget}
    if args.max_entry is not None:
        kw["max_entry"] = args.max_entry
    word = orbit_bfs(g, target, **kw)
    if word is None:
        raise BudgetExhausted(f"no word found within {budget} nodes")
    _emit(args, {"word": str(word), "length": len(word)}, str(word) or "(empty word)")
    return EXIT_OK


def cmd_equivalent(args) -> int:
    budget = args.budget if args.budget is not None else default_max_nodes()
    res = is_equivalent(load_gram(args.input), load_gram(args.target), budget)
    doc = {"status": res.status, "word": None if res.word is None else str(res.word),
           "invariant": res.invariant}
    text = {"yes": f"yes: {res.word}", "no": f"no: {res.invariant} differs",
            "unknown": "unknown"}[res.status]
    _emit(args, doc, text)
    if res.status == "unknown":
        return EXIT_BUDGET
    return EXIT_OK


def _filtered_doc(fl: FilteredLattice) -> dict:
    return {
        "gram": _gram_doc(fl.lattice),
        "f1": [list(v) for v in fl.filt.f1],
        "f2": [list(fl.filt.point)],
        "delta": fl.degree(),
    }


def cmd_blowup(args) -> int:
    fl = FilteredLattice.canonical(load_lattice(args.input))
    if args.times is not None:
        z = tuple(args.times * x for x in fl.filt.point)
    else:
        z = parse_vector(args.z)
    out = blowup(fl, z)
    doc = _filtered_doc(out)
    doc["z"] = list(z)
    _emit(args, doc, f"{_fmt_matrix(out.gram)}\ndelta: {doc['delta']}")
    return EXIT_OK


def cmd_blowdown(args) -> int:
    fl = FilteredLattice.canonical(load_lattice(args.input))
    sub, z = blowdown(fl, parse_vector(args.f))
    doc = _filtered_doc(sub)
    doc["z"] = list(z)
    doc["basis"] = [list(v) for v in sub.ambient_basis]
    _emit(args, doc, f"{_fmt_matrix(sub.gram)}\nz: {' '.join(map(str, z))}\n"
                     f"delta: {doc['delta']}")
    return EXIT_OK


def cmd_markov(args) -> int:
    t = (args.a, args.b, args.c)
    canon, word = markov_reduce(t)
    doc = {"input": list(t), "canonical": list(canon), "word": str(word)}
    _emit(args, doc, f"{' '.join(map(str, canon))}\t{word}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slk", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)
    matrix_help = "matrix text, JSON document, file path, or '-' for stdin"

    s = sub.add_parser("check", parents=[common], help="unipotency, surface type and invariants")
    s.add_argument("input", help=matrix_help)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("mutate", parents=[common], help="apply a braid word")
    s.add_argument("input", help=matrix_help)
    s.add_argument("word", nargs="*", help="tokens s<i>, S<i>, e<i>")
    s.add_argument("--display-order", action="store_true",
                   help="read the word right to left (composition notation)")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("classify", parents=[common], help="canonical class with witness (JSON)")
    s.add_argument("input", help=matrix_help)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("enumerate", parents=[common], help="list rank-4 solutions")
    s.add_argument("bound", type=int)
    s.add_argument("--classify", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    for name, func, helptext in (("orbit", cmd_orbit, "search for a connecting word"),
                                 ("equivalent", cmd_equivalent, "decide orbit equivalence")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("input", help=matrix_help)
        s.add_argument("target", help=matrix_help)
        s.add_argument("--budget", type=int, default=None,
                       help="node budget (default: $SLK_MAX_NODES or 10^7)")
        if name == "orbit":
            s.add_argument("--max-entry", type=int, default=None)
        s.set_defaults(func=func)

    s = sub.add_parser("blowup", parents=[common], help="numerical blowup at z in F^2")
    s.add_argument("input", help=matrix_help)
    s.add_argument("z", nargs="*", help="centre coordinates")
    s.add_argument("--times", type=int, default=None, help="use z = k times the point class")
    s.set_defaults(func=cmd_blowup)

    s = sub.add_parser("blowdown", parents=[common], help="blow down an exceptional element")
    s.add_argument("input", help=matrix_help)
    s.add_argument("f", nargs="+", help="element coordinates")
    s.set_defaults(func=cmd_blowdown)

    s = sub.add_parser("markov", parents=[common], help="reduce a Markov triple")
    for name in "abc":
        s.add_argument(name, type=int)
    s.set_defaults(func=cmd_markov)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except Malformed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BudgetExhausted as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionError, IndexError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
