"""Command-line front end.

Exit codes: 0 true/pass, 1 false/fail, 2 usage, 3 invalid algebra,
4 malformed document.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import constructions as C
from . import io
from .algebra import FiniteAlgebra, InvalidAlgebra, Signature, validate_axioms
from .enumeration import canonical_form, enumerate_algebras
from .morphisms import (
    SearchConstraint,
    is_absolute_retract_relative,
    is_injective_relative,
    is_retract_of,
    search,
)
from .structure import Filter, all_filters, is_filter, quotient, radical_report
from .varieties import Eq, classify

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INVALID, EXIT_PARSE = 0, 1, 2, 3, 4

log = logging.getLogger("resalg")


class UsageError(Exception):
    pass


def _mark(flag: bool) -> str:
    return "✓" if flag else "✗"


def resolve(spec: str) -> FiniteAlgebra:
    """A document path, or a catalog name such as ``H4`` or ``nm:6``."""
    p = Path(spec)
    if p.is_file():
        return io.load(p)
    try:
        return C.catalog_get(spec)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{spec}: no such file, and not a catalog name ({exc.args[0]})") from None


def _class_dir(path: str) -> list[FiniteAlgebra]:
    try:
        return io.load_class(path)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated element indices, got {text!r}") from None


def _pin(text: str) -> tuple[int, int]:
    s, sep, t = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return int(s), int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"pin must look like s=t, got {text!r}") from None


def _doc_or_write(A: FiniteAlgebra, out: Optional[str]) -> dict:
    if out:
        io.save(A, out)
        return {"written": out}
    return {"document": io.to_document(A)}


# ---------------------------------------------------------------------------
# commands; each returns (exit code, facts, text lines)


def cmd_validate(args):
    A = _load_unvalidated(args.algebra)
    rep = validate_axioms(A)
    facts = {"algebra": A.name or args.algebra, "valid": rep.valid,
             "violations": [
                 {"axiom": v.axiom, "witness": list(v.witness), "count": v.count} for v in rep.violations
             ]}
    lines = [f"{facts['algebra']}: {'valid' if rep.valid else 'INVALID'}"]
    lines += [f"  {v}" for v in rep.violations]
    return (EXIT_TRUE if rep.valid else EXIT_INVALID), facts, lines


def _load_unvalidated(spec: str) -> FiniteAlgebra:
    p = Path(spec)
    if p.is_file():
        return io.load(p, validate=False)
    return resolve(spec)


def cmd_classify(args):
    A = resolve(args.algebra)
    prof = classify(A)
    facts = {"algebra": A.name or args.algebra, **prof.as_dict()}
    lines = [f"{facts['algebra']} ({A.signature.value}, n={A.size})"]
    for eq in Eq:
        if eq in prof.equation_flags:
            ok = prof.equation_flags[eq]
            extra = "" if ok else f"  at {prof.witnesses[eq]}"
            lines.append(f"  {eq.value:7} {_mark(ok)}{extra}")
    lines.append(f"  linearly ordered: {'yes' if prof.linearly_ordered else 'no'}")
    lines.append(f"  memberships: {', '.join(facts['memberships'])}")
    return EXIT_TRUE, facts, lines


def cmd_filters(args):
    A = resolve(args.algebra)
    fs = all_filters(A, maximal_only=args.maximal)
    facts = {"algebra": A.name or args.algebra, "maximal_only": args.maximal,
             "filters": [list(F.sorted()) for F in fs]}
    lines = [f"{len(fs)} {'maximal ' if args.maximal else ''}filters"]
    lines += ["  {" + ", ".join(map(str, F.sorted())) + "}" for F in fs]
    return EXIT_TRUE, facts, lines


def cmd_radical(args):
    A = resolve(args.algebra)
    rep = radical_report(A)
    facts = {
        "algebra": A.name or args.algebra,
        "radical": list(rep.radical.sorted()),
        "dense": list(rep.dense.sorted()),
        "principal_unity": rep.principal_unity,
        "semisimple": rep.semisimple,
        "radical_dense": rep.radical_dense,
    }
    lines = [f"radical: {facts['radical']}", f"dense: {facts['dense']}",
             f"principal unity: {rep.principal_unity}",
             f"semisimple: {rep.semisimple}", f"radical = dense: {rep.radical_dense}"]
    return EXIT_TRUE, facts, lines


def cmd_quotient(args):
    A = resolve(args.algebra)
    members = _ints(args.filter)
    if any(not 0 <= m < A.size for m in members):
        raise UsageError(f"filter members must lie in 0..{A.size - 1}")
    if not is_filter(A, members):
        facts = {"algebra": A.name or args.algebra, "filter": sorted(set(members)), "is_filter": False}
        return EXIT_FALSE, facts, [f"{sorted(set(members))} is not an implicative filter"]
    Q = quotient(A, Filter(A, frozenset(members)))
    facts = {"algebra": A.name or args.algebra, "filter": sorted(set(members)), "is_filter": True,
             "size": Q.size, **_doc_or_write(Q, args.output)}
    lines = [f"quotient by {sorted(set(members))}: {Q.size} elements"]
    if args.output:
        lines.append(f"written to {args.output}")
    else:
        lines.append(io.dumps(Q).rstrip())
    return EXIT_TRUE, facts, lines


def _construction(args, B: FiniteAlgebra, label: str):
    facts = {"size": B.size, **_doc_or_write(B, args.output)}
    lines = [f"{label}: {B.size} elements"]
    lines.append(f"written to {args.output}" if args.output else io.dumps(B).rstrip())
    return EXIT_TRUE, facts, lines


def cmd_product(args):
    A, B = resolve(args.a), resolve(args.b)
    return _construction(args, C.direct_product(A, B), "product")


def cmd_diamond(args):
    A = resolve(args.algebra)
    D, g = C.diamond(A)
    code, facts, lines = _construction(args, D, "diamond")
    facts["pairs"] = [list(p) for p in C.diamond_pairs(D)]
    facts["diagonal"] = list(g.map)
    lines.insert(1, "pairs: " + " ".join(f"{k}=({a},{b})" for k, (a, b) in enumerate(C.diamond_pairs(D))))
    return code, facts, lines


def cmd_subalgebras(args):
    A = resolve(args.algebra)
    subs = C.all_subalgebras(A)
    facts = {"algebra": A.name or args.algebra, "subalgebras": [sorted(s) for s in subs]}
    lines = [f"{len(subs)} subalgebras"] + ["  {" + ", ".join(map(str, sorted(s))) + "}" for s in subs]
    return EXIT_TRUE, facts, lines


def cmd_hom(args):
    A, B = resolve(args.a), resolve(args.b)
    mode = args.mode or "all"
    try:
        res = search(A, B, SearchConstraint(tuple(args.pin), mode))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    facts = {"source": A.name or args.a, "target": B.name or args.b, "mode": mode,
             "pins": [list(p) for p in args.pin]}
    if mode == "count":
        facts["count"] = res
        return (EXIT_TRUE if res else EXIT_FALSE), facts, [str(res)]
    if mode == "exists":
        facts["exists"] = res
        return (EXIT_TRUE if res else EXIT_FALSE), facts, ["true" if res else "false"]
    facts["morphisms"] = [list(f.map) for f in res]
    lines = [f"{len(res)} {'embeddings' if mode == 'mono' else 'isomorphisms' if mode == 'iso' else 'homomorphisms'}"]
    lines += [f"  {list(f.map)}" for f in res]
    return (EXIT_TRUE if res else EXIT_FALSE), facts, lines


def cmd_retract(args):
    A, Cc = resolve(args.a), resolve(args.c)
    v = is_retract_of(A, Cc)
    facts = {"retract": v.holds}
    if v.holds:
        g, f = v.witness
        facts.update(embedding=list(g.map), retraction=list(f.map))
        lines = [f"true: embedding {list(g.map)}, retraction {list(f.map)}"]
    else:
        lines = ["false: no embedding admits a retraction"]
    return (EXIT_TRUE if v.holds else EXIT_FALSE), facts, lines


def _relative(args, fn, key):
    A = resolve(args.algebra)
    cls = _class_dir(args.class_dir)
    v = fn(A, cls)
    facts = {key: v.holds, "class_size": len(cls)}
    if v.holds:
        facts["note"] = v.note
        lines = [f"true ({v.note}, {len(cls)} algebras)"]
    else:
        facts["witness"] = [
            {"source": f.source.name, "target": f.target.name, "map": list(f.map)} for f in v.witness
        ]
        lines = ["false: " + "; ".join(
            f"{f.source.name or '?'} -> {f.target.name or '?'} {list(f.map)}" for f in v.witness
        )]
    return (EXIT_TRUE if v.holds else EXIT_FALSE), facts, lines


def cmd_absretract(args):
    return _relative(args, is_absolute_retract_relative, "absolute_retract")


def cmd_injective(args):
    return _relative(args, is_injective_relative, "injective")


def cmd_enumerate(args):
    if not args.count_only and not args.output:
        raise UsageError("enumerate needs -o DIR unless --count-only is given")
    try:
        algs = enumerate_algebras(args.size, Signature(args.signature), variety=args.variety,
                                  chains_only=args.chains)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    facts = {"size": args.size, "signature": args.signature, "variety": args.variety, "count": len(algs)}
    lines = [str(len(algs))]
    if not args.count_only:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        entries = []
        for A in algs:
            io.save(A, out / f"{A.name}.json")
            entries.append({"name": A.name, "file": f"{A.name}.json", "key": canonical_form(A)[0].hex()})
        facts["algebras"] = entries
        (out / io.INDEX_NAME).write_text(json.dumps(facts, indent=2) + "\n", encoding="utf-8")
        lines.append(f"wrote {len(entries)} documents to {out}")
    return EXIT_TRUE, facts, lines


def cmd_catalog(args):
    if args.action == "list":
        names = C.catalog_names()
        return EXIT_TRUE, {"catalog": names}, names
    if not args.name:
        raise UsageError("catalog get needs a NAME")
    try:
        A = C.catalog_get(args.name)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0])) from None
    if args.output:
        io.save(A, args.output)
        return EXIT_TRUE, {"written": args.output}, [f"written to {args.output}"]
    return EXIT_TRUE, {"document": io.to_document(A)}, [io.dumps(A).rstrip()]


def cmd_paper_suite(args):
    from .suite import paper_suite

    try:
        rep = paper_suite(args.only.split(",") if args.only else None)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    timing = not args.no_timing
    return (EXIT_TRUE if rep.passed else EXIT_FALSE), rep.as_dict(timing), [rep.text(timing).rstrip()]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS so a subcommand's default cannot undo a flag given before it
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress notices on stderr")

    p = argparse.ArgumentParser(prog="resalg", description="Finite residuated lattices and bounded hoops.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check the axioms").add_argument("algebra")
    add("classify", cmd_classify, "equations and variety memberships").add_argument("algebra")
    sp = add("filters", cmd_filters, "implicative filters")
    sp.add_argument("algebra")
    sp.add_argument("--maximal", action="store_true")
    add("radical", cmd_radical, "radical, dense set, principal unity").add_argument("algebra")
    sp = add("quotient", cmd_quotient, "quotient by a filter")
    sp.add_argument("algebra")
    sp.add_argument("--filter", required=True, help="member indices, e.g. 2,3")
    sp.add_argument("-o", "--output")
    sp = add("product", cmd_product, "direct product")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-o", "--output")
    sp = add("diamond", cmd_diamond, "the diamond extension")
    sp.add_argument("algebra")
    sp.add_argument("-o", "--output")
    add("subalgebras", cmd_subalgebras, "all subalgebras").add_argument("algebra")
    sp = add("hom", cmd_hom, "homomorphism search")
    sp.add_argument("a")
    sp.add_argument("b")
    g = sp.add_mutually_exclusive_group()
    for mode in ("mono", "iso", "count", "exists"):
        g.add_argument(f"--{mode}", dest="mode", action="store_const", const=mode)
    sp.add_argument("--pin", type=_pin, action="append", default=[], metavar="S=T")
    sp = add("retract", cmd_retract, "is A a retract of C")
    sp.add_argument("a")
    sp.add_argument("c")
    for name, fn in (("absretract", cmd_absretract), ("injective", cmd_injective)):
        sp = add(name, fn, f"{name} relative to a class directory")
        sp.add_argument("algebra")
        sp.add_argument("--class", dest="class_dir", required=True, metavar="DIR")
    sp = add("enumerate", cmd_enumerate, "all algebras of a size up to isomorphism")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--variety", help="membership filter, e.g. MTL or MTL,S")
    sp.add_argument("--signature", default="rl", choices=[s.value for s in Signature])
    sp.add_argument("--chains", action="store_true", help="linearly ordered only")
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("-o", "--output", metavar="DIR")
    sp = add("catalog", cmd_catalog, "named algebras")
    sp.add_argument("action", choices=["list", "get"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("-o", "--output")
    sp = add("paper-suite", cmd_paper_suite, "run the acceptance battery")
    sp.add_argument("--only", help="comma-separated check ids or groups")
    sp.add_argument("--no-timing", action="store_true", help="omit wall times")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    logging.basicConfig(level=logging.ERROR if getattr(args, "quiet", False) else logging.WARNING,
                        format="resalg: %(message)s", stream=sys.stderr)
    try:
        code, facts, lines = args.func(args)
    except UsageError as exc:
        print(f"resalg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.ParseError as exc:
        print(f"resalg: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidAlgebra as exc:
        print(f"resalg: invalid algebra:\n{exc.report.summary()}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        # operation not defined on this input, e.g. a hoop where a lattice is needed
        print(f"resalg: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "json", False):
        print(json.dumps({"command": args.command, "exit_code": code, **facts}, indent=2, ensure_ascii=False))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
