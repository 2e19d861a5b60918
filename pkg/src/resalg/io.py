"""JSON algebra documents.

A document is a UTF-8 JSON object::

    {"name": "H3", "signature": "rl", "size": 3,
     "meet": [[...]], "join": [[...]], "prod": [[...]], "imp": [[...]],
     "bot": 0, "top": 2}

Tables are row-major with the row as the left operand.  Hoop documents carry
``"join": null`` and plain hoops ``"bot": null``.  A canonical document has
bot at index 0 and top at index ``size - 1``; anything else is relabelled on
load with a logged notice.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from .algebra import (
    FiniteAlgebra,
    InvalidAlgebra,
    Signature,
    StructuralError,
    validate_axioms,
)

log = logging.getLogger(__name__)

INDEX_NAME = "index.json"
FIELDS = ("name", "signature", "size", "meet", "join", "prod", "imp", "bot", "top")


class ParseError(ValueError):
    """The document is malformed (as opposed to describing an invalid algebra)."""


def to_document(A: FiniteAlgebra) -> dict:
    def tab(t):
        return None if t is None else [[int(v) for v in row] for row in t]

    return {
        "name": A.name,
        "signature": A.signature.value,
        "size": A.size,
        "meet": tab(A.meet),
        "join": tab(A.join),
        "prod": tab(A.prod),
        "imp": tab(A.imp),
        "bot": A.bot,
        "top": A.top,
    }


def dumps(A: FiniteAlgebra) -> str:
    """Deterministic text: one table row per line."""
    doc = to_document(A)
    lines = ["{"]
    items = list(doc.items())
    for i, (k, v) in enumerate(items):
        comma = "," if i < len(items) - 1 else ""
        if isinstance(v, list):
            rows = ",\n    ".join(json.dumps(r) for r in v)
            lines.append(f'  "{k}": [\n    {rows}\n  ]{comma}')
        else:
            lines.append(f'  "{k}": {json.dumps(v)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _canonical_perm(n: int, bot, top) -> list[int]:
    rest = [x for x in range(n) if x not in (bot, top)]
    order = ([bot] if bot is not None else []) + rest + [top]
    perm = [0] * n
    for new, old in enumerate(order):
        perm[old] = new
    return perm


def from_document(doc, *, source: str = "<document>", validate: bool = True) -> FiniteAlgebra:
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: expected a JSON object")
    unknown = set(doc) - set(FIELDS)
    if unknown:
        raise ParseError(f"{source}: unknown fields {sorted(unknown)}")
    try:
        sig = Signature(doc.get("signature"))
    except ValueError:
        raise ParseError(f"{source}: unknown signature {doc.get('signature')!r}") from None
    for key in ("size", "prod", "imp", "top"):
        if doc.get(key) is None:
            raise ParseError(f"{source}: missing field {key!r}")
    if sig is Signature.RL:
        for key in ("meet", "join", "bot"):
            if doc.get(key) is None:
                raise ParseError(f"{source}: missing field {key!r} for signature 'rl'")
    elif sig is Signature.BOUNDED_HOOP and doc.get("bot") is None:
        raise ParseError(f"{source}: missing field 'bot' for signature 'bounded_hoop'")
    size = doc["size"]
    if isinstance(size, bool) or not isinstance(size, int) or size < 1:
        raise ParseError(f"{source}: size must be a positive integer")
    name = doc.get("name") or ""
    if not isinstance(name, str):
        raise ParseError(f"{source}: name must be a string")
    try:
        A = FiniteAlgebra.from_tables(
            sig,
            doc["prod"],
            doc["imp"],
            meet=doc.get("meet"),
            join=doc.get("join"),
            bot=doc.get("bot"),
            top=doc["top"],
            name=name,
        )
    except StructuralError as exc:
        raise ParseError(f"{source}: {exc}") from None
    if A.size != size:
        raise ParseError(f"{source}: size {size} does not match {A.size}x{A.size} tables")
    if validate:
        report = validate_axioms(A)
        if not report.valid:
            raise InvalidAlgebra(report)
    if (A.bot is not None and A.bot != 0) or A.top != A.size - 1:
        log.warning(
            "%s: bot/top not at canonical positions; relabelling so bot=0 and top=%d",
            source, A.size - 1,
        )
        A = A.relabel(_canonical_perm(A.size, A.bot, A.top))
    return A


def loads(text: str, *, source: str = "<string>", validate: bool = True) -> FiniteAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON ({exc.msg} at line {exc.lineno})") from None
    return from_document(doc, source=source, validate=validate)


def load(path: Union[str, Path], *, validate: bool = True) -> FiniteAlgebra:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise ParseError(f"{p}: not UTF-8 text") from None
    return loads(text, source=str(p), validate=validate)


def save(A: FiniteAlgebra, path: Union[str, Path]) -> Path:
    p = Path(path)
    p.write_text(dumps(A), encoding="utf-8")
    return p


def load_class(directory: Union[str, Path]) -> list[FiniteAlgebra]:
    """Every ``*.json`` document in ``directory``, sorted by file name.

    ``index.json``, as written by ``resalg enumerate``, is not an algebra and is skipped.
    """
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"{d}: not a directory")
    return [load(p) for p in sorted(d.glob("*.json"), key=lambda q: q.name) if p.name != INDEX_NAME]


def tables_equal(A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    def same(s, t):
        return (s is None and t is None) or (s is not None and t is not None and np.array_equal(s, t))

    return (
        A.signature is B.signature
        and A.size == B.size
        and A.bot == B.bot
        and A.top == B.top
        and all(same(s, t) for s, t in ((A.meet, B.meet), (A.join, B.join), (A.prod, B.prod), (A.imp, B.imp)))
    )
