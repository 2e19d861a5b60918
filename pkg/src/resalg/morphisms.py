"""Homomorphism search and injectivity predicates relative to finite classes.

Everything here quantifies over an explicit finite list of algebras.  A
positive answer is therefore only a statement *relative to that class*; a
negative answer is a genuine refutation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .algebra import FiniteAlgebra, Morphism, identity
from .constructions import all_subalgebras, restrict

__all__ = [
    "Morphism", "SearchConstraint", "search", "homomorphisms", "count_homomorphisms",
    "exists_homomorphism", "embeddings", "automorphisms", "is_isomorphic",
    "is_retract_of", "is_absolute_retract_relative", "is_injective_relative",
    "is_self_injective", "is_rigid", "is_hereditarily_simple", "maximum_simple",
    "brute_force_homomorphisms",
]

MODES = ("all", "mono", "iso", "count", "exists")


@dataclass(frozen=True)
class SearchConstraint:
    """Pins ``source -> target`` and a result mode."""

    pins: tuple[tuple[int, int], ...] = ()
    mode: str = "all"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown search mode {self.mode!r}; expected one of {MODES}")
        seen: dict[int, int] = {}
        for s, t in self.pins:
            if seen.setdefault(s, t) != t:
                raise ValueError(f"inconsistent pins for source element {s}: {seen[s]} and {t}")


def _check_pair(A: FiniteAlgebra, B: FiniteAlgebra):
    if A.signature is not B.signature:
        raise ValueError(
            f"signature mismatch: {A.signature.value} vs {B.signature.value}"
        )


def _run(A, B, pins, mono, limit, store) -> tuple[int, np.ndarray]:
    _check_pair(A, B)
    src = np.ascontiguousarray(np.stack(A.ops()), dtype=np.int64)
    dst = np.ascontiguousarray(np.stack(B.ops()), dtype=np.int64)
    init = np.full(A.size, -1, np.int64)
    forced = list(zip(A.constants(), B.constants())) + list(pins)
    for s, t in forced:
        if not (0 <= s < A.size and 0 <= t < B.size):
            raise ValueError(f"pin {s}={t} is out of range")
        if init[s] != -1 and init[s] != t:
            return 0, np.empty((0, A.size), np.int64)
        init[s] = t
    cap = store if store >= 0 else 0
    out = np.empty((cap, A.size), np.int64)
    count = _kernels.hom_search(src, dst, init, bool(mono), int(limit), out)
    if count > cap > 0:
        # the first pass found more than it could hold; rerun with room for all
        out = np.empty((count, A.size), np.int64)
        count = _kernels.hom_search(src, dst, init, bool(mono), int(limit), out)
    return int(count), out[: min(count, out.shape[0])]


def search(A: FiniteAlgebra, B: FiniteAlgebra, constraint: SearchConstraint = SearchConstraint()
           ) -> Union[list[Morphism], int, bool]:
    """Homomorphisms ``A -> B`` satisfying the pins, in lexicographic map order.

    Modes ``all``/``mono``/``iso`` return morphisms, ``count`` an integer and
    ``exists`` a boolean.
    """
    mode = constraint.mode
    pins = constraint.pins
    if mode == "iso" and A.size != B.size:
        return []
    mono = mode in ("mono", "iso")
    if mode == "count":
        return _run(A, B, pins, False, 0, 0)[0]
    if mode == "exists":
        return _run(A, B, pins, False, 1, 0)[0] > 0
    _, maps = _run(A, B, pins, mono, 0, 256)
    return [Morphism(A, B, tuple(int(v) for v in row)) for row in maps]


def homomorphisms(A, B, pins: Iterable[tuple[int, int]] = (), mono: bool = False) -> list[Morphism]:
    return search(A, B, SearchConstraint(tuple(pins), "mono" if mono else "all"))


def count_homomorphisms(A, B, pins: Iterable[tuple[int, int]] = ()) -> int:
    return search(A, B, SearchConstraint(tuple(pins), "count"))


def exists_homomorphism(A, B, pins: Iterable[tuple[int, int]] = ()) -> bool:
    return search(A, B, SearchConstraint(tuple(pins), "exists"))


def first_homomorphism(A, B, pins: Iterable[tuple[int, int]] = ()) -> Optional[Morphism]:
    _, maps = _run(A, B, tuple(pins), False, 1, 1)
    if len(maps) == 0:
        return None
    return Morphism(A, B, tuple(int(v) for v in maps[0]))


def embeddings(A: FiniteAlgebra, B: FiniteAlgebra) -> list[Morphism]:
    if A.size > B.size:
        _check_pair(A, B)
        return []
    return search(A, B, SearchConstraint((), "mono"))


def automorphisms(A: FiniteAlgebra) -> list[Morphism]:
    return search(A, A, SearchConstraint((), "iso"))


@dataclass(frozen=True)
class Verdict:
    """A boolean answer with the morphisms that witness or refute it."""

    holds: bool
    witness: tuple = ()
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def is_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> Verdict:
    if A.signature is not B.signature or A.size != B.size:
        return Verdict(False)
    _, maps = _run(A, B, (), True, 1, 1)
    if len(maps) == 0:
        return Verdict(False)
    return Verdict(True, (Morphism(A, B, tuple(int(v) for v in maps[0])),))


def brute_force_homomorphisms(A: FiniteAlgebra, B: FiniteAlgebra) -> list[Morphism]:
    """Every map checked one by one; the oracle for the pruned search."""
    _check_pair(A, B)
    found = []
    for images in itertools.product(range(B.size), repeat=A.size):
        f = Morphism(A, B, images)
        if f.is_homomorphism():
            found.append(f)
    return found


# ---------------------------------------------------------------------------
# retracts and injectivity


def is_retract_of(B: FiniteAlgebra, A: FiniteAlgebra) -> Verdict:
    """Is there ``g: B -> A`` and ``f: A -> B`` with ``f o g = id_B``?

    Witness is ``(g, f)``: the first embedding, in search order, that admits a
    retraction, together with the first such retraction.
    """
    for g in embeddings(B, A):
        f = first_homomorphism(A, B, [(g.map[b], b) for b in range(B.size)])
        if f is not None:
            return Verdict(True, (g, f))
    return Verdict(False)


def retraction_along(g: Morphism) -> Optional[Morphism]:
    """A left inverse of the embedding ``g``, if one exists."""
    return first_homomorphism(g.target, g.source, [(g.map[b], b) for b in range(g.source.size)])


def is_absolute_retract_relative(A: FiniteAlgebra, cls: Sequence[FiniteAlgebra]) -> Verdict:
    """Is ``A`` a retract of every member of ``cls`` along every embedding?

    On failure the witness is the offending embedding.
    """
    for C in cls:
        for g in embeddings(A, C):
            if retraction_along(g) is None:
                return Verdict(False, (g,))
    return Verdict(True, note="relative to class")


def is_injective_relative(A: FiniteAlgebra, cls: Sequence[FiniteAlgebra]) -> Verdict:
    """For all ``B, C`` in ``cls``, monos ``f: B -> C`` and homs ``g: B -> A``,
    is there ``h: C -> A`` with ``h o f = g``?

    On failure the witness is ``(f, g)``.
    """
    for B in cls:
        homs_to_a = homomorphisms(B, A)
        if not homs_to_a:
            continue
        for C in cls:
            for f in embeddings(B, C):
                for g in homs_to_a:
                    pins = [(f.map[b], g.map[b]) for b in range(B.size)]
                    if not exists_homomorphism(C, A, pins):
                        return Verdict(False, (f, g))
    return Verdict(True, note="relative to class")


def is_self_injective(A: FiniteAlgebra) -> Verdict:
    """Does every homomorphism from a subalgebra of ``A`` into ``A`` extend to
    an endomorphism?  On failure the witness is the non-extendable map."""
    for sub in all_subalgebras(A):
        S, inc = restrict(A, sub)
        for g in homomorphisms(S, A):
            pins = [(inc.map[s], g.map[s]) for s in range(S.size)]
            if not exists_homomorphism(A, A, pins):
                return Verdict(False, (g,))
    return Verdict(True)


def is_rigid(A: FiniteAlgebra) -> bool:
    """The identity is the only automorphism."""
    return len(automorphisms(A)) == 1


def is_hereditarily_simple(A: FiniteAlgebra) -> bool:
    from .structure import simplicity_report

    return simplicity_report(A).hereditarily_simple


@dataclass(frozen=True)
class MaximumSimple:
    algebra: Optional[FiniteAlgebra]
    certificates: tuple[tuple[FiniteAlgebra, FiniteAlgebra], ...] = field(default=())

    def __bool__(self) -> bool:
        return self.algebra is not None

    @property
    def certificate(self) -> Optional[tuple[FiniteAlgebra, FiniteAlgebra]]:
        return self.certificates[0] if self.certificates else None


def maximum_simple(cls: Sequence[FiniteAlgebra]) -> MaximumSimple:
    """The simple member into which every simple member embeds.

    When there is none, every pair of simple members with no common simple
    target in ``cls`` is returned as a certificate (class order).
    """
    from .structure import is_simple

    simples = [A for A in cls if not A.is_trivial() and is_simple(A)]
    if not simples:
        return MaximumSimple(None)
    embeds = [[bool(embeddings(S, T)) for T in simples] for S in simples]
    for j, T in enumerate(simples):
        if all(embeds[i][j] for i in range(len(simples))):
            return MaximumSimple(T)
    certs = []
    for i, j in itertools.combinations(range(len(simples)), 2):
        if not any(embeds[i][k] and embeds[j][k] for k in range(len(simples))):
            certs.append((simples[i], simples[j]))
    return MaximumSimple(None, tuple(certs))


__all__ += ["identity", "Verdict", "MaximumSimple", "first_homomorphism", "retraction_along"]
