"""Implicative filters, congruences, quotients, radicals and related checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Morphism,
    dense_mask,
    is_linearly_ordered,
    nilpotent_mask,
    unity_mask,
)
from .constructions import all_subalgebras, restrict
from .varieties import Eq, holds_equation


class InconsistentResult(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True, eq=False)
class Filter:
    algebra: FiniteAlgebra
    members: frozenset[int]

    @property
    def proper(self) -> bool:
        return self.algebra.bot not in self.members

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        if isinstance(other, Filter):
            return self.algebra is other.algebra and self.members == other.members
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.members))

    def __repr__(self) -> str:
        return f"Filter({list(self.sorted())})"


def _key(members) -> tuple:
    return (len(members), tuple(sorted(members)))


def is_filter(A: FiniteAlgebra, subset: Iterable[int]) -> bool:
    """Contains top, is upward closed and closed under the product."""
    s = set(subset)
    if A.top not in s:
        return False
    idx = np.fromiter(s, dtype=np.int64)
    if not set(A.prod[np.ix_(idx, idx)].ravel().tolist()) <= s:
        return False
    above = np.flatnonzero(A.leq[idx].any(axis=0))
    return set(above.tolist()) <= s


def _up(A: FiniteAlgebra, members: set[int]) -> set[int]:
    idx = np.fromiter(members, dtype=np.int64)
    return set(np.flatnonzero(A.leq[idx].any(axis=0)).tolist())


def filter_generated(A: FiniteAlgebra, seed: Iterable[int]) -> Filter:
    """Upward closure of the product closure of ``seed`` and top."""
    members = set(int(s) for s in seed) | {A.top}
    while True:
        idx = np.fromiter(members, dtype=np.int64)
        grown = members | set(A.prod[np.ix_(idx, idx)].ravel().tolist())
        if grown == members:
            break
        members = grown
    return Filter(A, frozenset(_up(A, members)))


def all_filters(A: FiniteAlgebra, maximal_only: bool = False) -> list[Filter]:
    """Every implicative filter, or only the maximal proper ones.

    Grows filters from ``{top}`` one generator at a time; sorted by size and
    then by member list.
    """
    cached = A._cache.get("filters")
    if cached is None:
        start = filter_generated(A, ())
        seen = {start.members: start}
        todo = [start]
        while todo:
            F = todo.pop()
            for x in range(A.size):
                if x not in F.members:
                    G = filter_generated(A, F.members | {x})
                    if G.members not in seen:
                        seen[G.members] = G
                        todo.append(G)
        cached = sorted(seen.values(), key=lambda F: _key(F.members))
        A._cache["filters"] = cached
    if not maximal_only:
        return list(cached)
    proper = [F for F in cached if F.proper]
    return [F for F in proper if not any(F.members < G.members for G in proper)]


def all_filters_bruteforce(A: FiniteAlgebra) -> list[Filter]:
    """Every subset tested against the filter conditions (oracle)."""
    found = []
    for bits in range(1 << A.size):
        s = {x for x in range(A.size) if bits >> x & 1}
        if is_filter(A, s):
            found.append(Filter(A, frozenset(s)))
    return sorted(found, key=lambda F: _key(F.members))


# ---------------------------------------------------------------------------
# congruences


@dataclass(frozen=True, eq=False)
class CongruencePartition:
    """``blocks[x]`` is the least element of the class of ``x``."""

    algebra: FiniteAlgebra
    blocks: tuple[int, ...]

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for x, b in enumerate(self.blocks):
            groups.setdefault(b, []).append(x)
        return [groups[b] for b in sorted(groups)]

    def related(self, x: int, y: int) -> bool:
        return self.blocks[x] == self.blocks[y]

    def __eq__(self, other) -> bool:
        if isinstance(other, CongruencePartition):
            return self.algebra is other.algebra and self.blocks == other.blocks
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.blocks))

    def __repr__(self) -> str:
        return f"Congruence({self.classes()})"


def _normalise(labels) -> tuple[int, ...]:
    first: dict[int, int] = {}
    for x, lab in enumerate(labels):
        first.setdefault(int(lab), x)
    return tuple(first[int(lab)] for lab in labels)


def is_congruence(A: FiniteAlgebra, blocks) -> bool:
    b = np.asarray(blocks, dtype=np.int64)
    # compatible iff the block of t[x, y] depends only on the blocks of x and y
    for t in A.ops():
        img = b[t]
        key = b[:, None] * A.size + b[None, :]
        seen: dict[int, int] = {}
        for k, v in zip(key.ravel().tolist(), img.ravel().tolist()):
            if seen.setdefault(k, v) != v:
                return False
    return True


def congruence_of_filter(F: Filter) -> CongruencePartition:
    A = F.algebra
    inside = np.zeros(A.size, dtype=bool)
    inside[list(F.members)] = True
    rel = inside[A.imp] & inside[A.imp.T]
    labels = rel.argmax(axis=1)
    return CongruencePartition(A, _normalise(labels))


def filter_of(theta: CongruencePartition) -> Filter:
    A = theta.algebra
    top_block = theta.blocks[A.top]
    return Filter(A, frozenset(x for x in range(A.size) if theta.blocks[x] == top_block))


def _set_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n``."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(labels)
            return
        for v in range(top + 2):
            labels[i] = v
            yield from rec(i + 1, max(top, v))

    labels[0] = 0
    yield from rec(1, 0)


def all_congruences(A: FiniteAlgebra) -> list[CongruencePartition]:
    """Every compatible partition, by exhaustive enumeration (oracle)."""
    out = []
    for labels in _set_partitions(A.size):
        blocks = _normalise(labels)
        if is_congruence(A, blocks):
            out.append(CongruencePartition(A, blocks))
    return out


# ---------------------------------------------------------------------------
# quotients


def _quotient_labels(A: FiniteAlgebra, theta: CongruencePartition) -> np.ndarray:
    reps = sorted(set(theta.blocks))
    bot_rep = theta.blocks[A.bot] if A.bot is not None else None
    top_rep = theta.blocks[A.top]
    middle = [r for r in reps if r != bot_rep and r != top_rep]
    order = ([bot_rep] if bot_rep is not None and bot_rep != top_rep else []) + middle + [top_rep]
    pos = {r: i for i, r in enumerate(order)}
    return np.array([pos[theta.blocks[x]] for x in range(A.size)], dtype=np.int64)


def projection(A: FiniteAlgebra, F: Filter) -> Morphism:
    """The canonical map onto ``A/F`` (bot block first, top block last)."""
    theta = congruence_of_filter(F)
    lab = _quotient_labels(A, theta)
    m = int(lab.max()) + 1
    reps = np.zeros(m, dtype=np.int64)
    for x in range(A.size - 1, -1, -1):
        reps[lab[x]] = x

    def cut(t):
        return None if t is None else lab[t[np.ix_(reps, reps)]]

    Q = FiniteAlgebra.from_tables(
        A.signature,
        cut(A.prod),
        cut(A.imp),
        meet=cut(A.meet) if A.join is not None else None,
        join=cut(A.join),
        bot=None if A.bot is None else int(lab[A.bot]),
        top=int(lab[A.top]),
        name=f"{A.name or '?'}/{list(F.sorted())}",
    )
    p = Morphism(A, Q, tuple(int(v) for v in lab))
    if not p.is_homomorphism():
        raise InconsistentResult(f"projection onto {Q.name} is not a homomorphism")
    return p


def quotient(A: FiniteAlgebra, F: Filter) -> FiniteAlgebra:
    return projection(A, F).target


# ---------------------------------------------------------------------------
# radical and simplicity


@dataclass(frozen=True)
class RadicalReport:
    radical: Filter
    dense: Filter
    principal_unity: Optional[int]
    semisimple: bool
    radical_dense: bool


def radical_by_maximal_filters(A: FiniteAlgebra) -> frozenset[int]:
    maximal = all_filters(A, maximal_only=True)
    members = frozenset(range(A.size))
    for F in maximal:
        members &= F.members
    return members


def radical_report(A: FiniteAlgebra) -> RadicalReport:
    """Radical (computed two ways and cross-checked), dense filter, principal unity."""
    if A.bot is None:
        raise ValueError(f"{A!r} has no bot; the radical needs negation")
    by_filters = radical_by_maximal_filters(A)
    by_unities = frozenset(np.flatnonzero(unity_mask(A)).tolist())
    if by_filters != by_unities:
        raise InconsistentResult(
            f"radical of {A!r}: maximal filters give {sorted(by_filters)}, "
            f"unities give {sorted(by_unities)}"
        )
    radical = Filter(A, by_filters)
    dense = Filter(A, frozenset(np.flatnonzero(dense_mask(A)).tolist()))
    acc = A.top
    for x in radical.members:
        acc = int(A.prod[acc, x])
    principal = acc if acc in radical.members and all(
        A.leq[acc, x] for x in radical.members
    ) else None
    return RadicalReport(
        radical=radical,
        dense=dense,
        principal_unity=principal,
        semisimple=radical.members == {A.top},
        radical_dense=radical.members == dense.members,
    )


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    hereditarily_simple: bool


def is_simple(A: FiniteAlgebra) -> bool:
    """Exactly two filters, cross-checked against "every element below top is nilpotent"."""
    by_filters = len(all_filters(A)) == 2
    if A.bot is not None:
        nil = nilpotent_mask(A)
        by_nilpotence = A.size > 1 and all(nil[x] for x in range(A.size) if x != A.top)
        if by_filters != by_nilpotence:
            raise InconsistentResult(
                f"simplicity of {A!r}: filter count says {by_filters}, nilpotence says {by_nilpotence}"
            )
    return by_filters


def simplicity_report(A: FiniteAlgebra) -> SimplicityReport:
    if A.is_trivial():
        raise ValueError("simplicity is not defined for the trivial algebra")
    simple = is_simple(A)
    hereditary = simple and all(is_simple(restrict(A, s)[0]) for s in all_subalgebras(A))
    return SimplicityReport(simple, hereditary)


# ---------------------------------------------------------------------------
# subdirect decomposition into chains


@dataclass(frozen=True)
class ChainDecomposition:
    prelinear: bool
    filters: tuple[Filter, ...] = ()
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.prelinear


def chain_decomposition(A: FiniteAlgebra) -> ChainDecomposition:
    """Filters whose quotients are chains and whose congruences meet in the identity.

    Chosen greedily by the number of still-unseparated pairs each filter
    separates; the family is small but not guaranteed to be the smallest.
    """
    res = holds_equation(A, Eq.PRELIN)
    if not res.holds:
        return ChainDecomposition(False, witness=res.witness)
    pairs = {(x, y) for x in range(A.size) for y in range(x + 1, A.size)}
    candidates = []
    for F in all_filters(A):
        if is_linearly_ordered(quotient(A, F)):
            theta = congruence_of_filter(F)
            sep = {(x, y) for (x, y) in pairs if not theta.related(x, y)}
            candidates.append((F, sep))
    chosen = []
    left = set(pairs)
    while left:
        F, sep = max(candidates, key=lambda c: len(c[1] & left))
        gain = sep & left
        if not gain:
            raise InconsistentResult(f"{A!r} is prelinear but chain quotients do not separate {sorted(left)[0]}")
        chosen.append(F)
        left -= gain
    if not chosen:
        chosen = [filter_generated(A, ())]
    return ChainDecomposition(True, tuple(sorted(chosen, key=lambda F: _key(F.members))))


# ---------------------------------------------------------------------------
# congruence extension


@dataclass(frozen=True)
class CEPResult:
    holds: bool
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.holds


def cep_check(A: FiniteAlgebra) -> CEPResult:
    """Every filter of every subalgebra is the trace of a filter of ``A``.

    Witness on failure: (subalgebra members, filter members in ``A``'s labels).
    """
    for sub in all_subalgebras(A):
        B, inc = restrict(A, sub)
        for F in all_filters(B):
            image = frozenset(inc.map[x] for x in F.members)
            G = filter_generated(A, image)
            if G.members & sub != image:
                return CEPResult(False, (tuple(sorted(sub)), tuple(sorted(image))))
    return CEPResult(True)


# ---------------------------------------------------------------------------
# radical quotient


def radical_quotient(A: FiniteAlgebra) -> Morphism:
    """Projection ``A -> A/Rad(A)``."""
    return projection(A, radical_report(A).radical)


def induced_on_radical_quotients(f: Morphism) -> Morphism:
    """``[x] -> [f(x)]`` between the radical quotients of source and target."""
    p = radical_quotient(f.source)
    q = radical_quotient(f.target)
    image: dict[int, int] = {}
    for x in range(f.source.size):
        v = q.map[f.map[x]]
        if image.setdefault(p.map[x], v) != v:
            raise InconsistentResult("the induced map on radical quotients is not well defined")
    return Morphism(p.target, q.target, tuple(image[k] for k in range(p.target.size)))
