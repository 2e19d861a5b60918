"""Products, subalgebras, the diamond extension and the named catalog."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Morphism,
    Signature,
    derive_residual,
    idempotent_mask,
    unity_mask,
)

# ---------------------------------------------------------------------------
# catalog

# Four-element IMTL chain 0 < b < a < 1 (b = neg a), labelled 0, 1, 2, 3.
I4_PROD = [
    [0, 0, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 2, 2],
    [0, 1, 2, 3],
]
I4_IMP = [
    [3, 3, 3, 3],
    [2, 3, 3, 3],
    [1, 1, 3, 3],
    [0, 1, 2, 3],
]

# Six-element IMTL chain 0 < a3 < a2 < t < a1 < 1, labelled 0..5.
I6_PROD = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 2],
    [0, 0, 0, 1, 1, 3],
    [0, 0, 1, 1, 2, 4],
    [0, 1, 2, 3, 4, 5],
]
I6_IMP = [
    [5, 5, 5, 5, 5, 5],
    [4, 5, 5, 5, 5, 5],
    [3, 4, 5, 5, 5, 5],
    [2, 4, 4, 5, 5, 5],
    [1, 3, 4, 4, 5, 5],
    [0, 1, 2, 3, 4, 5],
]


def chain(n: int, prod, imp=None, name: str = "") -> FiniteAlgebra:
    """The chain ``0 < 1 < ... < n-1`` with the given monoid.

    The residual is derived when ``imp`` is omitted.
    """
    r = np.arange(n)
    meet = np.minimum(r[:, None], r[None, :])
    join = np.maximum(r[:, None], r[None, :])
    if imp is None:
        res = derive_residual(r[:, None] <= r[None, :], np.asarray(prod))
        if not res.residuated:
            raise ValueError(f"{name or 'chain'}: monoid is not residuated at {res.witness}")
        imp = res.imp
    return FiniteAlgebra.from_tables(
        Signature.RL, prod, imp, meet=meet, join=join, bot=0, top=n - 1, name=name
    )


def _grid_chain(n: int, prod_rule, imp_rule, name: str) -> FiniteAlgebra:
    if n < 2:
        raise ValueError(f"{name}: size must be at least 2, got {n}")
    pts = [Fraction(k, n - 1) for k in range(n)]
    index = {v: k for k, v in enumerate(pts)}
    prod = [[index[prod_rule(x, y)] for y in pts] for x in pts]
    imp = [[index[imp_rule(x, y)] for y in pts] for x in pts]
    return chain(n, prod, imp, name=name)


def lukasiewicz_chain(n: int) -> FiniteAlgebra:
    return _grid_chain(
        n,
        lambda x, y: max(Fraction(0), x + y - 1),
        lambda x, y: min(Fraction(1), 1 - x + y),
        f"luk:{n}",
    )


def godel_chain(n: int) -> FiniteAlgebra:
    return _grid_chain(
        n,
        lambda x, y: min(x, y),
        lambda x, y: Fraction(1) if x <= y else y,
        f"godel:{n}",
    )


def nm_chain(n: int) -> FiniteAlgebra:
    return _grid_chain(
        n,
        lambda x, y: min(x, y) if x + y > 1 else Fraction(0),
        lambda x, y: Fraction(1) if x <= y else max(y, 1 - x),
        f"nm:{n}",
    )


def ordinal_wnm(n: int) -> FiniteAlgebra:
    """Simple WNM chain: products below top vanish, ``x -> y`` is the coatom for ``y < x < 1``."""
    if n < 2:
        raise ValueError(f"ordwnm: size must be at least 2, got {n}")
    top, u = n - 1, n - 2
    prod = [[x if y == top else y if x == top else 0 for y in range(n)] for x in range(n)]
    imp = [
        [top if x <= y else y if x == top else u for y in range(n)]
        for x in range(n)
    ]
    return chain(n, prod, imp, name=f"ordwnm:{n}")


def boolean_cube(k: int) -> FiniteAlgebra:
    """Subsets of a ``k``-set as bitmasks; ``prod`` is intersection."""
    if k < 1:
        raise ValueError(f"bool: exponent must be at least 1, got {k}")
    n = 1 << k
    r = np.arange(n)
    meet = r[:, None] & r[None, :]
    join = r[:, None] | r[None, :]
    imp = (~r[:, None] & (n - 1)) | r[None, :]
    return FiniteAlgebra.from_tables(
        Signature.RL, meet, imp, meet=meet, join=join, bot=0, top=n - 1, name=f"bool:{k}"
    )


def _i4() -> FiniteAlgebra:
    return chain(4, I4_PROD, I4_IMP, name="I4")


def _i6() -> FiniteAlgebra:
    return chain(6, I6_PROD, I6_IMP, name="I6")


_FIXED: dict[str, Callable[[], FiniteAlgebra]] = {
    "2": lambda: godel_chain(2).with_name("2"),
    "H3": lambda: godel_chain(3).with_name("H3"),
    "H4": lambda: godel_chain(4).with_name("H4"),
    "I4": _i4,
    "I6": _i6,
    "L3": lambda: lukasiewicz_chain(3).with_name("L3"),
}

_FAMILIES: dict[str, Callable[[int], FiniteAlgebra]] = {
    "bool": boolean_cube,
    "luk": lukasiewicz_chain,
    "godel": godel_chain,
    "nm": nm_chain,
    "ordwnm": ordinal_wnm,
}


def catalog_names() -> list[str]:
    return list(_FIXED) + [f"{fam}:n" for fam in _FAMILIES]


def catalog_get(name: str, n: Optional[int] = None) -> FiniteAlgebra:
    """Look up ``"H4"``, ``"nm:6"`` or ``("nm", 6)``."""
    if n is None and ":" in name:
        name, _, raw = name.partition(":")
        try:
            n = int(raw)
        except ValueError:
            raise KeyError(f"bad size parameter {raw!r}") from None
    if name in _FIXED:
        if n is not None:
            raise KeyError(f"{name} takes no size parameter")
        return _FIXED[name]()
    if name in _FAMILIES:
        if n is None:
            raise KeyError(f"{name} needs a size parameter, e.g. {name}:4")
        if n < (1 if name == "bool" else 2):
            raise ValueError(f"{name}:{n} is below the smallest allowed size")
        return _FAMILIES[name](n)
    raise KeyError(f"unknown catalog algebra {name!r}")


def standard_catalog(max_size: Optional[int] = None) -> list[FiniteAlgebra]:
    """Fixed algebras plus the parameterised families at their tested sizes."""
    algs = [catalog_get(k) for k in _FIXED]
    algs += [boolean_cube(k) for k in (1, 2, 3)]
    for fam in ("luk", "godel", "nm"):
        algs += [catalog_get(fam, n) for n in range(2, 7)]
    algs += [ordinal_wnm(n) for n in range(2, 9)]
    if max_size is not None:
        algs = [A for A in algs if A.size <= max_size]
    return algs


# ---------------------------------------------------------------------------
# products and subalgebras


def direct_product(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product; the pair ``(a, b)`` is element ``a*|B| + b``."""
    if A.signature is not B.signature:
        raise ValueError(f"signature mismatch: {A.signature.value} vs {B.signature.value}")
    nb = B.size

    def pair(ta, tb):
        if ta is None:
            return None
        return (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(A.size * nb, A.size * nb)

    bot = None if A.bot is None else A.bot * nb + B.bot
    return FiniteAlgebra.from_tables(
        A.signature,
        pair(A.prod, B.prod),
        pair(A.imp, B.imp),
        meet=pair(A.meet, B.meet) if A.signature is Signature.RL else None,
        join=pair(A.join, B.join),
        bot=bot,
        top=A.top * nb + B.top,
        name=f"{A.name or '?'}x{B.name or '?'}",
    )


def projections(A: FiniteAlgebra, B: FiniteAlgebra, P: FiniteAlgebra) -> tuple[Morphism, Morphism]:
    nb = B.size
    return (
        Morphism(P, A, tuple(i // nb for i in range(P.size))),
        Morphism(P, B, tuple(i % nb for i in range(P.size))),
    )


def closure(A: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing ``seed`` and the constants, closed under the operations."""
    members = set(int(s) for s in seed) | set(A.constants())
    ops = A.ops()
    frontier = list(members)
    while frontier:
        new = set()
        cur = np.fromiter(members, dtype=np.int64)
        front = np.asarray(frontier, dtype=np.int64)
        for t in ops:
            new.update(t[np.ix_(front, cur)].ravel().tolist())
            new.update(t[np.ix_(cur, front)].ravel().tolist())
        new -= members
        members |= new
        frontier = list(new)
    return frozenset(members)


def restrict(A: FiniteAlgebra, subset: Iterable[int], name: str = "") -> tuple[FiniteAlgebra, Morphism]:
    """The subalgebra on a closed ``subset`` (relabelled in index order) and its inclusion."""
    elems = sorted(subset)
    pos = {e: i for i, e in enumerate(elems)}
    idx = np.asarray(elems, dtype=np.int64)
    if len(elems) != len(set(elems)):
        raise ValueError("duplicate elements in subset")

    def cut(t):
        if t is None:
            return None
        sub = t[np.ix_(idx, idx)]
        try:
            return [[pos[int(v)] for v in row] for row in sub]
        except KeyError as exc:
            raise ValueError(f"subset is not closed: produces {exc.args[0]}") from None

    B = FiniteAlgebra.from_tables(
        A.signature,
        cut(A.prod),
        cut(A.imp),
        meet=cut(A.meet) if A.signature is Signature.RL else None,
        join=cut(A.join),
        bot=None if A.bot is None else pos[A.bot],
        top=pos[A.top],
        name=name or f"{A.name or '?'}{list(elems)}",
    )
    return B, Morphism(B, A, tuple(elems))


def subalgebra_generated(A: FiniteAlgebra, seed: Iterable[int]) -> tuple[FiniteAlgebra, Morphism]:
    return restrict(A, closure(A, seed))


def _subset_key(s) -> tuple:
    return (len(s), tuple(sorted(s)))


def all_subalgebras(A: FiniteAlgebra) -> list[frozenset[int]]:
    """Every operation-closed subset containing the constants."""
    cached = A._cache.get("subalgebras")
    if cached is not None:
        return cached
    start = closure(A, ())
    seen = {start}
    todo = [start]
    while todo:
        s = todo.pop()
        for x in range(A.size):
            if x not in s:
                t = closure(A, s | {x})
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    out = sorted(seen, key=_subset_key)
    A._cache["subalgebras"] = out
    return out


# ---------------------------------------------------------------------------
# diamond extension


def diamond(A: FiniteAlgebra) -> tuple[FiniteAlgebra, Morphism]:
    """Pairs ``(a, b)`` with ``a <= b`` and the diagonal embedding ``a -> (a, a)``.

    Pairs are numbered in ``(b, a)`` index order, so ``(0, 0)`` comes first
    and ``(1, 1)`` last.
    """
    if A.signature is not Signature.RL:
        raise ValueError("the diamond extension needs a residuated lattice")
    M, J, P, I = A.meet, A.join, A.prod, A.imp
    pairs = sorted(
        ((a, b) for a in range(A.size) for b in range(A.size) if A.leq[a, b]),
        key=lambda p: (p[1], p[0]),
    )
    index = {p: k for k, p in enumerate(pairs)}
    a = np.array([p[0] for p in pairs])[:, None]
    b = np.array([p[1] for p in pairs])[:, None]
    c = a.T
    d = b.T

    def encode(first, second):
        return [[index[(int(f), int(s))] for f, s in zip(fr, sr)] for fr, sr in zip(first, second)]

    meet = encode(M[a, c], M[b, d])
    join = encode(J[a, c], J[b, d])
    prod = encode(P[a, c], J[P[a, d], P[c, b]])
    imp = encode(M[I[a, c], I[b, d]], I[a, d])
    D = FiniteAlgebra.from_tables(
        Signature.RL, prod, imp, meet=meet, join=join,
        bot=index[(A.bot, A.bot)], top=index[(A.top, A.top)],
        name=f"diamond({A.name or '?'})",
    )
    D._cache["pairs"] = pairs
    return D, Morphism(A, D, tuple(index[(x, x)] for x in range(A.size)))


def diamond_pairs(D: FiniteAlgebra) -> list[tuple[int, int]]:
    return D._cache["pairs"]


# ---------------------------------------------------------------------------
# obstruction configurations


@dataclass(frozen=True)
class Obstruction:
    witness: Optional[tuple[int, int]]
    radical_dense: bool

    def __bool__(self) -> bool:
        return self.witness is not None


def is_test_d(A: FiniteAlgebra) -> Obstruction:
    """Least ``(eps, t)`` in the radical with ``eps`` idempotent, ``t < eps < 1``
    and ``eps -> t <= eps``.

    Whether the radical equals the dense set is reported alongside, since the
    configuration only obstructs injectives in radical-dense classes.
    """
    from .structure import radical_report

    rep = radical_report(A)
    rad = sorted(rep.radical.members)
    idem = idempotent_mask(A)
    for eps in rad:
        if eps == A.top or not idem[eps]:
            continue
        for t in rad:
            if A.lt(t, eps) and A.leq[A.imp[eps, t], eps]:
                return Obstruction((eps, t), rep.radical_dense)
    return Obstruction(None, rep.radical_dense)


def is_test_I(A: FiniteAlgebra) -> Obstruction:
    """Least ``(eps, t)``: ``{0, neg eps, eps, 1}`` is a subalgebra isomorphic
    to I4 and ``t < eps`` lies in the radical."""
    from .morphisms import is_isomorphic
    from .structure import radical_report

    rep = radical_report(A)
    units = unity_mask(A)
    i4 = catalog_get("I4")
    for eps in range(A.size):
        quad = {A.bot, int(A.neg[eps]), eps, A.top}
        if len(quad) != 4 or closure(A, quad) != quad:
            continue
        sub, _ = restrict(A, quad)
        if not is_isomorphic(sub, i4):
            continue
        for t in range(A.size):
            if units[t] and A.lt(t, eps):
                return Obstruction((eps, t), rep.radical_dense)
    return Obstruction(None, rep.radical_dense)
