"""Small residuated lattices and bounded hoops up to isomorphism.

Two independent routes produce the same classes:

* lattice first: bounded lattices on ``n`` points, then order-monotone
  commutative monoids on each (the kernel prunes by monotonicity and
  associativity), keeping those with a residual;
* monoid first: commutative monoids with identity and zero, with no order
  information, then every lattice order making them monotone and residuated.

Both deduplicate by :func:`canonical_form`.
"""
from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from ._accel import worker_count
from .algebra import FiniteAlgebra, Signature, derive_residual, validate_axioms
from .varieties import classify

log = logging.getLogger(__name__)

MAX_SIZE = 6
MAX_CHAIN_SIZE = 7


# ---------------------------------------------------------------------------
# canonical forms


def linear_extensions(leq: np.ndarray, first: int, last: int) -> list[tuple[int, ...]]:
    """Orderings of the carrier compatible with ``leq`` that start at ``first``
    and end at ``last``.  Each is returned as the list of elements by position."""
    n = leq.shape[0]
    below = [set(np.flatnonzero(leq[:, x]).tolist()) - {x} for x in range(n)]
    out: list[tuple[int, ...]] = []
    placed: list[int] = [first]
    done = {first}

    def rec():
        if len(placed) == n - 1:
            if last not in done:
                out.append(tuple(placed) + (last,))
            return
        for x in range(n):
            if x in done or x == last or not below[x] <= done:
                continue
            placed.append(x)
            done.add(x)
            rec()
            placed.pop()
            done.discard(x)

    if n == 1:
        return [(first,)]
    rec()
    return out


@dataclass(frozen=True)
class CanonicalKey:
    data: bytes

    def __lt__(self, other: "CanonicalKey") -> bool:
        return self.data < other.data

    def hex(self) -> str:
        return self.data.hex()


def canonical_form(A: FiniteAlgebra) -> tuple[CanonicalKey, FiniteAlgebra]:
    """Least table encoding over relabellings that list the order bottom-up.

    Any isomorphism preserves the order, so the candidate set (and hence the
    minimum) depends only on the isomorphism class.
    """
    cached = A._cache.get("canonical")
    if cached is not None:
        return cached
    n = A.size
    least = A.bot if A.bot is not None else int(np.flatnonzero(A.leq.all(axis=1))[0])
    exts = np.array(linear_extensions(A.leq, least, A.top), dtype=np.int64)
    # perms[k, x] is the new label of x under extension k
    perms = np.empty_like(exts)
    rows = np.arange(exts.shape[0])[:, None]
    perms[rows, exts] = np.arange(n)[None, :]
    tables = [A.meet, A.prod, A.imp]
    k = rows
    enc = [perms[k[:, :, None], t[exts[:, :, None], exts[:, None, :]]] for t in tables]
    flat = np.concatenate([e.reshape(len(exts), -1) for e in enc], axis=1).astype(np.uint8)
    best = min(range(len(exts)), key=lambda i: flat[i].tobytes())
    header = bytes([n, list(Signature).index(A.signature)])
    key = CanonicalKey(header + flat[best].tobytes())
    relabelled = A.relabel(perms[best])
    relabelled._cache["canonical"] = (key, relabelled)
    A._cache["canonical"] = (key, relabelled)
    return key, relabelled


# ---------------------------------------------------------------------------
# lattices


def _lattice_ops(leq: np.ndarray) -> Optional[tuple[np.ndarray, np.ndarray]]:
    n = leq.shape[0]
    meet = np.empty((n, n), np.int64)
    join = np.empty((n, n), np.int64)
    for x in range(n):
        for y in range(x, n):
            lower = np.flatnonzero(leq[:, x] & leq[:, y])
            glb = [z for z in lower if leq[lower, z].all()]
            upper = np.flatnonzero(leq[x] & leq[y])
            lub = [z for z in upper if leq[z, upper].all()]
            if not glb or not lub:
                return None
            meet[x, y] = meet[y, x] = glb[0]
            join[x, y] = join[y, x] = lub[0]
    return meet, join


@lru_cache(maxsize=None)
def bounded_lattices(n: int, chains_only: bool = False) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]:
    """Bounded lattices on ``0..n-1`` (0 bottom, n-1 top) whose labelling is a
    linear extension of the order.  Isomorphic copies may repeat."""
    if n == 1:
        one = np.ones((1, 1), bool)
        z = np.zeros((1, 1), np.int64)
        return ((one, z, z),)
    inner = list(range(1, n - 1))
    pairs = [(i, j) for i in inner for j in inner if i < j]
    out = []
    choices = [tuple(1 for _ in pairs)] if chains_only else itertools.product((0, 1), repeat=len(pairs))
    for bits in choices:
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for (i, j), b in zip(pairs, bits):
            if b:
                leq[i, j] = True
        # transitively closed already?
        if not np.array_equal((leq.astype(np.int64) @ leq.astype(np.int64)) > 0, leq):
            continue
        ops = _lattice_ops(leq)
        if ops is None:
            continue
        for arr in (leq, *ops):
            arr.setflags(write=False)
        out.append((leq, *ops))
    return tuple(out)


# ---------------------------------------------------------------------------
# building candidates


def _build(signature: Signature, leq, meet, join, prod) -> Optional[FiniteAlgebra]:
    res = derive_residual(leq, prod)
    if not res.residuated:
        return None
    n = prod.shape[0]
    if signature is Signature.RL:
        A = FiniteAlgebra.from_tables(
            signature, prod, res.imp, meet=meet, join=join, bot=0, top=n - 1
        )
    else:
        bot = 0 if signature is Signature.BOUNDED_HOOP else None
        A = FiniteAlgebra.from_tables(signature, prod, res.imp, bot=bot, top=n - 1)
        # the hoop order must be the lattice order we started from
        if not np.array_equal(A.meet, meet):
            return None
    if not validate_axioms(A).valid:
        return None
    return A


def _wanted(A: FiniteAlgebra, variety: tuple[str, ...]) -> bool:
    return not variety or classify(A).memberships.issuperset(variety)


def _dedupe(algs: Iterable[FiniteAlgebra]) -> dict[CanonicalKey, FiniteAlgebra]:
    found: dict[CanonicalKey, FiniteAlgebra] = {}
    for A in algs:
        key, canon = canonical_form(A)
        found.setdefault(key, canon)
    return found


def _lattice_first(n, signature, variety, chains_only):
    def work(lat):
        leq, meet, join = lat
        leq_c = np.ascontiguousarray(leq)
        monoids = _kernels.collect(
            _kernels.ordered_monoids, leq_c, meet, 0, n - 1, shape=(n, n)
        )
        algs = []
        for prod in monoids:
            A = _build(signature, leq, meet, join, prod)
            if A is not None and _wanted(A, variety):
                algs.append(A)
        return algs

    lattices = bounded_lattices(n, chains_only)
    workers = min(worker_count(), len(lattices))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            batches = list(pool.map(work, lattices))
    else:
        batches = [work(lat) for lat in lattices]
    return _dedupe(A for batch in batches for A in batch)


def _monoid_first(n, signature, variety, chains_only):
    monoids = _kernels.collect(_kernels.unordered_monoids, n, 0, n - 1, shape=(n, n))
    algs = []
    for leq, meet, join in bounded_lattices(n, chains_only):
        # monotone in each argument: x <= y implies p[x, z] <= p[y, z]
        for prod in monoids:
            lo = prod[:, None, :]
            hi = prod[None, :, :]
            ok = ~leq[:, :, None] | leq[lo, hi]
            if not ok.all():
                continue
            A = _build(signature, leq, meet, join, prod)
            if A is not None and _wanted(A, variety):
                algs.append(A)
    return _dedupe(algs)


def _check_size(n: int, chains_only: bool):
    bound = MAX_CHAIN_SIZE if chains_only else MAX_SIZE
    if not 1 <= n <= bound:
        kind = "chains" if chains_only else "general algebras"
        raise ValueError(f"size {n} is outside the supported range 1..{bound} for {kind}")


def _normalise_variety(variety) -> tuple[str, ...]:
    if variety is None:
        return ()
    if isinstance(variety, str):
        variety = [v for v in variety.replace("+", ",").split(",") if v]
    return tuple(sorted(set(variety)))


@lru_cache(maxsize=None)
def _enumerate_cached(n, signature, variety, chains_only, strategy) -> tuple[FiniteAlgebra, ...]:
    route = _lattice_first if strategy == "lattice" else _monoid_first
    found = route(n, signature, variety, chains_only)
    prefix = {Signature.RL: "rl", Signature.HOOP: "hoop", Signature.BOUNDED_HOOP: "bhoop"}[signature]
    out = []
    for i, key in enumerate(sorted(found)):
        A = found[key]
        out.append(A.with_name(f"{prefix}{n}{'c' if chains_only else ''}_{i}"))
        out[-1]._cache["canonical"] = (key, out[-1])
    return tuple(out)


def enumerate_algebras(
    n: int,
    signature=Signature.RL,
    variety=None,
    chains_only: bool = False,
) -> list[FiniteAlgebra]:
    """One representative per isomorphism class, sorted by canonical key.

    ``variety`` is a membership name or a collection of names (all must hold).
    """
    _check_size(n, chains_only)
    return list(
        _enumerate_cached(n, Signature(signature), _normalise_variety(variety), chains_only, "lattice")
    )


def enumerate_by_monoids(n, signature=Signature.RL, variety=None, chains_only=False) -> list[FiniteAlgebra]:
    """The monoid-first route; slower, used as the cross-check."""
    _check_size(n, chains_only)
    if n > 5:
        raise ValueError("the monoid-first route is limited to size 5")
    return list(
        _enumerate_cached(n, Signature(signature), _normalise_variety(variety), chains_only, "monoid")
    )


@dataclass(frozen=True)
class CountCheck:
    count_a: int
    count_b: int
    keys_agree: bool

    @property
    def agree(self) -> bool:
        return self.count_a == self.count_b and self.keys_agree


def count_crosscheck(n: int, signature=Signature.RL, chains_only: bool = False) -> CountCheck:
    a = enumerate_algebras(n, signature, chains_only=chains_only)
    b = enumerate_by_monoids(n, signature, chains_only=chains_only)
    ka = [canonical_form(A)[0] for A in a]
    kb = [canonical_form(A)[0] for A in b]
    return CountCheck(len(a), len(b), ka == kb)
