"""Finite residuated lattices and (bounded) hoops as operation tables.

The carrier is always ``0..n-1``.  Tables are row-major with the left operand
as row index, so ``imp[x, y]`` is ``x -> y``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import _kernels


class Signature(str, Enum):
    RL = "rl"
    HOOP = "hoop"
    BOUNDED_HOOP = "bounded_hoop"

    @property
    def has_bot(self) -> bool:
        return self is not Signature.HOOP

    @property
    def has_join(self) -> bool:
        return self is Signature.RL


class StructuralError(ValueError):
    """Tables are malformed (wrong shape, out-of-range entry, missing part)."""


class InvalidAlgebra(ValueError):
    """Tables are well formed but violate the axioms of the signature."""

    def __init__(self, report: "ValidationReport"):
        super().__init__(report.summary())
        self.report = report


def _table(name: str, data, n: int) -> np.ndarray:
    try:
        t = np.array(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"{name}: not an integer table ({exc})") from None
    if t.shape != (n, n):
        raise StructuralError(f"{name}: expected shape {(n, n)}, got {t.shape}")
    if t.size and (t.min() < 0 or t.max() >= n):
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise StructuralError(
            f"{name}[{bad[0]}][{bad[1]}] = {t[bad[0], bad[1]]} is outside 0..{n - 1}"
        )
    t.setflags(write=False)
    return t


def _index(name: str, value, n: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise StructuralError(f"{name}: expected an element index, got {value!r}")
    if not 0 <= value < n:
        raise StructuralError(f"{name} = {value} is outside 0..{n - 1}")
    return int(value)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """An algebra on ``{0..size-1}`` given by total operation tables.

    For hoop signatures ``meet`` is the derived ``x (.) (x -> y)`` and
    ``join`` is ``None``; for plain hoops ``bot`` is ``None`` as well.
    Instances are immutable; build them with :meth:`from_tables`.
    """

    size: int
    signature: Signature
    meet: np.ndarray
    join: Optional[np.ndarray]
    prod: np.ndarray
    imp: np.ndarray
    bot: Optional[int]
    top: int
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_tables(
        cls,
        signature,
        prod,
        imp,
        *,
        meet=None,
        join=None,
        bot=None,
        top=None,
        name: str = "",
    ) -> "FiniteAlgebra":
        """Check shapes and ranges, derive hoop meets, freeze the tables."""
        sig = Signature(signature)
        try:
            n = len(prod)
        except TypeError:
            raise StructuralError("prod: not a table") from None
        if n < 1:
            raise StructuralError("the carrier must be nonempty")
        prod_t = _table("prod", prod, n)
        imp_t = _table("imp", imp, n)
        if top is None:
            raise StructuralError("top is required")
        top_i = _index("top", top, n)
        if sig.has_bot:
            if bot is None:
                raise StructuralError(f"bot is required for signature {sig.value!r}")
            bot_i = _index("bot", bot, n)
        else:
            if bot is not None:
                raise StructuralError("a plain hoop has no bot constant")
            bot_i = None
        if sig is Signature.RL:
            if meet is None or join is None:
                missing = "meet" if meet is None else "join"
                raise StructuralError(f"{missing} is required for signature 'rl'")
            meet_t = _table("meet", meet, n)
            join_t = _table("join", join, n)
        else:
            if join is not None:
                raise StructuralError(f"signature {sig.value!r} has no join")
            derived = prod_t[np.arange(n)[:, None], imp_t]
            if meet is not None and not np.array_equal(_table("meet", meet, n), derived):
                raise StructuralError("meet does not match the derived hoop meet x*(x->y)")
            derived.setflags(write=False)
            meet_t = derived
            join_t = None
        return cls(n, sig, meet_t, join_t, prod_t, imp_t, bot_i, top_i, name)

    # -- derived structure -------------------------------------------------

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[x, y]`` iff ``x <= y``, read off the meet table."""
        m = self.meet == np.arange(self.size)[:, None]
        m.setflags(write=False)
        return m

    @cached_property
    def neg(self) -> Optional[np.ndarray]:
        if self.bot is None:
            return None
        return self.imp[:, self.bot]

    def ops(self) -> tuple[np.ndarray, ...]:
        """Operation tables a homomorphism must preserve, in a fixed order."""
        if self.signature is Signature.RL:
            return (self.meet, self.join, self.prod, self.imp)
        return (self.prod, self.imp)

    def constants(self) -> tuple[int, ...]:
        if self.bot is None:
            return (self.top,)
        return (self.bot, self.top)

    def with_name(self, name: str) -> "FiniteAlgebra":
        return FiniteAlgebra(
            self.size, self.signature, self.meet, self.join, self.prod,
            self.imp, self.bot, self.top, name,
        )

    def lt(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y]) and x != y

    def is_trivial(self) -> bool:
        return self.size == 1

    def to_hoop(self, keep_bot: bool = True) -> "FiniteAlgebra":
        """The ``v``-free reduct (bounded hoop, or plain hoop without bot)."""
        if keep_bot:
            if self.bot is None:
                raise ValueError("no bot to keep")
            sig, bot = Signature.BOUNDED_HOOP, self.bot
        else:
            sig, bot = Signature.HOOP, None
        return FiniteAlgebra.from_tables(
            sig, self.prod, self.imp, bot=bot, top=self.top, name=self.name
        )

    def with_derived_join(self) -> "FiniteAlgebra":
        """A bounded hoop as a residuated lattice, with
        ``x v y = ((x -> y) -> y) ^ ((y -> x) -> x)``."""
        if self.signature is not Signature.BOUNDED_HOOP:
            raise ValueError("the derived join is only defined here for bounded hoops")
        I, M = self.imp, self.meet
        left = I[I, np.arange(self.size)[None, :]]
        join = M[left, left.T]
        return FiniteAlgebra.from_tables(
            Signature.RL, self.prod, self.imp, meet=self.meet, join=join,
            bot=self.bot, top=self.top, name=self.name,
        )

    def relabel(self, perm: Sequence[int], name: Optional[str] = None) -> "FiniteAlgebra":
        """Isomorphic copy in which element ``x`` is renamed ``perm[x]``."""
        p = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(p)
        inv[p] = np.arange(self.size)

        def move(t):
            return None if t is None else p[t[np.ix_(inv, inv)]]

        return FiniteAlgebra(
            self.size,
            self.signature,
            _frozen(move(self.meet)),
            _frozen(move(self.join)),
            _frozen(move(self.prod)),
            _frozen(move(self.imp)),
            None if self.bot is None else int(p[self.bot]),
            int(p[self.top]),
            self.name if name is None else name,
        )

    def __repr__(self) -> str:
        label = self.name or "?"
        return f"<FiniteAlgebra {label} n={self.size} {self.signature.value}>"


def _frozen(t):
    if t is not None:
        t.setflags(write=False)
    return t


# ---------------------------------------------------------------------------
# axiom validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    count: int
    detail: str = ""

    def __str__(self) -> str:
        more = f" (+{self.count - 1} more)" if self.count > 1 else ""
        text = f"{self.axiom} fails at {self.witness}{more}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...]

    def axioms(self) -> list[str]:
        return [v.axiom for v in self.violations]

    def summary(self) -> str:
        if self.valid:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


class _Collector:
    def __init__(self):
        self.found: list[Violation] = []

    def check(self, axiom: str, holds: np.ndarray, detail: str = ""):
        bad = ~np.asarray(holds, dtype=bool)
        if bad.any():
            first = tuple(int(i) for i in np.argwhere(bad)[0])
            self.found.append(Violation(axiom, first, int(bad.sum()), detail))


def _associative(T: np.ndarray) -> np.ndarray:
    n = T.shape[0]
    x = np.arange(n)[:, None, None]
    z = np.arange(n)[None, None, :]
    return T[T[:, :, None], z] == T[x, T[None, :, :]]


def validate_axioms(A: FiniteAlgebra) -> ValidationReport:
    """Check every axiom of ``A``'s signature and report all failures.

    Each failing axiom is reported once, with its lexicographically least
    witness tuple and the number of failing tuples.
    """
    n = A.size
    P, I, M = A.prod, A.imp, A.meet
    leq = A.leq
    r = np.arange(n)
    x, z = r[:, None, None], r[None, None, :]
    X, Y = r[:, None], r[None, :]
    c = _Collector()

    c.check("monoid.commutative", P == P.T, "x*y = y*x")
    c.check("monoid.associative", _associative(P), "(x*y)*z = x*(y*z)")
    c.check("monoid.identity", P[A.top] == r, "1*x = x")

    if A.signature is Signature.RL:
        J = A.join
        c.check("lattice.meet_commutative", M == M.T)
        c.check("lattice.join_commutative", J == J.T)
        c.check("lattice.meet_associative", _associative(M))
        c.check("lattice.join_associative", _associative(J))
        c.check("lattice.meet_absorption", M[X, J] == X, "x ^ (x v y) = x")
        c.check("lattice.join_absorption", J[X, M] == X, "x v (x ^ y) = x")
        c.check("lattice.bounds", (M[A.bot] == A.bot) & (J[A.top] == A.top), "0 ^ x = 0, 1 v x = 1")
        c.check("rl.exchange", I[P[:, :, None], z] == I[x, I[None, :, :]],
                "(x*y)->z = x->(y->z)")
        lhs = P[I, X]
        c.check("rl.modus_ponens", M[lhs, Y] == lhs, "((x->y)*x) ^ y = (x->y)*x")
        c.check("rl.meet_implies", I[M, Y] == A.top, "(x^y)->y = 1")
    else:
        c.check("hoop.self_implication", I[r, r] == A.top, "x->x = 1")
        c.check("hoop.divisibility", P[I, X] == P[I.T, Y], "(x->y)*x = (y->x)*y")
        c.check("hoop.exchange", I[x, I[None, :, :]] == I[P[:, :, None], z],
                "x->(y->z) = (x*y)->z")
        c.check("hoop.meet_commutative", M == M.T)
        c.check("hoop.meet_associative", _associative(M))
        c.check("hoop.meet_idempotent", M[r, r] == r)
        if A.signature is Signature.BOUNDED_HOOP:
            c.check("hoop.bot_implies", I[A.bot] == A.top, "0->x = 1")

    # a (.) b <= c  iff  a <= b -> c
    c.check("residuation", leq[P[:, :, None], z] == leq[x, I[None, :, :]],
            "x*y <= z iff x <= y->z")
    return ValidationReport(not c.found, tuple(c.found))


def ensure_valid(A: FiniteAlgebra) -> FiniteAlgebra:
    report = validate_axioms(A)
    if not report.valid:
        raise InvalidAlgebra(report)
    return A


# ---------------------------------------------------------------------------
# residuals


@dataclass(frozen=True)
class Residual:
    imp: Optional[np.ndarray]
    witness: Optional[tuple[int, int]] = None

    @property
    def residuated(self) -> bool:
        return self.imp is not None


def derive_residual(leq, prod) -> Residual:
    """The residual ``x -> y = max{z : z*x <= y}``, if every maximum exists.

    On failure the first pair ``(x, y)`` lacking a maximum is returned as
    the witness.
    """
    leq = np.ascontiguousarray(leq, dtype=np.bool_)
    prod = np.ascontiguousarray(prod, dtype=np.int64)
    out = np.empty_like(prod)
    ok, wx, wy = _kernels.residual(leq, prod, out)
    if not ok:
        return Residual(None, (int(wx), int(wy)))
    out.setflags(write=False)
    return Residual(out)


# ---------------------------------------------------------------------------
# element-level notions


def power_sequence(A: FiniteAlgebra, x: int) -> list[int]:
    """``[x, x^2, ...]`` up to and including the first repeated value."""
    seq = [x]
    while True:
        nxt = int(A.prod[seq[-1], x])
        if nxt == seq[-1]:
            return seq
        seq.append(nxt)


def power(A: FiniteAlgebra, x: int, k: int) -> int:
    acc = A.top
    for _ in range(k):
        acc = int(A.prod[acc, x])
    return acc


def stable_powers(A: FiniteAlgebra) -> np.ndarray:
    """``x^n`` for every ``x``; powers stabilise within ``n`` steps."""
    cached = A._cache.get("stable_powers")
    if cached is None:
        acc = np.arange(A.size)
        for _ in range(A.size):
            acc = A.prod[acc, np.arange(A.size)]
        cached = A._cache["stable_powers"] = acc
    return cached


def nilpotent_mask(A: FiniteAlgebra) -> np.ndarray:
    _need_bot(A)
    return stable_powers(A) == A.bot


def unity_mask(A: FiniteAlgebra) -> np.ndarray:
    """Unities: ``x`` such that the negation of its stable power is nilpotent."""
    _need_bot(A)
    return nilpotent_mask(A)[A.neg[stable_powers(A)]]


def dense_mask(A: FiniteAlgebra) -> np.ndarray:
    _need_bot(A)
    return A.neg == A.bot


def idempotent_mask(A: FiniteAlgebra) -> np.ndarray:
    return A.prod[np.arange(A.size), np.arange(A.size)] == np.arange(A.size)


def _need_bot(A: FiniteAlgebra):
    if A.bot is None:
        raise ValueError(f"{A!r} has no bot: negation, density and unity are unavailable")


def coatoms(A: FiniteAlgebra) -> list[int]:
    """Elements covered by top."""
    leq = A.leq
    below = [x for x in range(A.size) if x != A.top]
    return [
        x for x in below
        if not any(y != x and y != A.top and leq[x, y] for y in range(A.size))
    ]


@dataclass(frozen=True)
class ElementProfile:
    element: int
    negation: Optional[int]
    stable_power: int
    nilpotence_order: Optional[int]
    idempotent: bool
    dense: Optional[bool]
    unity: Optional[bool]
    coatom: bool

    @property
    def nilpotent(self) -> Optional[bool]:
        if self.negation is None:
            return None
        return self.nilpotence_order is not None


def element_profile(A: FiniteAlgebra, x: int) -> ElementProfile:
    """Negation, powers, nilpotence, density, unity and coatom status of ``x``.

    Negation-based fields are ``None`` for hoops without bot.
    """
    if not 0 <= x < A.size:
        raise IndexError(f"element {x} is outside 0..{A.size - 1}")
    seq = power_sequence(A, x)
    stable = seq[-1]
    is_coatom = x in coatoms(A)
    idem = int(A.prod[x, x]) == x
    if A.bot is None:
        return ElementProfile(x, None, stable, None, idem, None, None, is_coatom)
    order = seq.index(A.bot) + 1 if A.bot in seq else None
    return ElementProfile(
        element=x,
        negation=int(A.neg[x]),
        stable_power=stable,
        nilpotence_order=order,
        idempotent=idem,
        dense=bool(A.neg[x] == A.bot),
        unity=bool(unity_mask(A)[x]),
        coatom=is_coatom,
    )


def is_linearly_ordered(A: FiniteAlgebra) -> bool:
    return bool((A.leq | A.leq.T).all())


# ---------------------------------------------------------------------------
# maps between algebras


@dataclass(frozen=True, eq=False)
class Morphism:
    """A total map ``source -> target`` given by the image of each element."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.source.size:
            raise ValueError("map length differs from the source size")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.map == other.map)

    def __hash__(self) -> int:
        return hash((id(self.source), id(self.target), self.map))

    def __repr__(self) -> str:
        return f"Morphism({self.source.name or '?'} -> {self.target.name or '?'}, {list(self.map)})"

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.map, dtype=np.int64)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return set(self.map) == set(range(self.target.size))

    def is_homomorphism(self) -> bool:
        """Check preservation of every operation and constant of the source."""
        f = self.array
        A, B = self.source, self.target
        if A.signature is not B.signature:
            return False
        for ta, tb in zip(A.ops(), B.ops()):
            if not np.array_equal(f[ta], tb[np.ix_(f, f)]):
                return False
        return all(f[ca] == cb for ca, cb in zip(A.constants(), B.constants()))

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self o inner``."""
        if inner.target.size != self.source.size:
            raise ValueError("cannot compose: carrier sizes differ")
        return Morphism(inner.source, self.target, tuple(self.map[x] for x in inner.map))


def identity(A: FiniteAlgebra) -> Morphism:
    return Morphism(A, A, tuple(range(A.size)))
