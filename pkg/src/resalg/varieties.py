"""Named equations and variety membership.

Each equation is evaluated on every tuple of the carrier at once; a failure
reports the lexicographically least violating tuple.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .algebra import FiniteAlgebra, Signature, is_linearly_ordered


class Eq(str, Enum):
    PRELIN = "PRELIN"
    S = "S"
    W = "W"
    PI = "PI"
    B = "B"
    INV = "INV"
    GODEL = "GODEL"
    DIST = "DIST"
    T = "T"


class EquationNotApplicable(ValueError):
    pass


def _grid(n: int, arity: int):
    r = np.arange(n)
    shape = [1] * arity
    out = []
    for i in range(arity):
        s = list(shape)
        s[i] = n
        out.append(r.reshape(s))
    return out


def _prelin(A):
    x, y = _grid(A.size, 2)
    return A.join[A.imp[x, y], A.imp[y, x]] == A.top


def _s(A):
    (x,) = _grid(A.size, 1)
    return A.meet[x, A.neg[x]] == A.bot


def _w(A):
    x, y = _grid(A.size, 2)
    xy = A.prod[x, y]
    return A.join[A.neg[xy], A.imp[A.meet[x, y], xy]] == A.top


def _pi(A):
    x, y, z = _grid(A.size, 3)
    nnz = A.neg[A.neg[z]]
    lhs = A.prod[nnz, A.imp[A.prod[x, z], A.prod[y, z]]]
    return A.imp[lhs, A.imp[x, y]] == A.top


def _b(A):
    x, y = _grid(A.size, 2)
    return A.prod[x, A.imp[x, y]] == A.meet[x, y]


def _inv(A):
    (x,) = _grid(A.size, 1)
    return A.neg[A.neg[x]] == x


def _godel(A):
    return A.prod == A.meet


def _dist(A):
    x, y, z = _grid(A.size, 3)
    return A.meet[x, A.join[y, z]] == A.join[A.meet[x, y], A.meet[x, z]]


def _t(A):
    x, y = _grid(A.size, 2)
    return A.imp[A.imp[x, y], y] == A.imp[A.imp[y, x], x]


# equation -> (evaluator, needs join, needs bot)
_EQUATIONS: dict[Eq, tuple[Callable, bool, bool]] = {
    Eq.PRELIN: (_prelin, True, False),
    Eq.S: (_s, False, True),
    Eq.W: (_w, True, True),
    Eq.PI: (_pi, False, True),
    Eq.B: (_b, False, False),
    Eq.INV: (_inv, False, True),
    Eq.GODEL: (_godel, False, False),
    Eq.DIST: (_dist, True, False),
    Eq.T: (_t, False, False),
}


def applicable(A: FiniteAlgebra, eq: Eq) -> bool:
    _, needs_join, needs_bot = _EQUATIONS[Eq(eq)]
    return (A.join is not None or not needs_join) and (A.bot is not None or not needs_bot)


@dataclass(frozen=True)
class EquationResult:
    holds: bool
    witness: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.holds


def holds_equation(A: FiniteAlgebra, eq) -> EquationResult:
    eq = Eq(eq)
    if not applicable(A, eq):
        raise EquationNotApplicable(f"{eq.value} needs operations {A!r} does not have")
    ok = np.asarray(_EQUATIONS[eq][0](A), dtype=bool)
    if ok.all():
        return EquationResult(True)
    return EquationResult(False, tuple(int(i) for i in np.argwhere(~ok)[0]))


MEMBERSHIP_RULES: dict[str, tuple[str, ...]] = {
    # name: (parent variety or "" for the base, *equations)
    "RL": ("",),
    "DRL": ("RL", "DIST"),
    "GM": ("RL", "INV"),
    "DGM": ("GM", "DIST"),
    "MTL": ("RL", "PRELIN"),
    "WNM": ("MTL", "W"),
    "IMTL": ("MTL", "INV"),
    "NM": ("WNM", "INV"),
    "SRL": ("RL", "S"),
    "SMTL": ("MTL", "S"),
    "PiSMTL": ("SMTL", "PI"),
    "BL": ("MTL", "B"),
    "MV": ("BL", "INV"),
    "PROD": ("PiSMTL", "B"),
    "HL": ("BL", "GODEL"),
    "HEYTING": ("RL", "GODEL"),
    "BA": ("HEYTING", "INV"),
}

RL_VARIETIES = tuple(MEMBERSHIP_RULES)
HOOP_VARIETIES = ("HOOP", "WAJSBERG_HOOP", "BOUNDED_HOOP")
ALL_VARIETIES = RL_VARIETIES + HOOP_VARIETIES


@dataclass(frozen=True)
class VarietyProfile:
    signature: Signature
    equation_flags: dict[Eq, bool]
    memberships: frozenset[str]
    linearly_ordered: bool
    witnesses: dict[Eq, tuple[int, ...]] = field(default_factory=dict)

    def __contains__(self, variety: str) -> bool:
        return variety in self.memberships

    def as_dict(self) -> dict:
        return {
            "signature": self.signature.value,
            "equations": {e.value: v for e, v in self.equation_flags.items()},
            "witnesses": {e.value: list(w) for e, w in self.witnesses.items()},
            "memberships": sorted(self.memberships, key=ALL_VARIETIES.index),
            "linearly_ordered": self.linearly_ordered,
        }


def memberships_from_flags(signature: Signature, flags: dict) -> frozenset[str]:
    """Close the equation flags under the variety definitions."""
    flags = {Eq(k).value: bool(v) for k, v in flags.items()}
    if signature is not Signature.RL:
        out = {"HOOP"}
        if flags.get("T"):
            out.add("WAJSBERG_HOOP")
        if signature is Signature.BOUNDED_HOOP:
            out.add("BOUNDED_HOOP")
        return frozenset(out)
    out: set[str] = set()
    for name, (parent, *eqs) in MEMBERSHIP_RULES.items():
        if parent and parent not in out:
            continue
        if all(flags.get(e, False) for e in eqs):
            out.add(name)
    return frozenset(out)


def classify(A: FiniteAlgebra) -> VarietyProfile:
    flags: dict[Eq, bool] = {}
    witnesses: dict[Eq, tuple[int, ...]] = {}
    for eq in Eq:
        if not applicable(A, eq):
            continue
        res = holds_equation(A, eq)
        flags[eq] = res.holds
        if not res.holds:
            witnesses[eq] = res.witness
    return VarietyProfile(
        signature=A.signature,
        equation_flags=flags,
        memberships=memberships_from_flags(A.signature, flags),
        linearly_ordered=is_linearly_ordered(A),
        witnesses=witnesses,
    )


def in_variety(A: FiniteAlgebra, *varieties: str) -> bool:
    profile = classify(A)
    return all(v in profile.memberships for v in varieties)
