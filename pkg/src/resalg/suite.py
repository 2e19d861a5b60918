"""The acceptance battery.

Each check is a function that returns a short summary on success and raises
:class:`CheckFailed` (or anything else) on failure.  Exceptions never stop the
run: they become failed entries, so a broken catalog entry shows up in every
check that depends on it.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import constructions as C
from ._accel import worker_count
from .algebra import (
    FiniteAlgebra,
    Morphism,
    Signature,
    dense_mask,
    idempotent_mask,
    nilpotent_mask,
    validate_axioms,
)
from .enumeration import count_crosscheck, enumerate_algebras, enumerate_by_monoids
from .morphisms import (
    embeddings,
    exists_homomorphism,
    homomorphisms,
    is_absolute_retract_relative,
    is_injective_relative,
    is_isomorphic,
    is_retract_of,
    is_rigid,
    is_self_injective,
    maximum_simple,
    retraction_along,
)
from .structure import (
    all_congruences,
    all_filters,
    cep_check,
    congruence_of_filter,
    filter_of,
    is_simple,
    radical_report,
)
from .varieties import Eq, classify, holds_equation

# Frozen once both enumeration strategies agreed on it.
RL_COUNT_SIZE_4 = 7


class CheckFailed(AssertionError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def expect(cond, message: str, witness=None):
    if not cond:
        raise CheckFailed(message, witness)


@dataclass(frozen=True)
class Check:
    id: str
    group: str
    anchor: str
    title: str
    run: Callable[[], str]


@dataclass
class CheckResult:
    id: str
    group: str
    anchor: str
    title: str
    status: str  # pass / fail / skip
    summary: str = ""
    witness: Optional[str] = None
    seconds: float = 0.0

    def as_dict(self, timing: bool = True) -> dict:
        d = {
            "id": self.id,
            "group": self.group,
            "anchor": self.anchor,
            "title": self.title,
            "status": self.status,
            "summary": self.summary,
            "witness": self.witness,
        }
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class SuiteReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.results if r.status != "skip")

    def text(self, timing: bool = True) -> str:
        lines = []
        for r in self.results:
            t = f" [{r.seconds:.2f}s]" if timing else ""
            lines.append(f"{r.status.upper():4} {r.id} {r.title} ({r.anchor}){t}")
            if r.summary:
                lines.append(f"     {r.summary}")
            if r.witness:
                lines.append(f"     witness: {r.witness}")
        n_pass = sum(r.status == "pass" for r in self.results)
        n_fail = sum(r.status == "fail" for r in self.results)
        n_skip = sum(r.status == "skip" for r in self.results)
        lines.append(f"{'PASS' if self.passed else 'FAIL'}: {n_pass} passed, {n_fail} failed, {n_skip} skipped")
        return "\n".join(lines) + "\n"

    def as_dict(self, timing: bool = True) -> dict:
        return {"passed": self.passed, "checks": [r.as_dict(timing) for r in self.results]}

    def json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), indent=2) + "\n"


# ---------------------------------------------------------------------------
# shared inputs


def _name(A: FiniteAlgebra) -> str:
    return A.name or "?"


def _maps(fs: Iterable[Morphism]) -> str:
    return ", ".join(str(list(f.map)) for f in fs)


def catalog() -> list[FiniteAlgebra]:
    # built fresh every time so that a patched table is noticed
    return C.standard_catalog()


def enumerated(max_size: int, variety=None, lo: int = 1, signature=Signature.RL, chains=False):
    out = []
    for n in range(lo, max_size + 1):
        out += enumerate_algebras(n, signature, variety=variety, chains_only=chains)
    return out


def _battery_two() -> list[FiniteAlgebra]:
    return [A for A in catalog() if A.size <= 6] + enumerated(4)


def _find_iso(A: FiniteAlgebra, pool: Iterable[FiniteAlgebra]) -> Optional[FiniteAlgebra]:
    for B in pool:
        if B.size == A.size and is_isomorphic(A, B):
            return B
    return None


# ---------------------------------------------------------------------------
# checks


def check_catalog() -> str:
    algs = catalog()
    bad = [(_name(A), validate_axioms(A).axioms()) for A in algs if not validate_axioms(A).valid]
    expect(not bad, "catalog algebras fail validation", bad)
    mutations = 0
    for A in algs:
        n = A.size
        for x in range(n):
            for y in range(n):
                for v in range(n):
                    if v == A.imp[x, y]:
                        continue
                    imp = A.imp.copy()
                    imp[x, y] = v
                    M = FiniteAlgebra.from_tables(
                        A.signature, A.prod, imp, meet=A.meet, join=A.join, bot=A.bot, top=A.top
                    )
                    expect(
                        not validate_axioms(M).valid,
                        "an imp mutation still validates",
                        f"{_name(A)} imp[{x},{y}] := {v}",
                    )
                    mutations += 1
    return f"{len(algs)} catalog algebras valid; {mutations} imp mutations all rejected"


def check_filter_congruence() -> str:
    algs = _battery_two()
    for A in algs:
        filters = all_filters(A)
        congs = all_congruences(A)
        expect(len(filters) == len(congs), "filter and congruence counts differ",
               f"{_name(A)}: {len(filters)} filters, {len(congs)} congruences")
        for F in filters:
            expect(filter_of(congruence_of_filter(F)) == F, "filter roundtrip broken", f"{_name(A)}: {F.sorted()}")
        for th in congs:
            expect(congruence_of_filter(filter_of(th)) == th, "congruence roundtrip broken",
                   f"{_name(A)}: {th.blocks}")
    return f"{len(algs)} algebras: bijection and both roundtrips hold"


def check_radical() -> str:
    algs = _battery_two()
    for A in algs:
        rep = radical_report(A)  # raises when the two computations disagree
        expect(rep.dense.members <= rep.radical.members, "dense set not inside the radical",
               f"{_name(A)}: Ds={sorted(rep.dense.members)} Rad={sorted(rep.radical.members)}")
    srl = enumerated(4, "SRL")
    bl = enumerated(5, "BL") + [A for A in catalog() if A.size <= 5 and "BL" in classify(A)]
    for A in srl + bl:
        rep = radical_report(A)
        expect(rep.radical_dense, "radical differs from the dense set",
               f"{_name(A)}: Ds={sorted(rep.dense.members)} Rad={sorted(rep.radical.members)}")
    return f"{len(algs)} algebras coherent; Rad = Ds on {len(srl)} SRL and {len(bl)} BL algebras"


def check_simplicity() -> str:
    algs = [A for A in _battery_two() if not A.is_trivial()]
    simple_count = 0
    for A in algs:
        by_filters = len(all_filters(A)) == 2
        nil = nilpotent_mask(A)
        by_nil = all(nil[x] for x in range(A.size) if x != A.top)
        expect(by_filters == by_nil, "simplicity criteria disagree",
               f"{_name(A)}: filters say {by_filters}, nilpotence says {by_nil}")
        simple_count += by_filters
    expect(is_simple(C.catalog_get("I6")), "I6 is not simple")
    expect(not is_simple(C.catalog_get("I4")), "I4 is simple")
    expect(is_simple(C.catalog_get("L3")), "L3 is not simple")
    return f"{len(algs)} algebras agree ({simple_count} simple); I6 simple, I4 not, L3 simple"


def _diamond_battery(A: FiniteAlgebra):
    D, g = C.diamond(A)
    rep = validate_axioms(D)
    expect(rep.valid, "diamond fails validation", f"{_name(A)}: {rep.axioms()}")
    expect(g.is_homomorphism() and g.is_injective(), "diagonal is not an embedding", _name(A))
    pairs = C.diamond_pairs(D)
    index = {p: k for k, p in enumerate(pairs)}
    for k, (a, b) in enumerate(pairs):
        want = index[(int(A.neg[b]), int(A.neg[a]))]
        expect(D.neg[k] == want, "negation of a pair is not (neg b, neg a)", f"{_name(A)}: {(a, b)}")
    for eq in (Eq.INV, Eq.DIST):
        a, d = holds_equation(A, eq).holds, holds_equation(D, eq).holds
        expect(a == d, f"{eq.value} does not transfer", f"{_name(A)}: A {a}, diamond {d}")


def check_diamond() -> str:
    algs = enumerated(4) + [A for A in catalog() if A.size <= 5]
    for A in algs:
        _diamond_battery(A)
    D2, _ = C.diamond(C.catalog_get("2"))
    expect(is_isomorphic(D2, C.catalog_get("L3")), "diamond(2) is not L3")
    return f"{len(algs)} algebras; diamond(2) is L3"


def _forced_values(A: FiniteAlgebra, targets: Iterable[FiniteAlgebra]) -> int:
    """Along any hom ``f`` out of diamond(A) with ``f(0,1) = f(a,a)``:
    ``f(a,1) = 1`` and ``f(a*a, a) <= f(a,a)``."""
    D, _ = C.diamond(A)
    index = {p: k for k, p in enumerate(C.diamond_pairs(D))}
    lo, hi = A.bot, A.top
    mid = index[(lo, hi)]
    expect(D.neg[mid] == mid, "(0,1) is not a negation fixed point", _name(A))
    seen = 0
    for a in range(A.size):
        aa, a1 = index[(a, a)], index[(a, hi)]
        expect(D.imp[mid, aa] == a1, "(0,1) -> (a,a) is not (a,1)", f"{_name(A)}: a={a}")
        sq = index[(int(A.prod[a, a]), a)]
        expect(D.prod[a1, a1] == sq, "(a,1)*(a,1) is not (a*a, a)", f"{_name(A)}: a={a}")
        expect(D.leq[sq, aa], "(a*a, a) is not below (a,a)", f"{_name(A)}: a={a}")
        for B in targets:
            for f in homomorphisms(D, B):
                if f.map[mid] != f.map[aa]:
                    continue
                seen += 1
                expect(f.map[a1] == B.top, "f(a,1) is not top", f"{_name(A)}->{_name(B)} {list(f.map)} a={a}")
                expect(B.leq[f.map[sq], f.map[aa]], "f(a*a, a) is not below f(a,a)",
                       f"{_name(A)}->{_name(B)} {list(f.map)} a={a}")
    # a retraction would need 0 < f(0,1) < 1 in A
    if A.size == 2:
        expect(not any(A.lt(A.bot, x) and A.lt(x, A.top) for x in range(A.size)),
               "2 has an element strictly between bot and top")
    return seen


def check_no_retraction() -> str:
    algs = [A for A in enumerated(4) if not A.is_trivial()]
    for A in algs:
        D, g = C.diamond(A)
        r = retraction_along(g)
        expect(r is None, "diamond retracts onto A along the diagonal", f"{_name(A)}: {list(r.map) if r else None}")
    two = C.catalog_get("2")
    seen = _forced_values(two, [two, C.catalog_get("L3"), C.catalog_get("H3"), C.catalog_get("H4")])
    return (f"{len(algs)} algebras have no diagonal retraction; on diamond(2) (0,1)->(a,a) = (a,1) and "
            f"(a,1)^2 = (a*a,a) <= (a,a) for every a; {seen} homs into nontrivial targets identify (0,1) with some (a,a)")


def check_wnm() -> str:
    algs = enumerated(5, "WNM", lo=2)
    simple_n = 0
    for A in algs:
        s = is_simple(A)
        iso = bool(is_isomorphic(A, C.ordinal_wnm(A.size)))
        expect(s == iso, "simple does not match the ordinal algebra", f"{_name(A)}: simple {s}, ordinal {iso}")
        simple_n += s
    for n in range(2, 9):
        O = C.ordinal_wnm(n)
        expect("WNM" in classify(O), "ordinal algebra is not WNM", f"ordwnm:{n}")
        expect(is_simple(O), "ordinal algebra is not simple", f"ordwnm:{n}")
    return f"{len(algs)} WNM algebras, {simple_n} simple, each the ordinal algebra of its size; ordwnm 2..8 simple"


def check_nm() -> str:
    algs = enumerated(5, "NM", lo=2)
    simples = [A for A in algs if is_simple(A)]
    pool = [C.catalog_get("2"), C.catalog_get("L3")]
    for A in simples:
        expect(_find_iso(A, pool) is not None, "simple NM algebra is neither 2 nor L3", _name(A))
    L3 = C.catalog_get("L3")
    v = is_self_injective(L3)
    expect(v, "L3 is not self-injective", _maps(v.witness))
    expect(is_rigid(L3), "L3 is not rigid")
    ms = maximum_simple(simples)
    expect(ms.algebra is not None and is_isomorphic(ms.algebra, L3), "maximum simple NM is not L3",
           _name(ms.algebra) if ms.algebra else "none")
    return f"{len(simples)} simple NM algebras among {len(algs)}; maximum simple is L3"


def check_boolean() -> str:
    cls = enumerated(4, "SRL")
    v = is_injective_relative(C.catalog_get("2"), cls)
    expect(v.holds, "2 is not injective relative to SRL size <= 4", _maps(v.witness))
    return f"2 injective relative to {len(cls)} SRL algebras"


def check_test_d() -> str:
    H3, H4 = C.catalog_get("H3"), C.catalog_get("H4")
    t = C.is_test_d(H4)
    expect(t.witness == (2, 1), "H4 witness is not (a, b)", str(t.witness))
    expect(not exists_homomorphism(H4, H3, [(2, 1)]), "a hom H4 -> H3 sends a to eps")
    ar = is_absolute_retract_relative(H3, [H4])
    expect(not ar.holds, "H3 is an absolute retract relative to {H4}")
    rt = is_retract_of(H3, H4)
    expect(rt.holds, "H3 is not a retract of H4")
    return (f"H4 witness (a,b)=(2,1); embedding {list(ar.witness[0].map)} has no retraction; "
            f"H3 retracts along {list(rt.witness[0].map)}")


def check_test_i() -> str:
    N6, I4 = C.catalog_get("nm:6"), C.catalog_get("I4")
    expect(validate_axioms(I4).valid, "I4 fails validation", validate_axioms(I4).axioms())
    t = C.is_test_I(N6)
    # nm:6 is 0, 0.2, ..., 1 so 0.8 and 0.6 sit at 4 and 3; I4's a is 2
    expect(t.witness == (4, 3), "nm:6 witness is not (0.8, 0.6)", str(t.witness))
    expect(not exists_homomorphism(N6, I4, [(4, 2), (3, 2)]), "a hom nm:6 -> I4 sends eps and t to a")
    return "nm:6 witness (eps,t)=(4,3); no hom to I4 pins both to a"


def check_imtl() -> str:
    chains = enumerated(6, "IMTL", lo=2, chains=True)
    simples = [A for A in chains if is_simple(A)]
    L4, I6 = C.catalog_get("luk:4"), C.catalog_get("I6")
    expect(_find_iso(L4, simples) is not None, "L4 is not among the simple IMTL chains")
    expect(_find_iso(I6, simples) is not None, "I6 is not among the simple IMTL chains")
    for T in simples:
        expect(not (embeddings(L4, T) and embeddings(I6, T)), "a chain receives both L4 and I6", _name(T))
    ms = maximum_simple(simples)
    expect(ms.algebra is None, "a maximum simple IMTL chain exists", _name(ms.algebra) if ms.algebra else "")
    hit = [
        (S, T) for S, T in ms.certificates
        if (is_isomorphic(S, L4) and is_isomorphic(T, I6)) or (is_isomorphic(S, I6) and is_isomorphic(T, L4))
    ]
    expect(hit, "no certificate pairs L4 with I6", [(_name(S), _name(T)) for S, T in ms.certificates])
    return (f"{len(simples)} simple IMTL chains; none; certificate ({_name(hit[0][0])}, {_name(hit[0][1])}) "
            f"among {len(ms.certificates)}")


def check_pismtl() -> str:
    algs = enumerated(4, "PiSMTL")
    for A in algs:
        both = np.flatnonzero(idempotent_mask(A) & dense_mask(A)).tolist()
        expect(both == [A.top], "idempotent dense elements besides top", f"{_name(A)}: {both}")
    return f"{len(algs)} PiSMTL algebras"


def check_cep() -> str:
    algs = enumerated(4) + [A for A in catalog() if A.size <= 6]
    for A in algs:
        r = cep_check(A)
        expect(r.holds, "congruence extension fails", f"{_name(A)}: {r.witness}")
    return f"{len(algs)} algebras"


def check_mtl() -> str:
    algs = [A for A in enumerated(4, "MTL") if not A.is_trivial()]
    for A in algs:
        rep = radical_report(A)
        for e in sorted(rep.radical.members):
            expect(A.lt(int(A.neg[e]), e), "a unity is not above its negation", f"{_name(A)}: e={e}")
        a = rep.principal_unity
        expect(a is not None, "radical has no minimum", _name(A))
        na = int(A.neg[a])
        for x in rep.radical.members:
            expect(A.imp[x, na] == na, "x -> neg a differs from neg a", f"{_name(A)}: x={x}, a={a}")
    return f"{len(algs)} MTL algebras"


def check_hoops() -> str:
    algs = enumerated(4, lo=2, signature=Signature.BOUNDED_HOOP)
    simples = [A for A in algs if is_simple(A)]
    for A in simples:
        expect(holds_equation(A, Eq.INV).holds, "simple bounded hoop is not involutive", _name(A))
        R = A.with_derived_join()
        expect(validate_axioms(R).valid, "derived-join algebra fails validation", f"{_name(A)}: {validate_axioms(R).axioms()}")
        expect("MV" in classify(R), "derived-join algebra is not MV", _name(A))
    bad = []
    homs = 0
    for S in simples:
        for T in simples:
            for f in homomorphisms(S.to_hoop(keep_bot=False), T.to_hoop(keep_bot=False)):
                homs += 1
                if f.map[S.bot] != T.bot:
                    bad.append((_name(S), _name(T), list(f.map)))
    constant = sum(1 for _, _, m in bad if len(set(m)) == 1)
    expect(not bad, f"{len(bad)} of {homs} hoop homs move bot ({constant} of them constant onto top)", bad[:3])
    return f"{len(simples)} simple bounded hoops are MV; {homs} hoop homs keep bot"


def check_enumeration() -> str:
    for n, want in ((2, 1), (3, 2)):
        a = len(enumerate_algebras(n))
        b = len(enumerate_by_monoids(n))
        expect(a == want and b == want, f"size {n} counts", f"lattice-first {a}, monoid-first {b}")
    cc = count_crosscheck(4)
    expect(cc.agree, "strategies disagree at size 4", f"{cc.count_a} vs {cc.count_b}")
    expect(cc.count_a == RL_COUNT_SIZE_4, "size 4 count moved", f"{cc.count_a} != {RL_COUNT_SIZE_4}")
    algs = enumerated(4)
    pairs = 0
    for i, A in enumerate(algs):
        for B in algs[i + 1:]:
            if A.size == B.size:
                pairs += 1
                expect(not is_isomorphic(A, B), "duplicate isomorphism class", f"{_name(A)} ~ {_name(B)}")
    return f"counts 1, 2, {cc.count_a}; {pairs} same-size pairs pairwise non-isomorphic"


CHECKS: tuple[Check, ...] = (
    Check("A01", "catalog", "criterion 1", "catalog validity and residual uniqueness", check_catalog),
    Check("A02", "filters", "criterion 2", "filter/congruence bijection", check_filter_congruence),
    Check("A03", "radical", "criterion 3", "radical coherence", check_radical),
    Check("A04", "simplicity", "criterion 4", "simplicity coherence", check_simplicity),
    Check("A05", "diamond", "criterion 5", "diamond battery", check_diamond),
    Check("A06", "diamond", "criterion 6", "no retraction onto the diagonal", check_no_retraction),
    Check("A07", "wnm", "criterion 7", "simple WNM algebras are ordinal", check_wnm),
    Check("A08", "nm", "criterion 8", "simple NM classification", check_nm),
    Check("A09", "boolean", "criterion 9", "2 is injective among SRL", check_boolean),
    Check("A10", "test_d", "criterion 10", "test_d obstruction", check_test_d),
    Check("A11", "test_i", "criterion 11", "test_I obstruction", check_test_i),
    Check("A12", "imtl", "criterion 12", "no maximum simple IMTL chain", check_imtl),
    Check("A13", "pismtl", "criterion 13", "PiSMTL idempotent dense elements", check_pismtl),
    Check("A14", "cep", "criterion 14", "congruence extension", check_cep),
    Check("A15", "mtl", "criterion 15", "MTL unities", check_mtl),
    Check("A16", "hoops", "criterion 16", "simple bounded hoops", check_hoops),
    Check("A17", "enumeration", "criterion 17", "enumeration oracle", check_enumeration),
)

GROUPS = tuple(dict.fromkeys(c.group for c in CHECKS))


def select(only: Optional[Iterable[str]]) -> list[Check]:
    """Checks named by id (``A05``) or group (``diamond``); ``None`` means all."""
    if only is None:
        return list(CHECKS)
    wanted = {w.strip().lower() for w in only if w.strip()}
    known = {c.id.lower() for c in CHECKS} | set(GROUPS)
    unknown = wanted - known
    if unknown:
        raise KeyError(f"unknown checks {sorted(unknown)}; groups are {', '.join(GROUPS)}")
    return [c for c in CHECKS if c.id.lower() in wanted or c.group in wanted]


def _witness_text(w) -> Optional[str]:
    if w is None:
        return None
    return w if isinstance(w, str) else repr(w)


def run_check(check: Check) -> CheckResult:
    t0 = time.perf_counter()
    try:
        summary = check.run()
        status, witness = "pass", None
    except CheckFailed as exc:
        status, summary, witness = "fail", str(exc), _witness_text(exc.witness)
    except Exception as exc:  # reported, not raised
        status, summary, witness = "fail", f"error: {type(exc).__name__}", str(exc)
    return CheckResult(check.id, check.group, check.anchor, check.title, status, summary, witness,
                       time.perf_counter() - t0)


def paper_suite(only: Optional[Iterable[str]] = None, workers: Optional[int] = None) -> SuiteReport:
    """Run the selected checks; results come back in the fixed check order."""
    checks = select(only)
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(checks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run_check, checks))
    else:
        results = [run_check(c) for c in checks]
    return SuiteReport(results)
