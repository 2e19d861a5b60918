import pytest

from resalg import constructions as C
from resalg.algebra import FiniteAlgebra, is_linearly_ordered
from resalg.enumeration import enumerate_algebras
from resalg.varieties import (
    Eq,
    EquationNotApplicable,
    applicable,
    classify,
    holds_equation,
    in_variety,
    memberships_from_flags,
)

from conftest import get

IMPLICATIONS = [
    ("MV", "BL"), ("BL", "MTL"), ("MTL", "RL"), ("NM", "WNM"), ("WNM", "MTL"),
    ("PROD", "PiSMTL"), ("PiSMTL", "SMTL"), ("SMTL", "MTL"), ("HL", "BL"),
    ("HEYTING", "SRL"), ("BA", "HEYTING"), ("IMTL", "GM"), ("MTL", "DRL"),
]


def test_equation_examples():
    assert holds_equation(get("H4"), Eq.B)
    assert holds_equation(get("I4"), Eq.INV)
    r = holds_equation(get("L3"), Eq.S)
    assert not r.holds and r.witness == (1,)


def test_i4_fails_b_at_a_b():
    r = holds_equation(get("I4"), Eq.B)
    assert not r.holds
    # least violating tuple; a=2, b=1 is one of the violations
    I4 = get("I4")
    assert I4.prod[2, I4.imp[2, 1]] != I4.meet[2, 1]
    assert r.witness <= (2, 1)


def test_classify_examples():
    h4 = classify(get("H4")).memberships
    assert {"RL", "DRL", "MTL", "SMTL", "BL", "HL", "SRL", "HEYTING"} <= h4
    assert not {"MV", "NM"} & h4
    i4 = classify(get("I4")).memberships
    assert {"MTL", "IMTL", "WNM", "NM", "GM", "DGM"} <= i4
    assert "BL" not in i4
    assert {"BL", "MV", "IMTL", "NM"} <= classify(get("L3")).memberships


def test_boolean_algebras_are_ba():
    for k in (1, 2, 3):
        assert "BA" in classify(C.boolean_cube(k))


def test_linear_order():
    assert is_linearly_ordered(get("I6"))
    assert not is_linearly_ordered(C.boolean_cube(2))
    trivial = FiniteAlgebra.from_tables("rl", [[0]], [[0]], meet=[[0]], join=[[0]], bot=0, top=0)
    assert is_linearly_ordered(trivial)


def _everything(catalog):
    out = list(catalog)
    for n in range(1, 5):
        out += enumerate_algebras(n)
    out += enumerate_algebras(5, chains_only=True)
    return out


def test_membership_closure_invariants(catalog):
    for A in _everything(catalog):
        prof = classify(A)
        m = prof.memberships
        for sub, sup in IMPLICATIONS:
            assert sub not in m or sup in m, (A, sub, sup)
        if prof.linearly_ordered:
            assert prof.equation_flags[Eq.PRELIN], A
        if prof.equation_flags[Eq.PRELIN]:
            assert prof.equation_flags[Eq.DIST], A


def test_classify_invariant_under_relabelling(catalog):
    for A in catalog:
        perm = list(reversed(range(A.size)))
        assert classify(A.relabel(perm)).memberships == classify(A).memberships


def test_products_preserve_equations():
    algs = [get("2"), get("H3"), get("L3"), get("I4"), get("H4")]
    for A in algs:
        for B in algs:
            P = C.direct_product(A, B)
            fa, fb, fp = classify(A).equation_flags, classify(B).equation_flags, classify(P).equation_flags
            for eq in Eq:
                if fa[eq] and fb[eq]:
                    assert fp[eq], (A, B, eq)


def test_hoop_signatures():
    H = get("luk:4").to_hoop()
    prof = classify(H)
    assert prof.memberships == {"HOOP", "WAJSBERG_HOOP", "BOUNDED_HOOP"}
    G = get("H4").to_hoop(keep_bot=False)
    assert classify(G).memberships == {"HOOP"}
    assert not applicable(G, Eq.INV)
    with pytest.raises(EquationNotApplicable):
        holds_equation(G, Eq.PRELIN)


def test_memberships_from_flags_closure():
    flags = {e: False for e in Eq}
    flags.update({Eq.PRELIN: True, Eq.W: True, Eq.INV: True, Eq.DIST: True})
    m = memberships_from_flags(get("2").signature, flags)
    assert m == {"RL", "DRL", "GM", "DGM", "MTL", "WNM", "IMTL", "NM"}


def test_in_variety():
    assert in_variety(get("L3"), "MV", "NM")
    assert not in_variety(get("H3"), "MV")
