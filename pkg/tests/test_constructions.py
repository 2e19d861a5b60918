import itertools

import pytest

from resalg import constructions as C
from resalg.algebra import unity_mask, validate_axioms
from resalg.morphisms import is_isomorphic
from resalg.varieties import Eq, holds_equation

from conftest import get


def iso(A, B):
    return bool(is_isomorphic(A, B))


def test_catalog_valid(catalog):
    for A in catalog:
        assert validate_axioms(A).valid, A
        assert A.bot == 0 and A.top == A.size - 1


def test_catalog_identities():
    assert iso(get("L3"), get("luk:3")) and iso(get("L3"), get("nm:3")) and iso(get("L3"), get("ordwnm:3"))
    assert iso(get("godel:3"), get("H3"))
    assert iso(get("godel:4"), get("H4"))
    assert iso(get("nm:4"), get("I4"))
    for fam in ("nm", "godel", "luk"):
        assert iso(get(f"{fam}:2"), get("2"))


def test_catalog_errors():
    with pytest.raises(KeyError):
        C.catalog_get("nope")
    with pytest.raises(ValueError):
        C.catalog_get("luk:1")
    with pytest.raises(KeyError):
        C.catalog_get("luk")
    assert "H4" in C.catalog_names() and "nm:n" in C.catalog_names()


def test_ordinal_wnm_tables():
    # the unique coatom u = n-2; x*y = 0 below 1 except u*u, x->y = u for 0 < y < x < 1
    for n in range(3, 9):
        O = get(f"ordwnm:{n}")
        u = n - 2
        for x in range(1, n - 1):
            for y in range(1, x):
                assert O.imp[x, y] == u
        assert O.neg[u] == u or n == 3


def test_products():
    P = C.direct_product(get("2"), get("2"))
    assert iso(P, C.boolean_cube(2))
    Q = C.direct_product(get("H3"), get("L3"))
    assert validate_axioms(Q).valid
    from resalg.algebra import is_linearly_ordered

    assert not is_linearly_ordered(Q)
    for f in C.projections(get("H3"), get("L3"), Q):
        assert f.is_homomorphism() and f.is_surjective()
    with pytest.raises(ValueError):
        C.direct_product(get("H3"), get("H3").to_hoop())


def test_product_unities():
    H4, I4 = get("H4"), get("I4")
    P = C.direct_product(H4, I4)
    u = unity_mask(P)
    uh, ui = unity_mask(H4), unity_mask(I4)
    for a, b in itertools.product(range(4), range(4)):
        assert u[a * 4 + b] == (uh[a] and ui[b])


def test_subalgebras():
    S, inc = C.subalgebra_generated(get("H4"), {2})
    assert S.size == 3 and iso(S, get("H3")) and inc.is_homomorphism()
    S, _ = C.subalgebra_generated(get("H4"), set())
    assert iso(S, get("2"))
    S, inc = C.subalgebra_generated(get("nm:6"), {4})
    assert iso(S, get("I4")) and sorted(inc.map) == [0, 1, 4, 5]
    assert C.all_subalgebras(get("L3")) == [frozenset({0, 2}), frozenset({0, 1, 2})]
    assert C.all_subalgebras(get("2")) == [frozenset({0, 1})]
    assert C.all_subalgebras(get("H4")) == [
        frozenset({0, 3}), frozenset({0, 1, 3}), frozenset({0, 2, 3}), frozenset({0, 1, 2, 3})
    ]


def test_subalgebras_brute_force(catalog):
    for A in [X for X in catalog if X.size <= 6]:
        want = []
        for r in range(A.size + 1):
            for s in itertools.combinations(range(A.size), r):
                s = frozenset(s)
                if {A.bot, A.top} <= s and C.closure(A, s) == s:
                    want.append(s)
        assert sorted(want, key=lambda s: (len(s), sorted(s))) == C.all_subalgebras(A), A


def test_diamond_examples():
    D, g = C.diamond(get("2"))
    assert D.size == 3 and iso(D, get("L3"))
    mid = C.diamond_pairs(D).index((0, 1))
    assert D.neg[mid] == mid
    for n in range(2, 7):
        assert C.diamond(get(f"luk:{n}"))[0].size == n * (n + 1) // 2
    assert holds_equation(C.diamond(get("L3"))[0], Eq.INV)
    with pytest.raises(ValueError):
        C.diamond(get("H3").to_hoop())


def test_diamond_battery_on_catalog(catalog):
    for A in [X for X in catalog if X.size <= 5]:
        D, g = C.diamond(A)
        assert validate_axioms(D).valid
        assert g.is_homomorphism() and g.is_injective()
        index = {p: k for k, p in enumerate(C.diamond_pairs(D))}
        for k, (a, b) in enumerate(C.diamond_pairs(D)):
            assert D.neg[k] == index[(A.neg[b], A.neg[a])]
        for eq in (Eq.INV, Eq.DIST):
            assert holds_equation(A, eq).holds == holds_equation(D, eq).holds


def test_test_d():
    t = C.is_test_d(get("H4"))
    assert t.witness == (2, 1) and t.radical_dense
    assert not C.is_test_d(get("H3"))
    assert C.is_test_d(get("godel:5"))


def test_test_i():
    assert C.is_test_I(get("nm:6")).witness == (4, 3)
    assert not C.is_test_I(get("I4"))
    assert not C.is_test_I(get("L3"))
