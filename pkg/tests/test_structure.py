import numpy as np
import pytest

from resalg import constructions as C
from resalg.algebra import nilpotent_mask
from resalg.enumeration import enumerate_algebras
from resalg.morphisms import embeddings, is_isomorphic
from resalg.structure import (
    Filter,
    InconsistentResult,
    all_congruences,
    all_filters,
    all_filters_bruteforce,
    cep_check,
    chain_decomposition,
    congruence_of_filter,
    filter_generated,
    filter_of,
    induced_on_radical_quotients,
    is_congruence,
    is_simple,
    projection,
    quotient,
    radical_report,
    simplicity_report,
)
from resalg.varieties import classify

from conftest import get


def members(fs):
    return [F.sorted() for F in fs]


def test_filter_generated():
    assert filter_generated(get("H4"), {2}).sorted() == (2, 3)
    F = filter_generated(get("L3"), {1})
    assert F.sorted() == (0, 1, 2) and not F.proper
    assert filter_generated(get("H3"), set()).sorted() == (2,)


def test_all_filters_examples():
    assert members(all_filters(get("H4"))) == [(3,), (2, 3), (1, 2, 3), (0, 1, 2, 3)]
    assert len(all_filters(get("L3"))) == 2
    assert members(all_filters(get("H4"), maximal_only=True)) == [(1, 2, 3)]


def test_filter_strategies_agree(catalog):
    algs = [A for A in catalog if A.size <= 5]
    for n in range(1, 6):
        algs += enumerate_algebras(n)
    for A in algs:
        assert all_filters(A) == all_filters_bruteforce(A), A


def test_congruence_examples():
    H4 = get("H4")
    th = congruence_of_filter(Filter(H4, frozenset({1, 2, 3})))
    assert th.classes() == [[0], [1, 2, 3]]
    for A in (get("H4"), get("I6")):
        delta = congruence_of_filter(filter_generated(A, set()))
        assert delta.classes() == [[x] for x in range(A.size)]
        nabla = congruence_of_filter(Filter(A, frozenset(range(A.size))))
        assert nabla.classes() == [list(range(A.size))]


def test_bijection(catalog):
    for A in [X for X in catalog if X.size <= 6]:
        fs = all_filters(A)
        cs = all_congruences(A)
        assert sorted(congruence_of_filter(F).blocks for F in fs) == sorted(c.blocks for c in cs)
        for c in cs:
            assert is_congruence(A, c.blocks)
            assert congruence_of_filter(filter_of(c)) == c


def test_quotients():
    H4 = get("H4")
    Q = quotient(H4, Filter(H4, frozenset({1, 2, 3})))
    assert is_isomorphic(Q, get("2"))
    for A in (get("H4"), get("I4"), C.boolean_cube(2)):
        assert is_isomorphic(quotient(A, filter_generated(A, set())), A)
        assert quotient(A, Filter(A, frozenset(range(A.size)))).size == 1
        for F in all_filters(A):
            p = projection(A, F)
            assert p.is_homomorphism() and p.is_surjective()
            Q = p.target
            assert Q.bot == 0 and Q.top == Q.size - 1


def test_radical_examples():
    r = radical_report(get("H4"))
    assert r.radical.sorted() == (1, 2, 3) and r.radical_dense and r.principal_unity == 1
    assert not r.semisimple
    r = radical_report(get("L3"))
    assert r.radical.sorted() == (2,) and r.semisimple
    r = radical_report(get("I4"))
    assert r.radical.sorted() == (2, 3) and r.dense.sorted() == (3,)
    assert not r.radical_dense and r.principal_unity == 2


def test_radical_invariants(catalog):
    algs = list(catalog)
    for n in range(1, 5):
        algs += enumerate_algebras(n)
    for A in algs:
        r = radical_report(A)
        prof = classify(A)
        e = r.principal_unity
        assert e is not None and A.prod[e, e] == e
        assert r.radical.members == {x for x in range(A.size) if A.leq[e, x]}
        assert r.dense.members <= r.radical.members
        if "SRL" in prof or "BL" in prof:
            assert r.radical_dense, A
        for x in r.radical.members:
            assert A.imp[x, A.neg[e]] == A.neg[e]
        if "SRL" in prof:
            nil = nilpotent_mask(A)
            assert [x for x in range(A.size) if nil[x]] == [A.bot]
        # a dense radical strictly above {top} puts a copy of H3 inside
        if not r.semisimple and r.radical_dense:
            sub = {A.bot, e, A.top}
            assert C.closure(A, sub) == sub
            assert is_isomorphic(C.restrict(A, sub)[0], get("H3"))


def test_radical_mismatch_is_hard_failure(monkeypatch):
    import resalg.structure as S

    monkeypatch.setattr(S, "radical_by_maximal_filters", lambda A: frozenset({A.top}))
    with pytest.raises(InconsistentResult):
        S.radical_report(get("H4"))


def test_simplicity():
    assert simplicity_report(get("I6")).simple
    assert not is_simple(get("I4"))
    rep = simplicity_report(get("L3"))
    assert rep.simple and rep.hereditarily_simple
    with pytest.raises(ValueError):
        simplicity_report(enumerate_algebras(1)[0])


def test_simple_wnm_structure():
    for n in range(3, 6):
        for A in enumerate_algebras(n, variety="WNM"):
            if is_simple(A):
                from resalg.algebra import coatoms

                assert len(coatoms(A)) == 1
                assert is_isomorphic(A, C.ordinal_wnm(n))


def test_chain_decomposition():
    B = C.boolean_cube(2)
    d = chain_decomposition(B)
    assert d and len(d.filters) == 2
    for F in d.filters:
        assert is_isomorphic(quotient(B, F), get("2"))
    blocks = [congruence_of_filter(F) for F in d.filters]
    for x in range(4):
        for y in range(x + 1, 4):
            assert not all(t.related(x, y) for t in blocks)
    assert [F.sorted() for F in chain_decomposition(get("H3")).filters] == [(2,)]


def test_chain_decomposition_not_prelinear():
    # 0 < a, b < a v b < 1, Heyting
    leq = np.array([
        [1, 1, 1, 1, 1],
        [0, 1, 0, 1, 1],
        [0, 0, 1, 1, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ], bool)
    from resalg.enumeration import _lattice_ops
    from resalg.algebra import FiniteAlgebra, derive_residual

    meet, join = _lattice_ops(leq)
    imp = derive_residual(leq, meet).imp
    A = FiniteAlgebra.from_tables("rl", meet, imp, meet=meet, join=join, bot=0, top=4)
    d = chain_decomposition(A)
    assert not d and d.witness == (1, 2)


def test_cep():
    assert cep_check(get("H4")) and cep_check(get("I6"))


def test_monos_induce_injections_on_radical_quotients():
    H3, H4 = get("H3"), get("H4")
    for g in embeddings(H3, H4):
        f = induced_on_radical_quotients(g)
        assert f.is_injective() and f.is_homomorphism()
