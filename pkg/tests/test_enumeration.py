import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from resalg import constructions as C
from resalg.algebra import validate_axioms
from resalg.enumeration import (
    bounded_lattices,
    canonical_form,
    count_crosscheck,
    enumerate_algebras,
    enumerate_by_monoids,
    linear_extensions,
)
from resalg.morphisms import is_isomorphic
from resalg.suite import RL_COUNT_SIZE_4
from resalg.varieties import classify

from conftest import get

# implementation-derived, frozen once both strategies agreed
FROZEN_RL = {1: 1, 2: 1, 3: 2, 4: RL_COUNT_SIZE_4, 5: 26}
FROZEN_CHAINS = {2: 1, 3: 2, 4: 6, 5: 22, 6: 94}


@pytest.mark.parametrize("n,count", sorted(FROZEN_RL.items()))
def test_counts(n, count):
    assert len(enumerate_algebras(n)) == count


@pytest.mark.parametrize("n,count", sorted(FROZEN_CHAINS.items()))
def test_chain_counts(n, count):
    assert len(enumerate_algebras(n, chains_only=True)) == count


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_strategies_agree(n):
    cc = count_crosscheck(n)
    assert cc.agree and cc.count_a == FROZEN_RL[n]


def test_hoop_strategies_agree():
    for n in (2, 3, 4):
        a = enumerate_algebras(n, "bounded_hoop")
        b = enumerate_by_monoids(n, "bounded_hoop")
        assert [canonical_form(A)[0] for A in a] == [canonical_form(B)[0] for B in b]


def test_small_examples():
    (two,) = enumerate_algebras(2)
    assert is_isomorphic(two, get("2"))
    three = enumerate_algebras(3)
    assert {canonical_form(A)[0] for A in three} == {canonical_form(get("H3"))[0], canonical_form(get("L3"))[0]}
    (mv4,) = enumerate_algebras(4, variety="MV", chains_only=True)
    assert is_isomorphic(mv4, get("luk:4"))


def test_outputs_valid_and_distinct():
    for n in range(1, 5):
        algs = enumerate_algebras(n)
        for A in algs:
            assert validate_axioms(A).valid
        for A, B in itertools.combinations(algs, 2):
            assert not is_isomorphic(A, B)


def test_catalog_is_covered(catalog):
    for A in [X for X in catalog if X.size <= 5]:
        key = canonical_form(A)[0]
        assert key in {canonical_form(B)[0] for B in enumerate_algebras(A.size)}, A


def test_filtered_equals_postfiltered():
    for n in (3, 4, 5):
        everything = enumerate_algebras(n)
        for v in ("MTL", "SRL", "NM", "BL", "IMTL", "WNM"):
            want = [canonical_form(A)[0] for A in everything if v in classify(A)]
            got = [canonical_form(A)[0] for A in enumerate_algebras(n, variety=v)]
            assert got == want


def test_size_bounds():
    with pytest.raises(ValueError):
        enumerate_algebras(7)
    with pytest.raises(ValueError):
        enumerate_algebras(0)
    with pytest.raises(ValueError):
        enumerate_by_monoids(6)


def test_canonical_form_examples(catalog):
    assert canonical_form(get("H4"))[0] == canonical_form(get("godel:4"))[0]
    assert canonical_form(get("H3"))[0] != canonical_form(get("L3"))[0]
    for A in catalog:
        key, B = canonical_form(A)
        fresh = B.relabel(range(B.size))  # drop the cache
        assert canonical_form(fresh)[0] == key
        assert is_isomorphic(A, B)


def test_keys_match_isomorphism():
    algs = [A for n in range(2, 5) for A in enumerate_algebras(n)]
    algs += [get("H4"), get("I4"), C.boolean_cube(2), get("luk:4")]
    for A, B in itertools.combinations(algs, 2):
        same_key = canonical_form(A)[0] == canonical_form(B)[0]
        assert same_key == bool(is_isomorphic(A, B)), (A, B)


@given(st.integers(0, 10_000), st.integers(0, 40))
def test_key_is_relabelling_invariant(seed, k):
    algs = [A for n in range(2, 6) for A in enumerate_algebras(n)]
    A = algs[k % len(algs)]
    perm = np.random.default_rng(seed).permutation(A.size)
    assert canonical_form(A.relabel(perm))[0] == canonical_form(A)[0]


def test_linear_extensions_brute_force():
    for leq, _, _ in bounded_lattices(5):
        n = leq.shape[0]
        want = []
        for order in itertools.permutations(range(n)):
            if order[0] != 0 or order[-1] != n - 1:
                continue
            pos = {x: i for i, x in enumerate(order)}
            if all(pos[x] <= pos[y] for x in range(n) for y in range(n) if leq[x, y]):
                want.append(order)
        assert sorted(linear_extensions(leq, 0, n - 1)) == sorted(want)


def test_lattice_counts():
    # unlabelled bounded lattices: 1, 1, 1, 2, 5 for n = 1..5; with several
    # natural labellings for the non-chains
    for n, want in ((2, 1), (3, 1), (4, 2), (5, 5)):
        keys = set()
        for leq, meet, join in bounded_lattices(n):
            exts = linear_extensions(leq, 0, n - 1)
            keys.add(min(
                tuple(tuple(int(leq[a, b]) for b in ext) for a in ext) for ext in exts
            ))
        assert len(keys) == want


def test_worker_count_does_not_change_output():
    code = (
        "from resalg.enumeration import enumerate_algebras, canonical_form;"
        "print([canonical_form(A)[0].hex() for A in enumerate_algebras(5)])"
    )
    outs = set()
    for threads in ("1", "3"):
        env = dict(os.environ, RESALG_THREADS=threads)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.add(r.stdout)
    assert len(outs) == 1
