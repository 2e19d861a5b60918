"""The numba and pure-numpy paths must agree."""
import os
import subprocess
import sys

import numpy as np

from resalg import _kernels
from resalg.enumeration import bounded_lattices


SCRIPT = """
import json
from resalg import _accel
from resalg.enumeration import enumerate_algebras, canonical_form
from resalg.morphisms import count_homomorphisms
from resalg import constructions as C
out = {
    "numba": _accel.USE_NUMBA,
    "rl": [canonical_form(A)[0].hex() for n in range(1, 6) for A in enumerate_algebras(n)],
    "bh": [canonical_form(A)[0].hex() for n in range(2, 5) for A in enumerate_algebras(n, "bounded_hoop")],
    "homs": [count_homomorphisms(A, B) for A in C.standard_catalog(5) for B in C.standard_catalog(5)],
}
print(json.dumps(out))
"""


def _run(disable: bool) -> dict:
    import json

    env = dict(os.environ)
    env.pop("RESALG_DISABLE_NUMBA", None)
    if disable:
        env["RESALG_DISABLE_NUMBA"] = "1"
    r = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(r.stdout)


def test_fallback_matches_numba():
    fast, slow = _run(False), _run(True)
    assert slow["numba"] is False
    for key in ("rl", "bh", "homs"):
        assert fast[key] == slow[key]


def test_residual_variants_agree(catalog):
    for A in catalog:
        a = np.empty_like(A.prod)
        b = np.empty_like(A.prod)
        ra = _kernels._residual_loops(np.ascontiguousarray(A.leq), A.prod, a)
        rb = _kernels._residual_numpy(A.leq, A.prod, b)
        assert ra[0] and rb[0]
        assert np.array_equal(a, b) and np.array_equal(a, A.imp)


def test_residual_variants_agree_on_failures():
    for leq, meet, _ in bounded_lattices(4):
        n = leq.shape[0]
        monoids = _kernels.collect(
            _kernels.unordered_monoids, n, 0, n - 1, shape=(n, n)
        )
        for prod in monoids:
            a = np.empty_like(prod)
            b = np.empty_like(prod)
            ra = _kernels._residual_loops(np.ascontiguousarray(leq), prod, a)
            rb = _kernels._residual_numpy(leq, prod, b)
            assert ra[0] == rb[0]
            if ra[0]:
                assert np.array_equal(a, b)


def test_ordered_monoids_are_monoids():
    for leq, meet, _ in bounded_lattices(4):
        n = leq.shape[0]
        for prod in _kernels.collect(_kernels.ordered_monoids, np.ascontiguousarray(leq), meet, 0, n - 1, shape=(n, n)):
            assert np.array_equal(prod, prod.T)
            assert np.array_equal(prod[n - 1], np.arange(n))
            x = np.arange(n)
            assert np.array_equal(prod[prod[:, :, None], x], prod[x[:, None, None], prod[None, :, :]])


def test_benchmark_runs():
    import pathlib

    bench = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    r = subprocess.run([sys.executable, str(bench), "--repeat", "1", "--json"], capture_output=True, text=True, check=True)
    import json

    doc = json.loads(r.stdout)
    assert doc["numpy"]["numba"] is False
    assert set(doc["numba"]["workloads"]) == set(doc["numpy"]["workloads"])
