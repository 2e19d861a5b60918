"""Time the numba kernels against the pure-numpy fallback.

Each mode runs in its own interpreter because the backend is picked at import
time from RESALG_DISABLE_NUMBA.  The first call of every workload (JIT compile
plus cache fill) is reported separately from the steady-state best of N.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from resalg import _accel, _kernels
from resalg import constructions as C
from resalg.algebra import Signature
from resalg.enumeration import _lattice_first, _monoid_first
from resalg.morphisms import count_homomorphisms

repeat = int(sys.argv[1])
cat = C.standard_catalog()
small = [A for A in cat if A.size <= 6]


def residuals():
    for A in cat:
        out = np.empty_like(A.prod)
        _kernels.residual(np.ascontiguousarray(A.leq), A.prod, out)


def homs():
    for A in small:
        for B in small:
            count_homomorphisms(A, B)


def lattice_first():
    _lattice_first(5, Signature.RL, (), False)
    _lattice_first(6, Signature.RL, (), True)


def monoid_first():
    _monoid_first(5, Signature.RL, (), False)


out = {"numba": _accel.USE_NUMBA, "workloads": {}}
for name, fn in [("residual", residuals), ("hom_count", homs),
                 ("enumerate_lattice_first", lattice_first), ("enumerate_monoid_first", monoid_first)]:
    t0 = time.perf_counter()
    fn()
    first = time.perf_counter() - t0
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    out["workloads"][name] = {"first": first, "best": min(times)}
print(json.dumps(out))
"""


def run_mode(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("RESALG_DISABLE_NUMBA", None)
    if disable:
        env["RESALG_DISABLE_NUMBA"] = "1"
    r = subprocess.run([sys.executable, "-c", CHILD, str(repeat)], env=env,
                       capture_output=True, text=True, check=True)
    return json.loads(r.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    fast = run_mode(False, args.repeat)
    slow = run_mode(True, args.repeat)
    if args.json:
        print(json.dumps({"numba": fast, "numpy": slow}, indent=2))
        return 0
    if not fast["numba"]:
        print("note: numba unavailable, both columns use the fallback")
    print(f"{'workload':26} {'numba first':>12} {'numba best':>11} {'numpy best':>11} {'speedup':>8}  (ms)")
    for name, f in fast["workloads"].items():
        s = slow["workloads"][name]
        ratio = s["best"] / f["best"] if f["best"] > 0 else float("inf")
        print(f"{name:26} {1e3 * f['first']:12.1f} {1e3 * f['best']:11.2f} {1e3 * s['best']:11.2f} {ratio:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
