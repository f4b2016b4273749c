"""Time the numba kernels against their numpy fallbacks on realistic inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]

Kernel timings call both implementations in-process.  Pipeline timings run CLI
commands in subprocesses, with and without BURNSIDE_FUSION_DISABLE_NUMBA=1.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from burnside_fusion import _accel
from burnside_fusion.bisets import ExplicitBiset
from burnside_fusion.catalog import group_by_name
from burnside_fusion.groups import _encode, homomorphisms, inclusion


def best_of(fn, args, repeat):
    fn(*args)  # compile / warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads():
    S5 = group_by_name("S5")
    codes, weights = _encode(S5.perms)
    yield "mul_table S5", (S5.perms, codes, weights)

    gens = np.array([S5.index([1, 0, 2, 3, 4]), S5.index([1, 2, 3, 4, 0])], dtype=np.int64)
    yield "closure_mask S5", (S5.mul, gens, gens)

    G = group_by_name("S4")
    K = next(P for P in G.subgroups() if P.order == 8)
    phi = inclusion(K)
    psi = homomorphisms(K, G)[-1]
    yield "transport_mask S4", (G.conj, G.conj, np.asarray(K.gens, dtype=np.int64), phi.arr, psi.arr, K.mask)

    rng = np.random.default_rng(0)
    yield "lexmin_row 20000x8", (rng.integers(0, 6, size=(20000, 8)).astype(np.int64),)

    D = group_by_name("D8")
    b = ExplicitBiset.from_pair(D, D, D.trivial, homomorphisms(D.trivial, D)[0])
    big = b.tensor(b)
    acts = np.array([big.left[h] for h in D.generators] + [big.right[g] for g in D.generators], dtype=np.int64)
    yield f"orbit_labels {acts.shape[1]} points", (acts,)


_WARM = """
import json, sys, time
from burnside_fusion.cli import run
argv = json.loads(sys.argv[1])
run(argv)
t0 = time.perf_counter()
run(argv)
print(time.perf_counter() - t0)
"""


def pipeline(disable, command):
    """(cold wall clock of one CLI process, warm in-process time of a repeated run)."""
    env = dict(os.environ, BURNSIDE_FUSION_DISABLE_NUMBA="1" if disable else "0")
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "burnside_fusion.cli", *command], env=env, check=True,
                   stdout=subprocess.DEVNULL)
    cold = time.perf_counter() - t0
    out = subprocess.run([sys.executable, "-c", _WARM, json.dumps(command)], env=env, check=True,
                         capture_output=True, text=True).stdout
    return cold, float(out.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write the timings here")
    args = ap.parse_args()
    if "numba" not in _accel.IMPLEMENTATIONS:
        sys.exit("numba is not installed; nothing to compare")

    rows = []
    print(f"{'kernel':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for label, inputs in workloads():
        name = label.split()[0]
        t_np = best_of(_accel.IMPLEMENTATIONS["numpy"][name], inputs, args.repeat)
        t_nb = best_of(_accel.IMPLEMENTATIONS["numba"][name], inputs, args.repeat)
        rows.append({"kernel": label, "numpy_s": t_np, "numba_s": t_nb})
        print(f"{label:32s} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:8.1f}x")

    print(f"\n{'pipeline':32s} {'numpy cold':>10s} {'numba cold':>10s} {'numpy warm':>10s} {'numba warm':>10s}")
    for command in (["roundtrip", "F(S4,D8)"], ["basis", "D16", "D16"], ["fusion", "--group", "S6", "--p", "2"]):
        label = " ".join(command)
        np_cold, np_warm = pipeline(True, command)
        nb_cold, nb_warm = pipeline(False, command)
        rows.append({"pipeline": label, "numpy_cold_s": np_cold, "numba_cold_s": nb_cold,
                     "numpy_warm_s": np_warm, "numba_warm_s": nb_warm})
        print(f"{label:32s} {np_cold * 1e3:10.1f} {nb_cold * 1e3:10.1f} {np_warm * 1e3:10.1f} {nb_warm * 1e3:10.1f}")
    print("times in ms; cold = one CLI process including imports, warm = second run inside one process")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
