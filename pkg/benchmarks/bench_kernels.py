"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends must return identical results; the script checks this before
printing timings.
"""

import argparse
import timeit

import numpy as np

from regcomplex import fitness, kernels


def fitness_case(rng, S, P, density=0.4):
    while True:
        m = (rng.random((S, P)) < density).astype(np.uint8)
        if m.sum(axis=1).all() and m.sum(axis=0).all():
            return m


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled kernels not built; only the python backend is available")
    rng = np.random.default_rng(0)

    n = 1_000_000
    agg = (rng.integers(0, 36, n), rng.integers(0, 99, n), rng.integers(0, 10**9, n), 36, 99)
    m = fitness_case(rng, 36, 99)
    tb_r = fitness.label_order([f"r{i:02d}" for i in range(36)])
    tb_p = fitness.label_order([f"p{j:02d}" for j in range(99)])
    fit = (m, 1000, 1000, tb_r, tb_p)

    cases = {"aggregate 1e6 records": ("aggregate", agg), "fitness 36x99, 1000 iter": ("fitness_iterate", fit)}
    print(f"{'case':28} {'backend':8} {'best (ms)':>10}")
    for label, (fn, call) in cases.items():
        results = {name: getattr(mod, fn)(*call) for name, mod in impls.items()}
        ref = results["python"]
        for name, out in results.items():
            same = all(np.array_equal(a, b) for a, b in zip(out, ref)) if isinstance(out, tuple) else np.array_equal(out, ref)
            if not same:
                raise SystemExit(f"{name} disagrees with python on {label}")
        timings = {}
        for name, mod in impls.items():
            f = getattr(mod, fn)
            timings[name] = min(timeit.repeat(lambda: f(*call), number=1, repeat=args.repeat)) * 1e3
            print(f"{label:28} {name:8} {timings[name]:10.2f}")
        if "cython" in timings:
            print(f"{'':28} speedup  {timings['python'] / timings['cython']:9.1f}x")


if __name__ == "__main__":
    main()
