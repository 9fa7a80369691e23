"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from hhbounds import kernels


def workloads(rng):
    tau = rng.uniform(0, 1, 200_000)
    sigma = rng.uniform(0, 1, 2_000)
    n, m = 1500, 1500
    v = np.sort(rng.uniform(0, 0.5, n))
    w = np.sort(rng.uniform(0.5, 1, m))
    a, b = rng.uniform(0, 1, n), rng.uniform(0, 1, m)
    f = lambda t: t ** 2 + 0.05 * np.sin(25 * t)  # noqa: E731
    pair_args = (a, np.ones(n), v, f(v), b, np.ones(m), w, f(w), 1.0, 0.5, f(0.5))
    return {
        "dyadic_sum (200k points, 40 terms)": lambda k: k.dyadic_sum(tau, 1.0, 40),
        "phi_blocks (2k sigmas, blocks 0..14)": lambda k: k.phi_blocks(sigma, 0, 14),
        "clipped_pair_sum (1500 x 1500)": lambda k: k.clipped_pair_sum(*pair_args),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = kernels.available_backends()
    if "cython" not in names:
        print("compiled kernels not built; only the python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s}" + "".join(f"{n:>12s}" for n in names) + ("    speedup" if len(names) > 1 else ""))
    for label, job in workloads(rng).items():
        best = {}
        for name in names:
            k = kernels.backend(name)
            job(k)
            best[name] = min(timeit.repeat(lambda: job(k), number=1, repeat=args.repeat))
        line = f"{label:40s}" + "".join(f"{best[n] * 1e3:10.1f}ms" for n in names)
        if len(names) > 1:
            line += f"{best['python'] / best['cython']:10.1f}x"
        print(line)


if __name__ == "__main__":
    main()
