"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--bits 20]

Each kernel is called once first so numba compilation stays out of the timings.
"""

import argparse
import time

import numpy as np

from mixedqc import kernels
from mixedqc.pathsum import compile_path_sum, random_circuit
from mixedqc.random_unitary import haar_unitary


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--bits", type=int, default=20, help="path bits for the counting kernel")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    polys = None
    while polys is None or polys.num_path_bits != args.bits:
        circ = random_circuit(3, rng.integers(4, 14), "toffoli", rng)
        polys = compile_path_sum(circ)
        if polys.num_path_bits > args.bits:
            polys = None
    masks, chi = polys.masks(), polys.chi
    xs = rng.integers(0, 1 << polys.num_path_bits, size=10**6, dtype=np.int64)
    phases = np.angle(np.linalg.eigvals(haar_unitary(2**8, rng)))
    th = np.linspace(0, np.pi, 33).repeat(64)
    ph = np.tile(np.linspace(0, 2 * np.pi, 64, endpoint=False), 33)

    cases = [
        (f"count_paths ({args.bits} bits)", kernels.count_paths_numba, kernels.count_paths_numpy,
         (polys.num_path_bits, masks, chi)),
        ("evaluate_paths (1e6 paths)", kernels.evaluate_paths_numba, kernels.evaluate_paths_numpy,
         (xs, masks, chi)),
        ("dqc1_conditional_entropy (256 phases, 2112 angles)",
         kernels.dqc1_conditional_entropy_numba, kernels.dqc1_conditional_entropy_numpy,
         (phases, 0.7, th, ph)),
    ]
    print(f"{'kernel':52s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}  agree")
    for name, nb, npf, a in cases:
        r_nb, r_np = nb(*a), npf(*a)
        if isinstance(r_nb, tuple):
            agree = all(np.array_equal(x, y) for x, y in zip(r_nb, r_np))
        else:
            agree = np.allclose(r_nb, r_np, rtol=0, atol=1e-12)
        t_nb = best_of(lambda: nb(*a), args.repeat)
        t_np = best_of(lambda: npf(*a), args.repeat)
        print(f"{name:52s} {t_nb:10.4f} {t_np:10.4f} {t_np / t_nb:8.1f}  {agree}")


if __name__ == "__main__":
    main()
