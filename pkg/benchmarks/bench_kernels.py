"""Benchmark the training kernel: numba backend vs the pure-Python fallback.

Both backends execute the same epoch function (one is the njit-compiled
form of the other), so besides timing, the script verifies that the
resulting parameters are bit-identical.

Usage:
    python3 benchmarks/bench_kernels.py [--records N] [--words V]
                                        [--dim D] [--epochs E] [--threads T]
"""

import argparse
import time

import numpy as np

from extremal_glove._kernels import (
    clamp_threads,
    numba_available,
    parallel_kernel,
    serial_kernel,
)
from extremal_glove.corpus import CoocRecords
from extremal_glove.trainer import init_model


def synthetic_inputs(n_records: int, n_words: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n_words, size=n_records, dtype=np.uint32)
    j = rng.integers(0, n_words, size=n_records, dtype=np.uint32)
    x = rng.uniform(0.5, 100.0, size=n_records)
    records = CoocRecords(i, j, x)
    weight = np.minimum((x / 100.0) ** 0.75, 1.0)
    log_x = np.log(x)
    order = rng.permutation(n_records)
    return records, weight, log_x, order


def run_epochs(kernel, model, records, weight, log_x, order, epochs, lr=0.05):
    start = time.perf_counter()
    for _ in range(epochs):
        total, bad = kernel(
            *model.arrays(), records.i, records.j, log_x, weight, order, lr
        )
        assert bad == -1
    return time.perf_counter() - start, total


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--records", type=int, default=20_000)
    parser.add_argument("--words", type=int, default=2_000)
    parser.add_argument("--dim", type=int, default=20)
    parser.add_argument("--epochs", type=int, default=2)
    parser.add_argument("--threads", type=int, default=1,
                        help="also time the lock-free parallel kernel")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    records, weight, log_x, order = synthetic_inputs(
        args.records, args.words, args.seed
    )
    print(f"records {args.records}  words {args.words}  "
          f"dim {args.dim}  epochs {args.epochs}")

    model_py = init_model(args.words, args.dim, seed=args.seed)
    py_time, py_total = run_epochs(
        serial_kernel("numpy"), model_py, records, weight, log_x, order, args.epochs
    )
    visited = args.records * args.epochs
    print(f"numpy  : {py_time:8.3f} s  {visited / py_time:12,.0f} records/s")

    if not numba_available():
        print("numba  : not importable; skipping")
        return 0

    compile_start = time.perf_counter()
    jit = serial_kernel("numba")
    warm = init_model(args.words, args.dim, seed=args.seed)
    run_epochs(jit, warm, records, weight, log_x, order, 1)
    compile_time = time.perf_counter() - compile_start

    model_nb = init_model(args.words, args.dim, seed=args.seed)
    nb_time, nb_total = run_epochs(
        jit, model_nb, records, weight, log_x, order, args.epochs
    )
    print(f"numba  : {nb_time:8.3f} s  {visited / nb_time:12,.0f} records/s"
          f"  (first call {compile_time:.2f} s)")
    print(f"speedup: {py_time / nb_time:8.1f}x")

    identical = py_total == nb_total and all(
        np.array_equal(a, b) for a, b in zip(model_py.arrays(), model_nb.arrays())
    )
    print(f"parameters bit-identical across backends: {identical}")

    if args.threads > 1:
        import numba

        threads = clamp_threads(args.threads, "numba")
        numba.set_num_threads(threads)
        hog = parallel_kernel()
        warm = init_model(args.words, args.dim, seed=args.seed)
        run_epochs(hog, warm, records, weight, log_x, order, 1)
        model_hw = init_model(args.words, args.dim, seed=args.seed)
        hw_time, _ = run_epochs(
            hog, model_hw, records, weight, log_x, order, args.epochs
        )
        print(f"numba parallel ({threads} threads): {hw_time:8.3f} s  "
              f"{visited / hw_time:12,.0f} records/s")

    return 0 if identical else 1


if __name__ == "__main__":
    raise SystemExit(main())
