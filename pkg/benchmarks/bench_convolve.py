"""Benchmark the convolution backends on the default filter bank.

Usage: python benchmarks/bench_convolve.py [--side 128] [--repeats 3]

Times one full texture extraction (all bank kernels) per backend and a
single-kernel response, then prints a small table.  The compiled backend
is the direct spatial loop; the numpy backend computes the same response
through FFTs.
"""

import argparse
import time

import numpy as np

from mfir import convolve
from mfir.gabor import GaborBankParams, build_filter_bank


def time_extraction(image, bank, backend, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for kernel in bank:
            response = convolve.correlate_same(image, np.conj(kernel.taps), backend=backend)
            mag = np.abs(response)
            mag.mean(), mag.std()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--side", type=int, default=128)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    params = GaborBankParams()
    bank = build_filter_bank(params)
    rng = np.random.default_rng(0)
    image = rng.random((args.side, args.side))

    backends = ["numpy"]
    if convolve._conv_ext is not None:
        backends.insert(0, "compiled")
    else:
        print("note: compiled extension not built; timing the numpy fallback only")

    print(f"image {args.side}x{args.side}, bank {len(bank)} kernels of "
          f"{2 * params.kernel_radius + 1}x{2 * params.kernel_radius + 1} taps, "
          f"best of {args.repeats}\n")
    print(f"{'backend':<10} {'per image (ms)':>15} {'per kernel (ms)':>16} {'images/s':>10}")
    timings = {}
    for backend in backends:
        convolve.correlate_same(image, np.conj(bank[7].taps), backend=backend)  # warmup
        timings[backend] = time_extraction(image, bank, backend, args.repeats)
        per_image = timings[backend]
        print(f"{backend:<10} {per_image * 1e3:>15.1f} {per_image * 1e3 / len(bank):>16.2f} "
              f"{1.0 / per_image:>10.2f}")

    if len(timings) == 2:
        ratio = timings["compiled"] / timings["numpy"]
        faster = "numpy (FFT)" if ratio > 1 else "compiled (direct)"
        print(f"\n{faster} is {max(ratio, 1 / ratio):.1f}x faster at this kernel size")
        diff = np.max(np.abs(
            convolve.correlate_same(image, np.conj(bank[7].taps), backend="compiled")
            - convolve.correlate_same(image, np.conj(bank[7].taps), backend="numpy")
        ))
        print(f"max backend disagreement on a sample kernel: {diff:.2e}")


if __name__ == "__main__":
    main()
