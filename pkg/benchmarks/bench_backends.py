#!/usr/bin/env python3
"""Benchmark the compiled sampling kernel against the pure-Python fallback.

Both backends implement the same integer-seeded algorithm, so besides the
timing table the script asserts that their accumulators agree bit for bit.

Usage: python benchmarks/bench_backends.py [--samples N]
"""

import argparse
import time

from redsim import _sampler_py

try:
    from redsim import _sampler_cy
except ImportError:
    _sampler_cy = None

CASES = [
    ("n=4 r=1 eps=0.3", dict(n_parties=4, rounds=1, eps=0.3, kappas=[0.46, 0.35, 0.0])),
    ("n=6 r=3 eps=0.2", dict(n_parties=6, rounds=3, eps=0.2, kappas=[0.3, 0.28, 0.26, 0.24, 0.0])),
    (
        "n=10 r=5 eps=0.5",
        dict(n_parties=10, rounds=5, eps=0.5, kappas=[0.2, 0.19, 0.18, 0.17, 0.16, 0.15, 0.14, 0.13, 0.0]),
    ),
]


def run(backend, samples, case):
    start = time.perf_counter()
    out = backend.mc_accumulate(
        2024, 0, samples, case["n_parties"], case["rounds"], case["eps"], case["kappas"]
    )
    return out, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=200_000)
    args = parser.parse_args()

    if _sampler_cy is None:
        print("compiled backend not built; showing pure-Python timings only")
    print(f"{'case':<20}{'python':>12}{'compiled':>12}{'speedup':>10}   identical")
    for label, case in CASES:
        py_out, py_time = run(_sampler_py, args.samples, case)
        if _sampler_cy is None:
            print(f"{label:<20}{py_time:>10.3f}s{'-':>12}{'-':>10}")
            continue
        cy_out, cy_time = run(_sampler_cy, args.samples, case)
        speedup = py_time / cy_time if cy_time > 0 else float("inf")
        match = "yes" if py_out == cy_out else "NO"
        print(
            f"{label:<20}{py_time:>10.3f}s{cy_time:>11.3f}s{speedup:>9.1f}x   {match}"
        )
        assert py_out == cy_out, f"backend mismatch on {label}"


if __name__ == "__main__":
    main()
