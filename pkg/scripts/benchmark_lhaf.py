#!/usr/bin/env python3
"""
Smoke benchmark for the loop hafnian kernel.

Times lhaf_fast at n = 20 and n = 30 and compares the ratio with the
2^(n/2) n^3 cost model, then times the kernel against brute force on small
matrices. Run by hand: python scripts/benchmark_lhaf.py [--threads N]
"""
import argparse
import os
import sys
import time
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from dotenv import load_dotenv
load_dotenv(project_root / '.env')

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'backend.settings')
import django
django.setup()

import numpy as np

from gaussamp.hafnian import lhaf_fast
from gaussamp.matchgraph import lhaf_bruteforce

SLACK = 3.0


def random_symmetric(rng, n):
    raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (raw + raw.T) / (2 * np.sqrt(n))


def timed(func, *args, repeats=1, **kwargs):
    best = float('inf')
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args, **kwargs)
        best = min(best, time.perf_counter() - start)
    return best


def cost(n):
    return 2 ** (n / 2) * n ** 3


def main():
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument('--threads', type=int, default=None)
    parser.add_argument('--seed', type=int, default=2024)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    print("\n" + "=" * 60)
    print("LOOP HAFNIAN SCALING")
    print("=" * 60)

    # compile outside the timed region
    lhaf_fast(random_symmetric(rng, 4), threads=args.threads)

    small = timed(lhaf_fast, random_symmetric(rng, 20), threads=args.threads, repeats=3)
    large = timed(lhaf_fast, random_symmetric(rng, 30), threads=args.threads)
    measured = large / small
    predicted = cost(30) / cost(20)
    print(f"   n = 20: {small:10.4f} s")
    print(f"   n = 30: {large:10.4f} s")
    print(f"   ratio measured {measured:.1f}, predicted {predicted:.1f}")
    within = predicted / SLACK <= measured <= predicted * SLACK
    print(f"   {'✓' if within else '⚠️ '} within {SLACK:g}x of the cost model")

    print("\n" + "=" * 60)
    print("KERNEL VS BRUTE FORCE")
    print("=" * 60)
    for n in (6, 8, 10, 12):
        matrix = random_symmetric(rng, n)
        fast = timed(lhaf_fast, matrix, threads=args.threads, repeats=3)
        brute = timed(lhaf_bruteforce, matrix)
        print(f"   n = {n:2d}: kernel {fast:.5f} s, brute force {brute:.5f} s")

    return 0 if within else 1


if __name__ == '__main__':
    sys.exit(main())
