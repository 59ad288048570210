"""Compare the compiled core with the numpy fallback.

    python3 benchmarks/bench_core.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from symcalc import _pycore

try:
    from symcalc import _ccore
except ImportError:
    _ccore = None


def cases(rng: np.random.Generator):
    exps = np.array([a for a in np.ndindex(7, 7) if sum(a) <= 6], dtype=np.int64)
    coefs = rng.standard_normal(len(exps)) + 1j * rng.standard_normal(len(exps))
    z = np.exp(2j * np.pi * rng.random((20000, 2)))
    yield "poly_eval_grad n=2 deg=6, 20k points", (exps, coefs, z), "poly_eval_grad"
    mats = rng.standard_normal((3, 8, 8)) + 1j * rng.standard_normal((3, 8, 8))
    yield "symm_table n=3 dim=8 top=(6,6,6)", (mats, (6, 6, 6)), "symm_table"
    mats = rng.standard_normal((2, 32, 32)) + 1j * rng.standard_normal((2, 32, 32))
    yield "symm_table n=2 dim=32 top=(12,12)", (mats, (12, 12)), "symm_table"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'case':40s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s}")
    for label, inputs, name in cases(rng):
        py = min(timeit.repeat(lambda: getattr(_pycore, name)(*inputs), number=1, repeat=args.repeat))
        if _ccore is None:
            print(f"{label:40s} {py * 1e3:12.2f} {'n/a':>14s} {'':>8s}")
            continue
        cc = min(timeit.repeat(lambda: getattr(_ccore, name)(*inputs), number=1, repeat=args.repeat))
        ref, out = getattr(_pycore, name)(*inputs), getattr(_ccore, name)(*inputs)
        same = all(np.allclose(a, b) for a, b in zip(np.atleast_1d(ref) if name == "symm_table" else ref,
                                                      np.atleast_1d(out) if name == "symm_table" else out))
        flag = "" if same else "  MISMATCH"
        print(f"{label:40s} {py * 1e3:12.2f} {cc * 1e3:14.2f} {py / cc:7.1f}x{flag}")


if __name__ == "__main__":
    main()
