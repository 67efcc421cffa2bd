"""Compare the compiled Jacobi kernel against the pure Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--sizes 4,8,16,32,64] [--repeats 20]

Both backends run the identical cyclic sweep, so the table is a pure
dispatch-overhead measurement; results feed the decision to keep the
compiled extension optional but preferred.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from modframe import _kernels  # noqa: E402
from modframe._kernels import jacobi_py  # noqa: E402


def bench(fn, mats, target):
    start = time.perf_counter()
    for m in mats:
        fn(m, target * np.linalg.norm(m), 60)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="4,8,16,32,64")
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    compiled = None
    if _kernels.BACKEND == "compiled":
        compiled = _kernels.diagonalize_hermitian
    else:
        print("note: compiled kernel not built; showing the fallback only")

    print(f"{'n':>5} {'python (ms)':>14} {'compiled (ms)':>14} {'speedup':>9}")
    for n in sizes:
        mats = []
        for _ in range(args.repeats):
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            mats.append((a + a.conj().T) / 2.0)
        t_py = bench(jacobi_py.diagonalize_hermitian, mats, 1e-14) / args.repeats
        if compiled is not None:
            t_c = bench(compiled, mats, 1e-14) / args.repeats
            print(f"{n:>5} {t_py * 1e3:>14.3f} {t_c * 1e3:>14.3f} {t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>5} {t_py * 1e3:>14.3f} {'-':>14} {'-':>9}")

    # agreement spot check at the largest size
    a = mats[0]
    w_py, _, _, _ = jacobi_py.diagonalize_hermitian(a, 1e-14 * np.linalg.norm(a), 60)
    if compiled is not None:
        w_c, _, _, _ = compiled(a, 1e-14 * np.linalg.norm(a), 60)
        print(f"max eigenvalue gap between backends: {np.abs(np.sort(w_py) - np.sort(w_c)).max():.2e}")


if __name__ == "__main__":
    main()
