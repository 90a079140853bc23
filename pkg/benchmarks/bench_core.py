"""Compare the compiled kernel core against the numpy fallback.

Run ``python3 benchmarks/bench_core.py [--repeat N] [--threads T]``. Each row
reports the best wall time of both backends and the largest absolute
difference between their outputs.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from sobker import _pycore
from sobker.kernels_closed import KernelSpec, core_args

try:
    from sobker import _core
except ImportError:  # extension not built
    _core = None

SPECS = [
    KernelSpec.sobolev_univariate(4),
    KernelSpec.sobolev_infinity(2),
    KernelSpec.tensor_sobolev(3, 2),
    KernelSpec.matern(3, 2),
    KernelSpec.matern(2, 1.3),
    KernelSpec.gaussian(3),
]


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases(rng: np.random.Generator):
    """Yield ``(name, callable(backend))`` pairs."""
    for spec in SPECS:
        code, coef, params = core_args(spec)
        X = rng.normal(size=(800, spec.d))
        Y = rng.normal(size=(800, spec.d))
        tag = spec.describe()
        yield f"kernel_matrix 800x800 {tag}", lambda m, a=(code, coef, params, X, Y): m.kernel_matrix(*a)
        Z = rng.normal(size=(4000, spec.d))
        yield f"kernel_colsum 4000x800 {tag}", lambda m, a=(code, coef, params, Z, Y): m.kernel_colsum(*a)
    w = [np.sort(rng.uniform(0, 400, size=k)) ** 2 for k in (120, 120, 120)]
    alphas = np.array([[a, b, c] for a in range(3) for b in range(3) for c in range(3) if a + b + c <= 2],
                      dtype=np.int64)
    lam = np.ones(len(alphas))
    yield "poly_symbol_slab 120^3", lambda m: m.poly_symbol_slab(*w, alphas, lam)
    yield "iso_symbol_slab 120^3 s=2", lambda m: m.iso_symbol_slab(*w, (2 * np.pi) ** -1.5, 2.0)
    yield "iso_symbol_slab 120^3 s=2.3", lambda m: m.iso_symbol_slab(*w, (2 * np.pi) ** -1.5, 2.3)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=0, help="OpenMP threads of the compiled core, 0 = auto")
    args = ap.parse_args()
    if _core is None:
        print("compiled core not available; build with `pip install -e . --no-build-isolation`")
        return
    _core.set_num_threads(args.threads)
    rng = np.random.default_rng(0)
    print(f"{'case':<48} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, fn in cases(rng):
        ref, got = fn(_pycore), fn(_core)
        diff = float(np.max(np.abs(np.asarray(ref) - np.asarray(got))))
        t_py = _time(lambda: fn(_pycore), args.repeat)
        t_cy = _time(lambda: fn(_core), args.repeat)
        print(f"{name:<48} {t_py:>10.4f} {t_cy:>11.4f} {t_py / t_cy:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
