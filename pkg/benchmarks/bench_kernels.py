"""Time the numba and numpy kernels side by side, then one full solve per backend.

    python benchmarks/bench_kernels.py [--sizes 64 1024 16384] [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from phiperiodic import _kernels as K


def _args(name, N, n, rng):
    U = rng.normal(size=(N, n))
    V = rng.uniform(-0.5, 0.5, size=(N, n))
    h = 1.0 / N
    return {
        "slopes": (U, h),
        "row_norms": (V,),
        "relativistic": (V, 1.0, 1.0, 0.0),
        "stencil": (V, U, h),
        "el_residual": (V, U, h),
        "sup_distance": (U, V),
        "cell_sums": (U[:, 0], max(1, N // 4)),
    }[name]


KERNELS = ("slopes", "row_norms", "relativistic", "stencil", "el_residual", "sup_distance",
           "cell_sums")

_SOLVE = ("import time;"
          "from phiperiodic.scenarios import preset_config;"
          "from phiperiodic.config import resolve_config, problem_from_config;"
          "from phiperiodic.minimize import multi_start;"
          "p = problem_from_config(resolve_config(preset_config('balanced-tilt')));"
          "multi_start(p, None, 16, starts=2, seed=0);"
          "t = time.perf_counter(); multi_start(p, None, {N}, starts=8, seed=0);"
          "print(time.perf_counter() - t)")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 1024, 16384])
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--solve-N", type=int, default=128)
    a = ap.parse_args(argv)
    if K.numba_kernels is None:
        sys.exit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'N':>7}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for N in a.sizes:
        for name in KERNELS:
            args = _args(name, N, a.n, rng)
            fnp, fnb = getattr(K.numpy_kernels, name), getattr(K.numba_kernels, name)
            fnb(*args)                                            # compile outside the timing
            number = max(1, 20000 // N)
            tnp = min(timeit.repeat(lambda: fnp(*args), number=number, repeat=a.repeat)) / number
            tnb = min(timeit.repeat(lambda: fnb(*args), number=number, repeat=a.repeat)) / number
            print(f"{name:<14}{N:>7}{tnp * 1e6:>12.2f}{tnb * 1e6:>12.2f}{tnp / tnb:>9.2f}")
    print(f"\nmulti_start, balanced tilt, N={a.solve_N}, 8 starts (seconds)")
    for flag in ("0", "1"):
        env = dict(os.environ, PHIPERIODIC_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", _SOLVE.format(N=a.solve_N)], env=env,
                             capture_output=True, text=True, check=True)
        print(f"  {'numba' if flag == '1' else 'numpy':<6} {float(out.stdout):.3f}")


if __name__ == "__main__":
    main()
