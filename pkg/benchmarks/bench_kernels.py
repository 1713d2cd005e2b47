"""Compare the compiled and pure-Python NNLS kernels on scaling-sized systems.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--sizes 3,6,10]

Each size ``n`` builds the vectorised projector system of a random fusion
frame in R^n with ``2n`` items, then times ``nnls_solve`` and ``sym_vec`` in
both backends. Results are checked to agree before any timing is reported.
"""

import argparse
import sys
import timeit

import numpy as np

from fusionscale import _pykernels, numerics
from fusionscale.fusion import FusionFrame
from fusionscale.scaling import build_system
from fusionscale.subspace import Subspace

try:
    from fusionscale import _ckernels
except ImportError:
    _ckernels = None


def random_system(n, rng):
    spaces = [Subspace.span(list(rng.standard_normal((int(rng.integers(1, n)), n)))) for _ in range(2 * n)]
    return build_system(FusionFrame(spaces))


def bench(n, repeat, rng):
    A, b = random_system(n, rng)
    k = A.shape[1]
    tol = numerics._nnls_gradient_tol(A, b)
    M = rng.standard_normal((n, n))
    M = M + M.T
    row = {"n": n, "rows": A.shape[0], "cols": k}
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["compiled"] = _ckernels
    ref = None
    for name, mod in backends.items():
        x, _, status = mod.nnls_solve(A, b, None, 10 * k, tol)
        x = np.asarray(x)
        if status != 0:
            raise RuntimeError(f"{name} kernel hit the iteration limit at n={n}")
        if ref is not None and np.abs(x - ref).max() > 1e-8:
            raise RuntimeError(f"backends disagree at n={n}")
        ref = x
        t = min(timeit.repeat(lambda: mod.nnls_solve(A, b, None, 10 * k, tol), number=repeat, repeat=3)) / repeat
        row[f"{name}_nnls_us"] = t * 1e6
        Mc = np.ascontiguousarray(M)
        t = min(timeit.repeat(lambda: mod.sym_vec(Mc), number=repeat, repeat=3)) / repeat
        row[f"{name}_symvec_us"] = t * 1e6
    return row


def run(sizes, repeat, seed=0, out=sys.stdout):
    rng = np.random.default_rng(seed)
    rows = [bench(n, repeat, rng) for n in sizes]
    has_c = _ckernels is not None
    header = f"{'n':>3} {'A shape':>10} {'py nnls us':>11} {'py symvec':>10}"
    if has_c:
        header += f" {'c nnls us':>10} {'c symvec':>9} {'speedup':>8}"
    print(header, file=out)
    for r in rows:
        line = f"{r['n']:>3} {str((r['rows'], r['cols'])):>10} {r['python_nnls_us']:>11.1f} {r['python_symvec_us']:>10.2f}"
        if has_c:
            line += f" {r['compiled_nnls_us']:>10.1f} {r['compiled_symvec_us']:>9.2f}"
            line += f" {r['python_nnls_us'] / r['compiled_nnls_us']:>7.1f}x"
        print(line, file=out)
    if not has_c:
        print("compiled kernel not built; only the Python backend was timed", file=out)
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=50)
    p.add_argument("--sizes", default="3,6,10,16")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    run([int(s) for s in args.sizes.split(",")], args.repeat, args.seed)


if __name__ == "__main__":
    main()
