"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--steps 4000]

Each case runs the same inputs through both backends, checks that they agree
and prints the best wall time of ``--repeat`` runs.
"""
import argparse
import time

import numpy as np

from qwalk import _fallback
from qwalk.bessel import truncation_order
from qwalk.schedules import PowerLaw

try:
    from qwalk import _kernels
except ImportError:
    _kernels = None


def _walk_inputs(alpha, nsteps, record_every):
    width = 2 * nsteps + 3
    a = np.zeros(width, complex)
    b = np.zeros(width, complex)
    a[nsteps] = np.sqrt(0.5)
    b[nsteps] = 1j * np.sqrt(0.5)
    cs, sn = PowerLaw(alpha).cos_sin(1, 1 + nsteps)
    record = (np.arange(1, nsteps + 1) % record_every == 0).astype(np.uint8)
    return a, b, cs, sn, record


def bench_propagate(mod, alpha, nsteps, record_every):
    a, b, cs, sn, record = _walk_inputs(alpha, nsteps, record_every)
    out = np.zeros((int(record.sum()), 3))
    t0 = time.perf_counter()
    mod.propagate(a, b, nsteps, nsteps, nsteps, cs, sn, record, out)
    return time.perf_counter() - t0, out


def bench_miller(mod, x):
    start = truncation_order(x)
    start += start % 2
    out = np.zeros(start + 1)
    t0 = time.perf_counter()
    mod.miller_backward(start, x, out)
    return time.perf_counter() - t0, out


def best_of(fn, repeat):
    runs = [fn() for _ in range(repeat)]
    return min(t for t, _ in runs), runs[0][1]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--steps", type=int, default=4000)
    args = parser.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")

    cases = [
        (f"propagate alpha=0   {args.steps} steps",
         lambda m: bench_propagate(m, 0.0, args.steps, 10)),
        (f"propagate alpha=0.5 {args.steps} steps",
         lambda m: bench_propagate(m, 0.5, args.steps, 10)),
        (f"propagate alpha=2   {args.steps} steps",
         lambda m: bench_propagate(m, 2.0, args.steps, 10)),
        ("miller x=1e3", lambda m: bench_miller(m, 1e3)),
        ("miller x=5e4", lambda m: bench_miller(m, 5e4)),
    ]
    print(f"{'case':<32}{'compiled':>12}{'numpy':>12}{'speedup':>10}")
    for name, fn in cases:
        tc, rc = best_of(lambda: fn(_kernels), args.repeat)
        tp, rp = best_of(lambda: fn(_fallback), args.repeat)
        if not np.allclose(rc, rp, rtol=1e-10, atol=1e-12):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<32}{tc * 1e3:>10.2f}ms{tp * 1e3:>10.2f}ms{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
