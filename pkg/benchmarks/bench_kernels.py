"""Time the numba kernels against their numpy/interpreter fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--threads N]

Both variants are called on the same inputs; results are checked for
agreement before timing. Compilation happens in a warm-up call and is not
counted.
"""

import argparse
import math
import time

import numpy as np

from tiltedlattice import _kernels
from tiltedlattice.analytic1d import GaussianSpec1D, LatticeParams1D, gaussian_1d
from tiltedlattice.special import kernel_halfwidth, miller_start


def best_of(fn, args, repeat):
    fn(*args)
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(0)

    # exact 1D propagation of a sigma = 10 packet at F/J = 0.05: kernel argument 80
    z = 80.0
    w = kernel_halfwidth(z)
    src = gaussian_1d(GaussianSpec1D(0.0, 0.3, 10.0)).amplitudes.astype(np.complex128)
    ker = rng.standard_normal(2 * w + 1) + 1j * rng.standard_normal(2 * w + 1)
    yield "convolve (packet x Bessel kernel)", "convolve", (src, ker)

    big = rng.standard_normal(4000) + 1j * rng.standard_normal(4000)
    yield "convolve (4000 x kernel)", "convolve", (big, ker)

    # one Hamiltonian application on a 201 x 201 window
    psi = rng.standard_normal((201, 201)) + 1j * rng.standard_normal((201, 201))
    x = np.arange(-100, 101, dtype=float)
    diag = 0.5 * x[:, None] + 0.5 * x[None, :]
    yield "hamiltonian_2d 201x201", "hamiltonian_2d", (psi, diag, 1.0)

    yield "bessel_miller z=80", "bessel_miller", (80.0, miller_start(80.0, w))
    yield "bessel_miller z=1e4", "bessel_miller", (1e4, miller_start(1e4))
    yield "theta3_direct q=0.45", "theta3_direct", (0.7, 0.45)
    yield "theta3_dual q=0.999", "theta3_dual", (0.7, 0.999)
    yield "theta3_dnome q=exp(-1/1800)", "theta3_dnome", (0.0, math.exp(-1 / 1800))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--threads", type=int, default=0, help="numba worker threads, 0 = all configured")
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    _kernels.set_threads(args.threads)
    print(f"numba threads: {_kernels.get_threads()}, repeats: {args.repeat} (best time reported)")
    print(f"{'kernel':36s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>9s}")
    for label, name, call_args in cases():
        slow = getattr(_kernels, f"{name}_py", None) or getattr(_kernels, f"{name}_numpy")
        fast = getattr(_kernels, f"{name}_numba")
        a, b = np.asarray(slow(*call_args)), np.asarray(fast(*call_args))
        scale = max(1.0, float(np.max(np.abs(a))))
        if not np.allclose(a, b, rtol=1e-12, atol=1e-12 * scale):
            raise SystemExit(f"{label}: backends disagree")
        t_slow = best_of(slow, call_args, args.repeat)
        t_fast = best_of(fast, call_args, args.repeat)
        print(f"{label:36s} {1e3 * t_slow:12.4f} {1e3 * t_fast:12.4f} {t_slow / t_fast:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
