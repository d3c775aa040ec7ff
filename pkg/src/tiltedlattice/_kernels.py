"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``TILTEDLATTICE_DISABLE_NUMBA=1`` before import to force the numpy
path. Both paths are always importable as ``<name>_numpy`` and, when numba
is present, ``<name>_numba`` so they can be compared directly; the
unsuffixed names are the selected backend.

Sequential recurrences (Miller, theta series) cannot be vectorized, so
their fallback is the same loop run by the interpreter.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

_DISABLED = os.environ.get("TILTEDLATTICE_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
HAVE_NUMBA = numba is not None
BACKEND = "numba" if (HAVE_NUMBA and not _DISABLED) else "numpy"

# overflow guard for the backward recurrence; squares must stay finite
_RESCALE_AT = 1e100


def set_threads(n):
    """Set the numba worker count (0 = all configured). No-op on the numpy path."""
    if BACKEND != "numba":
        return
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(limit if n <= 0 else min(n, limit))


def get_threads():
    if BACKEND != "numba":
        return 1
    return numba.get_num_threads()


# ---------------------------------------------------------------------------
# Bessel J_n(z) for n = 0..start, z > 0, by Miller's backward recurrence.
# Normalized with the completeness sum J_0^2 + 2 sum J_n^2 = 1; the sign is
# fixed by J_0 + 2 sum J_2k = 1.

def bessel_miller_py(z, start):
    f = np.zeros(start + 2)
    f[start] = 1e-30
    for n in range(start, 0, -1):
        f[n - 1] = (2.0 * n / z) * f[n] - f[n + 1]
        if abs(f[n - 1]) > _RESCALE_AT:
            for k in range(n - 1, start + 1):
                f[k] *= 1.0 / _RESCALE_AT
    sq = 0.0
    ev = 0.0
    for n in range(start, 0, -1):
        sq += f[n] * f[n]
        if n % 2 == 0:
            ev += f[n]
    sq = f[0] * f[0] + 2.0 * sq
    ev = f[0] + 2.0 * ev
    scale = 1.0 / math.sqrt(sq)
    if ev < 0.0:
        scale = -scale
    out = f[: start + 1]
    for n in range(start + 1):
        out[n] *= scale
    return out


# ---------------------------------------------------------------------------
# theta_3(x, q) and d theta_3 / dq

def theta3_direct_py(x, q):
    total = 1.0
    if q == 0.0:
        return total
    logq = math.log(q)
    n = 1
    while True:
        mag = 2.0 * math.exp(n * n * logq)
        if mag == 0.0 or mag < 1e-16 * abs(total):
            break
        total += mag * math.cos(2.0 * n * x)
        n += 1
    return total


def theta3_dual_py(x, q):
    # Poisson-summed form sqrt(pi/a) sum_k exp(-(x - k pi)^2 / a), q = e^{-a};
    # all terms positive, so no cancellation when q is close to 1
    a = -math.log(q)
    x = x - math.pi * math.floor(x / math.pi + 0.5)
    total = math.exp(-x * x / a)
    k = 1
    while True:
        up = math.exp(-(x - k * math.pi) ** 2 / a)
        dn = math.exp(-(x + k * math.pi) ** 2 / a)
        term = up + dn
        total += term
        if term == 0.0 or term < 1e-16 * total:
            break
        k += 1
    return math.sqrt(math.pi / a) * total


def theta3_dnome_py(x, q):
    if q == 0.0:
        return 2.0 * math.cos(2.0 * x)
    logq = math.log(q)
    total = 0.0
    n = 1
    while True:
        mag = 2.0 * n * n * math.exp((n * n - 1) * logq)
        if mag == 0.0 or (n > 1 and mag < 1e-16 * abs(total)):
            break
        total += mag * math.cos(2.0 * n * x)
        n += 1
    return total


# ---------------------------------------------------------------------------
# Direct-summation convolution: out[i] = sum_j src[j] * ker[i - j],
# len(out) = len(src) + len(ker) - 1, summed in ascending j per output site.

def convolve_numpy(src, ker):
    return np.convolve(src, ker)


def _convolve_loop(src, ker):
    ns = src.shape[0]
    nk = ker.shape[0]
    out = np.zeros(ns + nk - 1, dtype=np.complex128)
    for i in _prange(ns + nk - 1):
        lo = max(0, i - nk + 1)
        hi = min(ns - 1, i)
        acc = 0j
        for j in range(lo, hi + 1):
            acc += src[j] * ker[i - j]
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# 2D tilted tight-binding Hamiltonian with hard walls:
# (H psi)_xy = -J (psi_{x-1,y} + psi_{x+1,y} + psi_{x,y-1} + psi_{x,y+1}) + diag_xy psi_xy

def hamiltonian_2d_numpy(psi, diag, J):
    out = diag * psi
    out[1:, :] -= J * psi[:-1, :]
    out[:-1, :] -= J * psi[1:, :]
    out[:, 1:] -= J * psi[:, :-1]
    out[:, :-1] -= J * psi[:, 1:]
    return out


def _hamiltonian_2d_loop(psi, diag, J):
    nx, ny = psi.shape
    out = np.empty_like(psi)
    for i in _prange(nx):
        for j in range(ny):
            acc = diag[i, j] * psi[i, j]
            if i > 0:
                acc -= J * psi[i - 1, j]
            if i < nx - 1:
                acc -= J * psi[i + 1, j]
            if j > 0:
                acc -= J * psi[i, j - 1]
            if j < ny - 1:
                acc -= J * psi[i, j + 1]
            out[i, j] = acc
    return out


# ---------------------------------------------------------------------------
# backend selection

if HAVE_NUMBA:
    # the system TBB is too old for numba; prefer OpenMP
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    _prange = numba.prange
    bessel_miller_numba = numba.njit(cache=True)(bessel_miller_py)
    theta3_direct_numba = numba.njit(cache=True)(theta3_direct_py)
    theta3_dual_numba = numba.njit(cache=True)(theta3_dual_py)
    theta3_dnome_numba = numba.njit(cache=True)(theta3_dnome_py)
    convolve_numba = numba.njit(parallel=True, cache=True)(_convolve_loop)
    hamiltonian_2d_numba = numba.njit(parallel=True, cache=True)(_hamiltonian_2d_loop)
else:  # pragma: no cover
    _prange = range

if BACKEND == "numba":
    bessel_miller = bessel_miller_numba
    theta3_direct = theta3_direct_numba
    theta3_dual = theta3_dual_numba
    theta3_dnome = theta3_dnome_numba
    convolve = convolve_numba
    hamiltonian_2d = hamiltonian_2d_numba
else:
    bessel_miller = bessel_miller_py
    theta3_direct = theta3_direct_py
    theta3_dual = theta3_dual_py
    theta3_dnome = theta3_dnome_py
    convolve = convolve_numpy
    hamiltonian_2d = hamiltonian_2d_numpy
