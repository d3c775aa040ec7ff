import math

import mpmath
import numpy as np
import pytest
from scipy.linalg import expm

from tiltedlattice import _kernels

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if rep.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if not e["failed"] else "FAIL"
        line = f"[{status}] criterion {number}: {e['title']} ({e['passed']} passed"
        line += f", failed: {', '.join(e['failed'])})" if e["failed"] else ")"
        tr.write_line(line)


# ---------------------------------------------------------------------------
# independent oracles

def bessel_series(n, z, dps=60):
    """J_n(z) from the ascending power series in high precision (integer n >= 0)."""
    with mpmath.workdps(dps):
        z = mpmath.mpf(z)
        half = z / 2
        total = mpmath.mpf(0)
        k = 0
        while True:
            term = (-1) ** k * half ** (2 * k + n) / (mpmath.factorial(k) * mpmath.factorial(k + n))
            total += term
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps + 5) * max(abs(total), 1):
                break
            k += 1
        return float(total)


def theta3_series(x, q, dps=150):
    """theta_3(x, q) summed in high precision straight from the defining series."""
    with mpmath.workdps(dps):
        x, q = mpmath.mpf(x), mpmath.mpf(q)
        total = mpmath.mpf(1)
        n = 1
        while True:
            term = 2 * q ** (n * n)
            total += term * mpmath.cos(2 * n * x)
            if term < mpmath.mpf(10) ** (-dps + 10):
                break
            n += 1
        return float(total)


def theta3_dnome_series(x, q, dps=80):
    with mpmath.workdps(dps):
        x, q = mpmath.mpf(x), mpmath.mpf(q)
        total = mpmath.mpf(0)
        n = 1
        while True:
            term = 2 * n * n * q ** (n * n - 1)
            total += term * mpmath.cos(2 * n * x)
            if n > 2 and term < mpmath.mpf(10) ** (-dps + 10):
                break
            n += 1
        return float(total)


def chain_hamiltonian(sites, F, J=1.0):
    """Dense 1D tilted chain with hard walls on the given sites."""
    n = len(sites)
    return np.diag(F * np.asarray(sites, dtype=float)) - J * (np.eye(n, k=1) + np.eye(n, k=-1))


def dense_evolve(sites, F, psi0, t, J=1.0):
    """exp(-iHt) psi0 by scipy's dense matrix exponential."""
    return expm(-1j * chain_hamiltonian(sites, F, J) * t) @ psi0


def lattice_gaussian_moments(center, sigma):
    """Mean and variance of exp(-(x-X)^2/2 sigma^2) summed over a wide site range."""
    x = np.arange(math.floor(center - 40 * sigma) - 5, math.ceil(center + 40 * sigma) + 6, dtype=float)
    w = np.exp(-((x - center) ** 2) / (2 * sigma**2))
    m = math.fsum(x * w) / math.fsum(w)
    return m, math.fsum((x - m) ** 2 * w) / math.fsum(w)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure computation."""
    from tiltedlattice.analytic1d import LatticeParams1D, localized, propagate_exact
    from tiltedlattice.lattice2d import GaussianSpec2D, LatticeParams2D, build_gaussian_2d, propagate_numeric
    from tiltedlattice.special import theta3, theta3_dnome

    theta3(0.1, 0.2)
    theta3(0.1, 0.9)
    theta3_dnome(0.1, 0.2)
    propagate_exact(localized(0), LatticeParams1D(1.0, 0.5), 1.0)
    g = build_gaussian_2d(GaussianSpec2D(width_sigma=1.0))
    propagate_numeric(g, LatticeParams2D(1.0, 0.5, 0.5), 0.01, tolerance=1e-3)
    return _kernels.BACKEND
