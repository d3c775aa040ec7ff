"""Closed-form dynamics of one particle on a tilted 1D tight-binding chain.

Units: hbar = 1, energies in units of the tunneling J, time in hbar/J. The
Hamiltonian is

    (H psi)_x = -J (psi_{x-1} + psi_{x+1}) + x F psi_x

whose eigenstates are the Wannier-Stark states J_{x-n}(2J/F) with energies
nF. Everything here follows from that ladder: the Bessel-kernel propagator,
its force-free and wide-packet limits, and theta-function expressions for
the first two moments of an initially Gaussian packet.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, WindowError
from .special import bessel_symmetric, kernel_halfwidth, theta3, theta3_dnome

EDGE_TOL = 1e-12
MAX_SIGMA = 30.0
MAX_KERNEL_HALFWIDTH = 2_000_000


def reduce_momentum(p):
    """Map a lattice momentum onto (-pi, pi]."""
    p = math.remainder(float(p), 2.0 * math.pi)
    if p <= -math.pi:
        p += 2.0 * math.pi
    return p


@dataclass(frozen=True)
class ComplexGrid1D:
    """Amplitudes on consecutive sites offset, offset+1, ..."""

    offset: int
    amplitudes: np.ndarray

    @property
    def sites(self):
        return np.arange(self.offset, self.offset + len(self.amplitudes))

    @property
    def stop(self):
        return self.offset + len(self.amplitudes)

    def density(self):
        return np.abs(self.amplitudes) ** 2

    def norm(self):
        return float(math.fsum(self.density()))

    def edge_max(self):
        a = self.amplitudes
        return float(max(abs(a[0]), abs(a[-1])))

    def is_window_converged(self, tol=EDGE_TOL):
        return self.edge_max() <= tol

    def on_window(self, offset, size):
        """Embed into (or crop to) the window [offset, offset + size)."""
        out = np.zeros(size, dtype=complex)
        lo = max(offset, self.offset)
        hi = min(offset + size, self.stop)
        if hi > lo:
            out[lo - offset:hi - offset] = self.amplitudes[lo - self.offset:hi - self.offset]
        return ComplexGrid1D(offset, out)

    def amplitude_at(self, x):
        i = x - self.offset
        if 0 <= i < len(self.amplitudes):
            return self.amplitudes[i]
        return 0j


@dataclass(frozen=True)
class LatticeParams1D:
    tunneling_J: float = 1.0
    tilt_F: float = 0.0

    def __post_init__(self):
        if not self.tunneling_J > 0:
            raise DomainError(f"tunneling_J must be positive, got {self.tunneling_J}")
        if not self.tilt_F >= 0:
            raise DomainError(f"tilt_F must be non-negative, got {self.tilt_F}")

    @property
    def bloch_period(self):
        if self.tilt_F == 0:
            raise DomainError("no Bloch period without a tilt")
        return 2.0 * math.pi / self.tilt_F

    @property
    def ladder_ratio(self):
        """2J/F, the Wannier-Stark localization length and oscillation amplitude."""
        return 2.0 * self.tunneling_J / self.tilt_F


@dataclass(frozen=True)
class GaussianSpec1D:
    center_X: float = 0.0
    momentum_P: float = 0.0
    width_sigma: float = 1.0

    def __post_init__(self):
        if not 0 < self.width_sigma <= MAX_SIGMA:
            raise DomainError(f"width_sigma must lie in (0, {MAX_SIGMA}], got {self.width_sigma}")
        object.__setattr__(self, "momentum_P", reduce_momentum(self.momentum_P))


def _require_tilt(params):
    if params.tilt_F <= 0:
        raise DomainError("operation needs tilt_F > 0; use the force-free variant for F = 0")


def gaussian_window(center, sigma):
    """Site range [lo, hi] holding a Gaussian with edge amplitude far below 1e-12."""
    pad = int(math.ceil(11.0 * sigma)) + 2
    c = int(round(center))
    return c - pad, c + pad


def gaussian_1d(spec, window=None):
    """Normalized Gaussian packet N exp(-(x-X)^2/4 sigma^2 + i x P) on ``window``.

    The normalization is summed over the window rather than taken from the
    continuum value, which is off for sigma of order one.
    """
    lo, hi = window if window is not None else gaussian_window(spec.center_X, spec.width_sigma)
    x = np.arange(lo, hi + 1)
    env = np.exp(-((x - spec.center_X) ** 2) / (4.0 * spec.width_sigma**2))
    amps = env * np.exp(1j * x * spec.momentum_P)
    amps /= math.sqrt(math.fsum(env**2))
    grid = ComplexGrid1D(int(lo), amps)
    if not grid.is_window_converged():
        raise WindowError(
            f"window [{lo}, {hi}] too small for sigma={spec.width_sigma}: edge amplitude {grid.edge_max():.3g}"
        )
    return grid


def localized(x0=0):
    return ComplexGrid1D(int(x0), np.ones(1, dtype=complex))


def apply_hamiltonian_1d(state, params):
    """H psi on the state's window with hard walls."""
    a = state.amplitudes
    out = params.tilt_F * state.sites * a
    out[1:] -= params.tunneling_J * a[:-1]
    out[:-1] -= params.tunneling_J * a[1:]
    return ComplexGrid1D(state.offset, out)


def ws_eigenstate(quantum_number_n, params, window=None):
    """Wannier-Stark eigenstate |n> with amplitudes J_{x-n}(2J/F), energy nF."""
    _require_tilt(params)
    n = int(quantum_number_n)
    z = params.ladder_ratio
    if window is None:
        w = kernel_halfwidth(z)
        window = (n - w, n + w)
    lo, hi = int(window[0]), int(window[1])
    if lo > n or hi < n:
        raise WindowError(f"window [{lo}, {hi}] does not contain site {n}")
    w = max(n - lo, hi - n)
    row = bessel_symmetric(w, z)
    vals = row[lo - n + w:hi - n + w + 1]
    grid = ComplexGrid1D(lo, vals.astype(complex))
    if not grid.is_window_converged():
        raise WindowError(f"window [{lo}, {hi}] too small for 2J/F={z}: edge amplitude {grid.edge_max():.3g}")
    return grid


def _convolve_grid(initial, kernel, halfwidth):
    out = _kernels.convolve(np.ascontiguousarray(initial.amplitudes, dtype=np.complex128), kernel)
    return ComplexGrid1D(initial.offset - halfwidth, out)


def _imag_unit_powers(m):
    # exp(i pi m / 2) without rounding noise
    return np.array([1, 1j, -1, -1j])[np.mod(m, 4)]


def bessel_kernel(argument):
    """Kernel J_m(z) i^m for m in [-w, w]; returns (kernel, w)."""
    w = kernel_halfwidth(argument)
    if w > MAX_KERNEL_HALFWIDTH:
        raise WindowError(f"kernel argument {argument:.6g} needs {2 * w + 1} sites; window overflow")
    m = np.arange(-w, w + 1)
    return bessel_symmetric(w, argument) * _imag_unit_powers(m), w


def propagate_exact(initial, params, time_t):
    """Evolve ``initial`` for time t on the infinite tilted chain.

    psi_x(t) = sum_x' psi_x'(0) J_{x-x'}[(4J/F) sin(Ft/2)] exp{(i/2)[pi(x-x') - F(x+x')t]}

    The output window is the input window widened by the kernel support, so
    a window-converged input yields a window-converged output.
    """
    _require_tilt(params)
    F = params.tilt_F
    t = float(time_t)
    z = (4.0 * params.tunneling_J / F) * math.sin(F * t / 2.0)
    kernel, w = bessel_kernel(z)
    src = initial.amplitudes * np.exp(-0.5j * F * t * initial.sites)
    out = _convolve_grid(ComplexGrid1D(initial.offset, src), kernel, w)
    return ComplexGrid1D(out.offset, out.amplitudes * np.exp(-0.5j * F * t * out.sites))


def propagate_force_free(initial, params, time_t):
    """Evolve with F = 0: convolution with J_m(2Jt) i^m."""
    kernel, w = bessel_kernel(2.0 * params.tunneling_J * float(time_t))
    return _convolve_grid(initial, kernel, w)


def propagate(initial, params, time_t):
    """Exact propagation picking the force-free kernel when F = 0."""
    if params.tilt_F > 0:
        return propagate_exact(initial, params, time_t)
    return propagate_force_free(initial, params, time_t)


# ---------------------------------------------------------------------------
# wide-packet (frozen shape) solution

def wide_packet_center(spec, params, time_t):
    """Delta(t) = X + (2J/F)[cos(Ft - P) - cos P]."""
    _require_tilt(params)
    F, P = params.tilt_F, spec.momentum_P
    return spec.center_X + params.ladder_ratio * (math.cos(F * time_t - P) - math.cos(P))


def wide_packet_solution(spec, params, time_t, window=None):
    """Shape-preserving packet N exp[-(x - Delta)^2/4 sigma^2 + i x Gamma + i Phi].

    Valid for sigma >> 1. Gamma(t) = P - Ft and
    Phi(t) = (2J/F)[sin(Ft - P) + sin P].
    """
    _require_tilt(params)
    F, P, sigma = params.tilt_F, spec.momentum_P, spec.width_sigma
    t = float(time_t)
    delta = wide_packet_center(spec, params, t)
    gamma = P - F * t
    phi = params.ladder_ratio * (math.sin(F * t - P) + math.sin(P))
    lo, hi = window if window is not None else gaussian_window(delta, sigma)
    x = np.arange(lo, hi + 1)
    env = np.exp(-((x - delta) ** 2) / (4.0 * sigma**2))
    amps = env * np.exp(1j * (x * gamma + phi)) / math.sqrt(math.fsum(env**2))
    return ComplexGrid1D(int(lo), amps)


# ---------------------------------------------------------------------------
# theta-function moments of a Gaussian packet

def _nomes(sigma):
    return math.exp(-1.0 / (2.0 * sigma**2)), math.exp(-2.0 * math.pi**2 * sigma**2)


def neighbour_overlap(center_X, width_sigma):
    """|<psi|T|psi>| for a Gaussian packet, T the one-site shift.

    sqrt(2 pi) sigma e^{-1/8 sigma^2} theta3(pi/2 + pi X, e^{-2 pi^2 sigma^2}) / theta3(0, e^{-1/2 sigma^2}),
    exact for integer X. Off-integer centers pick up a correction of order
    exp(-2 pi^2 sigma^2) from the lattice sum, negligible once sigma >= 2.
    """
    sigma = float(width_sigma)
    if not 0 < sigma <= MAX_SIGMA:
        raise DomainError(f"width_sigma must lie in (0, {MAX_SIGMA}], got {sigma}")
    q, Q = _nomes(sigma)
    ratio = theta3(math.pi / 2 + math.pi * center_X, Q) / theta3(0.0, q)
    return math.sqrt(2 * math.pi) * sigma * math.exp(-1.0 / (8 * sigma**2)) * ratio


def amplitude_A(center_X, width_sigma, params):
    """Oscillation amplitude of <x(t)>: (2J/F) times the neighbour overlap.

    Vanishes as sigma -> 0 and tends to 2J/F as sigma -> infinity.
    """
    _require_tilt(params)
    return params.ladder_ratio * neighbour_overlap(center_X, width_sigma)


def center_expectation(spec, params, time_t):
    """<x(t)> = X + A(X, sigma)[cos(Ft - P) - cos P], exact for integer X."""
    _require_tilt(params)
    F, P = params.tilt_F, spec.momentum_P
    A = amplitude_A(spec.center_X, spec.width_sigma, params)
    return spec.center_X + A * (math.cos(F * time_t - P) - math.cos(P))


def initial_variance(width_sigma):
    """s^2(0) = q theta3'(0, q) / theta3(0, q) with q = e^{-1/2 sigma^2}."""
    q, _ = _nomes(width_sigma)
    return q * theta3_dnome(0.0, q) / theta3(0.0, q)


def variance_S(width_sigma, momentum_P, tilt_F, time_t):
    """The bracket term S(sigma, t) of the variance formula.

    The second term carries theta3(pi/2, .) squared: it is the square of the
    nearest-neighbour overlap that also sets amplitude_A.
    """
    sigma = width_sigma
    q, Q = _nomes(sigma)
    th_q = theta3(0.0, q)
    first = math.sqrt(math.pi / 2) * sigma * q * theta3(0.0, Q) / th_q * math.cos(tilt_F * time_t - 2 * momentum_P)
    second = (
        2 * math.pi * sigma**2 * math.exp(-1.0 / (4 * sigma**2))
        * theta3(math.pi / 2, Q) ** 2 / th_q**2
        * math.sin(tilt_F * time_t / 2 - momentum_P) ** 2
    )
    return first + second


def variance(spec, params, time_t):
    """s^2(t) = s^2(0) + [(4J/F) sin(Ft/2)]^2 [1/2 - S(sigma, t)], exact for integer X."""
    _require_tilt(params)
    F = params.tilt_F
    breath = (4.0 * params.tunneling_J / F) * math.sin(F * time_t / 2.0)
    S = variance_S(spec.width_sigma, spec.momentum_P, F, time_t)
    return initial_variance(spec.width_sigma) + breath**2 * (0.5 - S)


def moments(state):
    """(mean, variance) of |psi|^2 with compensated summation."""
    rho = state.density()
    x = state.sites.astype(float)
    norm = math.fsum(rho)
    mean = math.fsum(x * rho) / norm
    d = x - mean
    return mean, math.fsum(d * d * rho) / norm
