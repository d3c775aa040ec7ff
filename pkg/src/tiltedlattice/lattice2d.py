"""Two-dimensional tilted lattice: states, Hamiltonian, and two propagators.

``propagate_exact_2d`` uses the separability of the Hamiltonian and the 1D
Bessel kernels. ``propagate_numeric`` knows nothing about Bessel-kernel
solutions: it expands exp(-iHt) in Chebyshev polynomials of the finite-window
Hamiltonian with hard walls, and serves as the brute-force cross-check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from . import _kernels
from .analytic1d import (
    EDGE_TOL,
    MAX_SIGMA,
    GaussianSpec1D,
    LatticeParams1D,
    gaussian_1d,
    gaussian_window,
    propagate,
    reduce_momentum,
)
from .errors import BoundaryReachError, DomainError, WindowError
from .special import kernel_halfwidth


@dataclass(frozen=True)
class ComplexGrid2D:
    """Amplitudes psi[x - offset_x, y - offset_y]; C order, so the flat index
    is (x - offset_x) * extent_y + (y - offset_y)."""

    offset_x: int
    offset_y: int
    amplitudes: np.ndarray

    @property
    def extent_x(self):
        return self.amplitudes.shape[0]

    @property
    def extent_y(self):
        return self.amplitudes.shape[1]

    @property
    def xs(self):
        return np.arange(self.offset_x, self.offset_x + self.extent_x)

    @property
    def ys(self):
        return np.arange(self.offset_y, self.offset_y + self.extent_y)

    @property
    def flat(self):
        return self.amplitudes.ravel()

    def density(self):
        return np.abs(self.amplitudes) ** 2

    def norm(self):
        return float(math.fsum(self.density().sum(axis=1)))

    def edge_max(self):
        """Largest amplitude on the window boundary.

        An axis of extent 1 carries no hopping, so its two sides are not walls.
        """
        a = np.abs(self.amplitudes)
        edges = [0.0]
        if a.shape[0] > 1:
            edges += [a[0].max(), a[-1].max()]
        if a.shape[1] > 1:
            edges += [a[:, 0].max(), a[:, -1].max()]
        if a.shape[0] == 1 and a.shape[1] == 1:
            edges.append(a[0, 0])
        return float(max(edges))

    def is_window_converged(self, tol=EDGE_TOL):
        return self.edge_max() <= tol

    def on_window(self, offset_x, offset_y, extent_x, extent_y):
        """Embed into (or crop to) another window, zero-filling new sites."""
        out = np.zeros((extent_x, extent_y), dtype=complex)
        x0, x1 = max(offset_x, self.offset_x), min(offset_x + extent_x, self.offset_x + self.extent_x)
        y0, y1 = max(offset_y, self.offset_y), min(offset_y + extent_y, self.offset_y + self.extent_y)
        if x1 > x0 and y1 > y0:
            out[x0 - offset_x:x1 - offset_x, y0 - offset_y:y1 - offset_y] = self.amplitudes[
                x0 - self.offset_x:x1 - self.offset_x, y0 - self.offset_y:y1 - self.offset_y
            ]
        return ComplexGrid2D(offset_x, offset_y, out)

    def window(self):
        return self.offset_x, self.offset_y, self.extent_x, self.extent_y


def union_window(*grids):
    x0 = min(g.offset_x for g in grids)
    y0 = min(g.offset_y for g in grids)
    x1 = max(g.offset_x + g.extent_x for g in grids)
    y1 = max(g.offset_y + g.extent_y for g in grids)
    return x0, y0, x1 - x0, y1 - y0


def max_abs_difference(a, b):
    """Largest per-site amplitude difference, comparing on the union window."""
    w = union_window(a, b)
    return float(np.abs(a.on_window(*w).amplitudes - b.on_window(*w).amplitudes).max())


@dataclass(frozen=True)
class LatticeParams2D:
    tunneling_J: float = 1.0
    tilt_Fx: float = 0.0
    tilt_Fy: float = 0.0

    def __post_init__(self):
        if not self.tunneling_J > 0:
            raise DomainError(f"tunneling_J must be positive, got {self.tunneling_J}")
        if not (self.tilt_Fx >= 0 and self.tilt_Fy >= 0):
            raise DomainError(f"tilts must be non-negative, got ({self.tilt_Fx}, {self.tilt_Fy})")

    def axis(self, name):
        return LatticeParams1D(self.tunneling_J, self.tilt_Fx if name == "x" else self.tilt_Fy)


@dataclass(frozen=True)
class GaussianSpec2D:
    center_X: float = 0.0
    center_Y: float = 0.0
    momentum_Px: float = 0.0
    momentum_Py: float = 0.0
    width_sigma: float = 1.0

    def __post_init__(self):
        if not 0 < self.width_sigma <= MAX_SIGMA:
            raise DomainError(f"width_sigma must lie in (0, {MAX_SIGMA}], got {self.width_sigma}")
        object.__setattr__(self, "momentum_Px", reduce_momentum(self.momentum_Px))
        object.__setattr__(self, "momentum_Py", reduce_momentum(self.momentum_Py))

    def axis(self, name):
        if name == "x":
            return GaussianSpec1D(self.center_X, self.momentum_Px, self.width_sigma)
        return GaussianSpec1D(self.center_Y, self.momentum_Py, self.width_sigma)


def outer(gx, gy):
    """Product state psi_xy = gx_x * gy_y of two 1D grids."""
    return ComplexGrid2D(gx.offset, gy.offset, np.outer(gx.amplitudes, gy.amplitudes))


def build_gaussian_2d(spec, window=None):
    """Separable normalized Gaussian packet.

    ``window`` is ((x_lo, x_hi), (y_lo, y_hi)), inclusive; by default each
    axis is padded by 11 sigma, enough for a 1e-12 edge.
    """
    if window is None:
        wx = gaussian_window(spec.center_X, spec.width_sigma)
        wy = gaussian_window(spec.center_Y, spec.width_sigma)
    else:
        wx, wy = window
    try:
        gx = gaussian_1d(spec.axis("x"), wx)
        gy = gaussian_1d(spec.axis("y"), wy)
    except WindowError as exc:
        raise WindowError(f"2D window too small: {exc}") from None
    return outer(gx, gy)


def diagonal_energies(state, params):
    return params.tilt_Fx * state.xs[:, None] + params.tilt_Fy * state.ys[None, :]


def apply_hamiltonian(state, params):
    """(H psi)_xy = -J(psi_{x-1,y} + psi_{x+1,y} + psi_{x,y-1} + psi_{x,y+1}) + (x Fx + y Fy) psi_xy.

    Sites outside the window count as zero (hard walls).
    """
    diag = diagonal_energies(state, params)
    psi = np.ascontiguousarray(state.amplitudes, dtype=np.complex128)
    out = _kernels.hamiltonian_2d(psi, diag, float(params.tunneling_J))
    return ComplexGrid2D(state.offset_x, state.offset_y, out)


def energy(state, params):
    """<psi|H|psi> (real part) on the state's window."""
    h = apply_hamiltonian(state, params).amplitudes
    return float(np.vdot(state.amplitudes, h).real)


def propagate_exact_2d(initial_spec, params, time_t):
    """Tensor product of the two exact 1D propagations of a Gaussian packet.

    An axis with zero tilt uses the force-free kernel.
    """
    gx = propagate(gaussian_1d(initial_spec.axis("x")), params.axis("x"), time_t)
    gy = propagate(gaussian_1d(initial_spec.axis("y")), params.axis("y"), time_t)
    return outer(gx, gy)


def general_delta(spec, params, time_t):
    """Wide-packet center (Delta_x, Delta_y) at time t.

    Delta_x = X + (2J/Fx)[cos(Fx t - Px) - cos Px] and likewise for y;
    an untilted axis drifts with velocity 2J sin P instead.
    """
    out = []
    for c, p, F in ((spec.center_X, spec.momentum_Px, params.tilt_Fx), (spec.center_Y, spec.momentum_Py, params.tilt_Fy)):
        J = params.tunneling_J
        if F > 0:
            out.append(c + (2 * J / F) * (math.cos(F * time_t - p) - math.cos(p)))
        else:
            out.append(c + 2 * J * math.sin(p) * time_t)
    return tuple(out)


# ---------------------------------------------------------------------------
# Chebyshev propagator

def spectral_bounds(state, params):
    """Interval containing the spectrum of H restricted to the state's window."""
    diag = diagonal_energies(state, params)
    hop = 4.0 * params.tunneling_J
    return float(diag.min()) - hop, float(diag.max()) + hop


def chebyshev_coefficients(rt, tolerance):
    """Bessel coefficients J_k(rt) of exp(-i rt cos theta), truncated at the tail bound.

    Taken from scipy rather than this package's Bessel routine so the
    numeric propagator shares no code with the analytic one.
    """
    kmax = int(math.ceil(abs(rt) + 10.0 * max(abs(rt), 1.0) ** (1.0 / 3.0) + 30))
    c = jv(np.arange(kmax + 1), abs(rt))
    cut = tolerance * 1e-3
    # drop the tail once it is monotonically below the cut
    k = kmax
    while k > 0 and abs(c[k]) < cut and k > abs(rt):
        k -= 1
    c = c[: k + 2]
    if rt < 0:
        c[1::2] = -c[1::2]
    return c


def _chebyshev_step(psi, diag, J, center, half, dt, tolerance):
    c = chebyshev_coefficients(half * dt, tolerance)
    # normalized operator Hn = (H - center)/half has spectrum in [-1, 1]
    dn = (diag - center) / half
    Jn = J / half

    def hn(v):
        return _kernels.hamiltonian_2d(v, dn, Jn)

    t_prev = psi
    t_cur = hn(psi)
    acc = c[0] * t_prev + 2.0 * (-1j) * c[1] * t_cur
    phase = -1j
    for k in range(2, len(c)):
        t_next = 2.0 * hn(t_cur) - t_prev
        phase *= -1j
        acc += (2.0 * c[k] * phase) * t_next
        t_prev, t_cur = t_cur, t_next
    return np.exp(-1j * center * dt) * acc


def propagate_numeric(initial, params, time_t, tolerance=1e-12, max_step_phase=200.0):
    """Brute-force exp(-iHt) psi on the initial window with hard walls.

    The time is split into steps with (spectral half-width * dt) at most
    ``max_step_phase``; after every step the edge amplitude is checked and
    BoundaryReachError raised if it exceeds 10 * tolerance.
    """
    t = float(time_t)
    if t == 0:
        return ComplexGrid2D(initial.offset_x, initial.offset_y, initial.amplitudes.astype(complex))
    emin, emax = spectral_bounds(initial, params)
    center = 0.5 * (emin + emax)
    half = 0.5 * (emax - emin)
    nsteps = max(1, int(math.ceil(abs(t) * half / max_step_phase)))
    dt = t / nsteps
    diag = diagonal_energies(initial, params)
    psi = np.ascontiguousarray(initial.amplitudes, dtype=np.complex128)
    for step in range(nsteps):
        psi = _chebyshev_step(psi, diag, float(params.tunneling_J), center, half, dt, tolerance)
        edge = ComplexGrid2D(initial.offset_x, initial.offset_y, psi).edge_max()
        if edge > 10.0 * tolerance:
            raise BoundaryReachError(
                f"edge amplitude {edge:.3g} exceeds {10 * tolerance:.3g} at t={dt * (step + 1):.6g}; enlarge the window"
            )
    return ComplexGrid2D(initial.offset_x, initial.offset_y, psi)


def padded_gaussian_2d(spec, params, extra=0):
    """Gaussian on a window wide enough to hold its exact evolution at any time."""
    pads = []
    for name in ("x", "y"):
        p = params.axis(name)
        reach = kernel_halfwidth(4.0 * p.tunneling_J / p.tilt_F) if p.tilt_F > 0 else 0
        lo, hi = gaussian_window(getattr(spec, "center_" + name.upper()), spec.width_sigma)
        pads.append((lo - reach - extra, hi + reach + extra))
    return build_gaussian_2d(spec, tuple(pads))


# ---------------------------------------------------------------------------

def density_moments(state):
    """(center_x, center_y, var_x, var_y, cov_xy) of |psi|^2.

    Row and column marginals are reduced with numpy's pairwise sums; the
    final 1D reductions use math.fsum.
    """
    rho = state.density()
    x = state.xs.astype(float)
    y = state.ys.astype(float)
    mx = rho.sum(axis=1)
    my = rho.sum(axis=0)
    norm = math.fsum(mx)
    cx = math.fsum(x * mx) / norm
    cy = math.fsum(y * my) / norm
    dx = x - cx
    dy = y - cy
    vx = math.fsum(dx * dx * mx) / norm
    vy = math.fsum(dy * dy * my) / norm
    cov = math.fsum(dx * (rho * dy[None, :]).sum(axis=1)) / norm
    return cx, cy, vx, vy, cov
