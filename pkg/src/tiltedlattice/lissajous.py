"""Lattice parameters and initial packets that trace a chosen Lissajous curve.

A wide packet on a lattice tilted by (Fx, Fy) oscillates along each axis
with amplitude 2J/F and frequency F/hbar. Starting it at

    X = (2J/Fx) cos(Px),   Y = 2J/Fy,   Py = 0

makes its center follow x = A cos(Omega_x t + phi), y = B cos(Omega_y t)
with A = 2J/Fx, B = 2J/Fy, Omega = F/hbar and phi = -Px. Amplitude and
frequency along an axis are therefore tied together; a target that fixes
both inconsistently is rejected.
"""

import math
from dataclasses import dataclass, replace

from .analytic1d import reduce_momentum
from .errors import ConsistencyError, DomainError
from .lattice2d import GaussianSpec2D, LatticeParams2D, general_delta

RATIO_RTOL = 1e-12


@dataclass(frozen=True)
class LissajousTarget:
    """Desired curve x = A cos(p w t + phi), y = B cos(q w t).

    Give either both amplitudes or ``base_frequency`` (= Omega_y); giving
    all three is allowed only if they agree.
    """

    freq_ratio_p: int
    freq_ratio_q: int
    phase_phi: float = 0.0
    amp_A: float | None = None
    amp_B: float | None = None
    base_frequency: float | None = None


@dataclass(frozen=True)
class LissajousPlan:
    params: LatticeParams2D
    spec: GaussianSpec2D
    period_T: float
    freq_ratio_p: int
    freq_ratio_q: int

    @property
    def amp_A(self):
        return 2 * self.params.tunneling_J / self.params.tilt_Fx

    @property
    def amp_B(self):
        return 2 * self.params.tunneling_J / self.params.tilt_Fy

    @property
    def omega_x(self):
        return self.params.tilt_Fx

    @property
    def omega_y(self):
        return self.params.tilt_Fy

    @property
    def phase_phi(self):
        return reduce_momentum(-self.spec.momentum_Px)

    def with_width(self, width_sigma):
        return replace(self, spec=replace(self.spec, width_sigma=width_sigma))


def _validate(target):
    p, q = target.freq_ratio_p, target.freq_ratio_q
    if not (isinstance(p, int) and isinstance(q, int)) or p <= 0 or q <= 0:
        raise DomainError(f"frequency ratio must be positive integers, got {p}:{q}")
    if math.gcd(p, q) != 1:
        raise DomainError(f"frequency ratio {p}:{q} is not in lowest terms")
    for name in ("amp_A", "amp_B", "base_frequency"):
        v = getattr(target, name)
        if v is not None and not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v}")
    if not math.isfinite(target.phase_phi):
        raise DomainError(f"phase_phi must be finite, got {target.phase_phi}")


def _close(a, b):
    return abs(a - b) <= RATIO_RTOL * max(abs(a), abs(b))


def plan(target, tunneling_J=1.0, width_sigma=5.0):
    """Lattice tilts and Gaussian initial state realizing ``target``."""
    _validate(target)
    J = float(tunneling_J)
    p, q = target.freq_ratio_p, target.freq_ratio_q
    A, B, w = target.amp_A, target.amp_B, target.base_frequency

    if A is not None and B is not None:
        Fx, Fy = 2 * J / A, 2 * J / B
        if not _close(Fx / Fy, p / q):
            raise ConsistencyError(
                f"amplitudes A={A!r}, B={B!r} give Omega_x:Omega_y = {Fx / Fy!r}, not {p}:{q}; "
                f"with A={A!r} the ratio needs amp_B={A * p / q!r}"
            )
        if w is not None and not _close(Fy, w):
            raise ConsistencyError(
                f"base_frequency={w!r} disagrees with amp_B={B!r}, which implies base_frequency={Fy!r}"
            )
    elif w is not None and A is None and B is None:
        Fy = float(w)
        Fx = Fy * p / q
    elif w is not None:
        # one amplitude plus the frequency: check that amplitude, derive the other
        Fy = float(w)
        Fx = Fy * p / q
        if A is not None and not _close(2 * J / Fx, A):
            raise ConsistencyError(f"amp_A={A!r} disagrees with base_frequency={w!r}, which implies amp_A={2 * J / Fx!r}")
        if B is not None and not _close(2 * J / Fy, B):
            raise ConsistencyError(f"amp_B={B!r} disagrees with base_frequency={w!r}, which implies amp_B={2 * J / Fy!r}")
    else:
        raise ConsistencyError("target needs both amplitudes or base_frequency")

    # snap to the exact ratio so the curve closes to rounding error
    Fx = Fy * p / q
    phi = reduce_momentum(target.phase_phi)
    Px = reduce_momentum(-phi)
    spec = GaussianSpec2D(
        center_X=(2 * J / Fx) * math.cos(Px),
        center_Y=2 * J / Fy,
        momentum_Px=Px,
        momentum_Py=0.0,
        width_sigma=width_sigma,
    )
    # Omega_x = p w0, Omega_y = q w0; the curve closes after 2 pi / w0
    period = 2 * math.pi * q / Fy
    return LissajousPlan(LatticeParams2D(J, Fx, Fy), spec, period, p, q)


def curve_point(plan, time_t):
    """(A cos(Omega_x t + phi), B cos(Omega_y t))."""
    t = float(time_t)
    return (
        plan.amp_A * math.cos(plan.omega_x * t + plan.phase_phi),
        plan.amp_B * math.cos(plan.omega_y * t),
    )


def recipe_delta(plan, time_t):
    """Center from the general wide-packet expressions with the plan's parameters."""
    return general_delta(plan.spec, plan.params, time_t)
