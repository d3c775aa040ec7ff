"""Integer-order Bessel J and Jacobi theta_3 with its nome derivative.

Bessel values come from Miller's backward recurrence normalized by the
completeness sum, which stays stable for the large arguments (4J/F of
order 50-100) met in the Lissajous scenarios. Theta_3 uses its defining
q-series, switching to the Poisson-summed form when the nome exceeds 1/2.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError

# J_n(z) is the Kronecker delta to double precision below this |z|
_TINY_ARGUMENT = 1e-150
# below this |z| the ratio 2n/z makes the backward recurrence overflow, so the
# ascending series (a handful of terms here) is used instead
_SMALL_ARGUMENT = 1e-3
# nome above which the Poisson-summed theta series is used
_DUAL_NOME = 0.5


@dataclass(frozen=True)
class BesselRow:
    """Values J_n(argument) for consecutive orders order_min..order_max."""

    order_min: int
    order_max: int
    argument: float
    values: np.ndarray

    @property
    def orders(self):
        return np.arange(self.order_min, self.order_max + 1)

    def __getitem__(self, order):
        if not self.order_min <= order <= self.order_max:
            raise IndexError(f"order {order} outside [{self.order_min}, {self.order_max}]")
        return self.values[order - self.order_min]


@dataclass(frozen=True)
class ThetaEval:
    phase_arg: float
    nome: float
    value: float
    dq_value: float


def _check_argument(z):
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"Bessel argument must be finite, got {z}")
    return z


def miller_start(z, nmax=0):
    """Starting order for the backward recurrence at argument ``z >= 0``."""
    z = abs(z)
    return max(int(math.ceil(z + max(20.0, 10.0 * z ** (1.0 / 3.0)))), nmax) + 10


def _ascending_series(nmax, z):
    out = np.zeros(nmax + 1)
    if z < _TINY_ARGUMENT:
        out[0] = 1.0
        return out
    half = 0.5 * z
    x = -half * half
    lead = 1.0
    for n in range(nmax + 1):
        if n:
            lead *= half / n
        if lead == 0.0:
            break
        term, total, k = 1.0, 1.0, 0
        while abs(term) > 1e-17 * abs(total):
            k += 1
            term *= x / (k * (n + k))
            total += term
        out[n] = lead * total
    return out


def _nonnegative_orders(nmax, z):
    """J_0..J_nmax at z, any sign of z."""
    az = abs(z)
    if az < _SMALL_ARGUMENT:
        vals = _ascending_series(nmax, az)
    else:
        vals = _kernels.bessel_miller(az, miller_start(az, nmax))[: nmax + 1].copy()
    if z < 0:
        vals[1::2] = -vals[1::2]
    return vals


def bessel_row(order_min, order_max, argument):
    """Bessel J_n(argument) for every integer order in [order_min, order_max].

    One backward recurrence serves the whole row, so the cost is linear in
    ``max(|order|, |argument|)``. Negative orders are obtained by reflection,
    ``J_{-n} = (-1)^n J_n``.
    """
    order_min = int(order_min)
    order_max = int(order_max)
    if order_min > order_max:
        raise DomainError(f"order_min {order_min} exceeds order_max {order_max}")
    z = _check_argument(argument)
    nmax = max(abs(order_min), abs(order_max))
    pos = _nonnegative_orders(nmax, z)
    orders = np.arange(order_min, order_max + 1)
    values = pos[np.abs(orders)]
    neg_odd = (orders < 0) & (orders % 2 == 1)
    values[neg_odd] = -values[neg_odd]
    return BesselRow(order_min, order_max, z, values)


def bessel_j(order, argument):
    """Bessel function of the first kind J_order(argument) for integer order."""
    order = int(order)
    z = _check_argument(argument)
    val = _nonnegative_orders(abs(order), z)[abs(order)]
    if order < 0 and order % 2:
        val = -val
    return float(val)


def bessel_symmetric(halfwidth, argument):
    """J_m(argument) for m = -halfwidth..halfwidth as a plain array."""
    return bessel_row(-halfwidth, halfwidth, argument).values


def kernel_halfwidth(argument):
    """Orders beyond which |J_m(argument)| is below ~1e-16 (for any |argument|)."""
    z = abs(argument)
    return int(math.ceil(z + max(25.0, 12.0 * z ** (1.0 / 3.0))))


# ---------------------------------------------------------------------------

def _check_nome(nome):
    nome = float(nome)
    if not (0.0 <= nome < 1.0):
        raise DomainError(f"theta nome must lie in [0, 1), got {nome}")
    return nome


def theta3(phase_arg, nome):
    """Jacobi theta_3(x, q) = 1 + 2 sum_{n>=1} q^{n^2} cos(2 n x)."""
    q = _check_nome(nome)
    x = float(phase_arg)
    if q > _DUAL_NOME:
        return float(_kernels.theta3_dual(x, q))
    return float(_kernels.theta3_direct(x, q))


def theta3_dnome(phase_arg, nome):
    """Derivative of theta_3(x, q) with respect to the nome q."""
    q = _check_nome(nome)
    return float(_kernels.theta3_dnome(float(phase_arg), q))


def theta3_eval(phase_arg, nome):
    return ThetaEval(float(phase_arg), float(nome), theta3(phase_arg, nome), theta3_dnome(phase_arg, nome))
