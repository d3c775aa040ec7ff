"""Exact Bessel-kernel and brute-force dynamics of a particle on a tilted lattice."""

from ._kernels import BACKEND
from .analytic1d import (
    ComplexGrid1D,
    GaussianSpec1D,
    LatticeParams1D,
    amplitude_A,
    center_expectation,
    gaussian_1d,
    localized,
    propagate_exact,
    propagate_force_free,
    variance,
    wide_packet_solution,
    ws_eigenstate,
)
from .config import ScenarioConfig, parse_config
from .errors import BoundaryReachError, ConfigError, ConsistencyError, DomainError, WindowError
from .lattice2d import (
    ComplexGrid2D,
    GaussianSpec2D,
    LatticeParams2D,
    apply_hamiltonian,
    build_gaussian_2d,
    density_moments,
    propagate_exact_2d,
    propagate_numeric,
)
from .lissajous import LissajousPlan, LissajousTarget, curve_point, plan
from .observables import TrajectorySample, breathing_profile, record_trajectory
from .scenario import run_scenario
from .special import BesselRow, ThetaEval, bessel_j, bessel_row, theta3, theta3_dnome

__version__ = "0.1.0"
