"""Secrecy-rate maximisation for a fluid-antenna wiretap channel with
coding-enhanced cooperative jamming."""

from .channel import (
    ChannelFactor, ChannelRealization, CsiModel, PortGrid, apply_csi_error,
    build_correlation, factor, sample_realization,
)
from .montecarlo import ExperimentConfig, ExperimentSummary, Scheme, run_point, run_sweep
from .optimizer import (
    Case, Interval, QuadCoeffs, SolveResult, case_split, equal_power, oracle_ej, quad_coeffs,
    solve_all_ports, solve_gn, solve_port, solve_ports, solve_rhat, solve_rtilde,
)
from .rates import (
    GainQuad, PowerAllocation, rate_bar, rate_ej, rate_gn, rate_hat, rate_tilde,
)
from .specfun import bessel_j0

__version__ = "0.1.0"
