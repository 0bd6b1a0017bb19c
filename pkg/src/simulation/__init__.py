"""Monte Carlo growth estimates, beta sweeps and breakpoint detection."""

from .breakpoints import Breakpoint, RowSumPiece, breakpoints, row_sum_pieces
from .lyapunov import Crossing, LyapunovEstimate, growth_curve, growth_sign_crossing, lyapunov_mc
from .sweep import SweepPoint, beta_grid, mean_growth_sweep

__all__ = [
    "Breakpoint",
    "RowSumPiece",
    "breakpoints",
    "row_sum_pieces",
    "Crossing",
    "LyapunovEstimate",
    "growth_curve",
    "growth_sign_crossing",
    "lyapunov_mc",
    "SweepPoint",
    "beta_grid",
    "mean_growth_sweep",
]
