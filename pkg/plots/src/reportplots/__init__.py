"""Static figure rendering for experiment CSVs (no simulation code here)."""

from .jobs import PlotJob, run_job
from .phi import PhiPlot, plot_phi_curve
from .schema import PHI_COLUMNS, TRAJECTORY_COLUMNS, SchemaError, read_phi_curve, read_trajectories
from .trajectory import TrajectoryPlot, plot_trajectory

__version__ = "0.1.0"
