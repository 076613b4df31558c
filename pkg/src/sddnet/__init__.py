"""Sparse differences of inverse spectral densities between two conditions.

Typical use::

    S1, S2 = expanded_spectra(x1, [j], M)[0], expanded_spectra(x2, [j], M)[0]
    best = tune_sdd(S1, S2, n1, n2).best
    best.delta_complex          # p x p complex estimate
"""

__version__ = "0.1.0"

from .baselines import hard_threshold, naive_difference, threshold_path, tune_hard_threshold
from .dtrace import (
    DifferenceEstimate,
    DTraceProblem,
    SolverOptions,
    dtrace_gradient,
    dtrace_loss,
    kkt_residual,
    soft_threshold,
    solve_path,
    solve_sdd,
)
from .errors import (
    BandwidthError,
    BoundsError,
    DegeneratePathError,
    GenerationError,
    InputError,
    NumericalError,
    ParseError,
    SDDError,
    SingularityError,
    StructureError,
)
from .metrics import MetricsReport, aggregate, score
from .pipeline import estimate_at, estimate_panels, expanded_spectra
from .realspace import ExpandedMatrix, expand, project_block_structure, recover
from .spectral import (
    BANDS_HZ,
    default_bandwidth,
    evenly_spaced_indices,
    nearest_fourier_index,
    smoothed_periodogram,
    smoothed_periodograms,
)
from .timeseries_io import TimeSeriesPanel, demean, load_panel, segment, write_panel
from .tuning import count_edges, ebic, penalty_path, select_tau, tau_max, tune_sdd
from .varsim import (
    SimSetting,
    VarModel,
    build_setting,
    simulate_var1,
    true_difference,
    true_inverse_spectral_density,
    true_spectral_density,
)
