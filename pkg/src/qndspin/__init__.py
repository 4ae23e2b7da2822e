"""Measurement-induced spin squeezing of a two-mode condensate.

Three cross-validated engines for the conditional atomic state after
photon counting: an exact dressed-state solver, a hybrid oscillator
treatment of the atoms with exact light, and short-time closed forms,
plus Husimi phase-space tools and a figure-reproduction harness.
"""

from .core import (
    AsymptoticSupportError,
    CutoffError,
    ImprobableOutcomeError,
    MomentSet,
    SystemParams,
    preset_means,
    preset_qfunction,
    preset_variances,
    preset_variances_imperfect_large,
    preset_variances_imperfect_small,
)
from .spin import (
    AtomStateVector,
    SpinMatrices,
    build_spin_matrices,
    expectation,
    spin_coherent_state,
    variance,
)
from .exact import (
    CoherentLabels,
    ExactTrajectory,
    OutcomeDistribution,
    coherent_labels,
    conditional_state_exact,
    evolve_exact,
    exact_moments,
    outcome_distribution,
)
from .fourier import (
    MeasurementOutcome,
    fourier_coeff_asymptotic,
    fourier_coeff_quadrature,
    fourier_coeff_sum,
    measurement_outcome,
)
from .hybrid import (
    DisentangledFactors,
    HPState,
    apply_disentangled,
    detection_probability_hp,
    disentangle,
    hp_coherent,
    hp_conditional_state_closed_imperfect,
    hp_conditional_state_closed_perfect,
    hp_conditional_state_numeric,
    hp_moments,
    hp_vacuum,
)
from .closed_forms import (
    ValidityReport,
    approx_means_imperfect,
    approx_variances,
    q_width,
    validity_time,
    variance_composition,
)
from .husimi import (
    GridSpec,
    QGrid,
    q_function_closed,
    q_function_numeric,
    q_function_point,
    ray_width_squared,
    write_qgrid_csv,
)

__version__ = "0.1.0"
