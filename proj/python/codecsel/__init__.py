"""Statistically certified selection from a finite codec family.

Thin wrapper over the C++ core: confidence rectangles from four
concentration bounds, one-shot global sampling, and progressive sampling
with pruning, plus synthetic worlds for Monte-Carlo calibration checks.
"""

from ._codecsel import (
    BatchSchedule,
    BoundMethod,
    BoundViolationError,
    ConfigurationError,
    ConfidenceRectangle,
    ConstraintSpace,
    CoverageStats,
    CriterionMatrix,
    DistKind,
    DistSpec,
    Feasibility,
    GsConfig,
    HalfSpace,
    InputError,
    Interval,
    Objective,
    OracleSelection,
    PspConfig,
    SelectionReport,
    SyntheticWorld,
    Tails,
    TerminationReason,
    TraceEntry,
    VarianceEstimate,
    batch_schedule,
    build_rectangle,
    coverage_trial,
    coverage_trial_psp,
    emd,
    emd_raw,
    empirical_variance_estimate,
    epsilon_asymptotic_emd,
    epsilon_finite_emd,
    epsilon_gaussian_chernoff,
    epsilon_hoeffding,
    global_sampling,
    hoeffding_dominates,
    load_matrix,
    load_world,
    objective_interval,
    oracle_select,
    psp,
    rectangle_vs_constraints,
    sample_matrix,
    save_matrix,
    variance_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
