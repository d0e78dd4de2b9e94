"""Maximum-likelihood fitting of the three-parameter generalized Gamma
distribution via a surrogate lower-bound iteration, with a coordinate-wise
Newton comparator and a sampling/importance-resampling data generator."""

from .estimators import (
    Algorithm,
    IterationTrace,
    StoppingRule,
    beta_closed_form,
    mle_oracle,
    newton_step,
    run_newton,
    run_self,
    self_step_alpha,
    self_step_gamma,
)
from .exceptions import (
    DegenerateInputError,
    DegenerateWeightsError,
    DomainEscapeError,
    GgdFitError,
    IterationError,
    NoAdmissibleRootError,
    NumericError,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    compare_report,
    emit_csv,
    emit_plot_data,
    read_csv_points,
    run_experiment,
)
from .model import (
    BoundConstants,
    BoundMode,
    ParamTriple,
    Sample,
    d2l_dalpha2,
    d2l_dgamma2,
    dl_dalpha,
    dl_dgamma,
    log_likelihood,
    log_pdf,
    lower_bound_alpha,
    lower_bound_gamma,
    moment,
    numeric_cdf,
)
from .roots import (
    RealRoots,
    select_admissible_root,
    solve_quadratic_real,
    solve_quartic_real,
)
from .sampling import (
    SirConfig,
    WeightedPool,
    log_weight,
    sample_gamma,
    sample_ggd,
    sir_resample,
    sir_weights,
)
from .series import (
    EULER_MASCHERONI,
    SeriesConfig,
    digamma_series,
    euler_mascheroni,
    inverse_square_tail,
    log_gamma,
)

__version__ = "0.1.0"
