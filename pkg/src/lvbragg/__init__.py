"""Mean-field and Bragg-Williams models of prey-predator associations."""
from .bragg_williams import (
    OrderParameter,
    admissible_quadratic,
    bw_coefficients,
    bw_coefficients_predator,
    bw_extremum,
    bw_roots,
    bw_vs_substitution_check,
    order_to_populations,
    psi_bw,
)
from .closure import (
    form_consistency_report,
    n_dd_from_prey,
    n_dp_from_prey,
    pair_counts_mass_action,
    psi_predator_form,
    psi_prey_form,
)
from .dynamics import Trajectory, conserved_quantity, integrate, lv_rhs, total_population_rate
from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    FewerThanTwoSamples,
    ModelError,
    NegativePopulation,
    NonFiniteState,
    NonPositiveCount,
    NonPositiveGestation,
    NonPositivePopulation,
    ParseError,
    RangeViolation,
    SingularForm,
)
from .meanfield import estimate_omega, frozen_field_solution, mean_field_rate, t_eff
from .model import (
    InteractionParams,
    PairCounts,
    PopulationState,
    QuadraticForm,
    SpeciesSet,
    ValidatedParams,
    bundled_constants,
    bundled_scenarios,
    load_constants,
    load_scenario_table,
    validate_params,
)

__version__ = "0.1.0"

__all__ = [
    "AntisymmetryViolation",
    "DimensionMismatch",
    "FewerThanTwoSamples",
    "InteractionParams",
    "ModelError",
    "NegativePopulation",
    "NonFiniteState",
    "NonPositiveCount",
    "NonPositiveGestation",
    "NonPositivePopulation",
    "OrderParameter",
    "PairCounts",
    "ParseError",
    "PopulationState",
    "QuadraticForm",
    "RangeViolation",
    "SingularForm",
    "SpeciesSet",
    "Trajectory",
    "ValidatedParams",
    "admissible_quadratic",
    "bundled_constants",
    "bundled_scenarios",
    "bw_coefficients",
    "bw_coefficients_predator",
    "bw_extremum",
    "bw_roots",
    "bw_vs_substitution_check",
    "conserved_quantity",
    "estimate_omega",
    "form_consistency_report",
    "frozen_field_solution",
    "integrate",
    "load_constants",
    "load_scenario_table",
    "lv_rhs",
    "mean_field_rate",
    "n_dd_from_prey",
    "n_dp_from_prey",
    "order_to_populations",
    "pair_counts_mass_action",
    "psi_bw",
    "psi_predator_form",
    "psi_prey_form",
    "t_eff",
    "total_population_rate",
    "validate_params",
]
