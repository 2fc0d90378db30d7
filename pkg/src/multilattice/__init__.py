"""
multilattice: trigonometric approximation from multiple rank-1 lattices.

Weighted hyperbolic cross enumeration, probabilistic construction of
aliasing-free collections of rank-1 lattices, deterministic and randomly
shifted Fourier reconstruction, size/tail/error bound oracles, and the
classical two-dimensional single-lattice error floors.
"""

from .weights import (
    SmoothnessParams,
    TheoryParams,
    WeightSpec,
    riemann_zeta,
    rnorm,
    tractability_check,
    weight_of,
    weighted_zeta_sum,
)
from .cross import (
    HyperbolicCross,
    cardinality_bound,
    enumerate_cross,
    span_closed_form,
    tail_bound,
)
from .lattice import (
    AliasingTable,
    Rank1Lattice,
    aliasing_indicators,
    brute_force_dual_box,
    character_sum,
    dual_contains,
    lattice_points,
)
from .construction import (
    MultiLatticePlan,
    PlanParams,
    build_plan,
    candidate_primes,
    full_coverage_single_lattice,
    l_max_of,
    verify_plan,
)
from .approx import (
    SampledFunction,
    ShiftConfig,
    TrigPolynomial,
    error_report,
    evaluate,
    evaluate_many,
    mult_coeffs,
    mult_coeffs_shifted,
    rms_l2_over_shifts,
    single_lattice_coeffs,
    uncovered_indices,
)
from .testbed import (
    BernoulliProductFunction,
    ConvergenceRow,
    ExperimentConfig,
    bernoulli_eval,
    convergence_experiment,
    random_on_cross_poly,
)
from .lowerbound import (
    ShortDualVector,
    cf_short_vector,
    fooling_error,
    pigeonhole_short_vector,
)

__version__ = "0.1.0"
