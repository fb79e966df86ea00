"""Wave equation on the plane with two glued slits.

The upper half-plane is cut along two vertical slits whose edges are glued with
a time shift.  The package provides the region geometry, admissibility tests on
the Cauchy data, a closed-form piecewise solution, the equivalent jump-kernel
solution, and a leapfrog finite-difference oracle.
"""

from .admissibility import AdmissibilityReport, check, cross_validate
from .classical import ClassicalSolution, EvaluationError, InadmissibleData, solve
from .dalembert import CharacteristicPair, make_pair, u_free
from .distributional import StrengthenedSolution, eval_strengthened, nonuniqueness_demo, strengthened_solution
from .fd_oracle import NonConvergence, compare, make_grid, march, solve_selfconsistent
from .geometry import (
    GeometryError,
    Region,
    SlitConfig,
    ValidatedConfig,
    canonical_config,
    classify,
    classify_array,
    glue_map,
    validate,
)
from .initial_data import (
    InitialData,
    bump_data,
    periodic_data,
    pulse_data,
    make_analytic,
    make_numeric,
    polynomial_data,
    quadratic_data,
    sinusoidal_data,
    trig_data,
    zero_data,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport", "CharacteristicPair", "ClassicalSolution", "EvaluationError", "GeometryError",
    "InadmissibleData", "InitialData", "NonConvergence", "Region", "SlitConfig", "StrengthenedSolution",
    "ValidatedConfig", "bump_data", "canonical_config", "check", "classify", "classify_array", "compare",
    "cross_validate", "eval_strengthened", "periodic_data", "pulse_data", "glue_map", "make_analytic",
    "make_grid", "make_numeric", "make_pair", "march", "nonuniqueness_demo", "polynomial_data",
    "quadratic_data", "sinusoidal_data", "solve", "solve_selfconsistent", "strengthened_solution",
    "trig_data", "u_free", "validate", "zero_data",
]
