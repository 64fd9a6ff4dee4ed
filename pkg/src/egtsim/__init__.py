"""Replicator dynamics for symmetric games in three equivalent forms.

The same flow is exposed as a simplex vector ODE, a symmetric-matrix
commutator flow, and a density-operator evolution; the package cross-checks
that all three representations carry the same diagonal dynamics, alongside
Nash/ESS analysis, entropy reporting, and a toy coarsening model.
"""

from .compare import FormComparison, compare_forms
from .entropy import EntropySeries, entropy_series, shannon, von_neumann_entropy
from .errors import NumericalAbort, ValidationError
from .games import (EquilibriumReport, PayoffMatrix, enumerate_symmetric_nash,
                    expected_payoff, is_ess, is_nash, load_game)
from .lax import (LaxPair, frequency_matrix, gsym_matrix, integrate_lax,
                  lax_field, lax_pair)
from .quantum import (hamiltonian_from_lambda, integrate_von_neumann, purity,
                      quantize)
from .replicator import (StabilityVerdict, classify_rest_point, find_rest_points,
                         fitness_stats, integrate, replicator_field)
from .thermalization import CoarseningRun, EnsembleState
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [
    "CoarseningRun",
    "EnsembleState",
    "EntropySeries",
    "EquilibriumReport",
    "FormComparison",
    "LaxPair",
    "NumericalAbort",
    "PayoffMatrix",
    "StabilityVerdict",
    "Trajectory",
    "ValidationError",
    "classify_rest_point",
    "compare_forms",
    "entropy_series",
    "enumerate_symmetric_nash",
    "expected_payoff",
    "find_rest_points",
    "fitness_stats",
    "frequency_matrix",
    "gsym_matrix",
    "hamiltonian_from_lambda",
    "integrate",
    "integrate_lax",
    "integrate_von_neumann",
    "is_ess",
    "is_nash",
    "lax_field",
    "lax_pair",
    "load_game",
    "purity",
    "quantize",
    "replicator_field",
    "shannon",
    "von_neumann_entropy",
]
