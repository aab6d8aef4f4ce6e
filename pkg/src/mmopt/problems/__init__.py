"""Concrete constrained-optimization solvers built on the proximal distance driver."""

from .intersection import SqrtDistanceToPoint, alpha_search, solve_intersection_projection
from .binary_pwl import PairwiseAbsObjective, onedim_pwl_prox, solve_binary_pwl
from .quadratic import (LeastSquaresObjective, QuadraticObjective, SpectralCache,
                        solve_l0, solve_nqp)
from .matcomp import CompletionObjective, CompletionProblem, mc_step, solve_matcomp
from .precision import (GaussianLikelihoodObjective, PrecisionProblem,
                        precision_step, solve_precision)

__all__ = [
    "alpha_search",
    "SqrtDistanceToPoint",
    "solve_intersection_projection",
    "onedim_pwl_prox",
    "PairwiseAbsObjective",
    "solve_binary_pwl",
    "SpectralCache",
    "QuadraticObjective",
    "LeastSquaresObjective",
    "solve_nqp",
    "solve_l0",
    "CompletionProblem",
    "CompletionObjective",
    "mc_step",
    "solve_matcomp",
    "PrecisionProblem",
    "GaussianLikelihoodObjective",
    "precision_step",
    "solve_precision",
]
