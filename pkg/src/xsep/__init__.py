"""Separability probabilities of two-qubit X-states.

Exact closed forms (:mod:`xsep.closedform`) checked against two independent
oracles, adaptive quadrature (:mod:`xsep.quadrature`) and direct Monte Carlo
sampling (:mod:`xsep.montecarlo`).
"""

from .closedform import (
    IntMN,
    MeasureSpec,
    TwoAlpha,
    integral_I,
    min_degenerate_sep_prob,
    nonsep_prob_induced,
    norm_const,
    norm_const_induced,
    rel_nonsep_prob,
    sep_prob,
    sep_prob_asymptotic,
    sigma,
    vwp_series,
)
from .estimators import DeterminantFeatures, PPTClassifier, SeparabilityProbability, closed_form
from .exactnum import ExactReal, gamma_half, log_gamma, pochhammer
from .montecarlo import Estimate, SamplerSpec
from .quadrature import QuadConfig, QuadResult
from .xstate import DeltaCoords, SCoords, TCoords, XDensity

__version__ = "0.1.0"

__all__ = [
    "DeltaCoords",
    "DeterminantFeatures",
    "Estimate",
    "ExactReal",
    "IntMN",
    "MeasureSpec",
    "PPTClassifier",
    "QuadConfig",
    "QuadResult",
    "SCoords",
    "SamplerSpec",
    "SeparabilityProbability",
    "TCoords",
    "TwoAlpha",
    "XDensity",
    "closed_form",
    "gamma_half",
    "integral_I",
    "log_gamma",
    "min_degenerate_sep_prob",
    "nonsep_prob_induced",
    "norm_const",
    "norm_const_induced",
    "pochhammer",
    "rel_nonsep_prob",
    "sep_prob",
    "sep_prob_asymptotic",
    "sigma",
    "vwp_series",
]
