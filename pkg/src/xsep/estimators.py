"""scikit-learn compatible front end.

* :class:`DeterminantFeatures` -- transformer from delta-coordinate rows
  ``(s1, delta1, delta2, s4, s5)`` to ``det xi``, ``det xi^PT`` and their
  difference.
* :class:`PPTClassifier` -- labels states separable (1) or entangled (0) by
  the sign of ``det xi^PT``.
* :class:`SeparabilityProbability` -- computes one probability statistic of
  the induced measure, in closed form or by Monte Carlo, and can draw states
  from that measure.

All three follow the usual estimator contract (constructor stores parameters
untouched, ``get_params``/``set_params`` work, fitted attributes end in ``_``)
so they can sit inside pipelines and parameter searches.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import closedform as cf
from ._validation import UnsupportedParameterError, as_exact_integer, check_alpha, check_k
from .exactnum import ExactReal
from .montecarlo import (
    DEFAULT_CHUNK_SIZE,
    SamplerSpec,
    chunk_rng,
    estimate_det_moment,
    estimate_min_degenerate,
    estimate_rel_prob,
    estimate_sep_prob,
    sample_chunk,
)
from .xstate import DeltaCoords, check_delta, det_difference, det_xi, det_xi_pt

__all__ = [
    "STATISTICS",
    "DeterminantFeatures",
    "PPTClassifier",
    "SeparabilityProbability",
    "closed_form",
]

STATISTICS = ("sep", "nonsep", "rel", "rel_nonsep", "min_degenerate", "moment")


def _complement(x):
    # 1 - c pi^e is not a single term unless e = 0
    if isinstance(x, ExactReal) and not x.is_rational:
        return 1 - float(x)
    return 1 - x


def _require_integer_alpha(alpha, what):
    a = as_exact_integer(alpha)
    if a is None or a < 1:
        raise UnsupportedParameterError(f"{what} has a closed form only for integer alpha >= 1")
    return a


def _shift(k, power: int):
    ki = as_exact_integer(k)
    if ki is not None:
        return ki + power
    return float(k) + power


def closed_form(statistic: str, alpha, k=0, power: int = 1):
    """Closed-form value of ``statistic`` under ``c_{alpha,k} (det xi)^k dnu_alpha``.

    Returns an exact value (ExactReal or Fraction) where one exists and a
    float otherwise.  Raises UnsupportedParameterError outside the known
    closed-form domain.
    """
    check_alpha(alpha)
    check_k(k)
    k_is_zero = float(k) == 0
    if statistic in ("sep", "nonsep"):
        if k_is_zero:
            p = cf.sep_prob(alpha)
        else:
            _require_integer_alpha(alpha, f"{statistic} with k > 0")
            p = _complement(cf.nonsep_prob_induced(alpha, k))
        return p if statistic == "sep" else _complement(p)
    if statistic in ("rel", "rel_nonsep"):
        if as_exact_integer(alpha) is not None and as_exact_integer(k) is not None:
            below = cf.rel_nonsep_prob(alpha, k)
            return _complement(below) if statistic == "rel" else below
        if not k_is_zero:
            raise UnsupportedParameterError("rel with k > 0 needs integer alpha and k")
        # Pr{det xi^PT >= det xi} is half the separability probability
        above = cf.min_degenerate_sep_prob(alpha)
        return above if statistic == "rel" else _complement(above)
    if statistic == "min_degenerate":
        if not k_is_zero:
            raise UnsupportedParameterError("min_degenerate is defined for k = 0")
        return cf.min_degenerate_sep_prob(alpha)
    if statistic == "moment":
        p = as_exact_integer(power)
        if p is None or p < 0:
            raise ValueError("power must be a nonnegative integer")
        return cf.norm_const_induced(alpha, k) / cf.norm_const_induced(alpha, _shift(k, p))
    raise ValueError(f"unknown statistic {statistic!r}; choose from {STATISTICS}")


def _as_delta(X) -> DeltaCoords:
    return DeltaCoords.from_array(X)


class DeterminantFeatures(TransformerMixin, BaseEstimator):
    """Delta-coordinate rows to ``[det_xi, det_xi_pt, det_xi_pt - det_xi]``.

    Parameters
    ----------
    validate_domain : bool, default=True
        Reject rows outside the delta-coordinate box.
    """

    def __init__(self, validate_domain=True):
        self.validate_domain = validate_domain

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 5:
            raise ValueError(f"expected 5 columns (s1, delta1, delta2, s4, s5), got {X.shape[1]}")
        self.n_features_in_ = 5
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        d = _as_delta(X)
        if self.validate_domain:
            check_delta(d)
        return np.column_stack([det_xi(d), det_xi_pt(d), det_difference(d)])

    def get_feature_names_out(self, input_features=None):
        return np.array(["det_xi", "det_xi_pt", "det_difference"], dtype=object)


class PPTClassifier(ClassifierMixin, BaseEstimator):
    """Separable (1) iff ``det xi^PT >= -tol``; there is nothing to learn."""

    def __init__(self, tol=0.0):
        self.tol = tol

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 5:
            raise ValueError(f"expected 5 columns (s1, delta1, delta2, s4, s5), got {X.shape[1]}")
        self.n_features_in_ = 5
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X):
        check_is_fitted(self, "classes_")
        X = check_array(X, dtype=np.float64)
        return det_xi_pt(_as_delta(X))

    def predict(self, X):
        return (self.decision_function(X) >= -self.tol).astype(int)


class SeparabilityProbability(BaseEstimator):
    """One probability statistic of the X-state measure with parameters ``alpha, k``.

    ``fit`` ignores its arguments (they exist for pipeline compatibility) and
    sets ``value_``, ``std_error_`` (zero for closed forms), ``exact_``
    (None unless the value is exact) and, for Monte Carlo, ``estimate_``.

    Parameters
    ----------
    alpha : float, default=1.0
    k : float, default=0.0
    statistic : {'sep', 'nonsep', 'rel', 'rel_nonsep', 'min_degenerate', 'moment'}
    method : {'closed', 'mc'}
    power : int, default=1
        Power of ``det xi`` for ``statistic='moment'``.
    n_samples : int, default=1_000_000
    random_state : int, default=0
        Seed of the chunked sampler; must be a nonnegative integer so that
        results are reproducible.
    chunk_size : int
    n_jobs : int, default=1
    """

    def __init__(
        self,
        alpha=1.0,
        k=0.0,
        statistic="sep",
        method="closed",
        power=1,
        n_samples=1_000_000,
        random_state=0,
        chunk_size=DEFAULT_CHUNK_SIZE,
        n_jobs=1,
    ):
        self.alpha = alpha
        self.k = k
        self.statistic = statistic
        self.method = method
        self.power = power
        self.n_samples = n_samples
        self.random_state = random_state
        self.chunk_size = chunk_size
        self.n_jobs = n_jobs

    def _sampler_spec(self, n_samples=None) -> SamplerSpec:
        return SamplerSpec(
            alpha=check_alpha(self.alpha),
            k=check_k(self.k),
            seed=int(self.random_state),
            n_samples=int(n_samples or self.n_samples),
            chunk_size=int(self.chunk_size),
        )

    def fit(self, X=None, y=None):
        if self.statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}; choose from {STATISTICS}")
        if self.method == "closed":
            value = closed_form(self.statistic, self.alpha, self.k, self.power)
            exact = value if isinstance(value, (ExactReal, Fraction)) else None
            self.exact_ = ExactReal.coerce(exact) if exact is not None else None
            self.value_ = float(value)
            self.std_error_ = 0.0
        elif self.method == "mc":
            spec = self._sampler_spec()
            stat = self.statistic
            if stat in ("sep", "nonsep"):
                est = estimate_sep_prob(spec, self.n_jobs)
            elif stat in ("rel", "rel_nonsep"):
                est = estimate_rel_prob(spec, self.n_jobs)
            elif stat == "min_degenerate":
                est = estimate_min_degenerate(spec, self.n_jobs)
            else:
                est = estimate_det_moment(spec, self.power, self.n_jobs)
            mean = 1 - est.mean if stat in ("nonsep", "rel_nonsep") else est.mean
            self.estimate_ = est
            self.exact_ = None
            self.value_ = mean
            self.std_error_ = est.std_error
        else:
            raise ValueError(f"method must be 'closed' or 'mc', got {self.method!r}")
        return self

    def sample(self, n_samples=1):
        """Draw ``n_samples`` states as an ``(n_samples, 5)`` delta-coordinate array."""
        spec = self._sampler_spec(n_samples)
        parts = [
            sample_chunk(spec.alpha, spec.k, size, chunk_rng(spec.seed, c)).as_array()
            for c, size in spec.chunk_sizes()
        ]
        return np.concatenate(parts, axis=0)
