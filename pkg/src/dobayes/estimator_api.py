"""scikit-learn flavored front end around the functional estimators.

The estimator fits node posteriors (and, with several candidate models,
the model posterior) from an observational dataset, then predicts the
intervention-effect density for a query.  ``get_params``/``set_params``
come from :class:`sklearn.base.BaseEstimator`, so the class composes with
the usual sklearn tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .estimators import EstimatorConfig, IntegrationConfig, estimate
from .inference import ModelSet, PriorSpec, fit_posteriors, model_posterior
from .sem import Dataset, InterventionDensity, InterventionQuery, SemTemplate


def _as_dataset(X, columns=None) -> Dataset:
    if isinstance(X, Dataset):
        return X
    if hasattr(X, "columns") and hasattr(X, "to_numpy"):  # pandas frame
        return Dataset(tuple(map(str, X.columns)), X.to_numpy(dtype=float))
    arr = np.asarray(X, dtype=float)
    if columns is None:
        raise ValueError("plain arrays need an explicit column list")
    return Dataset(tuple(columns), arr)


class InterventionEffectEstimator(BaseEstimator):
    """Estimate p(target | do(node=value)) from observational data.

    Parameters
    ----------
    models : SemTemplate, or sequence of (model_id, SemTemplate, prior_prob)
        Candidate causal diagrams with their known root Gaussians.  A bare
        template is treated as a single known diagram.
    method : {"ML", "MAP", "BAYES", "MAP_MODEL", "BAYES_MODEL_AVG"}
    alpha : float, shared prior precision of all coefficients.
    """

    def __init__(self, models, method="BAYES", alpha=1.0,
                 quadrature_nodes_per_dim=32, max_quadrature_dims=3,
                 mc_samples=10000, mc_seed=0):
        self.models = models
        self.method = method
        self.alpha = alpha
        self.quadrature_nodes_per_dim = quadrature_nodes_per_dim
        self.max_quadrature_dims = max_quadrature_dims
        self.mc_samples = mc_samples
        self.mc_seed = mc_seed

    def _model_set(self) -> ModelSet:
        prior = PriorSpec(self.alpha)
        if isinstance(self.models, SemTemplate):
            return ModelSet.singleton("M0", self.models, prior)
        if isinstance(self.models, ModelSet):
            return self.models
        return ModelSet(tuple((mid, tmpl, prior, float(p))
                              for mid, tmpl, p in self.models))

    def _config(self) -> EstimatorConfig:
        integration = IntegrationConfig(
            self.quadrature_nodes_per_dim, self.max_quadrature_dims,
            self.mc_samples, self.mc_seed)
        return EstimatorConfig(self.method, integration)

    def fit(self, X, y=None, columns=None):
        """Fit per-node posteriors (and model posterior) from data."""
        data = _as_dataset(X, columns)
        model_set = self._model_set()
        self.data_ = data
        self.model_set_ = model_set
        self.node_posteriors_ = {
            mid: fit_posteriors(tmpl, data, prior)
            for mid, tmpl, prior, _ in model_set}
        self.model_posterior_ = (model_posterior(model_set, data)
                                 if len(model_set) > 1 else None)
        return self

    def predict_distribution(self, intervened, value, target) -> InterventionDensity:
        """The estimated intervention-effect density for one query."""
        check_is_fitted(self, "data_")
        query = InterventionQuery(str(intervened), float(value), str(target))
        return estimate(self.model_set_, self.data_, query, self._config())

    def predict(self, intervened, value, target) -> float:
        """Point prediction: mean of the estimated density."""
        return self.predict_distribution(intervened, value, target).mean()
