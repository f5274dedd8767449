"""Decision functions mapping a dataset to an intervention-effect density.

Five methods: ML and MAP plug-ins (point estimate substituted into the
exact do-distribution), the Bayes-optimal posterior mixture for a fixed
diagram, the posterior-mode-diagram estimator, and the model-averaged
Bayes estimator.  Posterior mixtures are realized as finite Gaussian
mixtures via tensor-product Gauss-Hermite quadrature over the
block-diagonal coefficient posterior, falling back to Monte Carlo when
the coefficient dimension exceeds the quadrature ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure
from .inference import (ModelSet, PriorSpec, fit_posteriors, map_estimate,
                        ml_estimate, model_posterior, node_posterior)
from .sem import (Dataset, InterventionDensity, InterventionQuery, SemTemplate,
                  propagate_do)

PRUNE_WEIGHT = 1e-12

METHODS = ("ML", "MAP", "BAYES", "MAP_MODEL", "BAYES_MODEL_AVG")


@dataclass(frozen=True)
class IntegrationConfig:
    quadrature_nodes_per_dim: int = 32
    max_quadrature_dims: int = 3
    mc_samples: int = 10000
    mc_seed: int = 0

    def __post_init__(self):
        if self.quadrature_nodes_per_dim < 1 or self.mc_samples < 1:
            raise ValueError("integration counts must be >= 1")
        if self.max_quadrature_dims < 1:
            raise ValueError("max_quadrature_dims must be >= 1")


@dataclass(frozen=True)
class EstimatorConfig:
    method: str = "BAYES"
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)

    def __post_init__(self):
        method = self.method.upper().replace("-", "_")
        aliases = {"BMA": "BAYES_MODEL_AVG"}
        method = aliases.get(method, method)
        if method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        object.__setattr__(self, "method", method)


def _relevant_nodes(template: SemTemplate, query: InterventionQuery) -> list[str]:
    """Non-root nodes whose coefficients enter the mutilated propagation."""
    return [n for n in template.diagram.nodes
            if template.diagram.parents(n) and n != query.intervened]


def estimate_plugin(template: SemTemplate, data: Dataset, prior: PriorSpec,
                    query: InterventionQuery, point: str = "MAP") -> InterventionDensity:
    """Exact do-distribution at the plugged-in point estimate (single Gaussian)."""
    point = point.upper()
    if point not in ("ML", "MAP"):
        raise ValueError(f"plug-in point must be ML or MAP, got {point!r}")
    coeffs = {}
    for node in template.diagram.nodes:
        if not template.diagram.parents(node):
            continue
        if point == "ML":
            coeffs[node] = ml_estimate(template.diagram, node, data)
        else:
            coeffs[node] = map_estimate(
                node_posterior(template.diagram, node, data, prior))
    mean, var = propagate_do(template, coeffs, query)
    return InterventionDensity.gaussian(float(mean[0]), float(var[0]))


def _gauss_hermite_standard(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights integrating exactly against the standard normal."""
    x, w = np.polynomial.hermite.hermgauss(n)
    return x * np.sqrt(2.0), w / np.sqrt(np.pi)


def _block_draws(posteriors, nodes, config: IntegrationConfig):
    """Coefficient grids and weights over the block-diagonal posterior.

    Returns (coeff arrays per node, mixture weights).  Quadrature when the
    total dimension fits, otherwise equal-weight posterior Monte Carlo.
    """
    dims = [posteriors[n].mean.size for n in nodes]
    total = int(sum(dims))
    if total == 0:
        return {}, np.ones(1)
    if total <= config.max_quadrature_dims:
        u1, w1 = _gauss_hermite_standard(config.quadrature_nodes_per_dim)
        grids = np.meshgrid(*([u1] * total), indexing="ij")
        u = np.column_stack([g.ravel() for g in grids])  # (B, total)
        wgrids = np.meshgrid(*([w1] * total), indexing="ij")
        weights = np.prod(np.column_stack([g.ravel() for g in wgrids]), axis=1)
    else:
        rng = np.random.default_rng(config.mc_seed)
        u = rng.standard_normal((config.mc_samples, total))
        weights = np.full(config.mc_samples, 1.0 / config.mc_samples)
    coeffs = {}
    offset = 0
    for node, k in zip(nodes, dims):
        post = posteriors[node]
        cov = post.covariance()
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"posterior covariance for {node!r} not PD") from exc
        coeffs[node] = post.mean + u[:, offset:offset + k] @ chol.T
        offset += k
    return coeffs, weights


def estimate_bayes_fixed_model(template: SemTemplate, data: Dataset,
                               prior: PriorSpec, query: InterventionQuery,
                               integration: IntegrationConfig | None = None
                               ) -> InterventionDensity:
    """Posterior-mixture estimate for a known diagram.

    Integrates the exact do-distribution against the coefficient posterior,
    which factorizes across nodes; only blocks feeding the mutilated graph
    are expanded (the intervened node's own block integrates out).
    """
    integration = integration or IntegrationConfig()
    nodes = _relevant_nodes(template, query)
    posteriors = {n: node_posterior(template.diagram, n, data, prior)
                  for n in nodes}
    coeffs, weights = _block_draws(posteriors, nodes, integration)
    means, variances = propagate_do(template, coeffs, query)
    if means.size == 1 and weights.size > 1:  # no relevant blocks: degenerate
        means = np.repeat(means, weights.size)
        variances = np.repeat(variances, weights.size)
    weights = weights / weights.sum()
    if not (np.all(np.isfinite(means)) and np.all(np.isfinite(variances))):
        raise NumericalFailure("non-finite mixture component")
    return InterventionDensity(weights, means, variances).pruned(PRUNE_WEIGHT)


def estimate_map_model(models: ModelSet, data: Dataset, query: InterventionQuery,
                       integration: IntegrationConfig | None = None
                       ) -> InterventionDensity:
    """Fixed-model Bayes estimate under the posterior-mode diagram."""
    posterior = model_posterior(models, data)
    chosen = posterior.argmax()
    for mid, template, prior, _ in models:
        if mid == chosen:
            return estimate_bayes_fixed_model(template, data, prior, query,
                                              integration)
    raise KeyError(chosen)


def estimate_model_averaged(models: ModelSet, data: Dataset,
                            query: InterventionQuery,
                            integration: IntegrationConfig | None = None
                            ) -> InterventionDensity:
    """Mixture over models: components rescaled by p(m | D) and concatenated."""
    posterior = model_posterior(models, data)
    weights, means, variances = [], [], []
    for mid, template, prior, _ in models:
        wm = posterior.weights[mid]
        if wm < PRUNE_WEIGHT:
            continue
        part = estimate_bayes_fixed_model(template, data, prior, query,
                                          integration)
        weights.append(wm * part.weights)
        means.append(part.means)
        variances.append(part.variances)
    w = np.concatenate(weights)
    return InterventionDensity(w / w.sum(), np.concatenate(means),
                               np.concatenate(variances)).pruned(PRUNE_WEIGHT)


def estimate(models: ModelSet, data: Dataset, query: InterventionQuery,
             config: EstimatorConfig) -> InterventionDensity:
    """Dispatch on the configured method.

    Single-model methods (ML/MAP/BAYES) use the first model in the set.
    """
    _, template, prior, _ = models.models[0]
    if config.method in ("ML", "MAP"):
        return estimate_plugin(template, data, prior, query, config.method)
    if config.method == "BAYES":
        return estimate_bayes_fixed_model(template, data, prior, query,
                                          config.integration)
    if config.method == "MAP_MODEL":
        return estimate_map_model(models, data, query, config.integration)
    return estimate_model_averaged(models, data, query, config.integration)
