"""KL loss against the true intervention effect, and Monte Carlo risk.

The loss is KL(true || estimate).  The true side is always a single
Gaussian, so the integral runs on a Simpson grid spanning +-10 of its
standard deviations; the estimate's density is floored before the log so
badly mislocated estimates yield a large finite loss rather than -inf.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .diagram import topological_order
from .errors import NonFiniteResult
from .estimators import EstimatorConfig, IntegrationConfig, estimate
from .sem import InterventionDensity, sample_dataset, true_intervention_distribution
from .inference import model_posterior
from .scenarios import Scenario

SIMPSON_POINTS = 4001
RANGE_SIGMAS = 10.0
DENSITY_FLOOR = 1e-300


def kl_gaussian_gaussian(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Closed-form KL(N(p) || N(q)) for (mean, variance) pairs."""
    mu_p, var_p = p
    mu_q, var_q = q
    if var_p <= 0 or var_q <= 0:
        raise ValueError("variances must be positive")
    return 0.5 * (math.log(var_q / var_p)
                  + (var_p + (mu_p - mu_q) ** 2) / var_q - 1.0)


def kl_gaussian_vs_mixture(p: tuple[float, float], q: InterventionDensity) -> float:
    """Simpson-rule KL(N(p) || q) over p's +-10 sigma range."""
    mu, var = p
    if var <= 0:
        raise ValueError("true variance must be positive")
    sigma = math.sqrt(var)
    y = np.linspace(mu - RANGE_SIGMAS * sigma, mu + RANGE_SIGMAS * sigma,
                    SIMPSON_POINTS)
    log_p = -0.5 * math.log(2 * math.pi * var) - (y - mu) ** 2 / (2 * var)
    p_y = np.exp(log_p)
    q_y = np.maximum(q.pdf(y), DENSITY_FLOOR)
    integrand = p_y * (log_p - np.log(q_y))
    h = y[1] - y[0]
    weights = np.ones(SIMPSON_POINTS)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    result = float(h / 3.0 * (weights @ integrand))
    if not math.isfinite(result):
        raise NonFiniteResult("KL integral is not finite")
    return result


@dataclass(frozen=True)
class RiskEstimate:
    mean_kl: float
    stderr: float
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mean_kl < -1e-9:
            raise ValueError("mean KL must be nonnegative up to quadrature error")


@dataclass(frozen=True)
class TrialResults:
    """Per-trial losses plus the shared generating side of each trial."""

    kl: dict[str, np.ndarray]
    true_means: np.ndarray
    true_variances: np.ndarray
    generating_model: tuple[str, ...]
    generating_weight: np.ndarray  # posterior weight of the generating model


def _trial_seed(master_seed: int, scenario: Scenario, n: int,
                trial: int) -> np.random.SeedSequence:
    code = zlib.crc32(scenario.name.encode("utf-8"))
    return np.random.SeedSequence([int(master_seed), code, int(n), int(trial)])


def run_trials(scenario: Scenario, methods, n: int, trials: int,
               master_seed: int,
               integration: IntegrationConfig | None = None) -> TrialResults:
    """Paired risk simulation: every method sees the same draws per trial.

    Per trial: derive a seed, draw the generating model (when unknown),
    draw coefficients from the prior, sample a dataset of size n, then
    score each method's estimate against the true do-distribution.
    """
    integration = integration or IntegrationConfig()
    methods = list(methods)
    kl = {m: np.empty(trials) for m in methods}
    true_means = np.empty(trials)
    true_vars = np.empty(trials)
    gen_ids = []
    gen_weight = np.empty(trials)
    prior_probs = np.array([m[3] for m in scenario.models])
    for t in range(trials):
        rng = np.random.default_rng(_trial_seed(master_seed, scenario, n, t))
        if scenario.model_known:
            idx = 0
        else:
            idx = int(np.searchsorted(np.cumsum(prior_probs), rng.random(),
                                      side="right"))
            idx = min(idx, len(prior_probs) - 1)
        model_id, template, prior, _ = scenario.models.models[idx]
        gen_ids.append(model_id)
        sd = prior.alpha ** -0.5
        coeffs = {node: rng.normal(0.0, sd, size=len(template.diagram.parents(node)))
                  for node in topological_order(template.diagram)
                  if template.diagram.parents(node)}
        sem = template.with_coefficients(coeffs)
        data = sample_dataset(sem, n, rng)
        truth = true_intervention_distribution(sem, scenario.query)
        true_means[t] = truth.means[0]
        true_vars[t] = truth.variances[0]
        trial_integration = IntegrationConfig(
            integration.quadrature_nodes_per_dim, integration.max_quadrature_dims,
            integration.mc_samples, int(rng.integers(2 ** 62)))
        if scenario.model_known:
            gen_weight[t] = 1.0
        else:
            gen_weight[t] = model_posterior(scenario.models, data).weights[model_id]
        p = (float(truth.means[0]), float(truth.variances[0]))
        for method in methods:
            config = EstimatorConfig(method, trial_integration)
            density = estimate(scenario.models, data, scenario.query, config)
            kl[method][t] = kl_gaussian_vs_mixture(p, density)
    return TrialResults(kl, true_means, true_vars, tuple(gen_ids), gen_weight)


def empirical_bayes_risk(scenario: Scenario, method: str, n: int, trials: int,
                         master_seed: int,
                         integration: IntegrationConfig | None = None
                         ) -> RiskEstimate:
    """Monte Carlo Bayes risk of one method: mean KL and its standard error."""
    if trials < 2:
        raise ValueError("trials must be >= 2")
    results = run_trials(scenario, [method], n, trials, master_seed, integration)
    losses = results.kl[method]
    return RiskEstimate(float(losses.mean()),
                        float(losses.std(ddof=1) / math.sqrt(trials)), trials)
