"""Bayes-optimal estimation of causal intervention effects on
linear-Gaussian diagrams."""

from .diagram import (CausalDiagram, mutilate, parents, topological_order,
                      validate_dag)
from .estimator_api import InterventionEffectEstimator
from .estimators import (EstimatorConfig, IntegrationConfig,
                         estimate_bayes_fixed_model, estimate_map_model,
                         estimate_model_averaged, estimate_plugin)
from .evaluation import (RiskEstimate, empirical_bayes_risk,
                         kl_gaussian_gaussian, kl_gaussian_vs_mixture)
from .experiment import ExperimentConfig, ResultTable, run_experiment, summarize
from .inference import (ModelPosterior, ModelSet, NodePosterior, PriorSpec,
                        log_evidence, map_estimate, ml_estimate,
                        model_posterior, node_posterior)
from .scenarios import Scenario, g1_known, g2_known, model_unknown
from .sem import (Dataset, InterventionDensity, InterventionQuery,
                  LinearGaussianSem, SemTemplate,
                  intervention_distribution_invariance_check, load_model_json,
                  load_params_json, sample_dataset,
                  true_intervention_distribution)

__version__ = "0.1.0"

__all__ = [
    "CausalDiagram", "Dataset", "EstimatorConfig", "ExperimentConfig",
    "IntegrationConfig", "InterventionDensity", "InterventionEffectEstimator",
    "InterventionQuery", "LinearGaussianSem", "ModelPosterior", "ModelSet",
    "NodePosterior", "PriorSpec", "ResultTable", "RiskEstimate", "Scenario",
    "SemTemplate", "empirical_bayes_risk", "estimate_bayes_fixed_model",
    "estimate_map_model", "estimate_model_averaged", "estimate_plugin",
    "g1_known", "g2_known", "intervention_distribution_invariance_check",
    "kl_gaussian_gaussian", "kl_gaussian_vs_mixture", "load_model_json",
    "load_params_json", "log_evidence", "map_estimate", "ml_estimate",
    "model_posterior", "model_unknown", "mutilate", "node_posterior",
    "parents", "run_experiment", "sample_dataset", "summarize",
    "topological_order", "true_intervention_distribution", "validate_dag",
]
