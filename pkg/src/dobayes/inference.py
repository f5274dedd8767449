"""Conjugate Bayesian inference for per-node coefficient vectors.

Each non-root node is a Bayesian linear regression of its column on its
parents' columns with a zero-mean isotropic Gaussian prior of precision
alpha and known unit noise.  Model evidence is the product of node-wise
Gaussian marginal likelihoods, with known root Gaussians entering as
fixed likelihood factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .diagram import CausalDiagram, topological_order
from .errors import (AllWeightsUnderflow, NumericalFailure,
                     RootNodeHasNoCoefficients)
from .sem import Dataset, SemTemplate


@dataclass(frozen=True)
class PriorSpec:
    """Shared prior precision: every coefficient ~ N(0, alpha^-1), independent."""

    alpha: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be positive and finite")


@dataclass(frozen=True)
class NodePosterior:
    """Gaussian posterior over one node's coefficient vector."""

    node: str
    mean: np.ndarray
    precision: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        prec = np.atleast_2d(np.asarray(self.precision, dtype=float))
        if prec.shape != (mean.size, mean.size):
            raise ValueError("precision must be KxK for a K-vector mean")
        if np.max(np.abs(prec - prec.T)) > 1e-10:
            raise ValueError("precision must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "precision", 0.5 * (prec + prec.T))

    def covariance(self) -> np.ndarray:
        return np.linalg.inv(self.precision)


@dataclass(frozen=True)
class ModelSet:
    """Candidate diagrams with their priors and prior probabilities."""

    models: tuple[tuple[str, SemTemplate, PriorSpec, float], ...]

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ValueError("ModelSet needs at least one model")
        ids = [m[0] for m in models]
        if len(set(ids)) != len(ids):
            raise ValueError("ModelIds must be unique")
        probs = np.array([m[3] for m in models], dtype=float)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("prior probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "models", models)

    @classmethod
    def singleton(cls, model_id: str, template: SemTemplate,
                  prior: PriorSpec) -> "ModelSet":
        return cls(((model_id, template, prior, 1.0),))

    def __iter__(self):
        return iter(self.models)

    def __len__(self):
        return len(self.models)


@dataclass(frozen=True)
class ModelPosterior:
    """Normalized posterior weight per ModelId."""

    weights: dict[str, float]

    def __post_init__(self):
        w = np.array(list(self.weights.values()), dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")

    def argmax(self) -> str:
        """Posterior-mode ModelId; ties break lexicographically."""
        best = max(self.weights.values())
        return min(mid for mid, w in self.weights.items() if w == best)


def _design(diagram: CausalDiagram, node: str, data: Dataset):
    parents = diagram.parents(node)
    if not parents:
        raise RootNodeHasNoCoefficients(node)
    phi = data.matrix(parents)
    t = data.column(node)
    return phi, t


def node_posterior(diagram: CausalDiagram, node: str, data: Dataset,
                   prior: PriorSpec) -> NodePosterior:
    """Conjugate posterior: precision = alpha*I + Phi'Phi, mean = S^-1 Phi't."""
    phi, t = _design(diagram, node, data)
    k = phi.shape[1]
    precision = prior.alpha * np.eye(k) + phi.T @ phi
    mean = np.linalg.solve(precision, phi.T @ t)
    return NodePosterior(node, mean, precision)


def ml_estimate(diagram: CausalDiagram, node: str, data: Dataset) -> np.ndarray:
    """Minimum-norm least-squares coefficients (pseudo-inverse when singular)."""
    phi, t = _design(diagram, node, data)
    if len(t) == 0:
        return np.zeros(phi.shape[1])
    theta, *_ = np.linalg.lstsq(phi, t, rcond=None)
    return theta


def map_estimate(posterior: NodePosterior) -> np.ndarray:
    """Posterior mode; for a Gaussian this is the mean."""
    return posterior.mean.copy()


def log_evidence(template: SemTemplate, data: Dataset, prior: PriorSpec) -> float:
    """Log marginal likelihood p(D | m), summed over node-wise factors.

    Non-root node: log density of its column under N(0, I_N + alpha^-1 Phi Phi'),
    evaluated stably through the KxK posterior precision (matrix determinant
    lemma / Woodbury).  Root node: log density under its known Gaussian.
    """
    n = len(data)
    if n == 0:
        return 0.0
    total = 0.0
    for node in template.diagram.nodes:
        parents = template.diagram.parents(node)
        if not parents:
            mean, prec = template.root(node)
            x = data.column(node)
            total += float(0.5 * n * (math.log(prec) - math.log(2 * math.pi))
                           - 0.5 * prec * np.sum((x - mean) ** 2))
            continue
        phi, t = _design(template.diagram, node, data)
        k = phi.shape[1]
        a = prior.alpha * np.eye(k) + phi.T @ phi
        sign, logdet_a = np.linalg.slogdet(a)
        if sign <= 0:
            raise NumericalFailure(f"posterior precision for {node!r} not PD")
        phi_t = phi.T @ t
        quad = float(t @ t - phi_t @ np.linalg.solve(a, phi_t))
        total += float(-0.5 * n * math.log(2 * math.pi)
                       - 0.5 * (logdet_a - k * math.log(prior.alpha))
                       - 0.5 * quad)
    if not math.isfinite(total):
        raise NumericalFailure("log evidence is not finite")
    return total


def model_posterior(models: ModelSet, data: Dataset) -> ModelPosterior:
    """p(m | D) via log-sum-exp over prior-weighted evidences."""
    ids = [m[0] for m in models]
    logs = np.array([
        (math.log(p) + log_evidence(tmpl, data, prior)) if p > 0 else -math.inf
        for _, tmpl, prior, p in models])
    if np.all(np.isneginf(logs)):
        raise AllWeightsUnderflow("all model log posteriors are -inf")
    weights = np.exp(logs - logsumexp(logs))
    weights = weights / weights.sum()
    return ModelPosterior(dict(zip(ids, weights)))


def fit_posteriors(template: SemTemplate, data: Dataset,
                   prior: PriorSpec) -> dict[str, NodePosterior]:
    """Node posterior for every non-root node, in topological order."""
    out = {}
    for node in topological_order(template.diagram):
        if template.diagram.parents(node):
            out[node] = node_posterior(template.diagram, node, data, prior)
    return out
