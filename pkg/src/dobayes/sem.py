"""Linear-Gaussian structural equation models.

Forward sampling follows the structural equations in topological order;
the exact post-intervention distribution is obtained by mutilating the
graph, pinning the intervened node, and propagating the joint Gaussian
(means vector plus covariance matrix, grown node by node).  Tracking the
full joint handles colliders and back-door paths without case analysis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .diagram import CausalDiagram, mutilate, topological_order, validate_dag
from .errors import MissingColumn, TargetIsIntervened, UnknownNode


@dataclass(frozen=True)
class SemTemplate:
    """A diagram plus everything known a priori: root Gaussians and noise.

    root_params maps each parentless node to (mean, precision); noise
    variances are known constants, never estimated (default 1.0).
    """

    diagram: CausalDiagram
    root_params: dict[str, tuple[float, float]] = field(default_factory=dict)
    noise_variance: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for node, (_, prec) in self.root_params.items():
            if node not in self.diagram.nodes:
                raise UnknownNode(node)
            if not self.diagram.is_root(node):
                raise ValueError(f"root params given for non-root node {node!r}")
            if not (prec > 0 and np.isfinite(prec)):
                raise ValueError(f"root precision for {node!r} must be positive")
        for node, var in self.noise_variance.items():
            if not (var > 0 and np.isfinite(var)):
                raise ValueError(f"noise variance for {node!r} must be positive")

    def root(self, node: str) -> tuple[float, float]:
        return self.root_params.get(node, (0.0, 1.0))

    def noise(self, node: str) -> float:
        return self.noise_variance.get(node, 1.0)

    def with_coefficients(self, coefficients) -> "LinearGaussianSem":
        return LinearGaussianSem(self.diagram, dict(coefficients),
                                 dict(self.noise_variance), dict(self.root_params))


@dataclass(frozen=True)
class LinearGaussianSem:
    """SemTemplate plus per-node coefficient vectors in parent order."""

    diagram: CausalDiagram
    coefficients: dict[str, np.ndarray]
    noise_variance: dict[str, float] = field(default_factory=dict)
    root_params: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {n: np.asarray(c, dtype=float) for n, c in self.coefficients.items()}
        object.__setattr__(self, "coefficients", coeffs)
        for node in self.diagram.nodes:
            k = len(self.diagram.parents(node))
            if k == 0:
                continue
            if node not in coeffs or coeffs[node].shape != (k,):
                raise ValueError(
                    f"node {node!r} needs a coefficient vector of length {k}")

    @property
    def template(self) -> SemTemplate:
        return SemTemplate(self.diagram, dict(self.root_params),
                           dict(self.noise_variance))

    def root(self, node):
        return self.root_params.get(node, (0.0, 1.0))

    def noise(self, node):
        return self.noise_variance.get(node, 1.0)


@dataclass(frozen=True)
class Dataset:
    """Rectangular table of jointly sampled values, one column per node."""

    columns: tuple[str, ...]
    values: np.ndarray  # shape (N, len(columns))

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != len(self.columns):
            raise ValueError("values must be an (N, n_columns) array")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise MissingColumn(name)
        return self.values[:, self.columns.index(name)]

    def matrix(self, names) -> np.ndarray:
        """Columns *names* as an (N, K) design matrix."""
        names = list(names)
        for n in names:
            if n not in self.columns:
                raise MissingColumn(n)
        idx = [self.columns.index(n) for n in names]
        return self.values[:, idx]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.values:
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if not header:
                raise ValueError(f"{path}: missing header row")
            columns = tuple(header.split(","))
            rows = [line.strip().split(",") for line in fh if line.strip()]
        values = np.array([[float(v) for v in row] for row in rows], dtype=float)
        values = values.reshape(len(rows), len(columns))
        return cls(columns, values)


@dataclass(frozen=True)
class InterventionQuery:
    """The triple behind p(target | do(intervened = value))."""

    intervened: str
    value: float
    target: str

    def __post_init__(self):
        if self.intervened == self.target:
            raise TargetIsIntervened(self.target)


class InterventionDensity:
    """A finite Gaussian mixture over the target variable.

    The single-component case is the plain Gaussian; weights sum to one.
    """

    __slots__ = ("weights", "means", "variances")

    def __init__(self, weights, means, variances):
        w = np.atleast_1d(np.asarray(weights, dtype=float))
        mu = np.atleast_1d(np.asarray(means, dtype=float))
        var = np.atleast_1d(np.asarray(variances, dtype=float))
        if not (w.shape == mu.shape == var.shape) or w.size == 0:
            raise ValueError("weights, means, variances must be equal-length, nonempty")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if np.any(var <= 0):
            raise ValueError("variances must be strictly positive")
        self.weights = w
        self.means = mu
        self.variances = var

    @classmethod
    def gaussian(cls, mean: float, variance: float) -> "InterventionDensity":
        return cls([1.0], [mean], [variance])

    def __len__(self) -> int:
        return self.weights.size

    def pdf(self, y) -> np.ndarray:
        """Mixture density at *y*, vectorized; chunks over components."""
        y = np.asarray(y, dtype=float)
        out = np.zeros_like(y, dtype=float)
        flat = y.reshape(-1, 1)
        # cap the (points x components) temporary at ~40M doubles
        step = max(1, min(self.weights.size, int(4e7 // max(flat.shape[0], 1))))
        for lo in range(0, self.weights.size, step):
            w = self.weights[lo:lo + step]
            mu = self.means[lo:lo + step]
            var = self.variances[lo:lo + step]
            z = (flat - mu) ** 2 / (2.0 * var)
            out += (w / np.sqrt(2.0 * np.pi * var) * np.exp(-z)).sum(axis=1).reshape(y.shape)
        return out

    def mean(self) -> float:
        return float(self.weights @ self.means)

    def variance(self) -> float:
        m = self.mean()
        return float(self.weights @ (self.variances + (self.means - m) ** 2))

    def pruned(self, threshold: float = 1e-12) -> "InterventionDensity":
        """Drop components below *threshold* weight and renormalize."""
        keep = self.weights >= threshold
        if not keep.any():
            keep = self.weights == self.weights.max()
        w = self.weights[keep]
        return InterventionDensity(w / w.sum(), self.means[keep], self.variances[keep])

    def to_json(self) -> str:
        comps = [{"w": float(w), "mu": float(m), "var": float(v)}
                 for w, m, v in zip(self.weights, self.means, self.variances)]
        return json.dumps(comps)

    @classmethod
    def from_json(cls, text: str) -> "InterventionDensity":
        comps = json.loads(text)
        return cls([c["w"] for c in comps], [c["mu"] for c in comps],
                   [c["var"] for c in comps])


def sample_dataset(sem: LinearGaussianSem, n: int, seed,
                   pinned: dict[str, float] | None = None) -> Dataset:
    """Draw *n* joint samples, optionally with some nodes pinned (do-sampling).

    Each node consumes one block of normals in topological order, so the
    stream is deterministic given the seed.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pinned = pinned or {}
    order = topological_order(sem.diagram)
    cols = {}
    for node in order:
        if node in pinned:
            cols[node] = np.full(n, float(pinned[node]))
            continue
        parents = sem.diagram.parents(node)
        if not parents:
            mean, prec = sem.root(node)
            cols[node] = rng.normal(mean, prec ** -0.5, size=n)
        else:
            phi = np.column_stack([cols[p] for p in parents]) if n else np.zeros((0, len(parents)))
            cols[node] = phi @ sem.coefficients[node] + rng.normal(
                0.0, sem.noise(node) ** 0.5, size=n)
    values = (np.column_stack([cols[c] for c in sem.diagram.nodes])
              if n else np.zeros((0, len(sem.diagram.nodes))))
    return Dataset(tuple(sem.diagram.nodes), values)


def propagate_do(template: SemTemplate, coefficients: dict[str, np.ndarray],
                 query: InterventionQuery) -> tuple[np.ndarray, np.ndarray]:
    """Batched exact do-propagation.

    *coefficients* maps each non-root node to a (B, K) array (or (K,) for
    B=1); returns (means, variances), both shape (B,), of the target under
    do(intervened=value).  Exact: mutilates the graph, pins the intervened
    node to a point mass, then grows the joint Gaussian in topological order.
    """
    diagram = template.diagram
    if query.target not in diagram.nodes:
        raise UnknownNode(query.target)
    cut = mutilate(diagram, query.intervened)
    order = topological_order(cut)

    coeffs = {}
    batch = 1
    for node in order:
        if node == query.intervened or cut.is_root(node):
            continue
        c = np.asarray(coefficients[node], dtype=float)
        if c.ndim == 1:
            c = c[None, :]
        coeffs[node] = c
        batch = max(batch, c.shape[0])

    m = len(order)
    pos = {n: i for i, n in enumerate(order)}
    mu = np.zeros((batch, m))
    cov = np.zeros((batch, m, m))
    for node in order:
        k = pos[node]
        if node == query.intervened:
            mu[:, k] = query.value  # point mass: zero variance, zero covariance
            continue
        parents = cut.parents(node)
        if not parents:
            mean, prec = template.root(node)
            mu[:, k] = mean
            cov[:, k, k] = 1.0 / prec
            continue
        c = coeffs[node]
        pidx = [pos[p] for p in parents]
        mu[:, k] = np.einsum("bk,bk->b", c, mu[:, pidx])
        cross = np.einsum("bk,bkj->bj", c, cov[:, pidx, :])  # cov(node, earlier)
        cov[:, k, :] = cross
        cov[:, :, k] = cross
        cov[:, k, k] = np.einsum("bk,bk->b", c, cross[:, pidx]) + template.noise(node)
    t = pos[query.target]
    return mu[:, t], cov[:, t, t]


def true_intervention_distribution(sem: LinearGaussianSem,
                                   query: InterventionQuery) -> InterventionDensity:
    """Exact p(target | do(intervened=value)) as a single Gaussian."""
    mean, var = propagate_do(sem.template, sem.coefficients, query)
    return InterventionDensity.gaussian(float(mean[0]), float(var[0]))


def intervention_distribution_invariance_check(sem: LinearGaussianSem,
                                               query: InterventionQuery) -> bool:
    """True iff coefficients on edges INTO the intervened node are irrelevant.

    Vacuously true when the intervened node is a root.
    """
    if sem.diagram.is_root(query.intervened):
        return True
    base = true_intervention_distribution(sem, query)
    for shift in (0.0, 3.5, -7.25):
        perturbed = dict(sem.coefficients)
        perturbed[query.intervened] = np.full_like(
            perturbed[query.intervened], shift)
        other = true_intervention_distribution(
            LinearGaussianSem(sem.diagram, perturbed, sem.noise_variance,
                              sem.root_params), query)
        if (abs(other.means[0] - base.means[0]) > 1e-12
                or abs(other.variances[0] - base.variances[0]) > 1e-12):
            return False
    return True


def load_model_json(path) -> SemTemplate:
    """Read a model-spec file: nodes, parents, optional root parameters.

    Root fields are permitted only on parentless nodes.
    """
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    nodes = [entry["name"] for entry in spec["nodes"]]
    edges = [(p, entry["name"]) for entry in spec["nodes"]
             for p in entry.get("parents", [])]
    diagram = validate_dag(nodes, edges)
    root_params = {}
    noise = {}
    for entry in spec["nodes"]:
        name = entry["name"]
        if "root_mean" in entry or "root_precision" in entry:
            if entry.get("parents"):
                raise ValueError(f"root fields on non-root node {name!r}")
            root_params[name] = (float(entry.get("root_mean", 0.0)),
                                 float(entry.get("root_precision", 1.0)))
        if "noise_variance" in entry:
            noise[name] = float(entry["noise_variance"])
    return SemTemplate(diagram, root_params, noise)


def load_params_json(path, template: SemTemplate) -> LinearGaussianSem:
    """Read a parameter file carrying coefficient vectors keyed by node."""
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    raw = spec.get("coefficients", spec)
    coefficients = {n: np.asarray(v, dtype=float) for n, v in raw.items()}
    return template.with_coefficients(coefficients)
