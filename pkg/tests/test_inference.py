import math

import numpy as np
import pytest

from dobayes.errors import (AllWeightsUnderflow, MissingColumn,
                            RootNodeHasNoCoefficients)
from dobayes.inference import (ModelPosterior, ModelSet, NodePosterior,
                               PriorSpec, log_evidence, map_estimate,
                               ml_estimate, model_posterior, node_posterior)
from dobayes.scenarios import g1_template, g2_template, model_unknown
from dobayes.sem import Dataset, sample_dataset
from dobayes.diagram import topological_order


def g1_data(x, z, y):
    return Dataset(("X", "Z", "Y"), np.column_stack([x, z, y]))


G1 = g1_template()


class TestNodePosterior:
    def test_hand_arithmetic(self):
        data = g1_data([0.0, 0.0], [1.0, 2.0], [1.0, 2.0])
        post = node_posterior(G1.diagram, "Y", data, PriorSpec(1.0))
        assert post.precision == pytest.approx(np.array([[6.0]]))
        assert post.mean == pytest.approx(np.array([5.0 / 6.0]))

    def test_empty_data_returns_prior(self):
        data = Dataset(("X", "Z", "Y"), np.zeros((0, 3)))
        post = node_posterior(G1.diagram, "Y", data, PriorSpec(1.0))
        assert post.mean == pytest.approx(np.zeros(1))
        assert post.precision == pytest.approx(np.eye(1))

    def test_huge_alpha_prior_dominates(self):
        data = g1_data([1.0, -1.0], [0.5, 2.0], [3.0, -2.0])
        post = node_posterior(G1.diagram, "Y", data, PriorSpec(1e8))
        assert np.all(np.abs(post.mean) < 1e-6)

    def test_root_node_rejected(self):
        data = g1_data([0.0], [0.0], [0.0])
        with pytest.raises(RootNodeHasNoCoefficients):
            node_posterior(G1.diagram, "X", data, PriorSpec(1.0))

    def test_missing_column(self):
        data = Dataset(("X", "Z"), np.zeros((1, 2)))
        with pytest.raises(MissingColumn):
            node_posterior(G1.diagram, "Y", data, PriorSpec(1.0))

    def test_precision_eigenvalues_at_least_alpha(self):
        rng = np.random.default_rng(5)
        data = Dataset(("X", "Z", "Y"), rng.standard_normal((10, 3)))
        for alpha in (0.1, 1.0, 10.0):
            post = node_posterior(g2_template().diagram, "Y", data,
                                  PriorSpec(alpha))
            assert np.linalg.eigvalsh(post.precision).min() >= alpha - 1e-10


class TestMlEstimate:
    def test_exact_fit(self):
        data = g1_data([0, 0], [1.0, 2.0], [1.0, 2.0])
        assert ml_estimate(G1.diagram, "Y", data) == pytest.approx([1.0])

    def test_empty_min_norm(self):
        data = Dataset(("X", "Z", "Y"), np.zeros((0, 3)))
        assert ml_estimate(G1.diagram, "Y", data) == pytest.approx([0.0])

    def test_one_point_ols(self):
        data = g1_data([0.0], [2.0], [1.0])
        assert ml_estimate(G1.diagram, "Y", data) == pytest.approx([0.5])

    def test_map_approaches_ml_as_alpha_vanishes(self):
        rng = np.random.default_rng(11)
        data = Dataset(("X", "Z", "Y"), rng.standard_normal((8, 3)))
        ml = ml_estimate(G1.diagram, "Y", data)
        post = node_posterior(G1.diagram, "Y", data, PriorSpec(1e-8))
        assert map_estimate(post) == pytest.approx(ml, abs=1e-5)


class TestMapEstimate:
    def test_returns_mean(self):
        post = NodePosterior("Y", np.array([5 / 6]), np.array([[6.0]]))
        assert map_estimate(post) == pytest.approx([5 / 6])

    def test_prior_only(self):
        post = NodePosterior("Y", np.zeros(2), np.eye(2))
        assert map_estimate(post) == pytest.approx(np.zeros(2))


def trapezoid_node_evidence(phi, t, alpha, lim=30.0, points=2000):
    """Independent oracle: 1-D trapezoid integral of p(t|theta)p(theta)."""
    assert phi.shape[1] == 1
    theta = np.linspace(-lim, lim, points)
    log_prior = (-0.5 * math.log(2 * math.pi / alpha)
                 - 0.5 * alpha * theta ** 2)
    resid = t[:, None] - phi @ theta[None, :]
    log_lik = (-0.5 * len(t) * math.log(2 * math.pi)
               - 0.5 * np.sum(resid ** 2, axis=0))
    return math.log(np.trapezoid(np.exp(log_lik + log_prior), theta))


class TestLogEvidence:
    def test_empty_data(self):
        data = Dataset(("X", "Z", "Y"), np.zeros((0, 3)))
        assert log_evidence(G1, data, PriorSpec(1.0)) == 0.0

    def test_single_root_observation(self):
        from dobayes.diagram import validate_dag
        from dobayes.sem import SemTemplate
        template = SemTemplate(validate_dag(["X"], []),
                               root_params={"X": (0.0, 1.0)})
        data = Dataset(("X",), np.array([[0.0]]))
        assert log_evidence(template, data, PriorSpec(1.0)) == pytest.approx(
            -0.5 * math.log(2 * math.pi))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_trapezoid_oracle_on_g1(self, n):
        rng = np.random.default_rng(n)
        x = rng.standard_normal(n)
        z = rng.standard_normal(n)
        y = rng.standard_normal(n)
        alpha = 1.0
        data = g1_data(x, z, y)
        expected = (
            float(-0.5 * n * math.log(2 * math.pi) - 0.5 * np.sum(x ** 2))
            + trapezoid_node_evidence(x[:, None], z, alpha)
            + trapezoid_node_evidence(z[:, None], y, alpha))
        assert log_evidence(G1, data, PriorSpec(alpha)) == pytest.approx(
            expected, abs=1e-4)

    def test_row_permutation_invariant(self):
        rng = np.random.default_rng(9)
        vals = rng.standard_normal((6, 3))
        a = log_evidence(G1, Dataset(("X", "Z", "Y"), vals), PriorSpec(2.0))
        b = log_evidence(G1, Dataset(("X", "Z", "Y"), vals[::-1].copy()),
                         PriorSpec(2.0))
        assert a == pytest.approx(b, rel=1e-12)


class TestModelPosterior:
    def test_identical_models_split_evenly(self):
        models = ModelSet((("A", G1, PriorSpec(1.0), 0.5),
                           ("B", G1, PriorSpec(1.0), 0.5)))
        rng = np.random.default_rng(1)
        data = Dataset(("X", "Z", "Y"), rng.standard_normal((4, 3)))
        post = model_posterior(models, data)
        assert post.weights["A"] == pytest.approx(0.5)
        assert post.weights["B"] == pytest.approx(0.5)

    def test_zero_prior_annihilates(self):
        models = ModelSet((("A", G1, PriorSpec(1.0), 1.0),
                           ("B", g2_template(), PriorSpec(1.0), 0.0)))
        rng = np.random.default_rng(2)
        data = Dataset(("X", "Z", "Y"), rng.standard_normal((10, 3)))
        post = model_posterior(models, data)
        assert post.weights["A"] == pytest.approx(1.0)
        assert post.weights["B"] == 0.0

    def test_shift_invariance_via_scaled_priors(self):
        # weights only depend on log-evidence differences
        rng = np.random.default_rng(3)
        data = Dataset(("X", "Z", "Y"), rng.standard_normal((5, 3)))
        scen = model_unknown().models
        post = model_posterior(scen, data)
        assert sum(post.weights.values()) == pytest.approx(1.0, abs=1e-12)

    def test_argmax_tie_breaks_lexicographically(self):
        post = ModelPosterior({"B": 0.5, "A": 0.5})
        assert post.argmax() == "A"

    def test_true_model_concentrates_at_n200(self):
        # data from G2 with prior-drawn coefficients: G2 weight > 0.95 in
        # at least 90% of 200 trials
        scen = model_unknown()
        g2 = g2_template()
        hits = 0
        trials = 200
        for t in range(trials):
            rng = np.random.default_rng(10_000 + t)
            coeffs = {node: rng.normal(0.0, 1.0,
                                       len(g2.diagram.parents(node)))
                      for node in topological_order(g2.diagram)
                      if g2.diagram.parents(node)}
            sem = g2.with_coefficients(coeffs)
            data = sample_dataset(sem, 200, rng)
            post = model_posterior(scen.models, data)
            hits += post.weights["G2"] > 0.95
        assert hits / trials >= 0.90

    def test_all_underflow(self, monkeypatch):
        import dobayes.inference as inf
        monkeypatch.setattr(inf, "log_evidence",
                            lambda *a, **k: -math.inf)
        models = ModelSet((("A", G1, PriorSpec(1.0), 0.5),
                           ("B", G1, PriorSpec(1.0), 0.5)))
        data = Dataset(("X", "Z", "Y"), np.zeros((1, 3)))
        with pytest.raises(AllWeightsUnderflow):
            model_posterior(models, data)
