import numpy as np
import pytest

from dobayes.diagram import validate_dag
from dobayes.errors import TargetIsIntervened, UnknownNode
from dobayes.sem import (Dataset, InterventionDensity, InterventionQuery,
                         SemTemplate,
                         intervention_distribution_invariance_check,
                         load_model_json, load_params_json, sample_dataset,
                         true_intervention_distribution)
from dobayes.scenarios import g1_template, g2_template


def g1_sem(theta_zx=1.0, theta_yz=1.0):
    return g1_template().with_coefficients({"Z": [theta_zx], "Y": [theta_yz]})


def g2_sem(theta_xz=1.0, theta_yx=1.0, theta_yz=1.0):
    # Y's coefficient order is (X, Z): declaration order of its parents
    return g2_template().with_coefficients({"X": [theta_xz],
                                            "Y": [theta_yx, theta_yz]})


class TestSampleDataset:
    def test_empty(self):
        data = sample_dataset(g1_sem(), 0, 0)
        assert len(data) == 0
        assert data.columns == ("X", "Z", "Y")

    def test_deterministic(self):
        a = sample_dataset(g1_sem(), 50, seed=7)
        b = sample_dataset(g1_sem(), 50, seed=7)
        assert np.array_equal(a.values, b.values)

    def test_zero_coefficients_unit_variance(self):
        data = sample_dataset(g1_sem(0.0, 0.0), 10 ** 6, seed=3)
        assert abs(np.var(data.column("Y"), ddof=1) - 1.0) < 0.01

    def test_pinned_node(self):
        data = sample_dataset(g2_sem(), 100, seed=1, pinned={"X": 2.5})
        assert np.all(data.column("X") == 2.5)


class TestTrueInterventionDistribution:
    def test_g1_closed_form(self):
        d = true_intervention_distribution(
            g1_sem(1.0, 1.0), InterventionQuery("X", 1.0, "Y"))
        assert d.means[0] == pytest.approx(1.0, abs=1e-12)
        assert d.variances[0] == pytest.approx(2.0, abs=1e-12)

    def test_g2_z_path_zero(self):
        d = true_intervention_distribution(
            g2_sem(0.4, 2.0, 0.0), InterventionQuery("X", 3.0, "Y"))
        assert d.means[0] == pytest.approx(6.0, abs=1e-12)
        assert d.variances[0] == pytest.approx(1.0, abs=1e-12)

    def test_g2_back_door(self):
        # do(X=0) on the confounded triangle: N(theta_yz*mu_z, 1 + theta_yz^2/s_z)
        d = true_intervention_distribution(
            g2_sem(0.9, 1.0, 1.0), InterventionQuery("X", 0.0, "Y"))
        assert d.means[0] == pytest.approx(0.0, abs=1e-12)
        assert d.variances[0] == pytest.approx(2.0, abs=1e-12)

    def test_g1_root_equals_conditional(self):
        # intervening a root: identical to conditioning on it
        sem = g1_sem(0.7, -1.3)
        d = true_intervention_distribution(sem, InterventionQuery("X", 2.0, "Y"))
        assert d.means[0] == pytest.approx(-1.3 * 0.7 * 2.0, abs=1e-12)
        assert d.variances[0] == pytest.approx(1 + 1.3 ** 2, abs=1e-12)

    def test_target_is_intervened(self):
        with pytest.raises(TargetIsIntervened):
            InterventionQuery("X", 1.0, "X")

    def test_unknown_target(self):
        with pytest.raises(UnknownNode):
            true_intervention_distribution(
                g1_sem(), InterventionQuery("X", 1.0, "Q"))


def random_sem(rng, n_nodes):
    names = [f"V{i}" for i in range(n_nodes)]
    edges = [(names[i], names[j]) for i in range(n_nodes)
             for j in range(i + 1, n_nodes) if rng.random() < 0.5]
    diagram = validate_dag(names, edges)
    coeffs = {n: rng.uniform(-2, 2, len(diagram.parents(n)))
              for n in names if diagram.parents(n)}
    return SemTemplate(diagram).with_coefficients(coeffs)


@pytest.mark.parametrize("trial", range(5))
def test_do_distribution_matches_monte_carlo(trial):
    rng = np.random.default_rng(100 + trial)
    sem = random_sem(rng, int(rng.integers(2, 7)))
    nodes = sem.diagram.nodes
    intervened = nodes[int(rng.integers(len(nodes)))]
    target = next(n for n in reversed(nodes) if n != intervened)
    q = InterventionQuery(intervened, float(rng.uniform(-2, 2)), target)
    exact = true_intervention_distribution(sem, q)
    n = 10 ** 6
    y = sample_dataset(sem, n, int(rng.integers(2 ** 32)),
                       pinned={intervened: q.value}).column(target)
    mean_se = y.std(ddof=1) / np.sqrt(n)
    var_se = y.var(ddof=1) * np.sqrt(2.0 / (n - 1))
    assert abs(exact.means[0] - y.mean()) < 3 * mean_se
    assert abs(exact.variances[0] - y.var(ddof=1)) < 3 * var_se


class TestInvarianceCheck:
    def test_g2_incoming_irrelevant(self):
        a = true_intervention_distribution(
            g2_sem(0.0, 1.0, 1.0), InterventionQuery("X", 1.0, "Y"))
        b = true_intervention_distribution(
            g2_sem(5.0, 1.0, 1.0), InterventionQuery("X", 1.0, "Y"))
        assert a.means[0] == b.means[0] and a.variances[0] == b.variances[0]
        assert intervention_distribution_invariance_check(
            g2_sem(), InterventionQuery("X", 1.0, "Y"))

    def test_root_vacuous(self):
        assert intervention_distribution_invariance_check(
            g1_sem(), InterventionQuery("X", 1.0, "Y"))

    def test_outgoing_coefficients_do_matter(self):
        a = true_intervention_distribution(
            g2_sem(1.0, 1.0, 1.0), InterventionQuery("X", 1.0, "Y"))
        b = true_intervention_distribution(
            g2_sem(1.0, 1.0, 2.0), InterventionQuery("X", 1.0, "Y"))
        assert (a.means[0], a.variances[0]) != (b.means[0], b.variances[0])


class TestInterventionDensity:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            InterventionDensity([0.5, 0.4], [0, 1], [1, 1])

    def test_positive_variances(self):
        with pytest.raises(ValueError):
            InterventionDensity([1.0], [0.0], [0.0])

    def test_pdf_single_gaussian(self):
        d = InterventionDensity.gaussian(0.0, 1.0)
        assert d.pdf(0.0) == pytest.approx(1 / np.sqrt(2 * np.pi))

    def test_moments(self):
        d = InterventionDensity([0.5, 0.5], [-1.0, 1.0], [1.0, 1.0])
        assert d.mean() == pytest.approx(0.0)
        assert d.variance() == pytest.approx(2.0)

    def test_json_round_trip(self):
        d = InterventionDensity([0.25, 0.75], [0.1, -2.3], [1.5, 0.5])
        back = InterventionDensity.from_json(d.to_json())
        assert np.array_equal(back.weights, d.weights)
        assert np.array_equal(back.means, d.means)

    def test_pruning(self):
        d = InterventionDensity([1 - 1e-15, 1e-15], [0.0, 5.0], [1.0, 1.0])
        assert len(d.pruned()) == 1


class TestDatasetCsv:
    def test_bit_exact_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        data = Dataset(("a", "b"), rng.standard_normal((20, 2)) * 1e3)
        path = tmp_path / "d.csv"
        data.to_csv(path)
        back = Dataset.from_csv(path)
        assert back.columns == data.columns
        assert np.array_equal(back.values, data.values)

    def test_empty_dataset(self, tmp_path):
        data = Dataset(("x", "y"), np.zeros((0, 2)))
        path = tmp_path / "e.csv"
        data.to_csv(path)
        assert len(Dataset.from_csv(path)) == 0


class TestModelJson:
    def test_load_model_spec(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(
            '{"nodes":[{"name":"Z","parents":[],"root_mean":0.0,'
            '"root_precision":1.0},{"name":"X","parents":["Z"]},'
            '{"name":"Y","parents":["X","Z"]}]}')
        template = load_model_json(path)
        # canonical parent order is node declaration order (Z before X here)
        assert template.diagram.parents("Y") == ("Z", "X")
        assert template.root("Z") == (0.0, 1.0)

    def test_root_fields_rejected_on_non_root(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            '{"nodes":[{"name":"Z","parents":[]},'
            '{"name":"X","parents":["Z"],"root_mean":1.0}]}')
        with pytest.raises(ValueError):
            load_model_json(path)

    def test_load_params(self, tmp_path):
        mpath = tmp_path / "m.json"
        mpath.write_text('{"nodes":[{"name":"X","parents":[]},'
                         '{"name":"Z","parents":["X"]},'
                         '{"name":"Y","parents":["Z"]}]}')
        ppath = tmp_path / "p.json"
        ppath.write_text('{"coefficients":{"Z":[1.0],"Y":[1.0]}}')
        sem = load_params_json(ppath, load_model_json(mpath))
        d = true_intervention_distribution(sem, InterventionQuery("X", 1.0, "Y"))
        assert d.means[0] == pytest.approx(1.0)
