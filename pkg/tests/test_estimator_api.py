import numpy as np
import pytest
from sklearn.base import clone

from dobayes.estimator_api import InterventionEffectEstimator
from dobayes.estimators import estimate_bayes_fixed_model
from dobayes.inference import PriorSpec
from dobayes.scenarios import g1_template, g2_template
from dobayes.sem import Dataset, InterventionQuery, sample_dataset


@pytest.fixture
def data():
    sem = g1_template().with_coefficients({"Z": [1.0], "Y": [0.5]})
    return sample_dataset(sem, 30, seed=0)


class TestSklearnApi:
    def test_get_set_params_round_trip(self):
        est = InterventionEffectEstimator(g1_template(), method="MAP",
                                          alpha=2.0)
        params = est.get_params()
        assert params["alpha"] == 2.0
        est.set_params(alpha=0.5)
        assert est.alpha == 0.5

    def test_clone(self):
        est = InterventionEffectEstimator(g1_template(), alpha=3.0)
        dup = clone(est)
        assert dup.alpha == 3.0 and dup is not est

    def test_fit_predict_single_model(self, data):
        est = InterventionEffectEstimator(g1_template(), method="BAYES")
        est.fit(data)
        density = est.predict_distribution("X", 1.0, "Y")
        direct = estimate_bayes_fixed_model(
            g1_template(), data, PriorSpec(1.0),
            InterventionQuery("X", 1.0, "Y"))
        assert np.array_equal(density.means, direct.means)
        assert est.predict("X", 1.0, "Y") == pytest.approx(direct.mean())

    def test_unfitted_raises(self):
        est = InterventionEffectEstimator(g1_template())
        from sklearn.exceptions import NotFittedError
        with pytest.raises(NotFittedError):
            est.predict_distribution("X", 1.0, "Y")

    def test_multiple_models_posterior(self, data):
        est = InterventionEffectEstimator(
            [("G1", g1_template(), 0.5), ("G2", g2_template(), 0.5)],
            method="BAYES_MODEL_AVG")
        est.fit(data)
        assert est.model_posterior_ is not None
        assert sum(est.model_posterior_.weights.values()) == pytest.approx(1.0)
        density = est.predict_distribution("X", 1.0, "Y")
        assert abs(density.weights.sum() - 1.0) <= 1e-12

    def test_array_input_needs_columns(self):
        est = InterventionEffectEstimator(g1_template())
        with pytest.raises(ValueError):
            est.fit(np.zeros((3, 3)))
        est.fit(np.zeros((3, 3)), columns=("X", "Z", "Y"))
        assert isinstance(est.data_, Dataset)
