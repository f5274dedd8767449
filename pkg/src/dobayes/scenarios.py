"""Built-in simulation scenarios: the two three-variable diagrams.

G1 is the chain X -> Z -> Y (X a known N(0,1) root); G2 is the confounded
triangle Z -> X, Z -> Y, X -> Y (Z a known N(0,1) root).  Both appear in
the model-unknown scenario with equal prior probability by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import validate_dag
from .inference import ModelSet, PriorSpec
from .sem import InterventionQuery, SemTemplate

DEFAULT_QUERY = InterventionQuery(intervened="X", value=1.0, target="Y")


def g1_template() -> SemTemplate:
    diagram = validate_dag(["X", "Z", "Y"], [("X", "Z"), ("Z", "Y")])
    return SemTemplate(diagram, root_params={"X": (0.0, 1.0)})


def g2_template() -> SemTemplate:
    diagram = validate_dag(["X", "Z", "Y"], [("Z", "X"), ("Z", "Y"), ("X", "Y")])
    return SemTemplate(diagram, root_params={"Z": (0.0, 1.0)})


@dataclass(frozen=True)
class Scenario:
    """What a risk simulation draws from and queries.

    When *model_known* is true the generating and estimating diagram is the
    single model in the set; otherwise each trial draws the generating
    diagram from the set's prior probabilities.
    """

    name: str
    models: ModelSet
    query: InterventionQuery = field(default=DEFAULT_QUERY)
    model_known: bool = True


def g1_known(alpha: float = 1.0, query: InterventionQuery = DEFAULT_QUERY) -> Scenario:
    models = ModelSet.singleton("G1", g1_template(), PriorSpec(alpha))
    return Scenario("G1_KNOWN", models, query, model_known=True)


def g2_known(alpha: float = 1.0, query: InterventionQuery = DEFAULT_QUERY) -> Scenario:
    models = ModelSet.singleton("G2", g2_template(), PriorSpec(alpha))
    return Scenario("G2_KNOWN", models, query, model_known=True)


def model_unknown(alpha: float = 1.0, model_prior=(0.5, 0.5),
                  query: InterventionQuery = DEFAULT_QUERY) -> Scenario:
    p1, p2 = model_prior
    models = ModelSet((("G1", g1_template(), PriorSpec(alpha), float(p1)),
                       ("G2", g2_template(), PriorSpec(alpha), float(p2))))
    return Scenario("MODEL_UNKNOWN", models, query, model_known=False)


def custom(name: str, models: ModelSet, query: InterventionQuery,
           model_known: bool = True) -> Scenario:
    return Scenario(name, models, query, model_known)
