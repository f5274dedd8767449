"""Sample-size sweeps comparing estimator methods by KL risk.

Trials are paired: for a fixed (n, trial) every method is scored against
the identical generating draw, which makes the small-n method ordering
resolvable with a moderate trial count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .estimators import METHODS, EstimatorConfig, IntegrationConfig
from .evaluation import run_trials
from .scenarios import Scenario, custom, g1_known, g2_known, model_unknown
from .sem import InterventionQuery, load_model_json
from .inference import ModelSet, PriorSpec

DEFAULT_SAMPLE_SIZES = (2, 3, 5, 8, 13, 21, 34, 55, 89, 144)


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "G1_KNOWN"
    query: InterventionQuery = field(
        default=InterventionQuery("X", 1.0, "Y"))
    sample_sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    trials: int = 1000
    alpha: float = 1.0
    model_prior: tuple[float, ...] = (0.5, 0.5)
    methods: tuple[str, ...] = ()
    master_seed: int = 0
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    model_files: tuple[str, ...] = ()  # CUSTOM scenario only

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sample_sizes)
        if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sample_sizes must be nonempty and ascending")
        if self.trials < 2:
            raise ValueError("trials must be >= 2")
        if abs(sum(self.model_prior) - 1.0) > 1e-12:
            raise ValueError("model_prior must sum to 1")
        methods = tuple(EstimatorConfig(m).method for m in self.methods)
        if not methods:
            methods = (("MAP_MODEL", "BAYES_MODEL_AVG")
                       if self.scenario == "MODEL_UNKNOWN"
                       else ("ML", "MAP", "BAYES"))
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "methods", methods)

    def build_scenario(self) -> Scenario:
        if self.scenario == "G1_KNOWN":
            return g1_known(self.alpha, self.query)
        if self.scenario == "G2_KNOWN":
            return g2_known(self.alpha, self.query)
        if self.scenario == "MODEL_UNKNOWN":
            return model_unknown(self.alpha, self.model_prior, self.query)
        if self.scenario == "CUSTOM":
            if not self.model_files:
                raise ValueError("CUSTOM scenario needs model_files")
            if len(self.model_prior) != len(self.model_files):
                raise ValueError("model_prior length must match model_files")
            entries = tuple(
                (f"M{i}", load_model_json(path), PriorSpec(self.alpha), p)
                for i, (path, p) in enumerate(zip(self.model_files,
                                                  self.model_prior)))
            return custom("CUSTOM", ModelSet(entries), self.query,
                          model_known=len(entries) == 1)
        raise ValueError(f"unknown scenario {self.scenario!r}")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        query = InterventionQuery(
            raw.get("intervened", "X"), float(raw.get("value", 1.0)),
            raw.get("target", "Y"))
        integration = IntegrationConfig(**raw.get("integration", {}))
        return cls(
            scenario=raw.get("scenario", "G1_KNOWN"),
            query=query,
            sample_sizes=tuple(raw.get("sample_sizes", DEFAULT_SAMPLE_SIZES)),
            trials=int(raw.get("trials", 1000)),
            alpha=float(raw.get("alpha", 1.0)),
            model_prior=tuple(raw.get("model_prior", (0.5, 0.5))),
            methods=tuple(raw.get("methods", ())),
            master_seed=int(raw.get("master_seed", 0)),
            integration=integration,
            model_files=tuple(raw.get("models", ())),
        )


@dataclass(frozen=True)
class ResultTable:
    """Raw per-trial losses plus per-(method, n) summaries."""

    scenario: str
    raw: tuple[tuple[str, str, int, int, float], ...]  # (scenario, method, n, trial, kl)
    summary: tuple[tuple[str, str, int, float, float], ...]  # (..., mean_kl, stderr)

    def raw_csv(self) -> str:
        lines = ["scenario,method,n,trial,kl"]
        lines += [f"{s},{m},{n},{t},{format(kl, '.17g')}"
                  for s, m, n, t, kl in self.raw]
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        lines = ["scenario,method,n,mean_kl,stderr"]
        lines += [f"{s},{m},{n},{format(mean, '.17g')},{format(se, '.17g')}"
                  for s, m, n, mean, se in self.summary]
        return "\n".join(lines) + "\n"


def summarize(raw_rows) -> list[tuple[str, str, int, float, float]]:
    """Mean and stderr per (scenario, method, n); order-invariant."""
    cells: dict[tuple[str, str, int], list[float]] = {}
    for scenario, method, n, _, kl in raw_rows:
        cells.setdefault((scenario, method, n), []).append(kl)
    out = []
    for (scenario, method, n) in sorted(cells):
        losses = np.array(sorted(cells[(scenario, method, n)]))
        stderr = (float(losses.std(ddof=1) / math.sqrt(losses.size))
                  if losses.size > 1 else 0.0)
        out.append((scenario, method, n, float(losses.mean()), stderr))
    return out


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Full sweep; canonical row order is (scenario, method, n, trial)."""
    scenario = config.build_scenario()
    raw: list[tuple[str, str, int, int, float]] = []
    for n in config.sample_sizes:
        results = run_trials(scenario, config.methods, n, config.trials,
                             config.master_seed, config.integration)
        for method in config.methods:
            for trial, kl in enumerate(results.kl[method]):
                raw.append((scenario.name, method, n, trial, float(kl)))
    raw.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    return ResultTable(scenario.name, tuple(raw), tuple(summarize(raw)))
