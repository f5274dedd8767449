"""Command-line front end.

Subcommands: sample, true-effect, fit, estimate, experiment, plot.
Exit codes: 1 malformed flags, 2 file/format errors, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (AllWeightsUnderflow, DoBayesError, NonFiniteResult,
                     NumericalFailure)
from .estimators import (EstimatorConfig, IntegrationConfig, estimate)
from .experiment import ExperimentConfig, run_experiment
from .inference import ModelSet, PriorSpec, fit_posteriors
from .plotting import plot_emit
from .sem import (Dataset, InterventionQuery, load_model_json,
                  load_params_json, sample_dataset, true_intervention_distribution)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # malformed flags exit 1, not argparse's 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_do(text: str) -> tuple[str, float]:
    node, _, value = text.partition("=")
    if not node or not value:
        raise ValueError(f"--do expects NODE=VALUE, got {text!r}")
    return node, float(value)


def build_parser() -> _Parser:
    parser = _Parser(prog="dobayes",
                     description="Causal intervention effects on "
                                 "linear-Gaussian diagrams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a dataset from a parametrized SEM")
    p.add_argument("--model", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("true-effect", help="exact do-distribution at known "
                                           "coefficients")
    p.add_argument("--model", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--do", required=True)
    p.add_argument("--target", required=True)

    p = sub.add_parser("fit", help="conjugate node posteriors as JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("estimate", help="estimate the intervention effect")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model")
    group.add_argument("--models")
    p.add_argument("--model-prior")
    p.add_argument("--data", required=True)
    p.add_argument("--method", required=True,
                   choices=["ml", "map", "bayes", "map-model", "bma"])
    p.add_argument("--do", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--quadrature-nodes", type=int, default=32)
    p.add_argument("--max-quadrature-dims", type=int, default=3)
    p.add_argument("--mc-samples", type=int, default=10000)
    p.add_argument("--mc-seed", type=int, default=0)

    p = sub.add_parser("experiment", help="run a KL-risk sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--summary", required=True)

    p = sub.add_parser("plot", help="render a summary CSV as SVG")
    p.add_argument("--summary", required=True)
    p.add_argument("--out", required=True)
    return parser


def _cmd_sample(args) -> int:
    template = load_model_json(args.model)
    sem = load_params_json(args.params, template)
    sample_dataset(sem, args.n, args.seed).to_csv(args.out)
    return 0


def _cmd_true_effect(args) -> int:
    template = load_model_json(args.model)
    sem = load_params_json(args.params, template)
    node, value = _parse_do(args.do)
    density = true_intervention_distribution(
        sem, InterventionQuery(node, value, args.target))
    print(json.dumps({"mean": float(density.means[0]),
                      "variance": float(density.variances[0])}))
    return 0


def _cmd_fit(args) -> int:
    template = load_model_json(args.model)
    data = Dataset.from_csv(args.data)
    posteriors = fit_posteriors(template, data, PriorSpec(args.alpha))
    out = [{"node": node,
            "mean": [float(v) for v in post.mean],
            "precision": [float(v) for v in post.precision.ravel()]}
           for node, post in posteriors.items()]
    print(json.dumps(out))
    return 0


def _cmd_estimate(args) -> int:
    data = Dataset.from_csv(args.data)
    node, value = _parse_do(args.do)
    query = InterventionQuery(node, value, args.target)
    prior = PriorSpec(args.alpha)
    if args.models:
        paths = args.models.split(",")
        probs = ([float(v) for v in args.model_prior.split(",")]
                 if args.model_prior else [1.0 / len(paths)] * len(paths))
        if len(probs) != len(paths):
            raise ValueError("--model-prior length must match --models")
        models = ModelSet(tuple(
            (f"M{i}", load_model_json(path), prior, p)
            for i, (path, p) in enumerate(zip(paths, probs))))
    else:
        models = ModelSet.singleton("M0", load_model_json(args.model), prior)
    integration = IntegrationConfig(args.quadrature_nodes,
                                    args.max_quadrature_dims,
                                    args.mc_samples, args.mc_seed)
    density = estimate(models, data, query,
                       EstimatorConfig(args.method, integration))
    print(density.to_json())
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    table = run_experiment(config)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(table.raw_csv())
    with open(args.summary, "w", encoding="utf-8") as fh:
        fh.write(table.summary_csv())
    return 0


def _cmd_plot(args) -> int:
    rows = []
    with open(args.summary, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if header != ["scenario", "method", "n", "mean_kl", "stderr"]:
            raise ValueError(f"{args.summary}: unexpected header {header}")
        for line in fh:
            if not line.strip():
                continue
            scenario, method, n, mean_kl, stderr = line.strip().split(",")
            rows.append((scenario, method, int(n), float(mean_kl),
                         float(stderr)))
    plot_emit(rows, args.out)
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "true-effect": _cmd_true_effect,
    "fit": _cmd_fit,
    "estimate": _cmd_estimate,
    "experiment": _cmd_experiment,
    "plot": _cmd_plot,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (NumericalFailure, NonFiniteResult, AllWeightsUnderflow) as exc:
        print(f"dobayes: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError, KeyError, json.JSONDecodeError,
            DoBayesError) as exc:
        print(f"dobayes: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
