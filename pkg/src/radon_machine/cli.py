"""Command-line front end.

Subcommands: ``benchmark``, ``mc-bound``, ``bounds``, ``train``, ``predict``.
Flags override config-file fields one-to-one.  Exit codes: 0 on success,
2 on configuration errors, 3 on data errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .aggregation import RadonConfig, averaging_at_end, radon_machine
from .bounds import ComplexityParams
from .datasets import load_dataset, synth_classification, synth_regression
from .errors import ConfigError, DataError
from .experiments import (
    BOUNDS_CSV_COLUMNS,
    MC_CSV_COLUMNS,
    ExperimentConfig,
    bounds_table,
    mc_confidence,
    resolve_height,
    run_benchmark,
    write_csv,
    write_json,
)
from .learners import Hypothesis, LearnerSpec, predict_score, train


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radon-machine",
        description="Parallel learning via Radon-point aggregation trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("benchmark", help="cross-validated algorithm comparison")
    _add_common(bench)
    bench.add_argument("--algorithms", help="comma list from base,radon,avg")
    bench.add_argument("--cv-folds", type=int, default=None)
    bench.add_argument("--h", default=None, help="tree height or 'max'")
    bench.set_defaults(handler=_cmd_benchmark)

    mc = sub.add_parser("mc-bound", help="Monte-Carlo validation of the failure bound")
    _add_common(mc)
    mc.add_argument("--r", type=int, default=None)
    mc.add_argument("--h", type=int, default=None)
    mc.add_argument("--delta-base", type=float, default=None)
    mc.add_argument("--trials", type=int, default=None)
    mc.add_argument("--eps", type=float, default=None)
    mc.set_defaults(handler=_cmd_mc_bound)

    bounds = sub.add_parser("bounds", help="closed-form bound table over heights")
    _add_common(bounds)
    bounds.add_argument("--r", type=int, default=None)
    bounds.add_argument("--delta-base", type=float, default=None)
    bounds.add_argument("--alpha-eps", type=float, default=None)
    bounds.add_argument("--beta-eps", type=float, default=None)
    bounds.add_argument("--k", type=int, default=None)
    bounds.add_argument("--kappa", type=int, default=None)
    bounds.add_argument("--h-min", type=int, default=None)
    bounds.add_argument("--h-max", type=int, default=None)
    bounds.set_defaults(handler=_cmd_bounds)

    tr = sub.add_parser("train", help="train a model and save it as JSON")
    _add_common(tr)
    _add_dataset_args(tr)
    tr.add_argument("--algorithm", choices=("base", "radon", "avg"), default="radon")
    tr.add_argument("--h", default="max", help="tree height or 'max'")
    tr.add_argument("--n-min", type=int, default=100)
    tr.add_argument("--loss", choices=("logistic", "hinge", "squared"), default="logistic")
    tr.add_argument("--reg-lambda", type=float, default=1e-3)
    tr.add_argument("--epochs", type=int, default=10)
    tr.add_argument("--learning-rate0", type=float, default=0.1)
    tr.add_argument("--no-bias", action="store_true")
    tr.set_defaults(handler=_cmd_train)

    pr = sub.add_parser("predict", help="score a dataset with a saved model")
    _add_common(pr)
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--format", choices=("csv", "svmlight"), default="csv")
    pr.set_defaults(handler=_cmd_predict)
    return parser


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="JSON config file")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--out", default=None, help="output path (JSON; CSV twin where applicable)")


def _add_dataset_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--data", default=None, help="dataset file path")
    sub.add_argument("--format", choices=("csv", "svmlight"), default="csv")
    sub.add_argument(
        "--synth", choices=("classification", "regression"), default=None, help="generate data"
    )
    sub.add_argument("--n", type=int, default=20000)
    sub.add_argument("--d", type=int, default=8)
    sub.add_argument("--noise", type=float, default=0.1, help="label flip probability")
    sub.add_argument("--noise-sd", type=float, default=0.1, help="regression noise level")


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc


def _cmd_benchmark(args) -> int:
    raw = _load_config_file(args.config)
    config = ExperimentConfig.from_dict(raw) if raw else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.out is not None:
        overrides["out"] = args.out
    if args.cv_folds is not None:
        overrides["cv_folds"] = args.cv_folds
    if args.algorithms is not None:
        overrides["algorithms"] = tuple(args.algorithms.split(","))
    if args.h is not None:
        overrides["h"] = args.h if args.h == "max" else int(args.h)
    if overrides:
        config = replace(config, **overrides)

    report = run_benchmark(config)
    print(f"dataset: n={report['dataset']['n']} d={report['dataset']['d']} "
          f"task={report['dataset']['task']}  metric={report['metric']}")
    for name, summary in report["algorithms"].items():
        print(
            f"{name:>6}: {report['metric']}={summary['metric_mean']:.4f} "
            f"(+-{summary['metric_std']:.4f})  total={summary['total_s_mean']:.3f}s"
        )
    if report["speedup_base_over_radon"] is not None:
        print(f"speedup base/radon: {report['speedup_base_over_radon']:.2f}x")
    if config.out:
        print(f"report written to {config.out}")
    return 0


def _cmd_mc_bound(args) -> int:
    section = _load_config_file(args.config).get("mc", {})
    r = args.r if args.r is not None else int(section.get("r", 4))
    h = args.h if args.h is not None else int(section.get("h", 2))
    delta_base = (
        args.delta_base if args.delta_base is not None else float(section.get("delta_base", 0.125))
    )
    trials = args.trials if args.trials is not None else int(section.get("trials", 10000))
    eps = args.eps if args.eps is not None else float(section.get("eps", 1.0))
    seed = args.seed if args.seed is not None else int(section.get("seed", 0))
    workers = args.workers if args.workers is not None else int(section.get("workers", 1))

    result = mc_confidence(r, h, delta_base, trials, seed, workers=workers, eps=eps)
    if not result["bound_precondition_met"]:
        print(
            f"warning: delta_base={delta_base} exceeds 1/(2r)={1.0 / (2 * r)}; "
            "the bound may be vacuous",
            file=sys.stderr,
        )
    print(f"r={r} h={h} delta_base={delta_base} trials={trials}")
    print("level  empirical   bound")
    for row in result["rows"]:
        print(
            f"{row['level']:>5}  {row['empirical_bad_fraction']:<10.6f}  "
            f"{row['theoretical_bound']:.6g}"
        )
    if args.out:
        write_json(result, args.out)
        write_csv(result["rows"], MC_CSV_COLUMNS, Path(args.out).with_suffix(".csv"))
        print(f"report written to {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    section = _load_config_file(args.config).get("bounds", {})

    def pick(flag, key, default, cast):
        return cast(flag) if flag is not None else cast(section.get(key, default))

    params = ComplexityParams(
        alpha_eps=pick(args.alpha_eps, "alpha_eps", 0.0, float),
        beta_eps=pick(args.beta_eps, "beta_eps", 1.0, float),
        k=pick(args.k, "k", 1, int),
        kappa=pick(args.kappa, "kappa", 1, int),
    )
    r = pick(args.r, "r", 4, int)
    delta_base = pick(args.delta_base, "delta_base", 1.0 / (2 * r), float)
    h_min = pick(args.h_min, "h_min", 0, int)
    h_max = pick(args.h_max, "h_max", 4, int)
    workers = args.workers if args.workers is not None else int(section.get("c_workers", 1))
    if h_min > h_max:
        raise ConfigError(f"h-min {h_min} exceeds h-max {h_max}")

    rows = bounds_table(params, r, delta_base, range(h_min, h_max + 1), workers)
    header = "h      delta         n_base        n_radon       m_sequential  speedup_est"
    print(header)
    for row in rows:
        print(
            f"{row['h']:<6} {row['delta']:<13.6g} {row['n_base']:<13.6g} "
            f"{row['n_radon']:<13.6g} {row['m_sequential']:<13.6g} {row['speedup_estimate']:.6g}"
        )
    if args.out:
        write_json({"params": params.__dict__ | {"r": r, "delta_base": delta_base}, "rows": rows},
                   args.out)
        write_csv(rows, BOUNDS_CSV_COLUMNS, Path(args.out).with_suffix(".csv"))
        print(f"table written to {args.out}")
    return 0


def _resolve_cli_dataset(args, seed: int):
    if args.data is not None:
        path = Path(args.data)
        if not path.exists():
            raise ConfigError(f"dataset path not resolvable: {args.data}")
        return load_dataset(path, args.format)
    if args.synth == "regression":
        data, _ = synth_regression(args.n, args.d, args.noise_sd, seed)
        return data
    data, _ = synth_classification(args.n, args.d, args.noise, seed)
    return data


def _cmd_train(args) -> int:
    seed = args.seed if args.seed is not None else 0
    workers = args.workers if args.workers is not None else 1
    data = _resolve_cli_dataset(args, seed)
    spec = LearnerSpec(
        loss=args.loss,
        reg_lambda=args.reg_lambda,
        epochs=args.epochs,
        learning_rate0=args.learning_rate0,
        fit_bias=not args.no_bias,
    )
    dim = spec.hypothesis_dim(data.dim)
    r = dim + 2
    h = resolve_height(args.h if args.h == "max" else int(args.h), data.n_rows, r, args.n_min)
    if args.algorithm == "base":
        hyp = train(spec, data, seed)
    elif args.algorithm == "radon":
        cfg = RadonConfig(r=r, h=h, seed=seed, n_min=args.n_min, workers=workers)
        hyp, _ = radon_machine(spec, data, cfg)
    else:
        hyp = averaging_at_end(spec, data, r**h, seed, workers=workers)

    model = {
        "weights": [float(w) for w in hyp.weights],
        "fit_bias": hyp.fit_bias,
        "loss": spec.loss,
        "task": data.task,
        "algorithm": args.algorithm,
        "h": h,
        "r": r,
        "seed": seed,
        "trained_rows": data.n_rows,
    }
    out = args.out or "model.json"
    write_json(model, out)
    print(f"trained {args.algorithm} (h={h}, r={r}) on {data.n_rows} rows -> {out}")
    return 0


def _cmd_predict(args) -> int:
    model_path = Path(args.model)
    if not model_path.exists():
        raise ConfigError(f"model file not found: {args.model}")
    try:
        model = json.loads(model_path.read_text())
        hyp = Hypothesis(
            weights=np.asarray(model["weights"], dtype=np.float64),
            fit_bias=bool(model["fit_bias"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"model file {args.model} is malformed: {exc}") from exc

    data_path = Path(args.data)
    if not data_path.exists():
        raise ConfigError(f"dataset path not resolvable: {args.data}")
    data = load_dataset(data_path, args.format)
    scores = predict_score(hyp, data.x)
    binary = model.get("task", "binary") == "binary"
    rows = [
        {
            "index": i,
            "score": float(s),
            "label": (1 if s >= 0 else -1) if binary else None,
        }
        for i, s in enumerate(scores)
    ]
    if args.out:
        write_csv(rows, ["index", "score", "label"], args.out)
        print(f"{len(rows)} predictions written to {args.out}")
    else:
        for row in rows[:20]:
            print(f"{row['index']},{row['score']!r},{'' if row['label'] is None else row['label']}")
        if len(rows) > 20:
            print(f"... {len(rows) - 20} more rows (use --out to write all)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
