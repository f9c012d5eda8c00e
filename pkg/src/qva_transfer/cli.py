"""
Command-line experiment driver.

Subcommands:
- gen-data: generate a two-moons source set or derive a target from --base
- pretrain: train a circuit from random initialization
- eval: loss and accuracy of a saved model on a dataset
- adapt qva|gd: one-shot transfer or gradient-descent fine-tuning
- compare: the full pretrain/evaluate/adapt benchmark

Machine-readable JSON goes to stdout and logs go to stderr.

Exit codes: 0 success, 2 usage/data/IO error, 3 numeric failure, 64 flag-parse error.
"""
import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from .config.loader import load_config
from .config.models import (
    CircuitConfig,
    DomainTransform,
    ExperimentConfig,
    MoonsConfig,
    TrainConfig,
)
from .core.datagen import make_moons, read_csv, transform_domain, write_csv
from .core.errors import QvaError, TrainingDivergedError
from .core.logging import setup_logging
from .core.trainer import evaluate, write_curve_csv
from .core.vqc_model import load_model, save_model
from .experiment import (
    holdout_split,
    run_compare,
    run_gd,
    run_pretrain,
    run_qva,
    with_seed,
    write_json,
)

logger = logging.getLogger("qva.cli")

EXIT_OK = 0
EXIT_DATA = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64


class QvaArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the flag-parse code instead of argparse's 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def _batch(value: str) -> Any:
    return "full" if value == "full" else _positive_int(value)


def _emit(payload: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    sys.stdout.flush()


def _metrics_dict(metrics: Any) -> Dict[str, Any]:
    return {"loss": metrics.loss, "accuracy": metrics.accuracy, "n": metrics.n}


def _train_config(base: TrainConfig, args: argparse.Namespace) -> TrainConfig:
    overrides = {
        "epochs": getattr(args, "epochs", None),
        "learning_rate": getattr(args, "lr", None),
        "batch_size": getattr(args, "batch", None),
        "seed": getattr(args, "seed", None),
    }
    updates = {key: value for key, value in overrides.items() if value is not None}
    return TrainConfig.model_validate({**base.model_dump(), **updates})


def _resolve(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config)
    seed = getattr(args, "seed", None)
    return with_seed(cfg, seed) if seed is not None else cfg


def cmd_gen_data(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    transform = DomainTransform(
        rotation_deg=args.rotate_deg if args.rotate_deg is not None else 0.0,
        translation=tuple(args.translate) if args.translate else (0.0, 0.0),
        extra_noise=args.extra_noise if args.extra_noise is not None else 0.0,
    )
    if args.base:
        data = transform_domain(read_csv(args.base), transform, cfg.seed)
        resolved: Dict[str, Any] = {"base": args.base, "transform": transform.model_dump(mode="json")}
    else:
        moons = MoonsConfig.model_validate(
            {
                **cfg.data.model_dump(),
                **{k: v for k, v in (("n", args.n), ("noise_sigma", args.noise)) if v is not None},
            }
        )
        data = transform_domain(make_moons(moons), transform, cfg.seed)
        resolved = {"data": moons.model_dump(mode="json"), "transform": transform.model_dump(mode="json")}
    write_csv(args.out, data)
    logger.info(f"Wrote {len(data)} samples to {args.out}")
    _emit({"out": args.out, "n": len(data), "seed": cfg.seed, **resolved})
    return EXIT_OK


def cmd_pretrain(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if args.circuit:
        circuit = CircuitConfig.model_validate(_read_json(args.circuit))
        cfg = cfg.model_copy(update={"circuit": circuit})
    train = _train_config(cfg.pretrain, args)
    data = read_csv(args.data)
    curve_path = args.curve or f"{os.path.splitext(args.out)[0]}.curve.csv"
    try:
        result = run_pretrain(data, cfg.circuit, train)
    except TrainingDivergedError as e:
        save_model(e.model, args.out)
        logger.error(f"Training diverged at epoch {e.epoch}; saved last finite model to {args.out}")
        raise
    save_model(result.model, args.out)
    write_curve_csv(curve_path, result.curve)
    _emit(
        {
            "model": args.out,
            "curve": curve_path,
            "metrics": _metrics_dict(result.metrics),
            "train": train.model_dump(mode="json"),
            "circuit": cfg.circuit.model_dump(mode="json"),
        }
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    model = load_model(args.model)
    data = read_csv(args.data)
    payload: Dict[str, Any] = {"model": args.model, "data": args.data}
    if args.holdout is not None:
        train_part, holdout = holdout_split(data, args.holdout)
        payload["train"] = _metrics_dict(evaluate(model, train_part))
        payload["holdout"] = _metrics_dict(evaluate(model, holdout))
    else:
        payload["metrics"] = _metrics_dict(evaluate(model, data))
    _emit(payload)
    return EXIT_OK


def cmd_adapt(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    model = load_model(args.model)
    target = read_csv(args.target)
    if args.method == "qva":
        source = read_csv(args.source)
        result = run_qva(model, source, target, cfg.alignment, cfg.transition_tol)
        save_model(result.model, args.out)
        report = result.report.model_dump()
        if args.report:
            write_json(args.report, report)
        _emit(
            {
                "method": "qva",
                "model": args.out,
                "accuracy_before": result.report.accuracy_before,
                "accuracy_after": result.report.accuracy_after,
                "report": report,
            }
        )
        return EXIT_OK

    train = _train_config(cfg.finetune, args)
    curve_path = args.curve or f"{os.path.splitext(args.out)[0]}.curve.csv"
    try:
        result_gd = run_gd(model, target, train)
    except TrainingDivergedError as e:
        save_model(e.model, args.out)
        raise
    save_model(result_gd.model, args.out)
    write_curve_csv(curve_path, result_gd.curve)
    payload = {
        "method": "gd",
        "model": args.out,
        "curve": curve_path,
        "accuracy_before": result_gd.before.accuracy,
        "accuracy_after": result_gd.after.accuracy,
        "epochs": len(result_gd.curve),
    }
    if args.report:
        write_json(args.report, {k: v for k, v in payload.items() if k != "model"})
    _emit(payload)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if args.rotate_deg is not None:
        cfg = cfg.model_copy(
            update={"transform": cfg.transform.model_copy(update={"rotation_deg": args.rotate_deg})}
        )
    if args.epochs is not None:
        cfg = cfg.model_copy(update={"finetune": _train_config(cfg.finetune, args)})
    report = run_compare(cfg, args.out_dir)
    _emit(report.model_dump(mode="json"))
    return EXIT_OK


def _read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def build_parser() -> argparse.ArgumentParser:
    parser = QvaArgumentParser(prog="qva", description="Quantum variational transfer experiments")
    parser.add_argument("--config", help="Experiment config JSON (default: $QVA_CONFIG)")
    parser.add_argument("--log-level", help="Override the configured log level")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=QvaArgumentParser)

    gen = commands.add_parser("gen-data", help="Generate or transform a two-moons dataset")
    gen.add_argument("--out", required=True)
    gen.add_argument("--n", type=_positive_int)
    gen.add_argument("--noise", type=float)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--rotate-deg", type=float)
    gen.add_argument("--translate", type=float, nargs=2, metavar=("DX", "DY"))
    gen.add_argument("--extra-noise", type=float)
    gen.add_argument("--base", help="Derive the output from this dataset instead of generating")
    gen.set_defaults(handler=cmd_gen_data)

    pre = commands.add_parser("pretrain", help="Train a circuit on a dataset")
    pre.add_argument("--data", required=True)
    pre.add_argument("--out", required=True)
    pre.add_argument("--curve", help="Training curve CSV (default: <out>.curve.csv)")
    pre.add_argument("--epochs", type=_positive_int)
    pre.add_argument("--lr", type=float)
    pre.add_argument("--batch", type=_batch)
    pre.add_argument("--seed", type=int)
    pre.add_argument("--circuit", help="Circuit config JSON")
    pre.set_defaults(handler=cmd_pretrain)

    ev = commands.add_parser("eval", help="Evaluate a saved model")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data", required=True)
    ev.add_argument("--holdout", type=float, help="Also report metrics on this tail fraction")
    ev.set_defaults(handler=cmd_eval)

    adapt = commands.add_parser("adapt", help="Adapt a model to a target domain")
    adapt.add_argument("method", choices=["qva", "gd"])
    adapt.add_argument("--model", required=True)
    adapt.add_argument("--source", help="Source dataset (qva only)")
    adapt.add_argument("--target", required=True)
    adapt.add_argument("--out", required=True)
    adapt.add_argument("--report", help="Report JSON path")
    adapt.add_argument("--curve", help="Fine-tuning curve CSV, gd only (default: <out>.curve.csv)")
    adapt.add_argument("--epochs", type=_positive_int)
    adapt.add_argument("--lr", type=float)
    adapt.add_argument("--batch", type=_batch)
    adapt.add_argument("--seed", type=int)
    adapt.set_defaults(handler=cmd_adapt)

    cmp_ = commands.add_parser("compare", help="Run the full QVA versus GD benchmark")
    cmp_.add_argument("--out-dir", required=True)
    cmp_.add_argument("--seed", type=int)
    cmp_.add_argument("--rotate-deg", type=float)
    cmp_.add_argument("--epochs", type=_positive_int)
    cmp_.set_defaults(handler=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    if args.command == "adapt" and args.method == "qva" and not args.source:
        parser.error("adapt qva requires --source")

    try:
        cfg = _resolve(args)
    except ValueError as e:
        sys.stderr.write(f"qva: {e}\n")
        return EXIT_DATA
    logging_cfg = cfg.logging
    if args.log_level:
        logging_cfg = logging_cfg.model_copy(update={"level": args.log_level})
    setup_logging(logging_cfg)

    try:
        return int(args.handler(args, cfg))
    except TrainingDivergedError as e:
        logger.error(str(e))
        return EXIT_NUMERIC
    except (QvaError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
