"""
Experiment orchestration shared by the CLI and the MCP tools.

Each stage (data generation, pretraining, one-shot adaptation, gradient-descent
fine-tuning, comparison) is a plain function returning a small result object.
Artifacts written to disk never contain wall-clock timings, so repeated runs
with the same seeds produce byte-identical files; timings are only reported in
the RunReport printed to stdout.
"""
import json
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from .config.models import (
    AlignmentConfig,
    CircuitConfig,
    ExperimentConfig,
    TrainConfig,
)
from .core.datagen import make_moons, transform_domain, write_csv
from .core.errors import DomainError
from .core.qcore import basis_state, pauli
from .core.trainer import Metrics, TrainCurvePoint, evaluate, fit_gd, init_theta, write_curve_csv
from .core.transfer import (
    QvaReport,
    QvaSolution,
    TransferSystem,
    adapt,
    build_report,
    classify_transitions,
)
from .core.vqc_model import CircuitSpec, Dataset, FeatureScaler, VqcModel, save_model

logger = logging.getLogger("qva.experiment")

_OBSERVABLE_AXES = {"pauli_x": 1, "pauli_y": 2, "pauli_z": 3}
_STATE_INDEX = {"zero": 0, "one": 1}


@contextmanager
def stage(timings: Dict[str, float], name: str) -> Iterator[None]:
    """Record the wall-clock duration of a block in milliseconds."""
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round((time.perf_counter() - start) * 1000.0, 3)
        logger.debug(f"stage {name}: {timings[name]} ms")


def with_seed(cfg: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Route one seed into every seeded section of the config."""
    return cfg.model_copy(
        update={
            "seed": seed,
            "data": cfg.data.model_copy(update={"seed": seed}),
            "pretrain": cfg.pretrain.model_copy(update={"seed": seed}),
            "finetune": cfg.finetune.model_copy(update={"seed": seed}),
        }
    )


def generate_domains(cfg: ExperimentConfig) -> Tuple[Dataset, Dataset]:
    """Draw independent source and target moons and move the target.

    The target is rotated about the source centroid.
    """
    source = make_moons(cfg.data, stream="data")
    raw_target = make_moons(cfg.data, stream="target")
    target = transform_domain(raw_target, cfg.transform, cfg.seed, center=source.X.mean(axis=0))
    return source, target


def build_model(cfg: CircuitConfig, data: Dataset, seed: int) -> VqcModel:
    """Fresh model: scaler fitted on `data`, parameters drawn from the 'init' stream."""
    spec = CircuitSpec(tuple(cfg.encoding_axes), tuple(cfg.variational_axes))
    scaler = FeatureScaler.fit(data.X, cfg.angle_per_std, cfg.angle_offset)
    return VqcModel(
        spec=spec,
        theta=init_theta(spec.L, seed),
        observable=pauli(_OBSERVABLE_AXES[cfg.observable]),
        initial_state=basis_state(_STATE_INDEX[cfg.initial_state]),
        scaler=scaler,
        seed=seed,
    )


@dataclass(frozen=True)
class PretrainResult:
    model: VqcModel
    curve: List[TrainCurvePoint]
    metrics: Metrics


def run_pretrain(data: Dataset, circuit: CircuitConfig, train: TrainConfig) -> PretrainResult:
    model = build_model(circuit, data, train.seed)
    model, curve = fit_gd(model, data, train)
    return PretrainResult(model, curve, evaluate(model, data))


@dataclass(frozen=True)
class QvaResult:
    model: VqcModel
    solution: QvaSolution
    system: TransferSystem
    report: QvaReport


def run_qva(
    model: VqcModel,
    source: Dataset,
    target: Dataset,
    alignment: AlignmentConfig,
    transition_tol: float,
) -> QvaResult:
    """One-shot adaptation, evaluated on the raw (unaligned) target data."""
    before = evaluate(model, target)
    adapted, solution, system = adapt(model, source, target, alignment)
    after = evaluate(adapted, target)
    histogram = classify_transitions(system.pairs, transition_tol)
    report = build_report(system, solution, histogram, before, after)
    logger.info(f"QVA target accuracy {before.accuracy:.4f} -> {after.accuracy:.4f}")
    return QvaResult(adapted, solution, system, report)


@dataclass(frozen=True)
class GdResult:
    model: VqcModel
    curve: List[TrainCurvePoint]
    before: Metrics
    after: Metrics


def run_gd(model: VqcModel, target: Dataset, train: TrainConfig) -> GdResult:
    before = evaluate(model, target)
    tuned, curve = fit_gd(model, target, train)
    after = evaluate(tuned, target)
    logger.info(f"GD target accuracy {before.accuracy:.4f} -> {after.accuracy:.4f}")
    return GdResult(tuned, curve, before, after)


def crossover_epoch(curve: List[TrainCurvePoint], qva_accuracy: float) -> Optional[int]:
    """First epoch whose GD accuracy reaches the one-shot accuracy, or None."""
    for point in curve:
        if point.accuracy >= qva_accuracy:
            return point.epoch
    return None


class CompareMetrics(BaseModel):
    pretrain_acc: float = Field(ge=0.0, le=1.0)
    unadapted_target_acc: float = Field(ge=0.0, le=1.0)
    qva_target_acc: float = Field(ge=0.0, le=1.0)
    gd_final_acc: float = Field(ge=0.0, le=1.0)
    gd_epochs: int
    gd_curve: str = Field(description="File name of the per-epoch comparison CSV")
    crossover_epoch: Optional[int] = None


class RunReport(BaseModel):
    """Summary of a full comparison run; `timings` are per-stage wall-clock milliseconds."""
    config_echo: Dict[str, Any]
    metrics: CompareMetrics
    timings: Dict[str, float] = Field(default_factory=dict)
    seed: int


def write_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_comparison_csv(path: str, curve: List[TrainCurvePoint], qva_accuracy: float) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("epoch,gd_loss,gd_accuracy,qva_accuracy\n")
        for point in curve:
            f.write(f"{point.epoch},{point.loss!r},{point.accuracy!r},{qva_accuracy!r}\n")


def run_compare(cfg: ExperimentConfig, out_dir: str) -> RunReport:
    """Generate, pretrain, evaluate, adapt with QVA and GD, and write every artifact.

    Files written to `out_dir`: source.csv, target.csv, pretrained.json,
    pretrain_curve.csv, qva_model.json, qva_report.json, gd_model.json,
    comparison.csv and summary.json.
    """
    os.makedirs(out_dir, exist_ok=True)
    timings: Dict[str, float] = {}

    with stage(timings, "generate"):
        source, target = generate_domains(cfg)
    with stage(timings, "pretrain"):
        pretrained = run_pretrain(source, cfg.circuit, cfg.pretrain)
    with stage(timings, "evaluate"):
        unadapted = evaluate(pretrained.model, target)
    with stage(timings, "qva"):
        qva = run_qva(pretrained.model, source, target, cfg.alignment, cfg.transition_tol)
    with stage(timings, "gd"):
        gd = run_gd(pretrained.model, target, cfg.finetune)

    comparison_path = os.path.join(out_dir, "comparison.csv")
    metrics = CompareMetrics(
        pretrain_acc=pretrained.metrics.accuracy,
        unadapted_target_acc=unadapted.accuracy,
        qva_target_acc=qva.report.accuracy_after,
        gd_final_acc=gd.after.accuracy,
        gd_epochs=len(gd.curve),
        gd_curve=os.path.basename(comparison_path),
        crossover_epoch=crossover_epoch(gd.curve, qva.report.accuracy_after),
    )

    with stage(timings, "write"):
        write_csv(os.path.join(out_dir, "source.csv"), source)
        write_csv(os.path.join(out_dir, "target.csv"), target)
        save_model(pretrained.model, os.path.join(out_dir, "pretrained.json"))
        write_curve_csv(os.path.join(out_dir, "pretrain_curve.csv"), pretrained.curve)
        save_model(qva.model, os.path.join(out_dir, "qva_model.json"))
        write_json(os.path.join(out_dir, "qva_report.json"), qva.report.model_dump())
        save_model(gd.model, os.path.join(out_dir, "gd_model.json"))
        write_comparison_csv(comparison_path, gd.curve, qva.report.accuracy_after)
        write_json(
            os.path.join(out_dir, "summary.json"),
            {"metrics": metrics.model_dump(), "qva": qva.report.model_dump(), "seed": cfg.seed},
        )

    logger.info(
        f"source {metrics.pretrain_acc:.4f}, unadapted {metrics.unadapted_target_acc:.4f}, "
        f"qva {metrics.qva_target_acc:.4f}, gd {metrics.gd_final_acc:.4f}, "
        f"crossover {metrics.crossover_epoch}"
    )
    return RunReport(
        config_echo=cfg.model_dump(mode="json"),
        metrics=metrics,
        timings=timings,
        seed=cfg.seed,
    )


def holdout_split(data: Dataset, fraction: float) -> Tuple[Dataset, Dataset]:
    """Deterministic split whose holdout is the last `fraction` of each class.

    Returns:
        Tuple of (training part, holdout part), each in original row order

    Raises:
        DomainError: If fraction is outside (0, 1) or there are fewer than 2 rows
    """
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"Holdout fraction must lie in (0, 1), got {fraction}")
    if len(data) < 2:
        raise DomainError("Holdout split needs at least 2 rows")
    position = np.empty(len(data))
    for label in (-1, 1):
        rows = np.flatnonzero(data.y == label)
        position[rows] = np.arange(rows.size) / max(rows.size, 1)
    order = np.argsort(position, kind="stable")
    n_holdout = min(len(data) - 1, max(1, int(round(fraction * len(data)))))
    return data.subset(np.sort(order[:-n_holdout])), data.subset(np.sort(order[-n_holdout:]))
