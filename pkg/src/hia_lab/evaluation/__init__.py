"""Evaluation runners behind the command-line tools.

Functions:
    evaluate, summarize, infer: Benign-versus-armed evaluation.
    run_motivational: Single-layer shuffle experiment.
    measure_overhead: Overhead proxy.
    build_sidecar: Histogram sidecar of a designed trigger.
"""

from hia_lab.evaluation.evaluate import evaluate, infer, logits_linf, summarize, top1
from hia_lab.evaluation.experiments import (
    expected_perm_applications,
    measure_overhead,
    run_motivational,
)
from hia_lab.evaluation.histogram import HISTOGRAM_BINS, build_sidecar

__all__ = [
    "HISTOGRAM_BINS",
    "build_sidecar",
    "evaluate",
    "expected_perm_applications",
    "infer",
    "logits_linf",
    "measure_overhead",
    "run_motivational",
    "summarize",
    "top1",
]
