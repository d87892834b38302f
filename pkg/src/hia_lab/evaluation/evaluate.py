"""Benign-versus-armed evaluation of a dataset.

Each image runs through the benign network and the armed network; the
per-image outcomes are merged in dataset order and summarized per batch.

Functions:
    evaluate: Full EvalReport over a labeled dataset.
    summarize: Batches and aggregates recomputed from per-image records.
    infer: Benign and armed top-1 per image.
"""

import logging
import math
import statistics
import time
from dataclasses import dataclass

import numpy as np

from hia_lab.config import eval_settings
from hia_lab.core.tensor import Tensor, changed_fraction
from hia_lab.dataio.datasets import LabeledImages
from hia_lab.dataio.reports import (
    BatchSummary,
    CounterDelta,
    EvalAggregates,
    EvalReport,
    ImageRecord,
    InferRecord,
    InferReport,
    TimingSection,
)
from hia_lab.dataio.trojan_files import TrojanConfigFile
from hia_lab.engine.network import (
    NetworkSpec,
    WeightSet,
    forward,
    forward_armed,
    validate_weights,
)
from hia_lab.engine.pool import map_ordered
from hia_lab.trojan.spec import TrojanConfig

logger = logging.getLogger(__name__)


def top1(logits: Tensor) -> int:
    """Index of the largest logit; the first one on ties."""
    return int(np.argmax(logits.array))


def logits_linf(a: Tensor, b: Tensor) -> float:
    """Largest absolute logit difference."""
    difference = b.array.astype(np.float64) - a.array.astype(np.float64)
    return float(np.max(np.abs(difference)))


@dataclass(frozen=True)
class _Outcome:
    record: ImageRecord
    benign_seconds: float
    armed_seconds: float


def _delta(armed: dict[str, int], benign: dict[str, int]) -> CounterDelta:
    return CounterDelta(**{key: armed[key] - benign[key] for key in armed})


def summarize(
    records: list[ImageRecord], batch_size: int
) -> tuple[list[BatchSummary], EvalAggregates]:
    """Contiguous batch summaries and dataset aggregates of ``records``."""
    if batch_size <= 0:
        raise ValueError("batch size must be greater than 0")
    batches = []
    for index, start in enumerate(range(0, len(records), batch_size)):
        chunk = records[start : start + batch_size]
        batches.append(
            BatchSummary(
                index=index,
                start=start,
                size=len(chunk),
                triggers=sum(r.fired for r in chunk),
                flips=sum(r.fired and r.armed_top1 != r.benign_top1 for r in chunk),
            )
        )

    fired = [r for r in records if r.fired]
    flips = sum(r.armed_top1 != r.benign_top1 for r in fired)
    counter_delta = CounterDelta()
    for record in records:
        counter_delta = counter_delta + record.counter_delta
    aggregates = EvalAggregates(
        images=len(records),
        triggers=len(fired),
        triggers_per_batch=[b.triggers for b in batches],
        flips=flips,
        flip_rate_among_fired=flips / len(fired) if fired else 0.0,
        mean_changed_fraction_fired=(
            math.fsum(r.layer_changed_fraction for r in fired) / len(fired)
            if fired
            else 0.0
        ),
        max_logits_linf_delta=max((r.logits_linf_delta for r in records), default=0.0),
        counter_delta=counter_delta,
    )
    return batches, aggregates


def _timing(outcomes: list[_Outcome]) -> TimingSection:
    unfired = [o for o in outcomes if not o.record.fired and o.benign_seconds > 0]
    if not unfired:
        return TimingSection()
    return TimingSection(
        images_timed=len(unfired),
        benign_ms_median=statistics.median(o.benign_seconds for o in unfired) * 1e3,
        armed_ms_median=statistics.median(o.armed_seconds for o in unfired) * 1e3,
        median_overhead_pct=statistics.median(
            (o.armed_seconds - o.benign_seconds) / o.benign_seconds * 100
            for o in unfired
        ),
    )


def evaluate(
    net: NetworkSpec,
    weights: WeightSet,
    config: TrojanConfig,
    dataset: LabeledImages,
    batch_size: int | None = None,
    change_threshold: float | None = None,
    workers: int | None = None,
) -> EvalReport:
    """Run every image benignly and armed, and report the differences.

    Args:
        net: Benign network.
        weights: Parameter records for ``net``.
        config: Trojan to arm.
        dataset: Images in evaluation order.
        batch_size: Images per batch summary.
        change_threshold: Relative-change threshold of the layer metric.
        workers: Worker threads; the report does not depend on it.

    Returns:
        EvalReport with per-image records, batches, aggregates and timing.

    Raises:
        ConfigError: If ``config`` does not fit ``net``.
    """
    batch_size = batch_size or eval_settings.batch_size
    threshold = (
        eval_settings.change_threshold if change_threshold is None else change_threshold
    )
    workers = workers or eval_settings.workers
    validate_weights(net, weights)
    layer = config.layer

    def run(item: tuple[int, Tensor, int]) -> _Outcome:
        image_id, image, label = item
        started = time.perf_counter()
        benign = forward(net, weights, image, taps=(layer,))
        middle = time.perf_counter()
        armed = forward_armed(net, weights, config, image, taps=(layer,))
        finished = time.perf_counter()
        record = ImageRecord(
            image_id=image_id,
            label=label,
            fired=armed.fired,
            benign_top1=top1(benign.logits),
            armed_top1=top1(armed.logits),
            logits_linf_delta=logits_linf(benign.logits, armed.logits),
            layer_changed_fraction=changed_fraction(
                benign.taps[layer], armed.taps[layer], threshold
            ),
            counter_delta=_delta(armed.counters.totals(), benign.counters.totals()),
        )
        return _Outcome(record, middle - started, finished - middle)

    items = list(zip(range(len(dataset)), dataset.images, dataset.labels))
    outcomes = map_ordered(run, items, workers)
    records = [o.record for o in outcomes]
    batches, aggregates = summarize(records, batch_size)
    logger.info(
        f"Evaluated {aggregates.images} images on {layer}: "
        f"{aggregates.triggers} fired, {aggregates.flips} flipped"
    )
    return EvalReport(
        model=net.name,
        layer=layer,
        trojan=TrojanConfigFile.from_config(config),
        batch_size=batch_size,
        change_threshold=threshold,
        records=records,
        batches=batches,
        aggregates=aggregates,
        timing=_timing(outcomes),
    )


def infer(
    net: NetworkSpec,
    weights: WeightSet,
    dataset: LabeledImages,
    config: TrojanConfig | None = None,
    workers: int | None = None,
) -> InferReport:
    """Benign top-1 and, when a trojan is given, armed top-1 per image."""
    workers = workers or eval_settings.workers
    validate_weights(net, weights)

    def run(item: tuple[int, Tensor, int]) -> InferRecord:
        image_id, image, label = item
        benign = top1(forward(net, weights, image).logits)
        if config is None:
            return InferRecord(
                image_id=image_id,
                label=label,
                fired=False,
                benign_top1=benign,
                armed_top1=benign,
            )
        armed = forward_armed(net, weights, config, image)
        return InferRecord(
            image_id=image_id,
            label=label,
            fired=armed.fired,
            benign_top1=benign,
            armed_top1=top1(armed.logits),
        )

    items = list(zip(range(len(dataset)), dataset.images, dataset.labels))
    records = map_ordered(run, items, workers)
    return InferReport(
        model=net.name,
        layer=None if config is None else config.layer,
        records=records,
    )
