"""Motivational shuffle experiment and the overhead proxy.

Functions:
    run_motivational: changed_fraction of bank-rotated convolutions per seed.
    measure_overhead: Counter delta and wall-time overhead of an armed network.
"""

import logging
import math
import statistics
import time
from collections.abc import Callable, Sequence

from hia_lab.config import eval_settings
from hia_lab.core.tensor import Tensor, changed_fraction
from hia_lab.dataio.reports import (
    CounterDelta,
    MotivRecord,
    MotivReport,
    OverheadReport,
    TimingSection,
)
from hia_lab.engine.network import NetworkSpec, WeightSet, forward, forward_armed
from hia_lab.errors import DomainError
from hia_lab.models.motivational import motivational_pair
from hia_lab.trojan.spec import TrojanConfig

logger = logging.getLogger(__name__)


def run_motivational(
    seeds: Sequence[int], threshold: float | None = None, factor: int = 1
) -> MotivReport:
    """Compare default and rotated bank order of one convolution per seed.

    Args:
        seeds: Seeds of the random input and weights.
        threshold: Relative-change threshold; defaults to change_threshold.
        factor: Rotation order factor of the filter banks.

    Returns:
        MotivReport with one record per seed and their mean.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    threshold = eval_settings.change_threshold if threshold is None else threshold
    records = []
    for seed in seeds:
        baseline, shuffled = motivational_pair(seed, factor)
        fraction = changed_fraction(baseline, shuffled, threshold)
        logger.debug(f"Seed {seed}: changed fraction {fraction:.4f}")
        records.append(MotivRecord(seed=seed, changed_fraction=fraction))
    return MotivReport(
        threshold=threshold,
        order_factor=factor,
        records=records,
        mean_changed_fraction=math.fsum(r.changed_fraction for r in records)
        / len(records),
    )


def expected_perm_applications(net: NetworkSpec, config: TrojanConfig) -> int:
    """Elements of the trigger layer produced after the monitored element."""
    dims = net.output_dims(config.layer)
    start = config.trigger.index.successor(dims)
    if start is None:
        return 0
    size = math.prod(dims)
    return size - start.flat(dims)


def _elapsed(run: Callable[[], object]) -> float:
    started = time.perf_counter()
    run()
    return time.perf_counter() - started


def measure_overhead(
    net: NetworkSpec,
    weights: WeightSet,
    config: TrojanConfig,
    images: Sequence[Tensor],
    repeats: int | None = None,
) -> OverheadReport:
    """Exact counter delta plus wall-time overhead of the armed network.

    Each image is timed benignly and armed in alternation; the best of
    ``repeats`` runs is kept per pass, and the overhead is the median over
    unfired images of (armed - benign) / benign.

    Args:
        net: Benign network.
        weights: Parameter records for ``net``.
        config: Trojan to arm.
        images: Sample images.
        repeats: Timed runs per pass and image.

    Returns:
        OverheadReport; the timing section is non-deterministic.

    Raises:
        DomainError: If ``images`` is empty.
    """
    if not images:
        raise DomainError("overhead needs at least one image")
    repeats = repeats or eval_settings.overhead_repeats
    unfired_deltas: list[CounterDelta] = []
    fired_perms: list[int] = []
    benign_times: list[float] = []
    armed_times: list[float] = []
    overheads: list[float] = []

    for position, image in enumerate(images):
        benign = forward(net, weights, image)
        armed = forward_armed(net, weights, config, image)
        delta = CounterDelta(**armed.counters.delta(benign.counters))
        if armed.fired:
            fired_perms.append(delta.perm_applications)
            continue
        unfired_deltas.append(delta)

        best_benign = math.inf
        best_armed = math.inf
        for _ in range(repeats):
            best_benign = min(
                best_benign, _elapsed(lambda: forward(net, weights, image))
            )
            best_armed = min(
                best_armed, _elapsed(lambda: forward_armed(net, weights, config, image))
            )
        benign_times.append(best_benign)
        armed_times.append(best_armed)
        overheads.append((best_armed - best_benign) / best_benign * 100)
        if (position + 1) % 25 == 0:
            logger.info(f"Timed {position + 1}/{len(images)} images")

    timing = TimingSection()
    if overheads:
        timing = TimingSection(
            images_timed=len(overheads),
            benign_ms_median=statistics.median(benign_times) * 1e3,
            armed_ms_median=statistics.median(armed_times) * 1e3,
            median_overhead_pct=statistics.median(overheads),
        )
    uniform = all(d == unfired_deltas[0] for d in unfired_deltas)
    logger.info(
        f"Overhead on {config.layer}: {len(unfired_deltas)} unfired, "
        f"{len(fired_perms)} fired, median {timing.median_overhead_pct}%"
    )
    return OverheadReport(
        model=net.name,
        layer=config.layer,
        sample=len(images),
        repeats=repeats,
        unfired_images=len(unfired_deltas),
        fired_images=len(fired_perms),
        unfired_counter_delta=(
            unfired_deltas[0] if unfired_deltas and uniform else None
        ),
        unfired_delta_uniform=uniform,
        expected_perm_applications=expected_perm_applications(net, config),
        fired_perm_applications=fired_perms,
        timing=timing,
    )
