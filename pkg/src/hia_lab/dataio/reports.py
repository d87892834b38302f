"""JSON report schemas written by the command-line tools.

Every report is deterministic given its inputs, except the ``timing``
section, which holds wall-clock measurements and is flagged
non-deterministic.

Classes:
    CounterDelta: Armed-minus-benign operation counts.
    TimingSection: Wall-clock measurements.
    ImageRecord, BatchSummary, EvalAggregates, EvalReport: Evaluation.
    InferRecord, InferReport: Per-image predictions.
    MotivRecord, MotivReport: Single-layer shuffle experiment.
    OverheadReport: Overhead proxy.
    HistogramSidecar: Profile statistics written next to a trojan config.

Functions:
    write_report: Dump a report as JSON.
    read_report: Load and validate a report.
"""

import logging
from pathlib import Path
from typing import Literal, TypeVar

from pydantic import BaseModel, ConfigDict, ValidationError

from hia_lab.dataio.trojan_files import TrojanConfigFile
from hia_lab.errors import FormatError

logger = logging.getLogger(__name__)

ReportT = TypeVar("ReportT", bound=BaseModel)

# Share of changed elements in the published single-instance shuffle.
MOTIV_REFERENCE_FRACTION = 0.72


class _Report(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CounterDelta(_Report):
    """Armed minus benign totals for one or more images."""

    macs: int = 0
    comparisons: int = 0
    perm_applications: int = 0

    def __add__(self, other: "CounterDelta") -> "CounterDelta":
        return CounterDelta(
            macs=self.macs + other.macs,
            comparisons=self.comparisons + other.comparisons,
            perm_applications=self.perm_applications + other.perm_applications,
        )


class TimingSection(_Report):
    """Wall-clock figures; these vary from run to run."""

    nondeterministic: Literal[True] = True
    images_timed: int = 0
    benign_ms_median: float | None = None
    armed_ms_median: float | None = None
    median_overhead_pct: float | None = None


class ImageRecord(_Report):
    image_id: int
    label: int | None = None
    fired: bool
    benign_top1: int
    armed_top1: int
    logits_linf_delta: float
    layer_changed_fraction: float
    counter_delta: CounterDelta


class BatchSummary(_Report):
    index: int
    start: int
    size: int
    triggers: int
    flips: int


class EvalAggregates(_Report):
    images: int
    triggers: int
    triggers_per_batch: list[int]
    flips: int
    flip_rate_among_fired: float
    mean_changed_fraction_fired: float
    max_logits_linf_delta: float
    counter_delta: CounterDelta


class EvalReport(_Report):
    """Benign-versus-armed evaluation of a dataset.

    Aggregates are a pure function of ``records`` and ``batch_size``.
    """

    model: str
    layer: str
    trojan: TrojanConfigFile
    batch_size: int
    change_threshold: float
    records: list[ImageRecord]
    batches: list[BatchSummary]
    aggregates: EvalAggregates
    timing: TimingSection


class InferRecord(_Report):
    image_id: int
    label: int | None = None
    fired: bool
    benign_top1: int
    armed_top1: int


class InferReport(_Report):
    model: str
    layer: str | None
    records: list[InferRecord]


class MotivRecord(_Report):
    seed: int
    changed_fraction: float


class MotivReport(_Report):
    """Changed fraction of bank-rotated convolutions, one record per seed."""

    threshold: float
    order_factor: int
    records: list[MotivRecord]
    mean_changed_fraction: float
    reference_fraction: float = MOTIV_REFERENCE_FRACTION


class OverheadReport(_Report):
    """Counter delta and wall-time overhead of an armed network.

    ``unfired_counter_delta`` is the delta shared by every unfired image;
    ``unfired_delta_uniform`` is False if any unfired image deviated.
    """

    model: str
    layer: str
    sample: int
    repeats: int
    unfired_images: int
    fired_images: int
    unfired_counter_delta: CounterDelta | None
    unfired_delta_uniform: bool
    expected_perm_applications: int
    fired_perm_applications: list[int]
    timing: TimingSection


class HistogramSidecar(_Report):
    """Summary of the profiled aggregate behind a designed trigger."""

    layer: str
    channel: int
    n: int
    m: int
    P: int
    M: int
    tries: int
    count: int
    min: float
    max: float
    mean: float
    std: float
    median: float
    bin_edges: list[float]
    bin_counts: list[int]
    window: tuple[float, float]


def write_report(path: Path | str, report: BaseModel) -> None:
    """Write ``report`` as indented JSON."""
    Path(path).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {type(report).__name__} to {path}")


def read_report(path: Path | str, schema: type[ReportT]) -> ReportT:
    """Load a report and validate it against ``schema``.

    Raises:
        FormatError: If the file is not a valid ``schema`` document.
    """
    try:
        return schema.model_validate_json(Path(path).read_bytes())
    except ValidationError as e:
        raise FormatError(f"{path} is not a valid {schema.__name__}: {e}") from e
