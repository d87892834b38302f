"""Profile statistics written next to a designed trojan config."""

import numpy as np

from hia_lab.dataio.reports import HistogramSidecar
from hia_lab.trojan.design import TriggerDesign

HISTOGRAM_BINS = 20


def build_sidecar(
    design: TriggerDesign, bins: int = HISTOGRAM_BINS
) -> HistogramSidecar:
    """Summary statistics and histogram of the aggregate behind ``design``."""
    values = np.asarray(design.aggregate.values, dtype=np.float64)
    counts, edges = np.histogram(values, bins=bins)
    trigger = design.config.trigger
    return HistogramSidecar(
        layer=trigger.layer,
        channel=trigger.index.channel,
        n=trigger.index.row,
        m=trigger.index.col,
        P=design.aggregate.size,
        M=design.aggregate.count_within(trigger.lower, trigger.upper),
        tries=design.tries,
        count=int(values.size),
        min=float(values.min()),
        max=float(values.max()),
        mean=float(values.mean()),
        std=float(values.std()),
        median=float(np.median(values)),
        bin_edges=[float(e) for e in edges],
        bin_counts=[int(c) for c in counts],
        window=(trigger.lower, trigger.upper),
    )
