"""Dataset readers and artifact files for hia-lab."""

from hia_lab.dataio.datasets import LabeledImages, read_cifar10_bin, read_mnist_idx
from hia_lab.dataio.reports import (
    BatchSummary,
    CounterDelta,
    EvalAggregates,
    EvalReport,
    HistogramSidecar,
    ImageRecord,
    InferRecord,
    InferReport,
    MotivRecord,
    MotivReport,
    OverheadReport,
    TimingSection,
    read_report,
    write_report,
)
from hia_lab.dataio.trojan_files import (
    TrojanConfigFile,
    dump_trojan_config,
    parse_trojan_config,
    read_trojan_config,
    write_trojan_config,
)
from hia_lab.dataio.weights import (
    decode_weights,
    encode_weights,
    read_weights,
    write_weights,
)

__all__ = [
    "BatchSummary",
    "CounterDelta",
    "EvalAggregates",
    "EvalReport",
    "HistogramSidecar",
    "ImageRecord",
    "InferRecord",
    "InferReport",
    "LabeledImages",
    "MotivRecord",
    "MotivReport",
    "OverheadReport",
    "TimingSection",
    "TrojanConfigFile",
    "decode_weights",
    "dump_trojan_config",
    "encode_weights",
    "parse_trojan_config",
    "read_cifar10_bin",
    "read_mnist_idx",
    "read_report",
    "read_trojan_config",
    "read_weights",
    "write_report",
    "write_trojan_config",
    "write_weights",
]
