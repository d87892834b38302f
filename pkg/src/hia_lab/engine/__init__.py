"""Inference engine for hia-lab.

Forward-pass execution of conv / pool / fully-connected / ReLU layers with
a defined element-production order, feature-map taps, operation counters and
the two-phase triggered execution that hosts a payload.

Classes:
    LayerSpec, LayerKind, PoolKind, Trust: Layer descriptions.
    ElementIndex: Position inside a layer output.
    NetworkSpec: Ordered layers with input dims and class count.
    OpCounters: Per-layer operation counts.
    InferenceResult, ArmedResult: Forward-pass outcomes.

Functions:
    forward, forward_armed, layer_output: Network execution.
    conv_layer, maxpool_layer, avgpool_layer, fc_layer, relu_layer: Kernels.
    validate_weights, check_trojan: Weight set and trojan checks.
    map_ordered: Bounded, order-preserving worker pool.
"""

from hia_lab.engine.counters import LayerOps, OpCounters, TapSet
from hia_lab.engine.layers import (
    ElementIndex,
    LayerKind,
    LayerSpec,
    PoolKind,
    Trust,
    avgpool_layer,
    conv_layer,
    fc_layer,
    maxpool_layer,
    relu_layer,
)
from hia_lab.engine.network import (
    TRIGGER_COMPARISONS,
    ArmedResult,
    InferenceResult,
    NetworkSpec,
    WeightSet,
    check_trojan,
    forward,
    forward_armed,
    layer_output,
    validate_weights,
)
from hia_lab.engine.pool import map_ordered

__all__ = [
    # Layers
    "ElementIndex",
    "LayerKind",
    "LayerSpec",
    "PoolKind",
    "Trust",
    "avgpool_layer",
    "conv_layer",
    "fc_layer",
    "maxpool_layer",
    "relu_layer",
    # Network
    "TRIGGER_COMPARISONS",
    "ArmedResult",
    "InferenceResult",
    "NetworkSpec",
    "WeightSet",
    "check_trojan",
    "forward",
    "forward_armed",
    "layer_output",
    "validate_weights",
    # Counters
    "LayerOps",
    "OpCounters",
    "TapSet",
    # Concurrency
    "map_ordered",
]
