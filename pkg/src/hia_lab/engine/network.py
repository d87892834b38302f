"""Network description and forward execution.

A NetworkSpec plus its weights is immutable during inference, so one network
can serve concurrent per-image jobs; each job owns its taps and counters.

The armed forward pass produces the monitored layer in two phases. Elements
up to and including the monitored one are produced benignly; the monitored
value is tested against the trigger range (two comparisons); on a hit the
remaining elements are produced under the payload's channel rotation. The
rotation is applied through the read order only, stored weights are never
rewritten, and nothing carries over to the next image.

Classes:
    NetworkSpec: Ordered layers, input dims and class count.
    InferenceResult: Logits, taps and counters of a benign pass.
    ArmedResult: InferenceResult plus the fired flag.

Functions:
    validate_weights: Check a weight set against a network.
    check_trojan: Check a trojan configuration against a network.
    forward: Benign forward pass.
    forward_armed: Forward pass with a trojan configuration armed.
    layer_output: Benign output of one layer (stops early).
"""

import logging
from collections.abc import Collection, Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from hia_lab.core.tensor import ChannelPermutation, Tensor
from hia_lab.engine.counters import OpCounters, TapSet
from hia_lab.engine.layers import (
    ElementIndex,
    LayerKind,
    LayerSpec,
    PoolKind,
    avgpool_layer,
    conv_layer,
    fc_layer,
    maxpool_layer,
    relu_layer,
)
from hia_lab.errors import ConfigError, ModelConfigError, UnsupportedPayloadError

if TYPE_CHECKING:
    from hia_lab.trojan.spec import TrojanConfig

logger = logging.getLogger(__name__)

# Weight and bias tensors keyed "<layer>.weight" / "<layer>.bias".
WeightSet = Mapping[str, Tensor]

TRIGGER_COMPARISONS = 2


@dataclass(frozen=True)
class NetworkSpec:
    """Architecture description with trust labels.

    The dim chain is checked on construction.

    Attributes:
        name: Model identifier (e.g. "lenet").
        layers: Layers in execution order.
        input_dims: Input feature map dims [C, H, W].
        class_count: Length of the logits vector.
    """

    name: str
    layers: tuple[LayerSpec, ...]
    input_dims: tuple[int, int, int]
    class_count: int
    _dims: dict[str, tuple[int, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        names = [layer.name for layer in self.layers]
        if len(set(names)) != len(names):
            raise ModelConfigError(f"{self.name}: duplicate layer names in {names}")
        self._dims.update(self._chain_dims())

    def _chain_dims(self) -> dict[str, tuple[int, ...]]:
        dims: tuple[int, ...] = tuple(self.input_dims)
        chained: dict[str, tuple[int, ...]] = {}
        for layer in self.layers:
            dims = _output_dims(layer, dims)
            chained[layer.name] = dims
        if dims != (self.class_count,):
            raise ModelConfigError(
                f"{self.name}: final output {list(dims)} is not {self.class_count} logits"
            )
        return chained

    def layer(self, name: str) -> LayerSpec:
        """Look up a layer by name.

        Raises:
            ConfigError: If no layer has that name.
        """
        for layer in self.layers:
            if layer.name == name:
                return layer
        raise ConfigError(f"{self.name} has no layer named {name!r}")

    def output_dims(self, name: str) -> tuple[int, ...]:
        """Output dims of layer ``name``."""
        self.layer(name)
        return self._dims[name]

    def channel_count(self, name: str) -> int:
        """Number of output channels of layer ``name``."""
        return self.output_dims(name)[0]

    @property
    def untrusted_layers(self) -> list[str]:
        """Names of layers implemented by the untrusted party."""
        return [layer.name for layer in self.layers if layer.is_untrusted]

    def parameter_dims(self) -> dict[str, tuple[int, ...]]:
        """Expected dims of every weight record, in layer order."""
        expected: dict[str, tuple[int, ...]] = {}
        for layer in self.layers:
            for suffix, dims in layer.parameter_dims().items():
                expected[f"{layer.name}.{suffix}"] = dims
        return expected


def _output_dims(layer: LayerSpec, dims: tuple[int, ...]) -> tuple[int, ...]:
    if layer.kind is LayerKind.conv:
        if len(dims) != 3 or dims[0] != layer.in_channels:
            raise ModelConfigError(
                f"{layer.name}: expects {layer.in_channels} input channels, got {list(dims)}"
            )
        out_h, out_w = dims[1] - layer.kernel + 1, dims[2] - layer.kernel + 1
        if out_h <= 0 or out_w <= 0:
            raise ModelConfigError(f"{layer.name}: kernel larger than {list(dims)}")
        return (layer.out_channels, out_h, out_w)
    if layer.kind is LayerKind.maxpool:
        if len(dims) != 3 or dims[1] % layer.window or dims[2] % layer.window:
            raise ModelConfigError(
                f"{layer.name}: window {layer.window} does not divide {list(dims)}"
            )
        return (dims[0], dims[1] // layer.window, dims[2] // layer.window)
    if layer.kind is LayerKind.fully_connected:
        if int(np.prod(dims)) != layer.in_features:
            raise ModelConfigError(
                f"{layer.name}: expects {layer.in_features} inputs, got {list(dims)}"
            )
        return (layer.out_features,)
    return dims


def validate_weights(net: NetworkSpec, weights: WeightSet) -> None:
    """Check that every parameter record exists with the expected dims.

    Raises:
        ModelConfigError: On a missing record or mismatching dims.
    """
    for name, dims in net.parameter_dims().items():
        tensor = weights.get(name)
        if tensor is None:
            raise ModelConfigError(f"{net.name}: missing weight record {name!r}")
        if tensor.dims != dims:
            raise ModelConfigError(
                f"{net.name}: {name} has dims {list(tensor.dims)}, expected {list(dims)}"
            )


@dataclass
class InferenceResult:
    """Outcome of a benign forward pass."""

    logits: Tensor
    taps: TapSet
    counters: OpCounters


@dataclass
class ArmedResult(InferenceResult):
    """Outcome of an armed forward pass."""

    fired: bool = False


def _run_layer(
    layer: LayerSpec,
    current: Tensor,
    weights: WeightSet,
    counters: OpCounters,
    order: ChannelPermutation | None = None,
    produce_from: ElementIndex | None = None,
    out: Tensor | None = None,
) -> Tensor:
    """Execute one layer; counters are only recorded for full productions."""
    if layer.kind is LayerKind.conv:
        result = conv_layer(
            current,
            weights[f"{layer.name}.weight"],
            weights[f"{layer.name}.bias"],
            order,
            produce_from,
            out,
        )
        if produce_from is None:
            per_element = layer.in_channels * layer.kernel * layer.kernel
            counters.record(layer.name, macs=result.size * per_element)
        return result
    if layer.kind is LayerKind.maxpool:
        pool = maxpool_layer if layer.pool_kind is PoolKind.max else avgpool_layer
        result = pool(current, order, produce_from, out)
        if produce_from is None:
            per_window = 3 if layer.pool_kind is PoolKind.max else 0
            counters.record(layer.name, comparisons=per_window * result.size)
        return result
    if layer.kind is LayerKind.fully_connected:
        flat = current if len(current.dims) == 1 else Tensor(current.array.reshape(-1))
        result = fc_layer(
            flat, weights[f"{layer.name}.weight"], weights[f"{layer.name}.bias"]
        )
        counters.record(layer.name, macs=layer.in_features * layer.out_features)
        return result
    counters.record(layer.name, comparisons=current.size)
    return relu_layer(current)


def _run_triggered(
    layer: LayerSpec,
    current: Tensor,
    weights: WeightSet,
    counters: OpCounters,
    trojan: "TrojanConfig",
) -> tuple[Tensor, bool]:
    benign = _run_layer(layer, current, weights, counters)
    index = trojan.trigger.index
    value = float(benign.array[index.channel, index.row, index.col])
    counters.record(layer.name, comparisons=TRIGGER_COMPARISONS)
    if not trojan.trigger.contains(value):
        return benign, False

    logger.debug(
        f"Trigger fired at {layer.name}[{index.channel},{index.row},{index.col}]: {value}"
    )
    start = index.successor(benign.dims)
    if start is None:
        return benign, True
    shuffled = _run_layer(
        layer,
        current,
        weights,
        counters,
        order=trojan.payload.permutation(),
        produce_from=start,
        out=benign,
    )
    counters.record(
        layer.name, perm_applications=benign.size - start.flat(benign.dims)
    )
    return shuffled, True


def check_trojan(net: NetworkSpec, trojan: "TrojanConfig") -> None:
    """Ensure ``trojan`` can be armed on ``net``.

    Raises:
        UnsupportedPayloadError: If the trigger layer is not conv or pool.
        ConfigError: If the layer is trusted, the index lies outside it or the
            payload channel count disagrees.
    """
    layer = net.layer(trojan.trigger.layer)
    if not layer.is_payload_capable:
        raise UnsupportedPayloadError(
            f"{layer.name} is a {layer.kind.value} layer; payloads need conv or pool"
        )
    if not layer.is_untrusted:
        raise ConfigError(f"{layer.name} is not in the untrusted section")
    dims = net.output_dims(layer.name)
    if not trojan.trigger.index.within(dims):
        raise ConfigError(
            f"trigger index {trojan.trigger.index} outside {layer.name} dims {list(dims)}"
        )
    if trojan.payload.channels != dims[0]:
        raise ConfigError(
            f"payload rotates {trojan.payload.channels} channels, "
            f"{layer.name} has {dims[0]}"
        )


def _execute(
    net: NetworkSpec,
    weights: WeightSet,
    input: Tensor,
    taps: Collection[str] | None,
    trojan: "TrojanConfig | None" = None,
    stop_after: str | None = None,
) -> ArmedResult:
    if input.dims != tuple(net.input_dims):
        raise ModelConfigError(
            f"{net.name} expects input {list(net.input_dims)}, got {list(input.dims)}"
        )
    wanted = set(taps or ())
    unknown = wanted.difference(layer.name for layer in net.layers)
    if unknown:
        raise ConfigError(f"unknown tap layers: {sorted(unknown)}")

    counters = OpCounters()
    captured: TapSet = {}
    fired = False
    current = input
    for layer in net.layers:
        if trojan is not None and layer.name == trojan.trigger.layer:
            current, fired = _run_triggered(layer, current, weights, counters, trojan)
        else:
            current = _run_layer(layer, current, weights, counters)
        if layer.name in wanted:
            captured[layer.name] = current
        if layer.name == stop_after:
            break
    return ArmedResult(logits=current, taps=captured, counters=counters, fired=fired)


def forward(
    net: NetworkSpec,
    weights: WeightSet,
    input: Tensor,
    taps: Collection[str] | None = None,
) -> InferenceResult:
    """Benign forward pass.

    Args:
        net: Network description.
        weights: Parameter records for ``net``.
        input: Image with dims equal to net.input_dims.
        taps: Layer names whose outputs are captured.

    Returns:
        Logits (length class_count), requested taps and operation counters.

    Raises:
        ModelConfigError: If the input or weights do not fit the network.
        ConfigError: If a tap names an unknown layer.
    """
    validate_weights(net, weights)
    result = _execute(net, weights, input, taps)
    return InferenceResult(result.logits, result.taps, result.counters)


def forward_armed(
    net: NetworkSpec,
    weights: WeightSet,
    trojan: "TrojanConfig",
    input: Tensor,
    taps: Collection[str] | None = None,
) -> ArmedResult:
    """Forward pass with ``trojan`` armed on its trigger layer.

    When the trigger misses, the result is bit-identical to forward() and the
    counters differ by exactly two comparisons.

    Raises:
        ConfigError: If the trigger does not address an element of an
            untrusted layer or the payload channel count disagrees.
        UnsupportedPayloadError: If the trigger layer is not conv or pool.
    """
    validate_weights(net, weights)
    check_trojan(net, trojan)
    return _execute(net, weights, input, taps, trojan=trojan)


def layer_output(
    net: NetworkSpec, weights: WeightSet, input: Tensor, layer: str
) -> Tensor:
    """Benign output of ``layer``; later layers are not executed."""
    net.layer(layer)
    validate_weights(net, weights)
    result = _execute(net, weights, input, (layer,), stop_after=layer)
    return result.taps[layer]
