"""LeNet and LeNet-3D network builders with trust partitioning.

Both networks use 5x5 valid convolutions on a 32x32 input, a rectifier after
every convolution and the first classifier layer, and 2x2 pooling. The
conv/pool stack is the untrusted section; the rectifiers and the
classifier head stay trusted.

Classes:
    ScenarioId: Attack scenarios Sn1..Sn5 and their target layers.

Functions:
    lenet: MNIST LeNet (1x32x32 input, channels 6/16/120).
    lenet3d: CIFAR-10 LeNet-3D (3x32x32 input, channels 5/20/100).
    build_network: Builder lookup by model name.
    scenario_layer: Target layer of a scenario.
"""

import enum

from hia_lab.engine.layers import LayerSpec, PoolKind
from hia_lab.engine.network import NetworkSpec
from hia_lab.errors import ConfigError

CLASS_COUNT = 10
KERNEL = 5
HIDDEN = 84


class ScenarioId(str, enum.Enum):
    """Attack scenario and the layer it infects."""

    sn1 = "Sn1"
    sn2 = "Sn2"
    sn3 = "Sn3"
    sn4 = "Sn4"
    sn5 = "Sn5"

    @property
    def layer(self) -> str:
        return SCENARIO_LAYERS[self]


SCENARIO_LAYERS: dict[ScenarioId, str] = {
    ScenarioId.sn1: "conv1",
    ScenarioId.sn2: "pool1",
    ScenarioId.sn3: "conv2",
    ScenarioId.sn4: "pool2",
    ScenarioId.sn5: "conv3",
}


def scenario_layer(scenario: str) -> str:
    """Target layer of scenario ``scenario`` (case-insensitive, e.g. "sn3").

    Raises:
        ConfigError: For unknown scenario names.
    """
    for candidate in ScenarioId:
        if candidate.value.lower() == scenario.lower():
            return candidate.layer
    raise ConfigError(f"unknown scenario {scenario!r}")


def _lenet_family(
    name: str,
    in_channels: int,
    channels: tuple[int, int, int],
    pool_kind: PoolKind,
) -> NetworkSpec:
    c1, c2, c3 = channels
    layers = (
        LayerSpec.conv("conv1", in_channels, c1, KERNEL),
        LayerSpec.relu("relu1"),
        LayerSpec.pool("pool1", pool_kind),
        LayerSpec.conv("conv2", c1, c2, KERNEL),
        LayerSpec.relu("relu2"),
        LayerSpec.pool("pool2", pool_kind),
        LayerSpec.conv("conv3", c2, c3, KERNEL),
        LayerSpec.relu("relu3"),
        LayerSpec.fc("fc1", c3, HIDDEN),
        LayerSpec.relu("relu4"),
        LayerSpec.fc("fc2", HIDDEN, CLASS_COUNT),
    )
    return NetworkSpec(
        name=name,
        layers=layers,
        input_dims=(in_channels, 32, 32),
        class_count=CLASS_COUNT,
    )


def lenet(pool_kind: PoolKind = PoolKind.max) -> NetworkSpec:
    """LeNet for zero-padded MNIST digits."""
    return _lenet_family("lenet", 1, (6, 16, 120), pool_kind)


def lenet3d(pool_kind: PoolKind = PoolKind.max) -> NetworkSpec:
    """LeNet-3D for CIFAR-10 images."""
    return _lenet_family("lenet3d", 3, (5, 20, 100), pool_kind)


MODEL_BUILDERS = {
    "lenet": lenet,
    "lenet3d": lenet3d,
}


def build_network(name: str, pool_kind: PoolKind = PoolKind.max) -> NetworkSpec:
    """Build the network called ``name``.

    Raises:
        ConfigError: For unknown model names.
    """
    try:
        builder = MODEL_BUILDERS[name]
    except KeyError:
        raise ConfigError(
            f"unknown model {name!r}; choose from {sorted(MODEL_BUILDERS)}"
        ) from None
    return builder(pool_kind)
