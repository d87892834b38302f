"""Pytest configuration and fixtures for hia-lab tests.

This module provides centralized test fixtures for all test modules:

Network Fixtures:
    - lenet_net, lenet3d_net: Session-scoped network descriptions
    - lenet_weights, lenet3d_weights: Seeded fixture weights (seed 0)

Dataset Fixtures:
    - profile_set: 200 LeNet fixture images used for trigger design (seed 1)
    - fresh_set: 200 LeNet fixture images disjoint from profile_set (seed 2)

Trojan Fixtures:
    - sn1_design: Trigger designed on LeNet conv1 from profile_set
    - make_config: Factory for hand-built trojan configurations

Fixtures are session-scoped where they are expensive and immutable.
"""

from collections.abc import Callable

import pytest

from hia_lab.core.tensor import Tensor
from hia_lab.dataio.datasets import LabeledImages
from hia_lab.engine.layers import ElementIndex
from hia_lab.engine.network import NetworkSpec
from hia_lab.models.fixtures import fixture_dataset, fixture_weights
from hia_lab.models.lenet import lenet, lenet3d
from hia_lab.trojan.design import TriggerDesign, design_trigger_detailed
from hia_lab.trojan.spec import (
    PayloadKind,
    PayloadSpec,
    TriggerSpec,
    TrojanConfig,
    default_order_factor,
)

# Bounds wide enough to contain every value the fixture networks produce.
FULL_RANGE = (-1.0e30, 1.0e30)

ConfigFactory = Callable[..., TrojanConfig]


# =============================================================================
# Network Fixtures
# =============================================================================


@pytest.fixture(scope="session")
def lenet_net() -> NetworkSpec:
    """LeNet with max pooling."""
    return lenet()


@pytest.fixture(scope="session")
def lenet3d_net() -> NetworkSpec:
    """LeNet-3D with max pooling."""
    return lenet3d()


@pytest.fixture(scope="session")
def lenet_weights(lenet_net: NetworkSpec) -> dict[str, Tensor]:
    """Uniform [-1, 1] LeNet weights drawn with seed 0."""
    return fixture_weights(lenet_net, 0)


@pytest.fixture(scope="session")
def lenet3d_weights(lenet3d_net: NetworkSpec) -> dict[str, Tensor]:
    """Uniform [-1, 1] LeNet-3D weights drawn with seed 0."""
    return fixture_weights(lenet3d_net, 0)


# =============================================================================
# Dataset Fixtures
# =============================================================================


@pytest.fixture(scope="session")
def profile_set(lenet_net: NetworkSpec) -> LabeledImages:
    """200 LeNet validation images (seed 1)."""
    return fixture_dataset(lenet_net, 200, 1)


@pytest.fixture(scope="session")
def fresh_set(lenet_net: NetworkSpec) -> LabeledImages:
    """200 LeNet images drawn independently of profile_set (seed 2)."""
    return fixture_dataset(lenet_net, 200, 2)


# =============================================================================
# Trojan Fixtures
# =============================================================================


@pytest.fixture(scope="session")
def sn1_design(
    lenet_net: NetworkSpec,
    lenet_weights: dict[str, Tensor],
    profile_set: LabeledImages,
) -> TriggerDesign:
    """Trigger on LeNet conv1 designed from profile_set with the default M = 6."""
    return design_trigger_detailed(
        lenet_net, lenet_weights, profile_set.images, "conv1", search_seed=0
    )


@pytest.fixture
def make_config() -> ConfigFactory:
    """Factory building a configuration for any payload-capable layer.

    Call as ``make_config(net, layer, lower, upper, index=..., factor=...)``.
    The index defaults to (0, 0, 0) so the payload covers almost the whole
    layer; the factor defaults to floor(l/2) + 1.
    """

    def build(
        net: NetworkSpec,
        layer: str,
        lower: float = FULL_RANGE[0],
        upper: float = FULL_RANGE[1],
        index: ElementIndex | None = None,
        factor: int | None = None,
    ) -> TrojanConfig:
        channels = net.channel_count(layer)
        return TrojanConfig(
            trigger=TriggerSpec(layer, index or ElementIndex(0, 0, 0), lower, upper),
            payload=PayloadSpec(
                layer,
                PayloadKind.for_layer(net.layer(layer).kind),
                default_order_factor(channels) if factor is None else factor,
                channels,
            ),
        )

    return build
