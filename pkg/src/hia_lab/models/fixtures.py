"""Seeded fixture weights and images.

Fixtures stand in for a trained model and a validation set: divergence and
prediction flips are measured against the benign network, which does not
require trained accuracy.
"""

import numpy as np

from hia_lab.core.tensor import Tensor
from hia_lab.dataio.datasets import LabeledImages
from hia_lab.engine.network import NetworkSpec


def fixture_weights(net: NetworkSpec, seed: int) -> dict[str, Tensor]:
    """Uniform [-1, 1] weights and biases for every parameter record.

    Records are drawn in layer order from one generator, so a seed always
    reproduces the same bits.
    """
    rng = np.random.default_rng(seed)
    return {
        name: Tensor(rng.uniform(-1.0, 1.0, size=dims).astype(np.float32))
        for name, dims in net.parameter_dims().items()
    }


def fixture_dataset(net: NetworkSpec, count: int, seed: int) -> LabeledImages:
    """``count`` uniform [0, 1] images with uniform labels in [0, class_count)."""
    rng = np.random.default_rng(seed)
    pixels = rng.uniform(0.0, 1.0, size=(count, *net.input_dims)).astype(np.float32)
    labels = rng.integers(0, net.class_count, size=count)
    return LabeledImages(
        images=tuple(Tensor(image) for image in pixels),
        labels=tuple(int(label) for label in labels),
    )
