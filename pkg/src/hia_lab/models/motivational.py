"""Single-layer shuffle experiment.

A 3x12x12 input is convolved with 3x3x5x5 filter banks once in the default
bank order and once with the banks rotated, and the two 3x8x8 outputs are
compared elementwise.
"""

import numpy as np

from hia_lab.core.tensor import ChannelPermutation, Tensor, rotation
from hia_lab.engine.layers import conv_layer

INPUT_DIMS = (3, 12, 12)
WEIGHT_DIMS = (3, 3, 5, 5)


def motivational_pair(seed: int, factor: int = 1) -> tuple[Tensor, Tensor]:
    """Baseline and bank-rotated convolution outputs.

    Args:
        seed: Seed of the uniform [-1, 1] input and weights.
        factor: Rotation order factor; 0 keeps the default order.

    Returns:
        (O1, O2), both 3x8x8, with zero biases.
    """
    rng = np.random.default_rng(seed)
    input = Tensor(rng.uniform(-1.0, 1.0, size=INPUT_DIMS).astype(np.float32))
    weights = Tensor(rng.uniform(-1.0, 1.0, size=WEIGHT_DIMS).astype(np.float32))
    bias = Tensor(np.zeros(WEIGHT_DIMS[0], dtype=np.float32))
    order = (
        ChannelPermutation.identity(WEIGHT_DIMS[0])
        if factor == 0
        else rotation(WEIGHT_DIMS[0], factor)
    )
    baseline = conv_layer(input, weights, bias)
    shuffled = conv_layer(input, weights, bias, order)
    return baseline, shuffled
