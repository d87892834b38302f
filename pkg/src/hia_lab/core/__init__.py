"""Core tensor module for hia-lab.

Dense tensor container plus the elementwise metrics and permutation
utilities every other module consumes.

Classes:
    Tensor: Immutable row-major container of 32-bit reals.
    ChannelPermutation: Bijection on outer slices.

Functions:
    make_tensor, changed_fraction, rotation, permute_outer
"""

from hia_lab.core.tensor import (
    CHANGE_EPS,
    ChannelPermutation,
    Tensor,
    changed_fraction,
    make_tensor,
    permute_outer,
    rotation,
)

__all__ = [
    "CHANGE_EPS",
    "ChannelPermutation",
    "Tensor",
    "changed_fraction",
    "make_tensor",
    "permute_outer",
    "rotation",
]
