"""Dense tensors, channel permutations and elementwise metrics.

Classes:
    Tensor: Immutable row-major container of 32-bit reals.
    ChannelPermutation: Bijection on outer-dimension slices.

Functions:
    make_tensor: Build a validated tensor from dims and a flat value list.
    changed_fraction: Share of elements whose relative change exceeds a threshold.
    rotation: Cyclic channel rotation by an order factor.
    permute_outer: Reorder the outer slices of a tensor.

Example:
    >>> t = make_tensor([2, 1, 1], [1.0, 2.0])
    >>> permute_outer(t, rotation(2, 1)).to_list()
    [2.0, 1.0]
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from hia_lab.errors import DomainError, SizeMismatchError

FloatArray = npt.NDArray[np.float32]

# Keeps the relative change defined where the baseline element is zero.
CHANGE_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class Tensor:
    """Immutable dense tensor of 32-bit reals.

    Rank 1 for vectors, rank 3 as [channels, height, width] for feature maps,
    rank 4 as [out_channels, in_channels, kh, kw] for convolution weights.
    The wrapped array is made read-only on construction and must be finite.

    Attributes:
        array: Backing float32 array in row-major order.
    """

    array: FloatArray

    def __post_init__(self) -> None:
        array = np.array(self.array, dtype=np.float32, order="C", copy=True)
        if not np.isfinite(array).all():
            raise DomainError("tensor contains non-finite values")
        array.flags.writeable = False
        object.__setattr__(self, "array", array)

    @property
    def dims(self) -> tuple[int, ...]:
        """Extent of every dimension."""
        return tuple(int(d) for d in self.array.shape)

    @property
    def size(self) -> int:
        """Number of elements."""
        return int(self.array.size)

    @property
    def data(self) -> FloatArray:
        """Flat read-only view in row-major order."""
        return self.array.reshape(-1)

    def to_list(self) -> list[float]:
        """Return the flat values as Python floats."""
        return [float(v) for v in self.data]

    def copy_array(self) -> FloatArray:
        """Return a writable copy of the backing array."""
        return self.array.copy()

    def __eq__(self, other: object) -> bool:
        """Bitwise equality of dims and values."""
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.dims == other.dims and bool(
            np.array_equal(self.array.view(np.uint32), other.array.view(np.uint32))
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.array.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor(dims={list(self.dims)})"


@dataclass(frozen=True)
class ChannelPermutation:
    """Read order over outer slices: slice j of the result is slice order[j].

    Attributes:
        order: Bijection on {0..l-1}.
    """

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise DomainError(f"order {list(self.order)} is not a permutation")

    @classmethod
    def identity(cls, length: int) -> "ChannelPermutation":
        """Return the identity permutation on ``length`` slices."""
        return cls(tuple(range(length)))

    def __len__(self) -> int:
        return len(self.order)

    @property
    def is_identity(self) -> bool:
        """True when every slice keeps its position."""
        return all(j == v for j, v in enumerate(self.order))

    def compose(self, other: "ChannelPermutation") -> "ChannelPermutation":
        """Permutation equal to applying ``self`` and then ``other``."""
        if len(other) != len(self):
            raise SizeMismatchError("cannot compose permutations of different length")
        return ChannelPermutation(tuple(self.order[j] for j in other.order))

    def as_index(self) -> npt.NDArray[np.intp]:
        """Order as an integer index array."""
        return np.asarray(self.order, dtype=np.intp)


def make_tensor(dims: Sequence[int], values: Sequence[float] | Any) -> Tensor:
    """Build a tensor from its extents and row-major values.

    Args:
        dims: Positive extents.
        values: Flat sequence (or array) of product(dims) finite reals.

    Returns:
        Tensor holding exactly the given values as 32-bit reals.

    Raises:
        SizeMismatchError: If the value count differs from product(dims).
        DomainError: If a dimension is not positive or a value is non-finite.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d <= 0 for d in dims):
        raise DomainError(f"dims must be positive extents, got {dims}")
    flat = np.asarray(values, dtype=np.float32).reshape(-1)
    expected = int(np.prod(dims))
    if flat.size != expected:
        raise SizeMismatchError(
            f"dims {dims} need {expected} values, got {flat.size}"
        )
    return Tensor(flat.reshape(dims))


def changed_fraction(a: Tensor, b: Tensor, rel_threshold: float) -> float:
    """Share of elements whose relative change from ``a`` to ``b`` is large.

    An element counts when |b - a| / (|a| + 1e-9) > rel_threshold. The
    denominator uses ``a`` only, so the metric is not symmetric.

    Args:
        a: Baseline tensor.
        b: Compared tensor with the same dims.
        rel_threshold: Relative-change threshold, >= 0.

    Returns:
        Fraction in [0, 1].

    Raises:
        SizeMismatchError: If dims differ.
        DomainError: If rel_threshold is negative.
    """
    if a.dims != b.dims:
        raise SizeMismatchError(f"dims differ: {list(a.dims)} vs {list(b.dims)}")
    if rel_threshold < 0:
        raise DomainError("rel_threshold must be >= 0")
    base = a.data.astype(np.float64)
    other = b.data.astype(np.float64)
    relative = np.abs(other - base) / (np.abs(base) + CHANGE_EPS)
    return float(np.count_nonzero(relative > rel_threshold)) / a.size


def rotation(length: int, factor: int) -> ChannelPermutation:
    """Cyclic rotation ``order[j] = (j + factor) mod length``.

    Raises:
        DomainError: If length < 1 or factor is outside (0, length).
    """
    if length < 1:
        raise DomainError(f"rotation length must be positive, got {length}")
    if not 0 < factor < length:
        raise DomainError(f"order factor {factor} outside (0, {length})")
    return ChannelPermutation(tuple((j + factor) % length for j in range(length)))


def permute_outer(t: Tensor, p: ChannelPermutation) -> Tensor:
    """Reorder the outer slices of ``t``: result[j] = t[p.order[j]].

    Raises:
        SizeMismatchError: If the permutation length differs from dims[0].
    """
    if t.dims[0] != len(p):
        raise SizeMismatchError(
            f"permutation of length {len(p)} applied to outer extent {t.dims[0]}"
        )
    return Tensor(t.array[p.as_index()])
