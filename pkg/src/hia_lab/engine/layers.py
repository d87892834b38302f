"""Layer definitions and kernels.

Every kernel produces its output in lexicographic (channel, row, col) order
and accumulates in a fixed order (convolution: ascending c, then u, then v;
fully connected: ascending input index; bias added last), so two runs with
the same operands are bit-identical.

Classes:
    LayerKind: Conv, MaxPool, FullyConnected or ReLU.
    PoolKind: Window reduction used by pooling layers (max or avg).
    Trust: Trusted or Untrusted section of the mapped network.
    LayerSpec: One layer of a network description.
    ElementIndex: Position (channel, row, col) inside a layer output.

Functions:
    conv_layer: Valid convolution, stride 1, with a channel read order.
    maxpool_layer: 2x2 stride-2 max pooling with a channel read order.
    avgpool_layer: 2x2 stride-2 average pooling with a channel read order.
    fc_layer: Affine map on a vector.
    relu_layer: Elementwise max(x, 0).
"""

import enum
from dataclasses import dataclass

import numpy as np

from hia_lab.core.tensor import ChannelPermutation, FloatArray, Tensor
from hia_lab.errors import ConfigError, ModelConfigError, SizeMismatchError


class LayerKind(str, enum.Enum):
    """Kind of a network layer."""

    conv = "conv"
    maxpool = "maxpool"
    fully_connected = "fc"
    relu = "relu"


class PoolKind(str, enum.Enum):
    """Reduction applied over a pooling window."""

    max = "max"
    avg = "avg"


class Trust(str, enum.Enum):
    """Which party implements a layer."""

    trusted = "trusted"
    untrusted = "untrusted"


@dataclass(frozen=True)
class LayerSpec:
    """One layer of a network description.

    Only the fields relevant to ``kind`` are meaningful; use the factory
    classmethods rather than the constructor.

    Attributes:
        kind: Layer kind.
        name: Unique identifier within the network (e.g. "conv1").
        trust: Section the layer belongs to.
        out_channels: Conv output channels.
        in_channels: Conv input channels.
        kernel: Conv kernel extent (kh == kw).
        window: Pool window extent (equal to the pool stride).
        pool_kind: Pool reduction.
        in_features: FC input length.
        out_features: FC output length.
    """

    kind: LayerKind
    name: str
    trust: Trust = Trust.trusted
    out_channels: int = 0
    in_channels: int = 0
    kernel: int = 0
    window: int = 0
    pool_kind: PoolKind = PoolKind.max
    in_features: int = 0
    out_features: int = 0

    @classmethod
    def conv(
        cls,
        name: str,
        in_channels: int,
        out_channels: int,
        kernel: int,
        trust: Trust = Trust.untrusted,
    ) -> "LayerSpec":
        """Valid convolution, stride 1, padding 0."""
        if min(in_channels, out_channels, kernel) <= 0:
            raise ModelConfigError(f"{name}: conv extents must be positive")
        return cls(
            LayerKind.conv,
            name,
            trust,
            out_channels=out_channels,
            in_channels=in_channels,
            kernel=kernel,
        )

    @classmethod
    def pool(
        cls,
        name: str,
        pool_kind: PoolKind = PoolKind.max,
        trust: Trust = Trust.untrusted,
    ) -> "LayerSpec":
        """2x2 pooling with stride 2."""
        return cls(LayerKind.maxpool, name, trust, window=2, pool_kind=pool_kind)

    @classmethod
    def fc(
        cls,
        name: str,
        in_features: int,
        out_features: int,
        trust: Trust = Trust.trusted,
    ) -> "LayerSpec":
        """Fully connected layer."""
        if min(in_features, out_features) <= 0:
            raise ModelConfigError(f"{name}: fc extents must be positive")
        return cls(
            LayerKind.fully_connected,
            name,
            trust,
            in_features=in_features,
            out_features=out_features,
        )

    @classmethod
    def relu(cls, name: str, trust: Trust = Trust.trusted) -> "LayerSpec":
        """Elementwise rectifier."""
        return cls(LayerKind.relu, name, trust)

    @property
    def has_parameters(self) -> bool:
        """True for layers that reference weight and bias tensors."""
        return self.kind in (LayerKind.conv, LayerKind.fully_connected)

    @property
    def is_payload_capable(self) -> bool:
        """True for layers whose channel order a payload can rotate."""
        return self.kind in (LayerKind.conv, LayerKind.maxpool)

    @property
    def is_untrusted(self) -> bool:
        return self.trust is Trust.untrusted

    def parameter_dims(self) -> dict[str, tuple[int, ...]]:
        """Expected weight and bias dims keyed by record suffix."""
        if self.kind is LayerKind.conv:
            return {
                "weight": (self.out_channels, self.in_channels, self.kernel, self.kernel),
                "bias": (self.out_channels,),
            }
        if self.kind is LayerKind.fully_connected:
            return {
                "weight": (self.out_features, self.in_features),
                "bias": (self.out_features,),
            }
        return {}


@dataclass(frozen=True, order=True)
class ElementIndex:
    """Position inside a layer output, all 0-based.

    Rank-1 outputs are addressed as (k, 0, 0).

    Attributes:
        channel: Channel k.
        row: Row n.
        col: Column m.
    """

    channel: int
    row: int = 0
    col: int = 0

    @staticmethod
    def _as_rank3(dims: tuple[int, ...]) -> tuple[int, int, int]:
        if len(dims) == 3:
            return dims[0], dims[1], dims[2]
        if len(dims) == 1:
            return dims[0], 1, 1
        raise SizeMismatchError(f"cannot index dims {list(dims)}")

    def within(self, dims: tuple[int, ...]) -> bool:
        """True when the index lies inside ``dims``."""
        c, h, w = self._as_rank3(dims)
        return 0 <= self.channel < c and 0 <= self.row < h and 0 <= self.col < w

    def flat(self, dims: tuple[int, ...]) -> int:
        """Lexicographic position of the element.

        Raises:
            ConfigError: If the index lies outside ``dims``.
        """
        if not self.within(dims):
            raise ConfigError(f"index {self} outside output dims {list(dims)}")
        _, h, w = self._as_rank3(dims)
        return (self.channel * h + self.row) * w + self.col

    def successor(self, dims: tuple[int, ...]) -> "ElementIndex | None":
        """Next element in production order, or None after the last one."""
        c, h, w = self._as_rank3(dims)
        position = self.flat(dims) + 1
        if position >= c * h * w:
            return None
        channel, rest = divmod(position, h * w)
        row, col = divmod(rest, w)
        return ElementIndex(channel, row, col)


def _resolve_order(order: ChannelPermutation | None, length: int) -> ChannelPermutation:
    if order is None:
        return ChannelPermutation.identity(length)
    if len(order) != length:
        raise SizeMismatchError(
            f"channel order of length {len(order)} for {length} channels"
        )
    return order


def _splice(
    values: FloatArray, produce_from: ElementIndex | None, out: Tensor | None
) -> Tensor:
    """Keep ``out`` before ``produce_from`` and ``values`` from it onwards."""
    if produce_from is None:
        return Tensor(values)
    if out is None:
        raise SizeMismatchError("produce_from requires the partially filled output")
    if out.dims != values.shape:
        raise SizeMismatchError(
            f"partial output dims {list(out.dims)} differ from {list(values.shape)}"
        )
    start = produce_from.flat(out.dims)
    merged = out.copy_array()
    merged.reshape(-1)[start:] = values.reshape(-1)[start:]
    return Tensor(merged)


def conv_layer(
    input: Tensor,
    weights: Tensor,
    bias: Tensor,
    order: ChannelPermutation | None = None,
    produce_from: ElementIndex | None = None,
    out: Tensor | None = None,
) -> Tensor:
    """Valid convolution with stride 1 and a filter-bank read order.

    output[j, n, m] = bias[order[j]]
        + sum_{c,u,v} input[c, n+u, m+v] * weights[order[j], c, u, v]

    The sum accumulates from zero in ascending (c, u, v) order and the bias is
    added last. Elements before ``produce_from`` are taken from ``out``.

    Args:
        input: Feature map [C, H, W].
        weights: Filter banks [O, C, K, K].
        bias: Bias vector [O].
        order: Filter-bank read order of length O (identity when None).
        produce_from: First element to produce; None produces everything.
        out: Partially filled output supplying the elements before produce_from.

    Returns:
        Feature map [O, H-K+1, W-K+1].

    Raises:
        SizeMismatchError: If operand dims disagree.
    """
    if len(input.dims) != 3 or len(weights.dims) != 4:
        raise SizeMismatchError(
            f"conv needs [C,H,W] input and [O,C,K,K] weights, got "
            f"{list(input.dims)} and {list(weights.dims)}"
        )
    channels, height, width = input.dims
    banks, in_channels, kh, kw = weights.dims
    if in_channels != channels or kh != kw:
        raise SizeMismatchError(
            f"weights {list(weights.dims)} do not fit input {list(input.dims)}"
        )
    if bias.dims != (banks,):
        raise SizeMismatchError(f"bias {list(bias.dims)} does not fit {banks} banks")
    out_h, out_w = height - kh + 1, width - kw + 1
    if out_h <= 0 or out_w <= 0:
        raise SizeMismatchError(f"kernel {kh} larger than input {height}x{width}")

    index = _resolve_order(order, banks).as_index()
    bank = weights.array[index]
    shift = bias.array[index]
    x = input.array

    acc = np.zeros((banks, out_h, out_w), dtype=np.float32)
    term = np.empty_like(acc)
    for c in range(channels):
        for u in range(kh):
            for v in range(kw):
                np.multiply(
                    bank[:, c, u, v][:, None, None],
                    x[c, u : u + out_h, v : v + out_w],
                    out=term,
                )
                acc += term
    acc += shift[:, None, None]
    return _splice(acc, produce_from, out)


def _pool_windows(input: Tensor, order: ChannelPermutation | None) -> list[FloatArray]:
    if len(input.dims) != 3:
        raise SizeMismatchError(f"pooling needs [C,H,W] input, got {list(input.dims)}")
    channels, height, width = input.dims
    if height % 2 or width % 2:
        raise ModelConfigError(f"2x2 pooling needs even extents, got {height}x{width}")
    x = input.array[_resolve_order(order, channels).as_index()]
    # Window elements in row-major order.
    return [x[:, 0::2, 0::2], x[:, 0::2, 1::2], x[:, 1::2, 0::2], x[:, 1::2, 1::2]]


def maxpool_layer(
    input: Tensor,
    order: ChannelPermutation | None = None,
    produce_from: ElementIndex | None = None,
    out: Tensor | None = None,
) -> Tensor:
    """2x2 max pooling, stride 2, reading input channel order[j] into output j.

    Raises:
        ModelConfigError: If a spatial extent is odd.
        SizeMismatchError: If the order length differs from the channel count.
    """
    a, b, c, d = _pool_windows(input, order)
    values = np.maximum(np.maximum(np.maximum(a, b), c), d)
    return _splice(values, produce_from, out)


def avgpool_layer(
    input: Tensor,
    order: ChannelPermutation | None = None,
    produce_from: ElementIndex | None = None,
    out: Tensor | None = None,
) -> Tensor:
    """2x2 average pooling, stride 2, with the same channel read order as max."""
    a, b, c, d = _pool_windows(input, order)
    values = (((a + b) + c) + d) * np.float32(0.25)
    return _splice(values, produce_from, out)


def fc_layer(input: Tensor, weights: Tensor, bias: Tensor) -> Tensor:
    """Affine map accumulated in ascending input index, bias added last.

    Raises:
        SizeMismatchError: If input is not a vector or dims disagree.
    """
    if len(input.dims) != 1:
        raise SizeMismatchError(f"fc needs a vector input, got {list(input.dims)}")
    (in_features,) = input.dims
    if len(weights.dims) != 2 or weights.dims[1] != in_features:
        raise SizeMismatchError(
            f"weights {list(weights.dims)} do not fit {in_features} inputs"
        )
    out_features = weights.dims[0]
    if bias.dims != (out_features,):
        raise SizeMismatchError(f"bias {list(bias.dims)} does not fit {out_features}")

    w = weights.array
    x = input.array
    acc = np.zeros(out_features, dtype=np.float32)
    for i in range(in_features):
        acc += w[:, i] * x[i]
    acc += bias.array
    return Tensor(acc)


def relu_layer(input: Tensor) -> Tensor:
    """Elementwise max(x, 0)."""
    return Tensor(np.maximum(input.array, np.float32(0.0)))
