"""Trigger, payload and trojan configuration records.

Classes:
    PayloadKind: Weight-bank shuffle (conv) or output-channel shuffle (pool).
    TriggerSpec: Monitored layer element and its range of values.
    PayloadSpec: Channel rotation applied on a trigger hit.
    Provenance: Profiling metadata (P images, M occurrences).
    TrojanConfig: Trigger + payload + provenance.
    ProfileAggregate: Values of one element over a validation set.
    RoVCriterion: Target occurrence count M.

Functions:
    half_range: Admissible order-factor interval for a baseline index.
    default_order_factor: floor(l/2) + 1, kept inside (l/2, l).
"""

import enum
import math
from dataclasses import dataclass

from hia_lab.core.tensor import ChannelPermutation, rotation
from hia_lab.engine.layers import ElementIndex, LayerKind
from hia_lab.errors import (
    ConfigError,
    DomainError,
    EmptyProfileError,
    UnsupportedPayloadError,
)


class PayloadKind(str, enum.Enum):
    """What the payload rotates."""

    weight_shuffle = "weight_shuffle"
    output_channel_shuffle = "output_channel_shuffle"

    @classmethod
    def for_layer(cls, kind: LayerKind) -> "PayloadKind":
        """Payload kind hosted by a layer kind.

        Raises:
            UnsupportedPayloadError: For ReLU and fully connected layers.
        """
        if kind is LayerKind.conv:
            return cls.weight_shuffle
        if kind is LayerKind.maxpool:
            return cls.output_channel_shuffle
        raise UnsupportedPayloadError(f"{kind.value} layers cannot host a payload")


@dataclass(frozen=True)
class TriggerSpec:
    """Monitored element and its closed range of values [lower, upper].

    A range with lower > upper never matches and marks a disarmed trigger.

    Attributes:
        layer: Monitored layer name.
        index: Monitored element (k, n, m).
        lower: a_w.
        upper: b_w.
    """

    layer: str
    index: ElementIndex
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("trigger range bounds must be finite")

    @property
    def disarmed(self) -> bool:
        return self.lower > self.upper

    def contains(self, value: float) -> bool:
        """Closed-interval membership test."""
        return self.lower <= value <= self.upper


def half_range(channels: int, baseline: int) -> tuple[float, float]:
    """Open interval the order factor must lie in.

    (l/2, l) when 0 < baseline < l/2, otherwise (0, l/2).
    """
    half = channels / 2
    if 0 < baseline < half:
        return half, float(channels)
    return 0.0, half


def default_order_factor(channels: int) -> int:
    """floor(l/2) + 1, or l - 1 when that would reach l."""
    return min(channels // 2 + 1, channels - 1)


@dataclass(frozen=True)
class PayloadSpec:
    """Channel rotation by order factor f over l channels.

    Attributes:
        layer: Target layer; equals the trigger layer.
        kind: Weight-bank or output-channel shuffle.
        factor: Order factor f, 0 < f < l.
        channels: Channel count l.
    """

    layer: str
    kind: PayloadKind
    factor: int
    channels: int

    def __post_init__(self) -> None:
        if self.channels < 2:
            raise UnsupportedPayloadError(
                f"{self.layer}: no non-identity rotation over {self.channels} channel(s)"
            )
        if not 0 < self.factor < self.channels:
            raise DomainError(
                f"order factor {self.factor} outside (0, {self.channels})"
            )
        # Both half ranges exclude l/2; two channels admit only f = 1.
        if 2 * self.factor == self.channels and self.channels != 2:
            raise DomainError(f"order factor {self.factor} equals l/2")

    def permutation(self) -> ChannelPermutation:
        """order[j] = (j + f) mod l."""
        return rotation(self.channels, self.factor)


@dataclass(frozen=True)
class Provenance:
    """Profiling metadata behind a trigger range.

    Attributes:
        profile_size: P, validation images profiled.
        occurrence_count: M, profiled values inside the range.
    """

    profile_size: int
    occurrence_count: int


@dataclass(frozen=True)
class TrojanConfig:
    """Everything the engine needs to arm a trojan."""

    trigger: TriggerSpec
    payload: PayloadSpec
    provenance: Provenance | None = None

    def __post_init__(self) -> None:
        if self.trigger.layer != self.payload.layer:
            raise ConfigError(
                f"trigger layer {self.trigger.layer!r} differs from payload layer "
                f"{self.payload.layer!r}"
            )

    @property
    def layer(self) -> str:
        return self.trigger.layer

    @property
    def disarmed(self) -> bool:
        return self.trigger.disarmed


@dataclass(frozen=True)
class ProfileAggregate:
    """Benign values of one element over a validation set, in dataset order.

    Attributes:
        layer: Layer name.
        index: Profiled element (k, n, m).
        values: One value per validation image.
    """

    layer: str
    index: ElementIndex
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise EmptyProfileError(f"empty profile for {self.layer}")
        if not all(math.isfinite(v) for v in self.values):
            raise DomainError("profile values must be finite")

    @property
    def size(self) -> int:
        return len(self.values)

    def count_within(self, lower: float, upper: float) -> int:
        """c([lower, upper]) over the profiled values."""
        return sum(1 for v in self.values if lower <= v <= upper)


@dataclass(frozen=True)
class RoVCriterion:
    """Target occurrence count M of the range of values.

    Attributes:
        count: M.
    """

    count: int

    @classmethod
    def from_rate(cls, rate: float, profile_size: int) -> "RoVCriterion":
        """M = max(1, round(rate * P))."""
        if not 0.0 < rate <= 1.0:
            raise DomainError(f"rate {rate} outside (0, 1]")
        return cls(max(1, round(rate * profile_size)))

    def check(self, profile_size: int) -> None:
        """Ensure 1 <= M <= P.

        Raises:
            DomainError: If M is outside [1, P].
        """
        if not 1 <= self.count <= profile_size:
            raise DomainError(f"M = {self.count} outside [1, {profile_size}]")

    def rate(self, profile_size: int) -> float:
        """r = M / P."""
        return self.count / profile_size
