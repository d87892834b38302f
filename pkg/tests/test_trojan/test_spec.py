"""Tests for trigger, payload and configuration records."""

import math

import pytest

from hia_lab.engine.layers import ElementIndex, LayerKind
from hia_lab.errors import (
    ConfigError,
    DomainError,
    EmptyProfileError,
    UnsupportedPayloadError,
)
from hia_lab.trojan.spec import (
    PayloadKind,
    PayloadSpec,
    ProfileAggregate,
    RoVCriterion,
    TriggerSpec,
    TrojanConfig,
    default_order_factor,
    half_range,
)


class TestTriggerSpec:
    """Tests for the monitored range."""

    def test_closed_interval(self) -> None:
        trigger = TriggerSpec("conv1", ElementIndex(0, 1, 2), -0.5, 0.25)
        assert trigger.contains(-0.5)
        assert trigger.contains(0.25)
        assert trigger.contains(0.0)
        assert not trigger.contains(0.2500001)
        assert not trigger.disarmed

    def test_inverted_range_is_disarmed(self) -> None:
        trigger = TriggerSpec("conv1", ElementIndex(0), 1.0, -1.0)
        assert trigger.disarmed
        assert not trigger.contains(0.0)

    @pytest.mark.parametrize("bound", [math.inf, -math.inf, math.nan])
    def test_non_finite_bounds_rejected(self, bound: float) -> None:
        with pytest.raises(DomainError):
            TriggerSpec("conv1", ElementIndex(0), bound, 1.0)


class TestPayloadSpec:
    """Tests for the channel-rotation payload."""

    def test_sn1_rotation(self) -> None:
        payload = PayloadSpec("conv1", PayloadKind.weight_shuffle, 4, 6)
        assert payload.permutation().order == (4, 5, 0, 1, 2, 3)

    def test_half_channel_factor_rejected(self) -> None:
        with pytest.raises(DomainError):
            PayloadSpec("conv1", PayloadKind.weight_shuffle, 3, 6)

    def test_two_channels_allow_single_swap(self) -> None:
        payload = PayloadSpec("pool1", PayloadKind.output_channel_shuffle, 1, 2)
        assert payload.permutation().order == (1, 0)

    @pytest.mark.parametrize("factor", [0, 6, -1])
    def test_factor_outside_range(self, factor: int) -> None:
        with pytest.raises(DomainError):
            PayloadSpec("conv1", PayloadKind.weight_shuffle, factor, 6)

    def test_single_channel_unsupported(self) -> None:
        with pytest.raises(UnsupportedPayloadError):
            PayloadSpec("conv1", PayloadKind.weight_shuffle, 1, 1)

    def test_kind_for_layer(self) -> None:
        assert PayloadKind.for_layer(LayerKind.conv) is PayloadKind.weight_shuffle
        assert (
            PayloadKind.for_layer(LayerKind.maxpool)
            is PayloadKind.output_channel_shuffle
        )
        for kind in (LayerKind.relu, LayerKind.fully_connected):
            with pytest.raises(UnsupportedPayloadError):
                PayloadKind.for_layer(kind)


class TestOrderFactor:
    """Tests for order-factor helpers."""

    @pytest.mark.parametrize(
        "channels, expected", [(6, 4), (16, 9), (120, 61), (100, 51), (5, 3), (2, 1)]
    )
    def test_default_order_factor(self, channels: int, expected: int) -> None:
        assert default_order_factor(channels) == expected

    def test_default_factor_is_valid_payload(self) -> None:
        for channels in range(2, 130):
            factor = default_order_factor(channels)
            PayloadSpec("conv1", PayloadKind.weight_shuffle, factor, channels)

    def test_half_range(self) -> None:
        assert half_range(6, 1) == (3.0, 6.0)
        assert half_range(6, 0) == (0.0, 3.0)
        assert half_range(6, 4) == (0.0, 3.0)


class TestTrojanConfig:
    """Tests for the combined configuration."""

    def test_layers_must_agree(self) -> None:
        with pytest.raises(ConfigError):
            TrojanConfig(
                TriggerSpec("conv1", ElementIndex(0), 0.0, 1.0),
                PayloadSpec("conv2", PayloadKind.weight_shuffle, 9, 16),
            )

    def test_disarmed_follows_trigger(self) -> None:
        config = TrojanConfig(
            TriggerSpec("conv1", ElementIndex(0), 1.0, 0.0),
            PayloadSpec("conv1", PayloadKind.weight_shuffle, 4, 6),
        )
        assert config.disarmed
        assert config.layer == "conv1"
        assert config.provenance is None


class TestProfileAggregate:
    """Tests for profiled values."""

    def test_empty_rejected(self) -> None:
        with pytest.raises(EmptyProfileError):
            ProfileAggregate("conv1", ElementIndex(0), ())

    def test_non_finite_rejected(self) -> None:
        with pytest.raises(DomainError):
            ProfileAggregate("conv1", ElementIndex(0), (1.0, math.inf))

    def test_count_within_is_closed(self) -> None:
        aggregate = ProfileAggregate("conv1", ElementIndex(0), (1.0, 2.0, 2.0, 3.0))
        assert aggregate.size == 4
        assert aggregate.count_within(2.0, 2.0) == 2
        assert aggregate.count_within(1.0, 3.0) == 4
        assert aggregate.count_within(3.0, 1.0) == 0


class TestRoVCriterion:
    """Tests for the target occurrence count."""

    def test_from_rate(self) -> None:
        assert RoVCriterion.from_rate(0.03, 200).count == 6
        assert RoVCriterion.from_rate(0.03, 1000).count == 30
        assert RoVCriterion.from_rate(0.0001, 200).count == 1

    @pytest.mark.parametrize("rate", [0.0, -0.1, 1.5])
    def test_rate_outside_unit_interval(self, rate: float) -> None:
        with pytest.raises(DomainError):
            RoVCriterion.from_rate(rate, 200)

    @pytest.mark.parametrize("count", [0, 201])
    def test_check_bounds(self, count: int) -> None:
        with pytest.raises(DomainError):
            RoVCriterion(count).check(200)

    def test_rate(self) -> None:
        assert RoVCriterion(6).rate(200) == pytest.approx(0.03)
