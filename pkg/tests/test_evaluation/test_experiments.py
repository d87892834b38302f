"""Tests for the motivational experiment, the overhead proxy and the sidecar."""

from collections.abc import Callable

import pytest

from hia_lab.core.tensor import Tensor
from hia_lab.dataio.datasets import LabeledImages
from hia_lab.dataio.reports import MOTIV_REFERENCE_FRACTION, CounterDelta
from hia_lab.engine.layers import ElementIndex
from hia_lab.engine.network import NetworkSpec
from hia_lab.errors import DomainError
from hia_lab.evaluation.experiments import (
    expected_perm_applications,
    measure_overhead,
    run_motivational,
)
from hia_lab.evaluation.histogram import HISTOGRAM_BINS, build_sidecar
from hia_lab.trojan.design import TriggerDesign
from hia_lab.trojan.spec import TrojanConfig

ConfigFactory = Callable[..., TrojanConfig]


class TestMotivational:
    """Tests for run_motivational."""

    def test_twenty_seeds(self) -> None:
        report = run_motivational(range(20), threshold=0.95)
        assert [r.seed for r in report.records] == list(range(20))
        assert 0.4 <= report.mean_changed_fraction <= 0.95
        assert report.reference_fraction == MOTIV_REFERENCE_FRACTION
        assert report.order_factor == 1

    def test_identity_order_changes_nothing(self) -> None:
        report = run_motivational([0, 1, 2], threshold=0.95, factor=0)
        assert report.mean_changed_fraction == 0.0

    def test_deterministic(self) -> None:
        assert run_motivational([3, 4]) == run_motivational([3, 4])

    def test_needs_seeds(self) -> None:
        with pytest.raises(ValueError):
            run_motivational([])


class TestOverhead:
    """Tests for measure_overhead."""

    def test_unfired_counter_delta(
        self,
        lenet_net: NetworkSpec,
        lenet_weights: dict[str, Tensor],
        profile_set: LabeledImages,
        make_config: ConfigFactory,
    ) -> None:
        config = make_config(lenet_net, "conv2", 1.0, -1.0)
        report = measure_overhead(
            lenet_net, lenet_weights, config, profile_set.images[:5], repeats=1
        )
        assert report.unfired_images == 5
        assert report.fired_images == 0
        assert report.unfired_delta_uniform
        assert report.unfired_counter_delta == CounterDelta(comparisons=2)
        assert report.timing.images_timed == 5
        assert report.timing.median_overhead_pct is not None

    def test_fired_perm_applications(
        self,
        lenet_net: NetworkSpec,
        lenet_weights: dict[str, Tensor],
        profile_set: LabeledImages,
        make_config: ConfigFactory,
    ) -> None:
        config = make_config(lenet_net, "conv2", index=ElementIndex(1, 2, 3))
        report = measure_overhead(
            lenet_net, lenet_weights, config, profile_set.images[:4], repeats=1
        )
        expected = 1600 - (100 + 20 + 3) - 1
        assert expected_perm_applications(lenet_net, config) == expected
        assert report.fired_images == 4
        assert report.fired_perm_applications == [expected] * 4
        assert report.unfired_counter_delta is None
        assert report.timing.images_timed == 0

    def test_last_element_has_no_payload(
        self, lenet_net: NetworkSpec, make_config: ConfigFactory
    ) -> None:
        config = make_config(lenet_net, "pool1", index=ElementIndex(5, 13, 13))
        assert expected_perm_applications(lenet_net, config) == 0

    def test_needs_images(
        self,
        lenet_net: NetworkSpec,
        lenet_weights: dict[str, Tensor],
        make_config: ConfigFactory,
    ) -> None:
        with pytest.raises(DomainError, match="at least one image"):
            measure_overhead(lenet_net, lenet_weights, make_config(lenet_net, "conv1"), [])

    @pytest.mark.timing
    def test_wall_time_overhead(
        self,
        lenet_net: NetworkSpec,
        lenet_weights: dict[str, Tensor],
        fresh_set: LabeledImages,
        make_config: ConfigFactory,
    ) -> None:
        """Unfired armed inference costs under 2% extra wall time."""
        config = make_config(lenet_net, "conv2", 1.0, -1.0)
        report = measure_overhead(lenet_net, lenet_weights, config, fresh_set.images[:100])
        assert report.timing.images_timed == 100
        assert report.timing.median_overhead_pct is not None
        assert report.timing.median_overhead_pct < 2.0


class TestSidecar:
    """Tests for build_sidecar."""

    def test_summarizes_aggregate(self, sn1_design: TriggerDesign) -> None:
        sidecar = build_sidecar(sn1_design)
        trigger = sn1_design.config.trigger

        assert sidecar.layer == "conv1"
        assert (sidecar.channel, sidecar.n, sidecar.m) == (
            trigger.index.channel,
            trigger.index.row,
            trigger.index.col,
        )
        assert sidecar.P == 200
        assert sidecar.M == 6
        assert sidecar.count == 200
        assert sum(sidecar.bin_counts) == 200
        assert len(sidecar.bin_counts) == HISTOGRAM_BINS
        assert len(sidecar.bin_edges) == HISTOGRAM_BINS + 1
        assert sidecar.min <= trigger.lower <= trigger.upper <= sidecar.max
        assert sidecar.window == (trigger.lower, trigger.upper)
        assert sidecar.tries == sn1_design.tries
