"""Tests for seeded fixture weights, fixture images and the motivational pair."""

import numpy as np

from hia_lab.core.tensor import changed_fraction, permute_outer, rotation
from hia_lab.engine.network import NetworkSpec, validate_weights
from hia_lab.models import fixture_dataset, fixture_weights, motivational_pair


class TestFixtureWeights:
    """Tests for fixture_weights."""

    def test_fit_network(self, lenet_net: NetworkSpec, lenet3d_net: NetworkSpec) -> None:
        validate_weights(lenet_net, fixture_weights(lenet_net, 3))
        validate_weights(lenet3d_net, fixture_weights(lenet3d_net, 3))

    def test_seed_reproduces_bits(self, lenet_net: NetworkSpec) -> None:
        assert fixture_weights(lenet_net, 9) == fixture_weights(lenet_net, 9)
        assert fixture_weights(lenet_net, 9) != fixture_weights(lenet_net, 10)

    def test_uniform_range(self, lenet_net: NetworkSpec) -> None:
        for tensor in fixture_weights(lenet_net, 0).values():
            assert tensor.array.min() >= -1.0
            assert tensor.array.max() <= 1.0


class TestFixtureDataset:
    """Tests for fixture_dataset."""

    def test_shapes_and_labels(self, lenet3d_net: NetworkSpec) -> None:
        dataset = fixture_dataset(lenet3d_net, 12, 4)
        assert len(dataset) == 12
        assert all(image.dims == (3, 32, 32) for image in dataset.images)
        assert all(0 <= label < 10 for label in dataset.labels)

    def test_pixel_range(self, lenet_net: NetworkSpec) -> None:
        dataset = fixture_dataset(lenet_net, 5, 0)
        pixels = np.stack([image.array for image in dataset.images])
        assert pixels.min() >= 0.0
        assert pixels.max() <= 1.0

    def test_deterministic(self, lenet_net: NetworkSpec) -> None:
        first = fixture_dataset(lenet_net, 8, 21)
        second = fixture_dataset(lenet_net, 8, 21)
        assert first.images == second.images
        assert first.labels == second.labels
        assert fixture_dataset(lenet_net, 8, 22).images != first.images


class TestMotivationalPair:
    """Tests for the single-layer shuffle experiment."""

    def test_dims(self) -> None:
        baseline, shuffled = motivational_pair(0)
        assert baseline.dims == (3, 8, 8)
        assert shuffled.dims == (3, 8, 8)

    def test_zero_factor_keeps_order(self) -> None:
        baseline, shuffled = motivational_pair(5, factor=0)
        assert baseline == shuffled

    def test_shuffle_rotates_channels(self) -> None:
        baseline, shuffled = motivational_pair(2)
        assert shuffled == permute_outer(baseline, rotation(3, 1))

    def test_mean_changed_fraction(self) -> None:
        fractions = [
            changed_fraction(*motivational_pair(seed), 0.95) for seed in range(20)
        ]
        mean = sum(fractions) / len(fractions)
        assert 0.4 <= mean <= 0.95
