"""Tests for the MNIST IDX and CIFAR-10 binary readers."""

import struct
from pathlib import Path

import numpy as np
import pytest

from hia_lab.dataio.datasets import LabeledImages, read_cifar10_bin, read_mnist_idx
from hia_lab.errors import FormatError, SizeMismatchError, TruncatedDataError


def write_mnist(
    tmp_path: Path,
    pixels: np.ndarray,
    labels: list[int],
    image_magic: int = 0x803,
    label_count: int | None = None,
) -> tuple[Path, Path]:
    count, rows, cols = pixels.shape
    images = tmp_path / "images.idx"
    images.write_bytes(
        struct.pack(">IIII", image_magic, count, rows, cols)
        + pixels.astype(np.uint8).tobytes()
    )
    label_file = tmp_path / "labels.idx"
    label_file.write_bytes(
        struct.pack(">II", 0x801, len(labels) if label_count is None else label_count)
        + bytes(labels)
    )
    return images, label_file


def write_cifar(tmp_path: Path, records: list[tuple[int, int]]) -> Path:
    """Records of (label, constant pixel value)."""
    path = tmp_path / "batch.bin"
    path.write_bytes(b"".join(bytes([label]) + bytes([value]) * 3072 for label, value in records))
    return path


class TestLabeledImages:
    """Tests for the labelled image container."""

    def test_length_mismatch(self) -> None:
        with pytest.raises(SizeMismatchError):
            LabeledImages(images=(), labels=(1,))

    def test_batches(self, profile_set: LabeledImages) -> None:
        batches = list(profile_set.batches(64))
        assert [start for start, _ in batches] == [0, 64, 128, 192]
        assert [len(batch) for _, batch in batches] == [64, 64, 64, 8]
        assert batches[1][1].labels == profile_set.labels[64:128]

    def test_batch_size_positive(self, profile_set: LabeledImages) -> None:
        with pytest.raises(ValueError):
            list(profile_set.batches(0))


class TestReadMnist:
    """Tests for read_mnist_idx."""

    def test_reads_and_pads(self, tmp_path: Path) -> None:
        pixels = np.zeros((10, 28, 28), dtype=np.uint8)
        pixels[3, 0, 0] = 255
        pixels[4, 27, 27] = 51
        dataset = read_mnist_idx(*write_mnist(tmp_path, pixels, list(range(10))))

        assert len(dataset) == 10
        assert dataset.labels == tuple(range(10))
        assert all(image.dims == (1, 32, 32) for image in dataset.images)
        assert dataset.images[0].array.max() == 0.0
        assert dataset.images[3].array[0, 2, 2] == 1.0
        assert dataset.images[4].array[0, 29, 29] == np.float32(0.2)
        # Border padding stays zero.
        assert dataset.images[3].array[0, :2, :].max() == 0.0

    def test_bad_image_magic(self, tmp_path: Path) -> None:
        pixels = np.zeros((2, 28, 28), dtype=np.uint8)
        with pytest.raises(FormatError, match="magic"):
            read_mnist_idx(*write_mnist(tmp_path, pixels, [0, 1], image_magic=0x802))

    def test_truncated_pixels(self, tmp_path: Path) -> None:
        pixels = np.zeros((3, 28, 28), dtype=np.uint8)
        images, labels = write_mnist(tmp_path, pixels, [0, 1, 2])
        images.write_bytes(images.read_bytes()[:-100])

        with pytest.raises(TruncatedDataError) as excinfo:
            read_mnist_idx(images, labels)
        assert excinfo.value.offset == 16 + 3 * 784 - 100

    def test_truncated_header(self, tmp_path: Path) -> None:
        images = tmp_path / "images.idx"
        images.write_bytes(struct.pack(">II", 0x803, 1))
        labels = tmp_path / "labels.idx"
        labels.write_bytes(struct.pack(">II", 0x801, 1) + b"\x00")
        with pytest.raises(TruncatedDataError):
            read_mnist_idx(images, labels)

    def test_rejects_non_mnist_image_size(self, tmp_path: Path) -> None:
        pixels = np.zeros((2, 10, 10), dtype=np.uint8)
        with pytest.raises(FormatError, match="10x10"):
            read_mnist_idx(*write_mnist(tmp_path, pixels, [0, 1]))

    def test_count_mismatch(self, tmp_path: Path) -> None:
        pixels = np.zeros((2, 28, 28), dtype=np.uint8)
        with pytest.raises(FormatError, match="labels"):
            read_mnist_idx(*write_mnist(tmp_path, pixels, [0, 1], label_count=3))

    def test_trailing_bytes(self, tmp_path: Path) -> None:
        pixels = np.zeros((2, 28, 28), dtype=np.uint8)
        images, labels = write_mnist(tmp_path, pixels, [0, 1])
        images.write_bytes(images.read_bytes() + b"\x00")
        with pytest.raises(FormatError, match="trailing"):
            read_mnist_idx(images, labels)


class TestReadCifar:
    """Tests for read_cifar10_bin."""

    def test_reads_records(self, tmp_path: Path) -> None:
        dataset = read_cifar10_bin(write_cifar(tmp_path, [(3, 0), (9, 255)]))
        assert dataset.labels == (3, 9)
        assert dataset.images[0].dims == (3, 32, 32)
        assert dataset.images[0].array.max() == 0.0
        assert dataset.images[1].array.min() == 1.0

    def test_channel_planes(self, tmp_path: Path) -> None:
        path = tmp_path / "planes.bin"
        path.write_bytes(bytes([1]) + bytes([0]) * 1024 + bytes([255]) * 1024 + bytes([0]) * 1024)
        image = read_cifar10_bin(path).images[0]
        assert image.array[0].max() == 0.0
        assert image.array[1].min() == 1.0
        assert image.array[2].max() == 0.0

    def test_empty_file(self, tmp_path: Path) -> None:
        path = tmp_path / "empty.bin"
        path.write_bytes(b"")
        assert len(read_cifar10_bin(path)) == 0

    def test_partial_record(self, tmp_path: Path) -> None:
        path = write_cifar(tmp_path, [(1, 10)])
        path.write_bytes(path.read_bytes() + b"\x01\x02")
        with pytest.raises(FormatError, match="3073"):
            read_cifar10_bin(path)

    def test_label_out_of_range(self, tmp_path: Path) -> None:
        path = write_cifar(tmp_path, [(0, 1), (10, 1)])
        with pytest.raises(FormatError, match="offset 3073"):
            read_cifar10_bin(path)
