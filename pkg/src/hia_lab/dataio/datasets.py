"""Readers for the MNIST IDX and CIFAR-10 binary datasets.

IDX files are big-endian:

    [offset] [type]          [value]          [description]
    0000     32 bit integer  0x00000803       magic number (images)
    0004     32 bit integer  N                number of images
    0008     32 bit integer  rows
    0012     32 bit integer  cols
    0016     unsigned byte   ...              pixels, row-wise

    0000     32 bit integer  0x00000801       magic number (labels)
    0004     32 bit integer  N                number of labels
    0008     unsigned byte   ...              labels

CIFAR-10 binary files are a sequence of 3073-byte records: one label byte
followed by the 1024-byte R, G and B planes.

Classes:
    LabeledImages: Images with their labels, in dataset order.

Functions:
    read_mnist_idx: MNIST images + labels, zero-padded to 1x32x32.
    read_cifar10_bin: CIFAR-10 records as 3x32x32 tensors.
"""

import logging
import struct
from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hia_lab.core.tensor import Tensor
from hia_lab.errors import FormatError, SizeMismatchError, TruncatedDataError

logger = logging.getLogger(__name__)

MNIST_IMAGE_MAGIC = 0x00000803
MNIST_LABEL_MAGIC = 0x00000801
MNIST_PADDING = 2
MNIST_SIDE = 28
CIFAR_RECORD_BYTES = 3073
CIFAR_DIMS = (3, 32, 32)
CIFAR_CLASSES = 10


@dataclass(frozen=True)
class LabeledImages:
    """Images and labels in dataset order.

    Attributes:
        images: Image tensors.
        labels: Class label of each image.
    """

    images: tuple[Tensor, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != len(self.labels):
            raise SizeMismatchError(
                f"{len(self.images)} images but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.images)

    def slice(self, start: int, stop: int) -> "LabeledImages":
        """Contiguous sub-range [start, stop)."""
        return LabeledImages(self.images[start:stop], self.labels[start:stop])

    def batches(self, size: int) -> Iterator[tuple[int, "LabeledImages"]]:
        """Contiguous batches of ``size`` images with their start offsets."""
        if size <= 0:
            raise ValueError("batch size must be greater than 0")
        for start in range(0, len(self), size):
            yield start, self.slice(start, start + size)


def _read_bytes(path: Path | str) -> bytes:
    data = Path(path).read_bytes()
    logger.debug(f"Read {len(data)} bytes from {path}")
    return data


def _be32(data: bytes, offset: int, what: str) -> int:
    if len(data) < offset + 4:
        raise TruncatedDataError(f"{what}: missing header field", len(data))
    (value,) = struct.unpack_from(">I", data, offset)
    return int(value)


def read_mnist_idx(images_path: Path | str, labels_path: Path | str) -> LabeledImages:
    """Read an MNIST image/label file pair.

    Pixels v map to v / 255.0 and every image is zero-padded by 2 on each
    border (28x28 becomes 1x32x32).

    Raises:
        FormatError: On a bad magic number, an image size other than 28x28,
            trailing bytes or a count mismatch.
        TruncatedDataError: If either file ends early.
    """
    image_data = _read_bytes(images_path)
    label_data = _read_bytes(labels_path)

    magic = _be32(image_data, 0, "image file")
    if magic != MNIST_IMAGE_MAGIC:
        raise FormatError(f"image file magic {magic:#010x}, expected 0x00000803")
    count = _be32(image_data, 4, "image file")
    rows = _be32(image_data, 8, "image file")
    cols = _be32(image_data, 12, "image file")
    if (rows, cols) != (MNIST_SIDE, MNIST_SIDE):
        raise FormatError(f"image file holds {rows}x{cols} images, expected 28x28")
    expected = 16 + count * rows * cols
    if len(image_data) < expected:
        raise TruncatedDataError(
            f"image file holds {len(image_data)} of {expected} bytes", len(image_data)
        )
    if len(image_data) > expected:
        raise FormatError(f"image file has {len(image_data) - expected} trailing bytes")

    magic = _be32(label_data, 0, "label file")
    if magic != MNIST_LABEL_MAGIC:
        raise FormatError(f"label file magic {magic:#010x}, expected 0x00000801")
    label_count = _be32(label_data, 4, "label file")
    if label_count != count:
        raise FormatError(f"{count} images but {label_count} labels")
    if len(label_data) < 8 + count:
        raise TruncatedDataError(
            f"label file holds {len(label_data)} of {8 + count} bytes", len(label_data)
        )
    if len(label_data) > 8 + count:
        extra = len(label_data) - 8 - count
        raise FormatError(f"label file has {extra} trailing bytes")

    pixels = np.frombuffer(image_data, dtype=np.uint8, offset=16).reshape(
        count, 1, rows, cols
    )
    scaled = (pixels.astype(np.float64) / 255.0).astype(np.float32)
    pad = MNIST_PADDING
    padded = np.pad(scaled, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    labels = np.frombuffer(label_data, dtype=np.uint8, offset=8)
    logger.info(f"Loaded {count} MNIST images from {images_path}")
    return LabeledImages(
        images=tuple(Tensor(image) for image in padded),
        labels=tuple(int(label) for label in labels),
    )


def read_cifar10_bin(path: Path | str) -> LabeledImages:
    """Read a CIFAR-10 binary batch file.

    Raises:
        FormatError: If the size is not a multiple of 3073 or a label exceeds 9.
    """
    data = _read_bytes(path)
    if len(data) % CIFAR_RECORD_BYTES:
        raise FormatError(
            f"{len(data)} bytes is not a multiple of {CIFAR_RECORD_BYTES}; "
            f"last record starts at offset "
            f"{len(data) - len(data) % CIFAR_RECORD_BYTES}"
        )
    records = np.frombuffer(data, dtype=np.uint8).reshape(-1, CIFAR_RECORD_BYTES)
    labels = records[:, 0]
    bad = np.flatnonzero(labels >= CIFAR_CLASSES)
    if bad.size:
        raise FormatError(
            f"label {labels[bad[0]]} at offset {bad[0] * CIFAR_RECORD_BYTES}"
        )
    pixels = records[:, 1:].reshape(-1, *CIFAR_DIMS)
    scaled = (pixels.astype(np.float64) / 255.0).astype(np.float32)
    logger.info(f"Loaded {len(records)} CIFAR-10 images from {path}")
    return LabeledImages(
        images=tuple(Tensor(image) for image in scaled),
        labels=tuple(int(label) for label in labels),
    )
