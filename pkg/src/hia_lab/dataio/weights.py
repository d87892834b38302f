"""SWF1 weight container.

Layout (little-endian):

    "SWF1"                          magic
    repeated until end of file:
        u16      name length
        bytes    name (UTF-8)
        u8       rank
        u32      dim, rank times
        f32      product(dims) values, row-major
"""

import logging
import struct
from collections.abc import Iterable, Mapping
from pathlib import Path

import numpy as np

from hia_lab.core.tensor import Tensor
from hia_lab.errors import ConfigError, FormatError, TruncatedDataError

logger = logging.getLogger(__name__)

WEIGHT_MAGIC = b"SWF1"

Records = Mapping[str, Tensor] | Iterable[tuple[str, Tensor]]


def encode_weights(records: Records) -> bytes:
    """Serialize records to SWF1 bytes.

    Raises:
        ConfigError: If a name repeats.
        FormatError: If a name is too long for its length field.
    """
    items = records.items() if isinstance(records, Mapping) else records
    seen: set[str] = set()
    chunks = [WEIGHT_MAGIC]
    for name, tensor in items:
        if name in seen:
            raise ConfigError(f"duplicate weight record {name!r}")
        seen.add(name)
        encoded = name.encode("utf-8")
        if len(encoded) > 0xFFFF:
            raise FormatError(f"record name {name[:32]!r}... is too long")
        chunks.append(struct.pack("<H", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<B", len(tensor.dims)))
        chunks.append(struct.pack(f"<{len(tensor.dims)}I", *tensor.dims))
        chunks.append(tensor.array.astype("<f4").tobytes())
    return b"".join(chunks)


def decode_weights(data: bytes) -> dict[str, Tensor]:
    """Parse SWF1 bytes into records, in file order.

    Raises:
        FormatError: On a wrong magic or a malformed record.
        TruncatedDataError: If a record ends early.
        ConfigError: If a name repeats.
    """
    if len(data) < len(WEIGHT_MAGIC):
        raise TruncatedDataError("weight container: missing magic", len(data))
    if data[:4] != WEIGHT_MAGIC:
        raise FormatError(f"weight container magic {data[:4]!r}, expected b'SWF1'")

    records: dict[str, Tensor] = {}
    offset = 4

    def take(count: int, what: str) -> bytes:
        nonlocal offset
        if offset + count > len(data):
            raise TruncatedDataError(f"weight container: incomplete {what}", offset)
        chunk = data[offset : offset + count]
        offset += count
        return chunk

    while offset < len(data):
        (name_length,) = struct.unpack("<H", take(2, "name length"))
        try:
            name = take(name_length, "name").decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"record name at offset {offset} is not UTF-8") from e
        (rank,) = struct.unpack("<B", take(1, "rank"))
        if rank == 0:
            raise FormatError(f"record {name!r} has rank 0")
        dims = struct.unpack(f"<{rank}I", take(4 * rank, "dims"))
        if any(d == 0 for d in dims):
            raise FormatError(f"record {name!r} has a zero extent in {list(dims)}")
        count = int(np.prod(dims))
        values = np.frombuffer(take(4 * count, f"payload of {name!r}"), dtype="<f4")
        if name in records:
            raise ConfigError(f"duplicate weight record {name!r}")
        records[name] = Tensor(values.astype(np.float32).reshape(dims))
    return records


def write_weights(path: Path | str, records: Records) -> None:
    """Write records to an SWF1 file."""
    data = encode_weights(records)
    Path(path).write_bytes(data)
    logger.info(f"Wrote {len(data)} bytes of weights to {path}")


def read_weights(path: Path | str) -> dict[str, Tensor]:
    """Read an SWF1 file."""
    records = decode_weights(Path(path).read_bytes())
    logger.debug(f"Read {len(records)} weight records from {path}")
    return records
