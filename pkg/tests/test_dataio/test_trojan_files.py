"""Tests for trojan configuration files."""

import json
import struct
from pathlib import Path

import numpy as np
import pytest

from hia_lab.dataio.trojan_files import (
    TrojanConfigFile,
    dump_trojan_config,
    parse_trojan_config,
    read_trojan_config,
    write_trojan_config,
)
from hia_lab.engine.layers import ElementIndex
from hia_lab.errors import DomainError, FormatError, UnsupportedPayloadError
from hia_lab.trojan.design import TriggerDesign
from hia_lab.trojan.spec import (
    PayloadKind,
    PayloadSpec,
    Provenance,
    TriggerSpec,
    TrojanConfig,
)

DISARMED = TrojanConfig(
    TriggerSpec("pool2", ElementIndex(3, 1, 4), 1.0, -1.0),
    PayloadSpec("pool2", PayloadKind.output_channel_shuffle, 9, 16),
)


def document(**overrides: object) -> str:
    fields: dict[str, object] = {
        "layer": "conv1",
        "channel": 2,
        "n": 5,
        "m": 17,
        "a": 0.41,
        "b": 0.43,
        "payload_kind": "weight_shuffle",
        "f": 4,
        "l": 6,
        "provenance": {"P": 200, "M": 6},
    }
    fields.update(overrides)
    return json.dumps({k: v for k, v in fields.items() if v is not None})


class TestRoundTrip:
    """Written configurations read back unchanged."""

    def test_disarmed(self, tmp_path: Path) -> None:
        path = tmp_path / "trojan.json"
        write_trojan_config(path, DISARMED)
        loaded = read_trojan_config(path)
        assert loaded == DISARMED
        assert loaded.disarmed

    def test_designed_bounds_exact(self, sn1_design: TriggerDesign, tmp_path: Path) -> None:
        path = tmp_path / "sn1.json"
        write_trojan_config(path, sn1_design.config)
        loaded = read_trojan_config(path)
        assert loaded == sn1_design.config
        assert loaded.trigger.lower == sn1_design.config.trigger.lower
        assert loaded.trigger.upper == sn1_design.config.trigger.upper

    def test_dump_is_stable(self, sn1_design: TriggerDesign) -> None:
        text = dump_trojan_config(sn1_design.config)
        assert dump_trojan_config(parse_trojan_config(text)) == text

    def test_keys(self) -> None:
        keys = set(json.loads(dump_trojan_config(DISARMED)))
        assert keys == {"layer", "channel", "n", "m", "a", "b", "payload_kind", "f", "l", "provenance"}

    def test_document_fields(self) -> None:
        config = parse_trojan_config(document())
        assert config.trigger.index == ElementIndex(2, 5, 17)
        assert config.payload.kind is PayloadKind.weight_shuffle
        assert config.provenance is not None
        assert config.provenance.profile_size == 200
        assert config.provenance.occurrence_count == 6

    def test_provenance_optional(self) -> None:
        assert parse_trojan_config(document(provenance=None)).provenance is None


class TestRejects:
    """Malformed documents."""

    def test_missing_key(self) -> None:
        text = json.dumps({k: v for k, v in json.loads(document()).items() if k != "f"})
        with pytest.raises(FormatError, match="f"):
            parse_trojan_config(text)

    def test_unknown_key(self) -> None:
        with pytest.raises(FormatError):
            parse_trojan_config(document(threshold=0.5))

    def test_not_json(self) -> None:
        with pytest.raises(FormatError):
            parse_trojan_config("{layer: conv1")

    def test_unknown_payload_kind(self) -> None:
        with pytest.raises(FormatError):
            parse_trojan_config(document(payload_kind="bias_flip"))

    def test_negative_index(self) -> None:
        with pytest.raises(FormatError):
            parse_trojan_config(document(channel=-1))

    def test_half_channel_factor(self) -> None:
        with pytest.raises(DomainError):
            parse_trojan_config(document(f=3))

    def test_single_channel(self) -> None:
        with pytest.raises(UnsupportedPayloadError):
            parse_trojan_config(document(f=1, l=1))

    def test_file_model_forbids_extra(self) -> None:
        with pytest.raises(ValueError):
            TrojanConfigFile.model_validate({**json.loads(document()), "x": 1})


# -0.0, float32 subnormal extremes, largest float32, float64 extremes.
EDGE_BOUNDS = [
    -0.0,
    1.401298464324817e-45,
    1.1754942106924411e-38,
    3.4028234663852886e38,
    -3.4028234663852886e38,
    5e-324,
    1.7976931348623157e308,
]


def bits(value: float) -> bytes:
    return struct.pack("<d", value)


def random_config(rng: np.random.Generator) -> TrojanConfig:
    """Valid configuration with bounds drawn from random float32 bit patterns."""
    channels = int(rng.integers(2, 130))
    factor = int(rng.integers(1, channels))
    if 2 * factor == channels and channels != 2:
        factor += 1
    raw = rng.integers(0, 2**32, size=2, dtype=np.uint32)
    raw[(raw & 0x7F800000) == 0x7F800000] ^= 0x00800000
    lower, upper = (float(v) for v in raw.view(np.float32))
    if rng.random() < 0.5:
        lower = EDGE_BOUNDS[int(rng.integers(len(EDGE_BOUNDS)))]
    layer = str(rng.choice(["conv1", "pool1", "conv2", "pool2", "conv3"]))
    kind = (
        PayloadKind.weight_shuffle
        if layer.startswith("conv")
        else PayloadKind.output_channel_shuffle
    )
    index = ElementIndex(*(int(v) for v in rng.integers(0, 64, size=3)))
    provenance = None
    if rng.random() < 0.5:
        size = int(rng.integers(1, 1001))
        provenance = Provenance(size, int(rng.integers(1, size + 1)))
    return TrojanConfig(
        TriggerSpec(layer, index, lower, upper),
        PayloadSpec(layer, kind, factor, channels),
        provenance,
    )


class TestRandomConfigs:
    """Seeded random configurations survive write/read exactly."""

    @pytest.mark.parametrize("seed", range(25))
    def test_round_trip(self, seed: int, tmp_path: Path) -> None:
        config = random_config(np.random.default_rng(seed))
        path = tmp_path / "trojan.json"
        write_trojan_config(path, config)
        loaded = read_trojan_config(path)

        assert loaded == config
        assert bits(loaded.trigger.lower) == bits(config.trigger.lower)
        assert bits(loaded.trigger.upper) == bits(config.trigger.upper)
        assert dump_trojan_config(loaded) == dump_trojan_config(config)

    @pytest.mark.parametrize("bound", EDGE_BOUNDS)
    def test_edge_bounds(self, bound: float) -> None:
        config = TrojanConfig(
            TriggerSpec("conv2", ElementIndex(1, 2, 3), bound, bound),
            PayloadSpec("conv2", PayloadKind.weight_shuffle, 9, 16),
        )
        loaded = parse_trojan_config(dump_trojan_config(config))
        assert bits(loaded.trigger.lower) == bits(bound)
        assert bits(loaded.trigger.upper) == bits(bound)
