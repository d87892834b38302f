"""Trojan configuration files.

A configuration is stored as UTF-8 JSON:

    {
      "layer": "conv1", "channel": 2, "n": 5, "m": 17,
      "a": 0.41, "b": 0.43,
      "payload_kind": "weight_shuffle", "f": 4, "l": 6,
      "provenance": {"P": 200, "M": 6}
    }

Unknown keys are rejected and every key except provenance is required.
Reals are written with shortest round-trip precision.
"""

import logging
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from hia_lab.engine.layers import ElementIndex
from hia_lab.errors import FormatError
from hia_lab.trojan.spec import (
    PayloadKind,
    PayloadSpec,
    Provenance,
    TriggerSpec,
    TrojanConfig,
)

logger = logging.getLogger(__name__)


class ProvenanceFile(BaseModel):
    """Profiling metadata: P images, M occurrences."""

    model_config = ConfigDict(extra="forbid")

    P: int = Field(gt=0)
    M: int = Field(gt=0)


class TrojanConfigFile(BaseModel):
    """On-disk layout of a TrojanConfig."""

    model_config = ConfigDict(extra="forbid")

    layer: str
    channel: int = Field(ge=0)
    n: int = Field(ge=0)
    m: int = Field(ge=0)
    a: float
    b: float
    payload_kind: PayloadKind
    f: int
    l: int  # noqa: E741
    provenance: ProvenanceFile | None = None

    @classmethod
    def from_config(cls, config: TrojanConfig) -> "TrojanConfigFile":
        trigger, payload = config.trigger, config.payload
        provenance = config.provenance
        return cls(
            layer=trigger.layer,
            channel=trigger.index.channel,
            n=trigger.index.row,
            m=trigger.index.col,
            a=trigger.lower,
            b=trigger.upper,
            payload_kind=payload.kind,
            f=payload.factor,
            l=payload.channels,
            provenance=(
                None
                if provenance is None
                else ProvenanceFile(
                    P=provenance.profile_size, M=provenance.occurrence_count
                )
            ),
        )

    def to_config(self) -> TrojanConfig:
        """Build the validated TrojanConfig.

        Raises:
            DomainError: If the range bounds or order factor are invalid.
            UnsupportedPayloadError: If l < 2.
        """
        return TrojanConfig(
            trigger=TriggerSpec(
                self.layer, ElementIndex(self.channel, self.n, self.m), self.a, self.b
            ),
            payload=PayloadSpec(self.layer, self.payload_kind, self.f, self.l),
            provenance=(
                None
                if self.provenance is None
                else Provenance(self.provenance.P, self.provenance.M)
            ),
        )


def dump_trojan_config(config: TrojanConfig) -> str:
    """Serialize a configuration to JSON text."""
    return TrojanConfigFile.from_config(config).model_dump_json(indent=2) + "\n"


def parse_trojan_config(text: str | bytes) -> TrojanConfig:
    """Parse JSON text into a TrojanConfig.

    Raises:
        FormatError: On malformed JSON or missing/unknown keys.
    """
    try:
        document = TrojanConfigFile.model_validate_json(text)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
            for err in e.errors()
        )
        raise FormatError(f"invalid trojan config: {problems}") from e
    return document.to_config()


def write_trojan_config(path: Path | str, config: TrojanConfig) -> None:
    """Write ``config`` to ``path``."""
    Path(path).write_text(dump_trojan_config(config), encoding="utf-8")
    logger.info(f"Wrote trojan config for {config.layer} to {path}")


def read_trojan_config(path: Path | str) -> TrojanConfig:
    """Read a configuration written by write_trojan_config."""
    config = parse_trojan_config(Path(path).read_bytes())
    logger.debug(f"Read trojan config for {config.layer} from {path}")
    return config
