"""Operation counters recorded during one inference.

Counters are a software proxy for the resource and latency cost of a layer:
multiply-accumulates, comparisons (pool maxima, rectifiers, trigger test)
and payload permutation applications. A fresh OpCounters is created for
every image.
"""

from dataclasses import asdict, dataclass, field

from hia_lab.core.tensor import Tensor

# Captured layer outputs of one image, keyed by layer name.
TapSet = dict[str, Tensor]


@dataclass
class LayerOps:
    """Counts for a single layer."""

    macs: int = 0
    comparisons: int = 0
    perm_applications: int = 0


@dataclass
class OpCounters:
    """Per-layer operation counts of one inference.

    Attributes:
        per_layer: Counts keyed by layer name, in execution order.
    """

    per_layer: dict[str, LayerOps] = field(default_factory=dict)

    def record(
        self,
        layer: str,
        macs: int = 0,
        comparisons: int = 0,
        perm_applications: int = 0,
    ) -> None:
        """Add counts to ``layer``."""
        ops = self.per_layer.setdefault(layer, LayerOps())
        ops.macs += macs
        ops.comparisons += comparisons
        ops.perm_applications += perm_applications

    @property
    def macs(self) -> int:
        return sum(ops.macs for ops in self.per_layer.values())

    @property
    def comparisons(self) -> int:
        return sum(ops.comparisons for ops in self.per_layer.values())

    @property
    def perm_applications(self) -> int:
        return sum(ops.perm_applications for ops in self.per_layer.values())

    def totals(self) -> dict[str, int]:
        """Network-wide totals."""
        return {
            "macs": self.macs,
            "comparisons": self.comparisons,
            "perm_applications": self.perm_applications,
        }

    def delta(self, baseline: "OpCounters") -> dict[str, int]:
        """Totals of ``self`` minus totals of ``baseline``."""
        mine, theirs = self.totals(), baseline.totals()
        return {key: mine[key] - theirs[key] for key in mine}

    def as_dict(self) -> dict[str, dict[str, int]]:
        """Per-layer breakdown as plain dictionaries."""
        return {name: asdict(ops) for name, ops in self.per_layer.items()}
