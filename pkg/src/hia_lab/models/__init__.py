"""Model builders for hia-lab.

Classes:
    ScenarioId: Attack scenarios Sn1..Sn5.

Functions:
    lenet, lenet3d, build_network: Network builders.
    scenario_layer: Scenario to target layer.
    fixture_weights, fixture_dataset: Seeded stand-ins for trained weights and data.
    motivational_pair: Single-layer shuffle experiment.
"""

from hia_lab.models.fixtures import fixture_dataset, fixture_weights
from hia_lab.models.lenet import (
    MODEL_BUILDERS,
    SCENARIO_LAYERS,
    ScenarioId,
    build_network,
    lenet,
    lenet3d,
    scenario_layer,
)
from hia_lab.models.motivational import motivational_pair

__all__ = [
    "MODEL_BUILDERS",
    "SCENARIO_LAYERS",
    "ScenarioId",
    "build_network",
    "fixture_dataset",
    "fixture_weights",
    "lenet",
    "lenet3d",
    "motivational_pair",
    "scenario_layer",
]
