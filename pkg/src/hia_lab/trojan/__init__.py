"""Trojan design module for hia-lab.

Offline trigger design from validation-set statistics and the payload
configuration the engine executes at runtime.

Classes:
    TriggerSpec, PayloadSpec, PayloadKind, Provenance, TrojanConfig
    ProfileAggregate, RoVCriterion, TriggerDesign

Functions:
    profile_index, select_rov, design_trigger, design_trigger_detailed,
    expected_rate, replay_count, half_range, default_order_factor
"""

from hia_lab.trojan.design import (
    TriggerDesign,
    collect_layer_outputs,
    design_trigger,
    design_trigger_detailed,
    expected_rate,
    profile_index,
    replay_count,
    select_rov,
)
from hia_lab.trojan.spec import (
    PayloadKind,
    PayloadSpec,
    ProfileAggregate,
    Provenance,
    RoVCriterion,
    TriggerSpec,
    TrojanConfig,
    default_order_factor,
    half_range,
)

__all__ = [
    "PayloadKind",
    "PayloadSpec",
    "ProfileAggregate",
    "Provenance",
    "RoVCriterion",
    "TriggerDesign",
    "TriggerSpec",
    "TrojanConfig",
    "collect_layer_outputs",
    "default_order_factor",
    "design_trigger",
    "design_trigger_detailed",
    "expected_rate",
    "half_range",
    "profile_index",
    "replay_count",
    "select_rov",
]
