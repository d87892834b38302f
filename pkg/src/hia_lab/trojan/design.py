"""Offline trigger design from validation-set feature-map statistics.

The attacker profiles one element of an untrusted layer over the validation
set, picks the sparsest range of values holding exactly M profiled values,
and pairs it with a channel-rotation payload on the same layer.

Classes:
    TriggerDesign: Designed configuration plus the aggregate behind it.

Functions:
    collect_layer_outputs: Benign outputs of one layer for every image.
    profile_index: Aggregate of one element over the validation set.
    select_rov: Sparsest window holding exactly M values.
    design_trigger: Random index search until a range qualifies.
    design_trigger_detailed: design_trigger returning the full search outcome.
    expected_rate: Profiling-set trigger rate M / P.
    replay_count: Profiled values a configuration's range captures.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hia_lab.config import trojan_settings
from hia_lab.core.tensor import Tensor
from hia_lab.engine.layers import ElementIndex
from hia_lab.engine.network import NetworkSpec, WeightSet, layer_output, validate_weights
from hia_lab.engine.pool import map_ordered
from hia_lab.errors import (
    ConfigError,
    DomainError,
    EmptyProfileError,
    NoRoVError,
    TriggerDesignFailedError,
    UnsupportedPayloadError,
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
)

logger = logging.getLogger(__name__)

# Keeps the density score finite for zero-width windows.
ROV_EPS = 1e-9


@dataclass(frozen=True)
class TriggerDesign:
    """Outcome of a successful trigger search.

    Attributes:
        config: Designed trojan configuration.
        aggregate: Profile of the chosen element.
        tries: Indices drawn, including the successful one.
    """

    config: TrojanConfig
    aggregate: ProfileAggregate
    tries: int


def _check_target(net: NetworkSpec, layer: str) -> None:
    spec = net.layer(layer)
    if not spec.is_untrusted:
        raise ConfigError(f"{layer} is not in the untrusted section")
    if not spec.is_payload_capable:
        raise UnsupportedPayloadError(
            f"{layer} is a {spec.kind.value} layer; payloads need conv or pool"
        )


def collect_layer_outputs(
    net: NetworkSpec,
    weights: WeightSet,
    images: Sequence[Tensor],
    layer: str,
    workers: int = 1,
) -> npt.NDArray[np.float32]:
    """Stack the benign outputs of ``layer`` for every image, in dataset order.

    Returns:
        Array of shape [P, *output_dims].

    Raises:
        EmptyProfileError: If ``images`` is empty.
    """
    if not images:
        raise EmptyProfileError("cannot profile an empty dataset")
    validate_weights(net, weights)
    outputs = map_ordered(
        lambda image: layer_output(net, weights, image, layer).array,
        images,
        workers,
    )
    return np.stack(outputs)


def _aggregate(
    outputs: npt.NDArray[np.float32], layer: str, index: ElementIndex
) -> ProfileAggregate:
    if outputs.ndim == 2:
        column = outputs[:, index.channel]
    else:
        column = outputs[:, index.channel, index.row, index.col]
    return ProfileAggregate(layer, index, tuple(float(v) for v in column))


def profile_index(
    net: NetworkSpec,
    weights: WeightSet,
    images: Sequence[Tensor],
    layer: str,
    index: ElementIndex,
    workers: int = 1,
) -> ProfileAggregate:
    """Benign value of ``layer`` at ``index`` for every validation image.

    Raises:
        EmptyProfileError: If ``images`` is empty.
        ConfigError: If the layer is unknown or the index lies outside it.
    """
    dims = net.output_dims(layer)
    if not index.within(dims):
        raise ConfigError(f"index {index} outside {layer} dims {list(dims)}")
    outputs = collect_layer_outputs(net, weights, images, layer, workers)
    return _aggregate(outputs, layer, index)


def select_rov(aggregate: ProfileAggregate, criterion: RoVCriterion) -> tuple[float, float]:
    """Sparsest closed window of M consecutive sorted values.

    Candidate windows [s[i], s[i+M-1]] over the sorted values qualify only
    when no duplicate of either boundary lies outside the run, so the window
    holds exactly M values. The window with the lowest density
    M / (width + 1e-9) wins; ties go to the smaller lower bound.

    Returns:
        (a_w, b_w) with exactly M profiled values inside.

    Raises:
        DomainError: If M is outside [1, P].
        NoRoVError: If no window qualifies.
    """
    size = aggregate.size
    count = criterion.count
    criterion.check(size)
    ordered = np.sort(np.asarray(aggregate.values, dtype=np.float64))
    lower = ordered[: size - count + 1]
    upper = ordered[count - 1 :]

    qualifies = np.ones(lower.size, dtype=bool)
    qualifies[1:] &= ordered[: size - count] < lower[1:]
    qualifies[:-1] &= ordered[count:] > upper[:-1]
    candidates = np.flatnonzero(qualifies)
    if candidates.size == 0:
        raise NoRoVError(
            f"no window holds exactly {count} of {size} values at "
            f"{aggregate.layer}[{aggregate.index.channel},{aggregate.index.row},"
            f"{aggregate.index.col}]"
        )
    score = count / (upper[candidates] - lower[candidates] + ROV_EPS)
    best = candidates[np.lexsort((lower[candidates], score))[0]]
    return float(lower[best]), float(upper[best])


def design_trigger_detailed(
    net: NetworkSpec,
    weights: WeightSet,
    images: Sequence[Tensor],
    layer: str,
    criterion: RoVCriterion | None = None,
    search_seed: int | None = None,
    max_tries: int | None = None,
    order_factor: int | None = None,
    workers: int = 1,
) -> TriggerDesign:
    """Search random indices of ``layer`` until a range of values qualifies.

    Args:
        net: Benign network.
        weights: Parameter records for ``net``.
        images: Validation images (P of them).
        layer: Untrusted conv or pool layer to monitor and attack.
        criterion: Target count M; defaults to round(target_rate * P).
        search_seed: Seed of the index generator.
        max_tries: Indices drawn before giving up.
        order_factor: Payload order factor; defaults to floor(l/2) + 1.
        workers: Worker threads used while profiling.

    Returns:
        The designed configuration, its aggregate and the number of tries.

    Raises:
        ConfigError: If the layer is unknown or trusted.
        UnsupportedPayloadError: If the layer cannot host a payload or l < 2.
        EmptyProfileError: If ``images`` is empty.
        TriggerDesignFailedError: If every try failed.
    """
    _check_target(net, layer)
    seed = trojan_settings.search_seed if search_seed is None else search_seed
    budget = trojan_settings.max_tries if max_tries is None else max_tries
    if budget <= 0:
        raise DomainError("max_tries must be greater than 0")
    dims = net.output_dims(layer)
    channels = dims[0]
    payload = PayloadSpec(
        layer=layer,
        kind=PayloadKind.for_layer(net.layer(layer).kind),
        factor=default_order_factor(channels) if order_factor is None else order_factor,
        channels=channels,
    )
    if not images:
        raise EmptyProfileError("cannot profile an empty dataset")
    if criterion is None:
        criterion = RoVCriterion.from_rate(trojan_settings.target_rate, len(images))
    criterion.check(len(images))

    outputs = collect_layer_outputs(net, weights, images, layer, workers)
    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        index = ElementIndex(
            int(rng.integers(dims[0])),
            int(rng.integers(dims[1])),
            int(rng.integers(dims[2])),
        )
        aggregate = _aggregate(outputs, layer, index)
        try:
            lower, upper = select_rov(aggregate, criterion)
        except NoRoVError as e:
            logger.debug(f"Try {attempt}: {e}")
            continue
        logger.info(
            f"Trigger on {layer}[{index.channel},{index.row},{index.col}] "
            f"range [{lower!r}, {upper!r}] after {attempt} tries"
        )
        config = TrojanConfig(
            trigger=TriggerSpec(layer, index, lower, upper),
            payload=payload,
            provenance=Provenance(aggregate.size, criterion.count),
        )
        return TriggerDesign(config, aggregate, attempt)
    raise TriggerDesignFailedError(
        f"no qualifying range on {layer} after {budget} tries (M = {criterion.count})"
    )


def design_trigger(
    net: NetworkSpec,
    weights: WeightSet,
    images: Sequence[Tensor],
    layer: str,
    criterion: RoVCriterion | None = None,
    search_seed: int | None = None,
    max_tries: int | None = None,
    order_factor: int | None = None,
    workers: int = 1,
) -> TrojanConfig:
    """Design a trigger and payload for ``layer``; see design_trigger_detailed."""
    return design_trigger_detailed(
        net,
        weights,
        images,
        layer,
        criterion,
        search_seed,
        max_tries,
        order_factor,
        workers,
    ).config


def expected_rate(config: TrojanConfig) -> float:
    """Profiling-set trigger rate M / P.

    Raises:
        ConfigError: If the configuration carries no provenance.
    """
    if config.provenance is None:
        raise ConfigError("configuration has no profiling provenance")
    return config.provenance.occurrence_count / config.provenance.profile_size


def replay_count(config: TrojanConfig, aggregate: ProfileAggregate) -> int:
    """Number of profiled values inside the configuration's range."""
    return aggregate.count_within(config.trigger.lower, config.trigger.upper)
