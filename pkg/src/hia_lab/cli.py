"""Click-based CLI for hia-lab.

This module ties the pipeline together: profile a validation set and design
a trigger, bundle it with the weights, then infer, evaluate or measure the
overhead of the armed network.

Commands:
    profile: Design a trigger + payload and write the trojan config
    arm: Validate a config against a model and write a bundle directory
    infer: Benign and armed top-1 per image
    eval: Benign-versus-armed evaluation report
    motiv: Single-layer shuffle experiment
    overhead: Counter delta and wall-time overhead report

Datasets are given as ``IMAGES,LABELS`` (MNIST IDX), a single CIFAR-10
binary file, or ``fixture:COUNT[:SEED]``. Weights are an SWF1 file or
``fixture:SEED``.

Example:
    $ hia profile --model lenet --weights fixture:0 --dataset fixture:200 \\
        --scenario sn1 --out trojan.json
    $ hia eval --model lenet --weights fixture:0 --config trojan.json \\
        --dataset fixture:1000:1 --out report.json
"""

import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import click
from rich.console import Console
from rich.table import Table

from hia_lab.config import app_settings, eval_settings, trojan_settings
from hia_lab.core.tensor import Tensor
from hia_lab.dataio.datasets import LabeledImages, read_cifar10_bin, read_mnist_idx
from hia_lab.dataio.reports import write_report
from hia_lab.dataio.trojan_files import read_trojan_config, write_trojan_config
from hia_lab.dataio.weights import read_weights, write_weights
from hia_lab.engine.layers import PoolKind
from hia_lab.engine.network import NetworkSpec, check_trojan, validate_weights
from hia_lab.errors import HIAError
from hia_lab.evaluation.evaluate import evaluate, infer
from hia_lab.evaluation.experiments import measure_overhead, run_motivational
from hia_lab.evaluation.histogram import build_sidecar
from hia_lab.models.fixtures import fixture_dataset, fixture_weights
from hia_lab.models.lenet import MODEL_BUILDERS, build_network, scenario_layer
from hia_lab.trojan.design import design_trigger_detailed
from hia_lab.trojan.spec import RoVCriterion, TrojanConfig

F = TypeVar("F", bound=Callable[..., Any])

BUNDLE_WEIGHTS = "weights.swf"
BUNDLE_CONFIG = "trojan.json"
FIXTURE_PREFIX = "fixture:"

console = Console()
logger = logging.getLogger(__name__)


def setup_logging(verbose: bool) -> None:
    """Configure logging based on verbosity level.

    Args:
        verbose: If True, set DEBUG level; otherwise the configured log level.
    """
    level = logging.DEBUG if verbose else app_settings.log_level.upper()
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def fail(error: HIAError | OSError) -> NoReturn:
    """Report an error and exit with its code (3 for plain I/O errors)."""
    logger.error(f"{type(error).__name__}: {error}")
    click.echo(f"Error: {error}", err=True)
    sys.exit(getattr(error, "exit_code", HIAError.exit_code))


def load_network(model: str, pool: str) -> NetworkSpec:
    return build_network(model, PoolKind(pool))


def load_weights(source: str, net: NetworkSpec) -> dict[str, Tensor]:
    """Weights from an SWF1 path or ``fixture:SEED``."""
    if source.startswith(FIXTURE_PREFIX):
        seed = source[len(FIXTURE_PREFIX) :]
        if not seed.isdigit():
            raise click.BadParameter(
                f"expected fixture:SEED, got {source!r}", param_hint="--weights"
            )
        return fixture_weights(net, int(seed))
    weights = read_weights(source)
    validate_weights(net, weights)
    return weights


def load_dataset(source: str, net: NetworkSpec) -> LabeledImages:
    """Images from ``IMAGES,LABELS``, a CIFAR-10 file or ``fixture:COUNT[:SEED]``."""
    if source.startswith(FIXTURE_PREFIX):
        parts = source[len(FIXTURE_PREFIX) :].split(":")
        if not 1 <= len(parts) <= 2 or not all(p.isdigit() for p in parts):
            raise click.BadParameter(
                f"expected fixture:COUNT[:SEED], got {source!r}",
                param_hint="--dataset",
            )
        seed = int(parts[1]) if len(parts) == 2 else 0
        return fixture_dataset(net, int(parts[0]), seed)
    paths = source.split(",")
    if len(paths) == 2:
        return read_mnist_idx(paths[0], paths[1])
    if len(paths) == 1:
        return read_cifar10_bin(paths[0])
    raise click.BadParameter(
        f"expected PATH or IMAGES,LABELS, got {source!r}", param_hint="--dataset"
    )


def resolve_layer(layer: str | None, scenario: str | None) -> str:
    if (layer is None) == (scenario is None):
        raise click.UsageError("give exactly one of --layer and --scenario")
    if scenario is not None:
        return scenario_layer(scenario)
    assert layer is not None
    return layer


def load_armed(
    net: NetworkSpec,
    bundle: Path | None,
    weights: str | None,
    config: Path | None,
) -> tuple[dict[str, Tensor], TrojanConfig]:
    """Weights and trojan config from a bundle or from --weights/--config."""
    if bundle is not None:
        if weights is not None or config is not None:
            raise click.UsageError("--bundle replaces --weights and --config")
        weights, config = str(bundle / BUNDLE_WEIGHTS), bundle / BUNDLE_CONFIG
    if weights is None or config is None:
        raise click.UsageError("give --bundle, or both --weights and --config")
    loaded = load_weights(weights, net)
    trojan = read_trojan_config(config)
    check_trojan(net, trojan)
    return loaded, trojan


def model_options(fn: F) -> F:
    """--model and --pool."""
    fn = click.option(
        "--pool",
        type=click.Choice([k.value for k in PoolKind]),
        default=PoolKind.max.value,
        show_default=True,
        help="Pooling reduction of the pool layers",
    )(fn)
    fn = click.option(
        "--model",
        type=click.Choice(sorted(MODEL_BUILDERS)),
        default="lenet",
        show_default=True,
        help="Network architecture",
    )(fn)
    return fn


def verbose_option(fn: F) -> F:
    return click.option(
        "--verbose",
        "-v",
        is_flag=True,
        default=False,
        help="Enable debug logging",
    )(fn)


def workers_option(fn: F) -> F:
    return click.option(
        "--workers",
        type=click.IntRange(min=1),
        default=None,
        help="Worker threads for per-image jobs (default: HIA_EVAL_WORKERS)",
    )(fn)


def armed_options(fn: F) -> F:
    """--bundle, or --weights and --config."""
    fn = click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="Trojan config file",
    )(fn)
    fn = click.option(
        "--weights",
        default=None,
        help="SWF1 weight file or fixture:SEED",
    )(fn)
    fn = click.option(
        "--bundle",
        type=click.Path(exists=True, file_okay=False, path_type=Path),
        default=None,
        help="Bundle directory written by 'arm'",
    )(fn)
    return fn


@click.group()
@click.version_option(package_name="hia-lab")
def main() -> None:
    """Hardware-trojan inference lab.

    Design stealthy triggers from validation-set statistics, arm them on a
    CNN inference engine and evaluate their effect.
    """
    pass


@main.command()
@model_options
@click.option("--weights", required=True, help="SWF1 weight file or fixture:SEED")
@click.option("--dataset", required=True, help="Validation set (P images)")
@click.option("--layer", default=None, help="Untrusted layer to monitor and attack")
@click.option("--scenario", default=None, help="Scenario Sn1..Sn5 instead of --layer")
@click.option(
    "--rate",
    type=float,
    default=None,
    help="Occurrence rate M/P (default: HIA_TROJAN_TARGET_RATE)",
)
@click.option("--count", type=int, default=None, help="Occurrence count M")
@click.option("--seed", type=int, default=None, help="Index search seed")
@click.option("--max-tries", type=click.IntRange(min=1), default=None)
@click.option("--order-factor", type=int, default=None, help="Payload order factor f")
@click.option(
    "--out",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Trojan config file to write",
)
@click.option(
    "--sidecar",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Histogram sidecar path (default: <out>.hist.json)",
)
@workers_option
@verbose_option
def profile(
    model: str,
    pool: str,
    weights: str,
    dataset: str,
    layer: str | None,
    scenario: str | None,
    rate: float | None,
    count: int | None,
    seed: int | None,
    max_tries: int | None,
    order_factor: int | None,
    out: Path,
    sidecar: Path | None,
    workers: int | None,
    verbose: bool,
) -> None:
    """Design a trigger and payload from validation-set statistics.

    Profiles random elements of the target layer until one has a range of
    values holding exactly M profiled values, then writes the trojan config
    and a histogram sidecar.
    """
    setup_logging(verbose)
    if rate is not None and count is not None:
        raise click.UsageError("--rate and --count are mutually exclusive")

    try:
        target = resolve_layer(layer, scenario)
        net = load_network(model, pool)
        loaded = load_weights(weights, net)
        images = load_dataset(dataset, net)
        size = len(images)
        if count is not None:
            if not 1 <= count <= size:
                raise click.UsageError(f"--count {count} outside [1, {size}]")
            criterion = RoVCriterion(count)
        else:
            chosen = trojan_settings.target_rate if rate is None else rate
            if not 0.0 < chosen <= 1.0:
                raise click.UsageError(f"--rate {chosen} outside (0, 1]")
            criterion = RoVCriterion.from_rate(chosen, max(size, 1))

        design = design_trigger_detailed(
            net,
            loaded,
            images.images,
            target,
            criterion=criterion,
            search_seed=seed,
            max_tries=max_tries,
            order_factor=order_factor,
            workers=workers or eval_settings.workers,
        )
        write_trojan_config(out, design.config)
        sidecar = sidecar or out.with_suffix(".hist.json")
        write_report(sidecar, build_sidecar(design))
    except (HIAError, OSError) as e:
        fail(e)

    trigger, payload = design.config.trigger, design.config.payload
    table = Table(title=f"Trojan on {net.name}/{target}")
    table.add_column("Field")
    table.add_column("Value", justify="right")
    index = trigger.index
    table.add_row("index (k, n, m)", f"{index.channel}, {index.row}, {index.col}")
    table.add_row("range [a, b]", f"[{trigger.lower!r}, {trigger.upper!r}]")
    table.add_row("M / P", f"{criterion.count} / {size}")
    table.add_row(
        "payload", f"{payload.kind.value}, f={payload.factor}, l={payload.channels}"
    )
    table.add_row("tries", str(design.tries))
    console.print(table)
    click.echo(f"Wrote {out} and {sidecar}")


@main.command()
@model_options
@click.option("--weights", required=True, help="SWF1 weight file or fixture:SEED")
@click.option(
    "--config",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Trojan config file",
)
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Bundle directory to write",
)
@verbose_option
def arm(
    model: str, pool: str, weights: str, config: Path, out: Path, verbose: bool
) -> None:
    """Bundle weights and a validated trojan config.

    The bundle directory holds weights.swf and trojan.json and can replace
    --weights/--config in infer, eval and overhead.
    """
    setup_logging(verbose)

    try:
        net = load_network(model, pool)
        loaded = load_weights(weights, net)
        trojan = read_trojan_config(config)
        check_trojan(net, trojan)
        out.mkdir(parents=True, exist_ok=True)
        write_weights(out / BUNDLE_WEIGHTS, loaded)
        write_trojan_config(out / BUNDLE_CONFIG, trojan)
    except (HIAError, OSError) as e:
        fail(e)

    click.echo(f"Armed {net.name}/{trojan.layer} in {out}")


@main.command("infer")
@model_options
@armed_options
@click.option("--dataset", required=True, help="Images to classify")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Optional JSON report",
)
@workers_option
@verbose_option
def infer_command(
    model: str,
    pool: str,
    bundle: Path | None,
    weights: str | None,
    config: Path | None,
    dataset: str,
    out: Path | None,
    workers: int | None,
    verbose: bool,
) -> None:
    """Print benign and armed top-1 per image."""
    setup_logging(verbose)

    try:
        net = load_network(model, pool)
        loaded, trojan = load_armed(net, bundle, weights, config)
        images = load_dataset(dataset, net)
        report = infer(net, loaded, images, trojan, workers)
        if out is not None:
            write_report(out, report)
    except (HIAError, OSError) as e:
        fail(e)

    table = Table(title=f"{net.name} predictions ({trojan.layer} armed)")
    for column in ("image", "label", "benign", "armed", "fired"):
        table.add_column(column, justify="right")
    for record in report.records:
        table.add_row(
            str(record.image_id),
            str(record.label),
            str(record.benign_top1),
            str(record.armed_top1),
            "yes" if record.fired else "",
        )
    console.print(table)


@main.command("eval")
@model_options
@armed_options
@click.option("--dataset", required=True, help="Evaluation images")
@click.option(
    "--batch", type=click.IntRange(min=1), default=None, help="Images per batch"
)
@click.option("--threshold", type=click.FloatRange(min=0), default=None)
@click.option(
    "--out",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="EvalReport JSON to write",
)
@workers_option
@verbose_option
def eval_command(
    model: str,
    pool: str,
    bundle: Path | None,
    weights: str | None,
    config: Path | None,
    dataset: str,
    batch: int | None,
    threshold: float | None,
    out: Path,
    workers: int | None,
    verbose: bool,
) -> None:
    """Evaluate benign versus armed inference over a dataset."""
    setup_logging(verbose)

    try:
        net = load_network(model, pool)
        loaded, trojan = load_armed(net, bundle, weights, config)
        images = load_dataset(dataset, net)
        report = evaluate(net, loaded, trojan, images, batch, threshold, workers)
        write_report(out, report)
    except (HIAError, OSError) as e:
        fail(e)

    table = Table(title=f"{net.name}/{report.layer}: triggers per batch")
    for column in ("batch", "start", "size", "triggers", "flips"):
        table.add_column(column, justify="right")
    for summary in report.batches:
        table.add_row(
            str(summary.index),
            str(summary.start),
            str(summary.size),
            str(summary.triggers),
            str(summary.flips),
        )
    console.print(table)
    aggregates = report.aggregates
    click.echo(
        f"Fired {aggregates.triggers}/{aggregates.images}, "
        f"flip rate among fired {aggregates.flip_rate_among_fired:.3f}, "
        f"mean changed fraction {aggregates.mean_changed_fraction_fired:.3f}"
    )
    click.echo(f"Wrote {out}")


@main.command()
@click.option(
    "--seeds",
    type=click.IntRange(min=1),
    default=None,
    help="Seeds 0..N-1 (default: HIA_EVAL_MOTIV_SEEDS)",
)
@click.option("--threshold", type=click.FloatRange(min=0), default=None)
@click.option("--factor", type=int, default=1, show_default=True, help="Bank rotation")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Optional JSON report",
)
@verbose_option
def motiv(
    seeds: int | None,
    threshold: float | None,
    factor: int,
    out: Path | None,
    verbose: bool,
) -> None:
    """Changed fraction of a convolution with its filter banks rotated."""
    setup_logging(verbose)

    try:
        report = run_motivational(
            range(seeds or eval_settings.motiv_seeds), threshold, factor
        )
        if out is not None:
            write_report(out, report)
    except (HIAError, OSError) as e:
        fail(e)

    table = Table(title=f"Changed fraction at threshold {report.threshold}")
    table.add_column("seed", justify="right")
    table.add_column("fraction", justify="right")
    for record in report.records:
        table.add_row(str(record.seed), f"{record.changed_fraction:.4f}")
    console.print(table)
    click.echo(
        f"Mean {report.mean_changed_fraction:.4f} "
        f"(published single instance: {report.reference_fraction:.2f})"
    )


@main.command()
@model_options
@armed_options
@click.option("--dataset", required=True, help="Images to sample from")
@click.option(
    "--sample",
    type=click.IntRange(min=1),
    default=None,
    help="Images timed (default: HIA_EVAL_OVERHEAD_SAMPLE)",
)
@click.option("--repeats", type=click.IntRange(min=1), default=None)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Optional JSON report",
)
@verbose_option
def overhead(
    model: str,
    pool: str,
    bundle: Path | None,
    weights: str | None,
    config: Path | None,
    dataset: str,
    sample: int | None,
    repeats: int | None,
    out: Path | None,
    verbose: bool,
) -> None:
    """Report the counter delta and wall-time overhead of arming."""
    setup_logging(verbose)

    try:
        net = load_network(model, pool)
        loaded, trojan = load_armed(net, bundle, weights, config)
        images = load_dataset(dataset, net)
        chosen = images.images[: sample or eval_settings.overhead_sample]
        report = measure_overhead(net, loaded, trojan, chosen, repeats)
        if out is not None:
            write_report(out, report)
    except (HIAError, OSError) as e:
        fail(e)

    delta = report.unfired_counter_delta
    click.echo(
        f"Unfired images: {report.unfired_images}, fired: {report.fired_images}"
    )
    if delta is not None:
        click.echo(
            f"Unfired counter delta: macs {delta.macs:+d}, "
            f"comparisons {delta.comparisons:+d}, "
            f"perm applications {delta.perm_applications:+d}"
        )
    elif report.unfired_images:
        click.echo("Unfired counter delta differs between images")
    click.echo(
        f"Permutation applications per fired run: {report.expected_perm_applications}"
    )
    if report.timing.median_overhead_pct is not None:
        click.echo(
            f"Median wall-time overhead (non-deterministic): "
            f"{report.timing.median_overhead_pct:.3f}%"
        )
