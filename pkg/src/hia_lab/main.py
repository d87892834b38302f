"""Main entry point for the hia-lab application."""

import typer

app = typer.Typer(
    name="hia-lab",
    help="hia-lab - Hardware-trojan inference lab for CNN accelerators.",
)


@app.command()
def version() -> None:
    """Display the current version of hia-lab."""
    from hia_lab import __version__

    typer.echo(f"hia-lab version {__version__}")


@app.command()
def models() -> None:
    """List the available models and their attack scenarios."""
    from hia_lab.models.lenet import MODEL_BUILDERS, SCENARIO_LAYERS

    for name, builder in MODEL_BUILDERS.items():
        net = builder()
        untrusted = ", ".join(net.untrusted_layers)
        typer.echo(f"{name}: input {list(net.input_dims)}, untrusted {untrusted}")
    for scenario, layer in SCENARIO_LAYERS.items():
        typer.echo(f"{scenario.value}: {layer}")


if __name__ == "__main__":
    app()
