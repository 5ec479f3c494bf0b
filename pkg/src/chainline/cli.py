"""Command-line interface.

Exit codes: 0 success, 1 domain error (single-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import assets, configurator as cf, gascost
from .errors import ChainlineError, DecisionError
from .generator import generate_product, load_manifest, verify_product
from .model import DEFAULT_ENUMERATION_BOUND, count_configurations, validate_model
from .parser import parse_model


def _load_model(spec: str):
    """A model argument is either a path to a .fm file or a bundled model name."""
    path = Path(spec)
    if path.exists():
        return parse_model(path.read_text(encoding="utf-8"))
    return assets.load_bundled_model(spec.removesuffix(".fm"))


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def cli() -> None:
    """Configure and generate on-chain traceability products."""


@cli.command()
@click.argument("model")
@click.option("--max-features", default=DEFAULT_ENUMERATION_BOUND, show_default=True,
              help="Enumeration bound for void/dead-feature analysis.")
def validate(model: str, max_features: int) -> None:
    """Check a feature model for structural and semantic problems."""
    fm = _load_model(model)
    report = validate_model(fm, max_features=max_features)
    for line in report.violations:
        click.echo(f"violation: {line}")
    for line in report.findings:
        click.echo(f"finding: {line}")
    for line in report.notices:
        click.echo(f"notice: {line}")
    if not report.ok:
        sys.exit(1)
    click.echo(f"ok: {fm.name} ({len(fm.preorder)} features, {len(fm.constraints)} constraints)")


@cli.command()
@click.argument("model")
@click.option("--max-features", default=DEFAULT_ENUMERATION_BOUND, show_default=True)
def count(model: str, max_features: int) -> None:
    """Count the valid configurations of a model."""
    click.echo(count_configurations(_load_model(model), max_features=max_features))


def _parse_decision(spec: str) -> tuple[str, cf.State]:
    feature, _, value = spec.partition("=")
    value = value.lower()
    if not feature or value not in ("on", "off"):
        raise click.UsageError(f"--decide takes FEATURE=on|off, got {spec!r}")
    return feature, cf.State.SELECTED if value == "on" else cf.State.DESELECTED


@cli.command()
@click.argument("model")
@click.option("--decide", "decisions", multiple=True, metavar="FEATURE=on|off",
              help="Apply a decision; may be repeated.")
@click.option("--finalize", "do_finalize", is_flag=True,
              help="Auto-decide the remaining features, preferring deselection.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def configure(model: str, decisions: tuple[str, ...], do_finalize: bool, output: str) -> None:
    """Build a configuration from decisions and write it as JSON."""
    fm = _load_model(model)
    config = cf.new_configuration(fm)
    for spec in decisions:
        feature, value = _parse_decision(spec)
        try:
            result = cf.decide(config, feature, value)
        except DecisionError as exc:
            _fail(f"decision {spec} rejected: {exc}")
        if not result.accepted:
            _fail(f"decision {spec} rejected: {result.conflict}")
    if do_finalize:
        cf.finalize(config)
    Path(output).write_text(
        json.dumps(cf.serialize_configuration(config), indent=2) + "\n", encoding="utf-8"
    )
    status = config.status()
    click.echo(
        f"wrote {output} (valid={str(status.valid).lower()}, "
        f"complete={str(status.complete).lower()}, undecided={len(status.undecided)})"
    )


@cli.command()
@click.argument("model")
@click.argument("configuration", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True)
@click.option("--product-name", default=None, help="Defaults to the model name.")
@click.option("--template-dir", default=None, type=click.Path(file_okay=False, exists=True))
def generate(model: str, configuration: str, output: str, product_name: str | None,
             template_dir: str | None) -> None:
    """Generate a product from a complete configuration."""
    fm = _load_model(model)
    config = cf.load_configuration(fm, Path(configuration).read_text(encoding="utf-8"))
    manifest = generate_product(config, output, product_name=product_name,
                                template_dir=template_dir)
    click.echo(f"generated {len(manifest.artifacts)} artifacts in {output}")


@cli.command()
@click.argument("product_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--template-dir", default=None, type=click.Path(file_okay=False, exists=True))
def verify(product_dir: str, template_dir: str | None) -> None:
    """Re-check a generated product against its manifest and marker table."""
    manifest = load_manifest(product_dir)
    report = verify_product(manifest, product_dir, template_dir=template_dir)
    for finding in report.findings:
        click.echo(f"finding: {finding}")
    if not report.ok:
        sys.exit(1)
    click.echo(f"ok: {len(manifest.artifacts)} artifacts verified")


@cli.command()
@click.option("--scenarios", "scenarios_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Defaults to the bundled scenario fixtures.")
@click.option("--pair", default=None, help="Scenario pair to compare (e.g. spare_parts).")
@click.option("--from", "n_from", default=1, show_default=True)
@click.option("--to", "n_to", default=8, show_default=True)
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False), default=None,
              help="Write CSV here instead of stdout.")
def cost(scenarios_file: str | None, pair: str | None, n_from: int, n_to: int,
         csv_out: str | None) -> None:
    """Emit a cumulative gas-cost comparison table as CSV."""
    path = scenarios_file or assets.scenarios_path()
    scenarios = gascost.load_scenarios(path)
    pairs = gascost.scenario_pairs(scenarios)
    if not pairs:
        _fail("scenario file contains no <name>_reference/<name>_generated pair")
    if pair is not None:
        pairs = [p for p in pairs if p[0] == pair]
        if not pairs:
            _fail(f"no scenario pair named '{pair}'")
    elif len(pairs) > 1:
        click.echo(f"note: multiple pairs found, using '{pairs[0][0]}'", err=True)
    name, reference, generated = pairs[0]
    rows = gascost.compare_table(reference, generated, n_from, n_to)
    if csv_out:
        with open(csv_out, "w", newline="", encoding="utf-8") as fh:
            gascost.write_csv(rows, fh)
    else:
        gascost.write_csv(rows, sys.stdout)


@cli.command()
@click.option("--bind", default=None, metavar="HOST:PORT",
              help="Overrides the BIND_ADDR environment variable.")
def serve(bind: str | None) -> None:
    """Run the HTTP configuration service."""
    import uvicorn

    from .service import bind_address, create_app

    host, port = bind_address(bind)
    uvicorn.run(create_app(), host=host, port=port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except ChainlineError as exc:
        _fail(str(exc))
    except OSError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
