"""
Command line for the sutured TQFT library.

Output is line oriented: one result per line, comments prefixed with ``#``.
Exit codes: 0 on success, 1 when a boolean command answers "false", 2 on
malformed input or any other error.
"""

import logging
import sys

import click

from sutured.config import Config
from sutured.services.tqft_service import TqftService
from sutured.utils import serialization as codec

logger = logging.getLogger(__name__)

RINGS = click.Choice(["f2", "z"], case_sensitive=False)


class InputError(click.ClickException):
    exit_code = 2


def _unwrap(result):
    if not result["success"]:
        for violation in result.get("violations", [])[:5]:
            click.echo(f"# [{violation['code']}] {violation['message']} (at {violation['witness']})", err=True)
        raise InputError(result["error"])
    return result["data"]


def _read_json(path):
    try:
        with click.open_file(path) as handle:
            return codec.load_json(handle.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _service(ctx, ring=None):
    return TqftService(ring or ctx.obj["ring"])


@click.group()
@click.option("--log-level", default=None, help="Logging level (defaults to SUTURED_LOG_LEVEL).")
@click.pass_context
def cli(ctx, log_level):
    """Contact elements, gluings and disk computations for sutured surfaces."""
    logging.basicConfig(level=(log_level or Config.SUTURED_LOG_LEVEL).upper())
    ctx.ensure_object(dict)
    ctx.obj.setdefault("ring", Config.SUTURED_DEFAULT_RING)


@cli.command()
@click.option("--ring", type=RINGS, default=None, help="Coefficient ring.")
@click.option("--diagram", default=None, help="Chord diagram such as 1-4,2-3,5-6.")
@click.option("--file", "path", type=click.Path(), default=None, help="Surface + dividing set JSON ('-' for stdin).")
@click.option("--json", "as_json", is_flag=True, help="Print the full JSON record.")
@click.pass_context
def contact(ctx, ring, diagram, path, as_json):
    """Print the contact element c(K)."""
    if (diagram is None) == (path is None):
        raise InputError("give exactly one of --diagram and --file")
    service = _service(ctx, ring)
    if diagram is not None:
        data = _unwrap(service.contact_element(diagram=diagram))
    else:
        data = _unwrap(service.contact_element(dividing_set=_read_json(path)))
    click.echo(codec.dump_json(data) if as_json else data["value"])


@cli.command("enumerate")
@click.argument("n", type=int)
@click.option("--ring", type=RINGS, default=None)
@click.option("--count-only", is_flag=True, help="Only print the number of diagrams.")
@click.pass_context
def enumerate_command(ctx, n, ring, count_only):
    """Stream every chord diagram on (D², F(N)) with its contact element."""
    data = _unwrap(_service(ctx, ring).enumerate_diagrams(n))
    if count_only:
        click.echo(len(data))
        return
    click.echo(f"# N={n} diagrams={len(data)}")
    for row in data:
        click.echo(f"{row['diagram']}\t{row['contact']}")


@cli.command()
@click.argument("path", type=click.Path())
@click.option("--ring", type=RINGS, default=None)
@click.pass_context
def glue(ctx, path, ring):
    """Glue a surface (JSON with "surface" and "gluing") and print Σ_τ and Φ_τ."""
    data = _unwrap(_service(ctx, ring).glue(_read_json(path)))
    click.echo(codec.dump_json(data))


@cli.command()
@click.argument("diagram")
@click.option("--ring", type=RINGS, default=None)
@click.pass_context
def bypass(ctx, diagram, ring):
    """Print every bypass triple of DIAGRAM and the signs that cancel it."""
    triples = _unwrap(_service(ctx, ring).bypass(diagram))
    click.echo(f"# {len(triples)} bypass sites")
    for triple in triples:
        signs = ",".join(str(s) for s in triple["signs"]) if triple["signs"] else "none"
        click.echo(f"{' | '.join(triple['members'])}\t{' | '.join(triple['contact'])}\tsigns={signs}")
    ctx.exit(0 if all(t["signs"] for t in triples) else 1)


@cli.command()
@click.argument("first")
@click.argument("second")
@click.pass_context
def match(ctx, first, second):
    """Decide whether two diagrams glue to one circle (exit 0) or not (exit 1)."""
    data = _unwrap(_service(ctx).match(first, second))
    click.echo(f"oracle={str(data['oracle']).lower()} wedge={str(data['wedge']).lower()} loops={data['loops']}")
    if not data["agree"]:
        click.echo("# the cycle oracle and the wedge criterion disagree", err=True)
    ctx.exit(0 if data["oracle"] else 1)


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--diagram", required=True)
@click.option("--base", type=int, default=0, help="Turn the disk by this many suture pairs first.")
@click.pass_context
def torus(ctx, n, p, q, diagram, base):
    """Pairing <φ(c(K)) | c(K)> for the solid torus; exit 0 when tight."""
    data = _unwrap(_service(ctx).torus(diagram, n, p, q, base))
    click.echo(f"pairing={data['pairing']} tight={str(data['tight']).lower()} "
               f"oracle={str(data['oracle']).lower()} step={data['step']}")
    ctx.exit(0 if data["tight"] else 1)


@cli.command()
@click.option("--seed", type=int, default=None, help="Corpus seed (defaults to SUTURED_SEED).")
@click.option("--max-n", type=int, default=None, help="Largest disk (defaults to SUTURED_MAX_N).")
@click.option("--corpus-size", type=int, default=None, help="Gluing instances (defaults to SUTURED_CORPUS_SIZE).")
@click.pass_context
def axioms(ctx, seed, max_n, corpus_size):
    """Run the axiom harness; one JSON report per line."""
    seed = Config.SUTURED_SEED if seed is None else seed
    data = _unwrap(_service(ctx).run_axioms(
        seed,
        Config.SUTURED_MAX_N if max_n is None else max_n,
        Config.SUTURED_CORPUS_SIZE if corpus_size is None else corpus_size,
    ))
    click.echo(f"# seed={seed} checks={len(data)}")
    for report in data:
        click.echo(codec.dump_json(report))
    ctx.exit(0 if all(r["verdict"] for r in data) else 1)


@cli.command()
@click.argument("path", type=click.Path())
@click.option("--keep-f1", is_flag=True, help="Carry (D², F(1)) components as atomic pieces.")
@click.pass_context
def decompose(ctx, path, keep_f1):
    """Quadrangulate a surface and print the cut arcs and pieces."""
    data = _unwrap(_service(ctx).decompose(_read_json(path), keep_f1))
    click.echo(f"# {len(data['arcs'])} arcs, pieces: {', '.join(p['kind'] for p in data['pieces'])}")
    click.echo(codec.dump_json(data))


def run(argv=None):
    """Run the command line and return its exit code."""
    try:
        result = cli.main(args=argv, prog_name="sutured", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 2
    return result if isinstance(result, int) else 0


def main():
    sys.exit(run())
