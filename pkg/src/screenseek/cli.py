"""Command-line interface: build an index from a corpus, search it, serve
the HTTP API, or run the randomized oracle-equivalence battery.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .assets import write_image_assets
from .engine import open_engine
from .errors import QueryError, ScreenSeekError
from .indexing import build_index, save_index
from .ingest import IngestConfig, build_corpus, load_manifest


@click.group()
def main():
    """Search engine over mobile-app screen captures."""


@main.command("index")
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Corpus directory (one subdirectory per app).")
@click.option("--index", "index_dir", required=True,
              type=click.Path(file_okay=False),
              help="Output index directory.")
@click.option("--top-screens", default=6, show_default=True,
              help="Most-frequent screens kept per app.")
@click.option("--thumbnails/--no-thumbnails", default=True, show_default=True,
              help="Also write full-size copies and thumbnails.")
def index_cmd(corpus_dir, index_dir, top_screens, thumbnails):
    """Ingest a capture corpus and write a searchable index."""
    try:
        manifest = load_manifest(corpus_dir)
        records, report = build_corpus(manifest, IngestConfig(top_screens=top_screens))
        idx = build_index(records)
        save_index(idx, index_dir)
        if thumbnails:
            write_image_assets(records, index_dir)
    except ScreenSeekError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"indexed {report.kept} screens from {len(manifest.apps)} apps "
               f"({manifest.capture_count} captures)")
    for reason, count in report.as_dict().items():
        if reason != "kept":
            click.echo(f"  dropped[{reason}]: {count}")
    click.echo(f"index written to {index_dir}")


@main.command("search")
@click.argument("query")
@click.option("--index", "index_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--top-k", default=10, show_default=True)
@click.option("--color", default=None, help="Color filter (name or hex).")
@click.option("--tol", default=None, type=click.FloatRange(0.0, 1.0),
              help="Color tolerance slider value in [0,1].")
@click.option("--ui", "ui_types", multiple=True, help="Required ui type (repeatable).")
@click.option("--screen-type", "screen_types", multiple=True,
              help="Allowed screen type (repeatable).")
def search_cmd(query, index_dir, top_k, color, tol, ui_types, screen_types):
    """Run a query against an index and print the top results."""
    try:
        engine = open_engine(index_dir)
        page = engine.search(query, color=color, tolerance=tol,
                             ui_types=ui_types, screen_types=screen_types,
                             page=0, page_size=min(top_k, 50))
    except QueryError as exc:
        where = f" (at offset {exc.offset})" if exc.offset is not None else ""
        raise click.ClickException(f"{exc.code}: {exc}{where}") from exc
    except (ScreenSeekError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc

    click.echo(f"query: {page.canonical_query}")
    click.echo(f"total matches: {page.total}")
    if not page.results:
        return
    width = max(len(hit.doc_id) for hit in page.results)
    for rank, hit in enumerate(page.results, start=1):
        click.echo(f"{rank:>3}  {hit.score:8.3f}  {hit.doc_id:<{width}}  "
                   f"{hit.app_name}")


@main.command("serve")
@click.option("--index", "index_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--favorites", default=None, type=click.Path(dir_okay=False),
              help="Favorites file (defaults to favorites.json inside the index).")
@click.option("--ui", "ui_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Directory of built web UI assets to serve at /.")
def serve_cmd(index_dir, host, port, favorites, ui_dir):
    """Serve the HTTP API (and optionally the web UI) for an index."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(index_dir, favorites_path=favorites, ui_dir=ui_dir)
    except ScreenSeekError as exc:
        raise click.ClickException(str(exc)) from exc
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command("oracle-check")
@click.option("--index", "index_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--seed", default=0, show_default=True)
@click.option("--queries", default=1000, show_default=True)
def oracle_check_cmd(index_dir, seed, queries):
    """Check indexed retrieval against the brute-force scan oracle."""
    from .indexing import load_index
    from .synth import oracle_battery

    try:
        index = load_index(index_dir)
    except ScreenSeekError as exc:
        raise click.ClickException(str(exc)) from exc

    mismatches = oracle_battery(index, index.records, seed=seed, n_queries=queries)
    if mismatches:
        for mm in mismatches[:10]:
            click.echo(f"mismatch on query #{mm['query_index']}: {mm['query']}\n"
                       f"  only indexed: {mm['only_indexed']}\n"
                       f"  only scanned: {mm['only_scanned']}", err=True)
        click.echo(f"{len(mismatches)}/{queries} queries diverged from the oracle",
                   err=True)
        sys.exit(1)
    click.echo(f"{queries} randomized queries matched the scan oracle "
               f"on {len(index)} documents (seed={seed})")


if __name__ == "__main__":
    main()
