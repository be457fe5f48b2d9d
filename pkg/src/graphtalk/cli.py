"""Command-line interface: interactive REPL, HTTP server, batch export."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import engine
from .dialog import DialogMemory
from .engine import EngineConfig
from .ingest import plain_text_note
from .questions import load_question_bank, parse_question
from .service import batch_export
from .textgraph import GraphOptions

log = logging.getLogger(__name__)


def _make_config(answers: int, summary: int, keyphrases: int, first_in: bool,
                 lexdb: str | None, ontology: str | None,
                 workspace: str | None = None, port: int = engine.DEFAULT_PORT,
                 ) -> EngineConfig:
    return EngineConfig(
        answers=answers,
        summary_size=summary,
        keyphrase_count=keyphrases,
        graph=GraphOptions(enable_first_in=first_in),
        lexdb_dir=lexdb,
        ontology_path=ontology,
        workspace=workspace,
        port=port,
    )


@click.group()
@click.option("--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool) -> None:
    """Text-graph mining and question answering over CoNLL-U documents."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--answers", default=3, show_default=True,
              help="Answers per question.")
@click.option("--summary", default=5, show_default=True,
              help="Summary sentence count.")
@click.option("--keyphrases", default=10, show_default=True,
              help="Keyphrase count.")
@click.option("--first-in", is_flag=True, help="Enable first_in graph edges.")
@click.option("--export", "export_path", type=click.Path(dir_okay=False),
              default=None, help="Write the clause export to this file.")
@click.option("--save", "save_path", type=click.Path(dir_okay=False),
              default=None, help="Write a JSON transcript of the session.")
@click.option("--lexdb", type=click.Path(file_okay=False), default=None,
              help="Lexical database directory (data.noun, index.noun).")
@click.option("--ontology", type=click.Path(dir_okay=False), default=None,
              help="JSON ontology of extra svo facts.")
@click.option("--quiet", is_flag=True, help="Suppress summary and keyphrases.")
def talk(path: str, answers: int, summary: int, keyphrases: int,
         first_in: bool, export_path: str | None, save_path: str | None,
         lexdb: str | None, ontology: str | None, quiet: bool) -> None:
    """Digest a CoNLL-U document and answer questions interactively.

    Questions are parsed from a ``<PATH>.q.conllu`` question bank when
    one exists, with a small heuristic parser as fallback.  ``quit``,
    ``exit`` or end-of-input ends the session.
    """
    config = _make_config(answers, summary, keyphrases, first_in,
                          lexdb, ontology)
    lex = engine.load_lex(config)
    onto = engine.load_ontology(config)
    document = engine.load_document_file(path)
    dd = engine.digest(document, config, lex)

    bank_path = Path(path).with_name(Path(path).name + ".q.conllu")
    bank = {}
    if bank_path.is_file():
        bank = load_question_bank(bank_path.read_text(encoding="utf-8"))

    if export_path:
        Path(export_path).write_text(
            engine.export_document(dd), encoding="utf-8"
        )
        click.echo(f"exported facts to {export_path}")

    if not quiet:
        click.echo(f"digested {dd.doc_id}: {len(document)} sentences, "
                   f"{dd.graph.node_count()} nodes, "
                   f"{dd.graph.edge_count()} edges "
                   f"({dd.digest_seconds:.2f}s)")
        click.echo("summary:")
        for entry in dd.summary:
            click.echo(f"{entry.sid} : {entry.text}")
        click.echo("keyphrases: " +
                   "; ".join(p.text for p in dd.keyphrases))

    transcript = []
    memory = DialogMemory()
    while True:
        try:
            line = click.prompt("?", prompt_suffix=" ", default="",
                                show_default=False)
        except (EOFError, KeyboardInterrupt, click.Abort):
            break
        line = line.strip()
        if not line:
            continue
        if line.lower() in ("quit", "exit"):
            break
        try:
            question = parse_question(line, dd.db, bank)
        except ValueError as exc:
            click.echo(f"cannot parse question: {exc}")
            continue
        payload, memory = engine.answer_payload(
            dd, question, memory, config, lex, onto,
        )
        if payload["weak_match"]:
            click.echo("(weak match)")
        if not payload["answers"]:
            click.echo(payload["marker"] or "no relevant content")
        for row in payload["answers"]:
            click.echo(f"{row['id']} : {row['text']}")
        transcript.append({"question": line, "response": payload})

    if save_path:
        Path(save_path).write_text(
            json.dumps({"doc_id": dd.doc_id, "transcript": transcript},
                       indent=2) + "\n",
            encoding="utf-8",
        )
        click.echo(f"saved session to {save_path}")


@main.command()
@click.option("--port", default=engine.DEFAULT_PORT, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--workspace", type=click.Path(file_okay=False), default=None,
              help="Directory for persisted documents.")
@click.option("--first-in", is_flag=True, help="Enable first_in graph edges.")
@click.option("--lexdb", type=click.Path(file_okay=False), default=None)
@click.option("--ontology", type=click.Path(dir_okay=False), default=None)
def serve(port: int, host: str, workspace: str | None, first_in: bool,
          lexdb: str | None, ontology: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .http_api import create_app

    config = _make_config(3, 5, 10, first_in, lexdb, ontology,
                          workspace=workspace, port=port)
    app = create_app(config)
    uvicorn.run(app, host=host, port=port)


@main.command("export")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--first-in", is_flag=True, help="Enable first_in graph edges.")
@click.option("--lexdb", type=click.Path(file_okay=False), default=None)
def export_cmd(corpus_dir: str, out_dir: str, first_in: bool,
               lexdb: str | None) -> None:
    """Digest every .conllu file in CORPUS_DIR and write .pro exports."""
    config = _make_config(3, 5, 10, first_in, lexdb, None)
    report = batch_export(corpus_dir, out_dir, config)
    click.echo(json.dumps(report, indent=2))
    if report["failed"]:
        sys.exit(1)


@main.command()
def capabilities() -> None:
    """Print the ingestion contract as JSON."""
    click.echo(json.dumps(plain_text_note(), indent=2))


if __name__ == "__main__":
    main()
