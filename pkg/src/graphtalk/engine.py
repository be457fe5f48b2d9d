"""Digest pipeline: document in, ranked graph plus fact database out.

This module wires the layers together for the CLI and HTTP service:
parse, build and rank the graph, mine summary and keyphrases, extract
relational facts, and assemble the fact database once per document.
Questions then run against the digested artifacts only.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import dialog, mining, relations
from .factdb import FactDB, build_factdb, export_clauses
from .ingest import Document, attach_ner, load_ner_sidecar, parse_conllu
from .relations import LexDB, SvoFact
from .textgraph import (
    GraphOptions,
    RankMap,
    TextGraph,
    build_graph,
    normalize_sentence_ranks,
    pagerank,
)

log = logging.getLogger(__name__)

DEFAULT_PORT = 8023


@dataclass
class EngineConfig:
    """Tunable knobs shared by the CLI and the HTTP service."""

    answers: int = dialog.DEFAULT_ANSWERS
    summary_size: int = 5
    keyphrase_count: int = 10
    graph: GraphOptions = field(default_factory=GraphOptions)
    lexdb_dir: str | None = None
    ontology_path: str | None = None
    port: int = DEFAULT_PORT
    workspace: str | None = None

    def resolve_lexdb_dir(self) -> str | None:
        return self.lexdb_dir or relations.default_lexdb_dir()


@dataclass
class DigestedDocument:
    """Everything derived from one document, ready for questioning."""

    doc_id: str
    document: Document
    graph: TextGraph
    ranks: RankMap
    summary: list[mining.SummaryEntry]
    keyphrases: list[mining.Keyphrase]
    svos: list[SvoFact]
    db: FactDB
    view: dialog.DocView
    digest_seconds: float


def digest(
    document: Document,
    config: EngineConfig | None = None,
    lex: LexDB | None = None,
) -> DigestedDocument:
    """Run the full pipeline over ``document``."""
    config = config or EngineConfig()
    started = time.perf_counter()
    graph = build_graph(document, config.graph)
    raw_ranks = pagerank(graph, config.graph)
    ranks = normalize_sentence_ranks(raw_ranks, document)
    summary = mining.extract_summary(document, ranks, config.summary_size)
    keyphrases = mining.extract_keyphrases(
        document, graph, ranks, config.keyphrase_count
    )
    svos = relations.extract_svo(document)
    if lex is not None:
        svos.extend(relations.lex_relations(document.first_occurrences(), lex))
    db = build_factdb(document, graph, ranks, summary, keyphrases, svos)
    view = dialog.DocView(db)
    elapsed = time.perf_counter() - started
    log.debug("digested %s: %d sentences in %.2fs",
              document.doc_id, len(document), elapsed)
    return DigestedDocument(
        doc_id=document.doc_id,
        document=document,
        graph=graph,
        ranks=ranks,
        summary=summary,
        keyphrases=keyphrases,
        svos=svos,
        db=db,
        view=view,
        digest_seconds=elapsed,
    )


def load_lex(config: EngineConfig) -> LexDB | None:
    directory = config.resolve_lexdb_dir()
    if directory is None:
        return None
    return relations.load_lexdb(directory)


def load_ontology(config: EngineConfig) -> list[SvoFact]:
    if config.ontology_path is None:
        return []
    return relations.load_ontology(
        Path(config.ontology_path).read_text(encoding="utf-8")
    )


def load_document_file(path: str | Path, doc_id: str | None = None) -> Document:
    """Read a CoNLL-U file, merging ``<path>.ner`` sidecar spans if present."""
    path = Path(path)
    doc = parse_conllu(path.read_text(encoding="utf-8"), doc_id or path.stem)
    sidecar_path = path.with_name(path.name + ".ner")
    if sidecar_path.is_file():
        sidecar = load_ner_sidecar(sidecar_path.read_text(encoding="utf-8"))
        doc = attach_ner(doc, sidecar)
    return doc


def export_path_for(workspace: str | Path, doc_id: str) -> Path:
    return Path(workspace) / f"{doc_id}.pro"


def answer_payload(
    dd: DigestedDocument,
    question: Document,
    memory: dialog.DialogMemory,
    config: EngineConfig,
    lex: LexDB | None = None,
    ontology: list[SvoFact] | None = None,
) -> tuple[dict, dialog.DialogMemory]:
    """Answer a question and shape the result for transport."""
    result, new_memory = dialog.answer(
        question,
        dd.db,
        dd.graph,
        lex=lex,
        memory=memory,
        n=config.answers,
        options=config.graph,
        ontology=tuple(ontology or ()),
        view=dd.view,
    )
    payload = {
        "answers": [
            {"id": a.sid, "text": a.text, "score": a.score}
            for a in result.answers
        ],
        "weak_match": result.weak_match,
        "marker": result.marker,
        "query_ranks": [[lemma, score] for lemma, score in result.query_ranks],
        "pers_words": [[lemma, score] for lemma, score in result.pers_words],
        "wh_hits": [[sid, text] for sid, text in result.wh_hits],
    }
    return payload, new_memory


def document_payload(dd: DigestedDocument) -> dict:
    """Digest summary exposed after loading a document."""
    return {
        "doc_id": dd.doc_id,
        "sentences": len(dd.document),
        "graph_nodes": dd.graph.node_count(),
        "graph_edges": dd.graph.edge_count(),
        "digest_seconds": dd.digest_seconds,
        "summary": [
            {"id": e.sid, "text": e.text, "rank": e.rank} for e in dd.summary
        ],
        "keyphrases": [
            {"text": p.text, "head": p.head_lemma, "score": p.score}
            for p in dd.keyphrases
        ],
        "fact_counts": dd.db.counts(),
    }


def rank_payload(dd: DigestedDocument, top: int) -> dict:
    """Word-cloud entries: top lemma ranks, scores summed per lemma."""
    merged: dict[str, float] = {}
    for node in dd.graph.lemma_nodes():
        merged[node.lemma] = merged.get(node.lemma, 0.0) + dd.ranks.get(node, 0.0)
    rows = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))[:max(top, 0)]
    return {
        "doc_id": dd.doc_id,
        "ranks": [[lemma, score] for lemma, score in rows],
    }


def export_document(dd: DigestedDocument) -> str:
    return export_clauses(dd.db)
