"""Document and session stores shared by the HTTP service and the CLI.

Documents digest once and are read-only afterwards; sessions hold a
dialog memory each and serialize their own queries with a lock.  A
workspace directory makes documents durable: the source CoNLL-U and the
clause export are written on load and picked up again on restart, and a
reloaded document re-exports byte-identically.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from . import engine
from .dialog import DialogMemory
from .engine import DigestedDocument, EngineConfig
from .factdb import export_clauses, parse_clauses
from .ingest import attach_ner, parse_conllu, to_conllu
from .questions import parse_question
from .relations import LexDB, SvoFact

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"

_DOC_ID = re.compile(r"[A-Za-z0-9][A-Za-z0-9_.-]*\Z")


class ServiceError(Exception):
    """Service-level failure with an HTTP-ish status code."""

    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class Session:
    session_id: str
    doc_id: str
    memory: DialogMemory = field(default_factory=DialogMemory)
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: float = field(default_factory=time.time)
    queries: int = 0


class DocumentStore:
    """Digested documents by id, optionally persisted to a workspace."""

    def __init__(self, config: EngineConfig, lex: LexDB | None = None,
                 ontology: list[SvoFact] | None = None):
        self.config = config
        self.lex = lex
        self.ontology = ontology or []
        self._documents: dict[str, DigestedDocument] = {}
        self._exports: dict[str, str] = {}
        self._lock = threading.Lock()
        if config.workspace:
            Path(config.workspace).mkdir(parents=True, exist_ok=True)
            self._restore_workspace()

    def _restore_workspace(self) -> None:
        workspace = Path(self.config.workspace)
        for conllu_path in sorted(workspace.glob("*.conllu")):
            doc_id = conllu_path.stem
            try:
                document = parse_conllu(
                    conllu_path.read_text(encoding="utf-8"), doc_id
                )
                dd = engine.digest(document, self.config, self.lex)
            except ValueError as exc:
                log.warning("skipping %s: %s", conllu_path.name, exc)
                continue
            pro_path = workspace / f"{doc_id}.pro"
            if pro_path.is_file():
                stored = pro_path.read_text(encoding="utf-8")
                try:
                    fresh = parse_clauses(stored) == dd.db
                except ValueError:
                    fresh = False
                if fresh:
                    self._exports[doc_id] = stored
                else:
                    log.warning(
                        "stored export for %s is stale; regenerating", doc_id
                    )
            self._documents[doc_id] = dd
            self._exports.setdefault(doc_id, export_clauses(dd.db))

    def add(self, conllu_text: str, doc_id: str | None = None,
            ner_sidecar: list | None = None) -> DigestedDocument:
        doc_id = doc_id or f"doc-{uuid.uuid4().hex[:8]}"
        if not _DOC_ID.match(doc_id):
            raise ServiceError(422, f"invalid document id {doc_id!r}")
        with self._lock:
            if doc_id in self._documents:
                raise ServiceError(409, f"document {doc_id!r} already exists")
        try:
            document = parse_conllu(conllu_text, doc_id)
            if ner_sidecar:
                spans = [
                    (int(entry["sentence"]),
                     [(int(s[0]), str(s[1]), str(s[2]))
                      for s in entry.get("spans", [])])
                    for entry in ner_sidecar
                ]
                document = attach_ner(document, spans)
            dd = engine.digest(document, self.config, self.lex)
        except ValueError as exc:
            raise ServiceError(422, str(exc))
        export = export_clauses(dd.db)
        with self._lock:
            self._documents[doc_id] = dd
            self._exports[doc_id] = export
        if self.config.workspace:
            workspace = Path(self.config.workspace)
            (workspace / f"{doc_id}.conllu").write_text(
                to_conllu(document), encoding="utf-8"
            )
            (workspace / f"{doc_id}.pro").write_text(export, encoding="utf-8")
        return dd

    def get(self, doc_id: str) -> DigestedDocument:
        with self._lock:
            dd = self._documents.get(doc_id)
        if dd is None:
            raise ServiceError(404, f"no document {doc_id!r}")
        return dd

    def export(self, doc_id: str) -> str:
        self.get(doc_id)
        with self._lock:
            return self._exports[doc_id]

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._documents)


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, doc_id: str) -> Session:
        session = Session(session_id=f"sess-{uuid.uuid4().hex[:12]}",
                          doc_id=doc_id)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ServiceError(404, f"no session {session_id!r}")
        return session

    def delete(self, session_id: str) -> None:
        with self._lock:
            if session_id not in self._sessions:
                raise ServiceError(404, f"no session {session_id!r}")
            del self._sessions[session_id]

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)


class Service:
    """One engine instance serving documents and dialog sessions."""

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self.lex = engine.load_lex(self.config)
        self.ontology = engine.load_ontology(self.config)
        self.documents = DocumentStore(self.config, self.lex, self.ontology)
        self.sessions = SessionStore()

    def query(self, session_id: str, question_text: str | None = None,
              question_conllu: str | None = None) -> dict:
        session = self.sessions.get(session_id)
        dd = self.documents.get(session.doc_id)
        if question_conllu:
            try:
                question = parse_conllu(question_conllu, "question")
            except ValueError as exc:
                raise ServiceError(422, str(exc))
        elif question_text and question_text.strip():
            try:
                question = parse_question(question_text, dd.db)
            except ValueError as exc:
                raise ServiceError(422, str(exc))
        else:
            raise ServiceError(422, "provide question_text or question_conllu")
        with session.lock:
            payload, session.memory = engine.answer_payload(
                dd, question, session.memory, self.config,
                self.lex, self.ontology,
            )
            session.queries += 1
        payload["session_id"] = session_id
        payload["doc_id"] = dd.doc_id
        return payload


def batch_export(corpus_dir: str | Path, out_dir: str | Path,
                 config: EngineConfig | None = None) -> dict:
    """Digest every ``*.conllu`` under ``corpus_dir`` and write exports.

    Each document becomes ``<out_dir>/<name>.pro``.  Failures are
    recorded in the report and do not stop the run.
    """
    config = config or EngineConfig()
    lex = engine.load_lex(config)
    corpus_dir = Path(corpus_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for path in sorted(corpus_dir.glob("*.conllu")):
        row: dict = {"file": path.name, "doc_id": path.stem}
        try:
            document = engine.load_document_file(path)
            dd = engine.digest(document, config, lex)
            out_path = out_dir / f"{path.stem}.pro"
            out_path.write_text(export_clauses(dd.db), encoding="utf-8")
            row["facts"] = dd.db.counts()
            row["output"] = out_path.name
            row["error"] = None
        except (ValueError, OSError) as exc:
            row["facts"] = None
            row["output"] = None
            row["error"] = str(exc)
        rows.append(row)
    report = {
        "schema_version": SCHEMA_VERSION,
        "documents": rows,
        "exported": sum(1 for r in rows if r["error"] is None),
        "failed": sum(1 for r in rows if r["error"] is not None),
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2) + "\n", encoding="utf-8"
    )
    return report
