"""HTTP face of the service.

Thin FastAPI wiring around :class:`graphtalk.service.Service`: endpoints
convert transport shapes, the service owns all behavior.  Every JSON
response carries ``schema_version``; the clause export is served as
plain text with the version in the ``X-Schema-Version`` header so its
bytes stay exactly those of :func:`graphtalk.factdb.export_clauses`.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import _rankcore
from .engine import EngineConfig, document_payload, rank_payload
from .service import SCHEMA_VERSION, Service, ServiceError


class DocumentIn(BaseModel):
    conllu: str
    doc_id: str | None = None
    ner: list[dict] | None = None


class SessionIn(BaseModel):
    doc_id: str


class QueryIn(BaseModel):
    question_text: str | None = None
    question_conllu: str | None = None


def _versioned(payload: dict, status: int = 200) -> JSONResponse:
    payload.setdefault("schema_version", SCHEMA_VERSION)
    return JSONResponse(payload, status_code=status)


def create_app(config: EngineConfig | None = None,
               service: Service | None = None) -> FastAPI:
    service = service or Service(config)
    app = FastAPI(title="graphtalk", version=SCHEMA_VERSION)
    app.state.service = service

    @app.exception_handler(ServiceError)
    async def service_error(_: Request, exc: ServiceError) -> JSONResponse:
        return _versioned({"error": exc.message}, status=exc.status)

    @app.get("/health")
    def health() -> JSONResponse:
        return _versioned({
            "status": "ok",
            "documents": len(service.documents.ids()),
            "sessions": service.sessions.count(),
            "rank_backend": _rankcore.backend_name(),
        })

    @app.post("/documents")
    def add_document(body: DocumentIn) -> JSONResponse:
        dd = service.documents.add(body.conllu, body.doc_id, body.ner)
        return _versioned(document_payload(dd), status=201)

    @app.get("/documents/{doc_id}/ranks")
    def ranks(doc_id: str, top: int = 25) -> JSONResponse:
        if not 1 <= top <= 500:
            raise ServiceError(422, "top must be between 1 and 500")
        dd = service.documents.get(doc_id)
        return _versioned(rank_payload(dd, top))

    @app.get("/documents/{doc_id}/export.pro")
    def export(doc_id: str) -> PlainTextResponse:
        text = service.documents.export(doc_id)
        return PlainTextResponse(
            text,
            media_type="text/plain; charset=utf-8",
            headers={"X-Schema-Version": SCHEMA_VERSION},
        )

    @app.post("/sessions")
    def create_session(body: SessionIn) -> JSONResponse:
        service.documents.get(body.doc_id)
        session = service.sessions.create(body.doc_id)
        return _versioned(
            {"session_id": session.session_id, "doc_id": session.doc_id},
            status=201,
        )

    @app.post("/sessions/{session_id}/query")
    def query(session_id: str, body: QueryIn) -> JSONResponse:
        payload = service.query(
            session_id,
            question_text=body.question_text,
            question_conllu=body.question_conllu,
        )
        return _versioned(payload)

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> None:
        service.sessions.delete(session_id)

    return app
