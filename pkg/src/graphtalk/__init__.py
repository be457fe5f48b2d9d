"""Interactive text-graph mining over dependency-parsed documents.

Digest CoNLL-U input into a ranked lemma/sentence graph and a nine
family fact database, then answer questions against them through the
library API, the ``graphtalk`` CLI, or the HTTP service.
"""

from .dialog import (
    Answer,
    AnswerSet,
    ClosureResult,
    DialogMemory,
    DocView,
    answer,
    build_query_context,
    detect_overlap,
    expand_query,
    tc,
    wh_match,
)
from .engine import DigestedDocument, EngineConfig, digest
from .factdb import (
    ClauseParseError,
    CrossDocumentError,
    Fact,
    FactDB,
    UnknownFamilyError,
    build_factdb,
    export_clauses,
    parse_clauses,
)
from .ingest import (
    ConlluParseError,
    Document,
    Sentence,
    Token,
    UnknownSentenceError,
    attach_ner,
    parse_conllu,
    plain_text_note,
    to_conllu,
)
from .mining import Keyphrase, SummaryEntry, extract_keyphrases, extract_summary
from .questions import load_question_bank, normalize_question, parse_question
from .relations import (
    LexDB,
    LexDbError,
    SvoFact,
    extract_svo,
    lex_relations,
    load_lexdb,
    load_ontology,
)
from .textgraph import (
    EdgeKind,
    EmptyGraphError,
    GraphOptions,
    LemmaNode,
    PersonalizationError,
    SentenceNode,
    TextGraph,
    build_graph,
    normalize_sentence_ranks,
    pagerank,
    personalized_pagerank,
    top_subgraph,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AnswerSet",
    "ClauseParseError",
    "ClosureResult",
    "ConlluParseError",
    "CrossDocumentError",
    "DialogMemory",
    "DigestedDocument",
    "DocView",
    "Document",
    "EdgeKind",
    "EmptyGraphError",
    "EngineConfig",
    "Fact",
    "FactDB",
    "GraphOptions",
    "Keyphrase",
    "LemmaNode",
    "LexDB",
    "LexDbError",
    "PersonalizationError",
    "Sentence",
    "SentenceNode",
    "SummaryEntry",
    "SvoFact",
    "TextGraph",
    "Token",
    "UnknownFamilyError",
    "UnknownSentenceError",
    "answer",
    "attach_ner",
    "build_factdb",
    "build_graph",
    "build_query_context",
    "detect_overlap",
    "digest",
    "expand_query",
    "export_clauses",
    "extract_keyphrases",
    "extract_summary",
    "extract_svo",
    "lex_relations",
    "load_lexdb",
    "load_ontology",
    "load_question_bank",
    "normalize_question",
    "normalize_sentence_ranks",
    "pagerank",
    "parse_clauses",
    "parse_conllu",
    "parse_question",
    "personalized_pagerank",
    "plain_text_note",
    "tc",
    "to_conllu",
    "top_subgraph",
    "wh_match",
]
