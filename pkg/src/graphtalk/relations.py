"""Relational fact extraction: SVO triples and lexical relations.

SVO triples come straight from the dependency structure.  Lexical
``is_a``/``part_of`` facts come from a WordNet-style noun database in
the Princeton flat-file format (``data.noun`` + ``index.noun``); only
relations whose both endpoints occur in the document are emitted, which
doubles as a cheap word-sense filter.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .ingest import Document, VERB
from .textgraph import OBJ_LABELS, SUBJ_LABELS

IS_A = "is_a"
PART_OF = "part_of"

LEXDB_ENV_VAR = "GRAPHTALK_WORDNET_DIR"

_HYPERNYM_SYMBOLS = frozenset({"@", "@i"})
_HYPONYM_SYMBOLS = frozenset({"~", "~i"})
_MERONYM_SYMBOLS = frozenset({"%p", "%m", "%s"})
_HOLONYM_SYMBOLS = frozenset({"#p", "#m", "#s"})


class LexDbError(ValueError):
    """Missing or corrupt lexical database files."""


@dataclass(frozen=True)
class SvoFact:
    """One ``subject -verb-> object`` fact.

    ``sentence`` is the id of the sentence the fact is grounded in, or
    ``None`` for ontology facts that are not tied to any sentence.
    """

    subject: str
    verb: str
    object: str
    sentence: int | None

    def __post_init__(self):
        if not self.subject or not self.verb or not self.object:
            raise ValueError("svo facts need non-empty subject, verb and object")


def extract_svo(doc: Document) -> list[SvoFact]:
    """Subject-verb-object triples from the dependency parses.

    For every verb with at least one subject and one object dependent,
    the cross product of subject and object lemmas is emitted.  A copula
    construction (a predicate with both ``cop`` and a subject dependent)
    yields an ``is_a`` fact from the subject to the predicate lemma.
    Duplicate ``(s, v, o, sentence)`` facts collapse.
    """
    facts: list[SvoFact] = []
    seen: set[tuple[str, str, str, int]] = set()

    def emit(s: str, v: str, o: str, sid: int) -> None:
        key = (s, v, o, sid)
        if key not in seen:
            seen.add(key)
            facts.append(SvoFact(s, v, o, sid))

    for sent in doc.sentences:
        for tok in sent.tokens:
            deps = sent.dependents(tok)
            if tok.category == VERB:
                subjects = [d for d in deps if d.deprel in SUBJ_LABELS]
                objects = [d for d in deps if d.deprel in OBJ_LABELS]
                for s in subjects:
                    for o in objects:
                        emit(s.lemma, tok.lemma, o.lemma, sent.id)
            if any(d.deprel == "cop" for d in deps):
                for s in deps:
                    if s.deprel in SUBJ_LABELS:
                        emit(s.lemma, IS_A, tok.lemma, sent.id)
    return facts


@dataclass(frozen=True)
class LexDB:
    """Noun synsets plus the four relation maps used by the engine.

    Every synset id appearing in a relation map is a key of
    ``synsets``.  ``meronym[x]`` holds the parts of ``x``; ``holonym`` is
    its inverse, and ``hyponym`` the inverse of ``hypernym``.  The maps
    are closed under inversion at load time.
    """

    synsets: Mapping[str, frozenset[str]]
    hypernym: Mapping[str, frozenset[str]]
    hyponym: Mapping[str, frozenset[str]]
    meronym: Mapping[str, frozenset[str]]
    holonym: Mapping[str, frozenset[str]]
    lemma_index: Mapping[str, frozenset[str]]

    def synsets_of(self, lemma: str) -> frozenset[str]:
        return self.lemma_index.get(lemma.lower().replace(" ", "_"), frozenset())


def _parse_data_noun(path: Path) -> tuple[dict, dict, dict, dict, dict]:
    synsets: dict[str, set[str]] = {}
    raw = {"hypernym": {}, "hyponym": {}, "meronym": {}, "holonym": {}}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line[0].isspace():
                continue
            head = line.split("|", 1)[0].split()
            try:
                offset = head[0]
                w_cnt = int(head[3], 16)
                words = {head[4 + 2 * i].lower() for i in range(w_cnt)}
                p_pos = 4 + 2 * w_cnt
                p_cnt = int(head[p_pos])
                pointers = []
                for i in range(p_cnt):
                    base = p_pos + 1 + 4 * i
                    symbol, target, pos = head[base], head[base + 1], head[base + 2]
                    pointers.append((symbol, target, pos))
            except (IndexError, ValueError):
                raise LexDbError(f"corrupt {path.name}: line {line_no}")
            synsets[offset] = words
            for symbol, target, pos in pointers:
                if pos != "n":
                    continue
                if symbol in _HYPERNYM_SYMBOLS:
                    raw["hypernym"].setdefault(offset, set()).add(target)
                elif symbol in _HYPONYM_SYMBOLS:
                    raw["hyponym"].setdefault(offset, set()).add(target)
                elif symbol in _MERONYM_SYMBOLS:
                    raw["meronym"].setdefault(offset, set()).add(target)
                elif symbol in _HOLONYM_SYMBOLS:
                    raw["holonym"].setdefault(offset, set()).add(target)
    return synsets, raw["hypernym"], raw["hyponym"], raw["meronym"], raw["holonym"]


def _parse_index_noun(path: Path) -> dict[str, set[str]]:
    index: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip() or line[0].isspace():
                continue
            parts = line.split()
            try:
                lemma = parts[0].lower()
                synset_cnt = int(parts[2])
                offsets = parts[-synset_cnt:] if synset_cnt else []
            except (IndexError, ValueError):
                raise LexDbError(f"corrupt {path.name}: line {line_no}")
            if len(offsets) != synset_cnt:
                raise LexDbError(f"corrupt {path.name}: line {line_no}")
            index.setdefault(lemma, set()).update(offsets)
    return index


def load_lexdb(directory: str | os.PathLike) -> LexDB:
    """Load ``data.noun`` and ``index.noun`` from ``directory``.

    License-header lines (leading whitespace) are skipped.  Pointers to
    synsets missing from the data file are dropped so the relation maps
    stay closed over ``synsets``.  Relation maps are completed with the
    inverses of whatever direction the files record.
    """
    directory = Path(directory)
    data_path = directory / "data.noun"
    index_path = directory / "index.noun"
    for path in (data_path, index_path):
        if not path.is_file():
            raise LexDbError(f"missing lexical database file: {path}")
    synsets, hypernym, hyponym, meronym, holonym = _parse_data_noun(data_path)
    lemma_index = _parse_index_noun(index_path)

    def clean(rel: dict[str, set[str]]) -> dict[str, set[str]]:
        return {
            k: {t for t in targets if t in synsets}
            for k, targets in rel.items()
            if k in synsets
        }

    hypernym, hyponym = clean(hypernym), clean(hyponym)
    meronym, holonym = clean(meronym), clean(holonym)

    def invert_into(src: dict[str, set[str]], dst: dict[str, set[str]]) -> None:
        for k, targets in src.items():
            for t in targets:
                dst.setdefault(t, set()).add(k)

    invert_into(dict(hypernym), hyponym)
    invert_into(dict(hyponym), hypernym)
    invert_into(dict(meronym), holonym)
    invert_into(dict(holonym), meronym)

    for offset, words in synsets.items():
        for word in words:
            lemma_index.setdefault(word, set()).add(offset)

    def freeze(rel: dict[str, set[str]]) -> dict[str, frozenset[str]]:
        return {k: frozenset(v) for k, v in rel.items()}
    return LexDB(
        synsets=freeze(synsets),
        hypernym=freeze(hypernym),
        hyponym=freeze(hyponym),
        meronym=freeze(meronym),
        holonym=freeze(holonym),
        lemma_index=freeze(lemma_index),
    )


def default_lexdb_dir() -> str | None:
    """Directory named by the environment override, if any."""
    value = os.environ.get(LEXDB_ENV_VAR, "").strip()
    return value or None


def lex_relations(
    doc_lemmas: Mapping[str, int], db: LexDB
) -> list[SvoFact]:
    """Lexical ``is_a``/``part_of`` facts restricted to document lemmas.

    ``doc_lemmas`` maps every document lemma to the id of its first
    sentence; each emitted fact is grounded in the first sentence of its
    subject lemma.  For a document lemma ``a``:

    - a hypernym of one of ``a``'s synsets containing document lemma
      ``b`` yields ``(a, is_a, b)``;
    - a hyponym containing ``b`` yields ``(b, is_a, a)``;
    - a meronym containing ``b`` (a part of ``a``) yields
      ``(b, part_of, a)``;
    - a holonym containing ``b`` (a whole of ``a``) yields
      ``(a, part_of, b)``.

    Both endpoints occurring in the document is the in-context filter:
    senses whose relatives never show up contribute nothing.  Duplicate
    ``(s, v, o)`` triples collapse, keeping the earliest emission.
    """
    facts: list[SvoFact] = []
    seen: set[tuple[str, str, str]] = set()

    def emit(s: str, v: str, o: str) -> None:
        if s == o:
            return
        key = (s, v, o)
        if key not in seen:
            seen.add(key)
            facts.append(SvoFact(s, v, o, doc_lemmas[s]))

    for a in sorted(doc_lemmas):
        for offset in sorted(db.synsets_of(a)):
            for target in sorted(db.hypernym.get(offset, ())):
                for b in sorted(db.synsets[target]):
                    if b in doc_lemmas:
                        emit(a, IS_A, b)
            for target in sorted(db.hyponym.get(offset, ())):
                for b in sorted(db.synsets[target]):
                    if b in doc_lemmas:
                        emit(b, IS_A, a)
            for target in sorted(db.meronym.get(offset, ())):
                for b in sorted(db.synsets[target]):
                    if b in doc_lemmas:
                        emit(b, PART_OF, a)
            for target in sorted(db.holonym.get(offset, ())):
                for b in sorted(db.synsets[target]):
                    if b in doc_lemmas:
                        emit(a, PART_OF, b)
    return facts


def load_ontology(text: str) -> list[SvoFact]:
    """Parse a JSON ontology: an array of ``{"s": .., "v": .., "o": ..}``.

    Ontology facts carry no sentence id; the closure walk may use them
    mid-path but never as the grounding step of a result.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("ontology must be a JSON array")
    facts = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or not {"s", "v", "o"} <= entry.keys():
            raise ValueError(f"ontology entry {i} needs keys 's', 'v', 'o'")
        facts.append(SvoFact(str(entry["s"]), str(entry["v"]),
                             str(entry["o"]), None))
    return facts
