"""CoNLL-U ingestion into an immutable document model.

The engine consumes parser output only: ten-column CoNLL-U text, with
optional named-entity annotations either inline (``NER=LABEL`` in the
MISC column) or supplied separately as a JSON sidecar.  Raw plain text
is out of scope; :func:`plain_text_note` documents the contract an
external preprocessor has to meet.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

NOUN = "NOUN"
VERB = "VERB"
OTHER = "OTHER"

FORMAT_VERSION = "1"

_UNIVERSAL_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})


class ConlluParseError(ValueError):
    """Malformed CoNLL-U input; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownSentenceError(ValueError):
    """A NER sidecar referenced sentence ids that are not in the document."""

    def __init__(self, bad_ids: Iterable[int]):
        self.bad_ids = sorted(bad_ids)
        super().__init__(f"unknown sentence ids: {self.bad_ids}")


@dataclass(frozen=True)
class Token:
    """One syntactic word.

    ``index`` and ``head`` are 1-based sentence positions; ``head`` 0
    marks the root.  ``lemma`` is stored case-folded so that graph nodes
    and fact arguments never depend on surface casing.
    """

    index: int
    word: str
    lemma: str
    upos: str
    xpos: str | None
    head: int
    deprel: str

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise ValueError(f"token head must be >= 0, got {self.head}")
        if not self.lemma:
            raise ValueError("token lemma must be non-empty")
        if not self.deprel:
            raise ValueError("token deprel must be non-empty")
        object.__setattr__(self, "lemma", self.lemma.lower())

    @property
    def category(self) -> str:
        """Coarse NOUN/VERB/OTHER bucket.

        Universal tags decide directly; an unknown or missing UPOS falls
        back to the treebank tag prefix (``NN*``/``VB*``).
        """
        if self.upos in ("NOUN", "PROPN"):
            return NOUN
        if self.upos == "VERB":
            return VERB
        if self.upos in _UNIVERSAL_TAGS:
            return OTHER
        xpos = self.xpos or ""
        if xpos.startswith("NN"):
            return NOUN
        if xpos.startswith("VB"):
            return VERB
        return OTHER

    @property
    def tag(self) -> str:
        """Preferred part-of-speech tag for fact output: XPOS, else UPOS."""
        return self.xpos or self.upos or "_"


@dataclass(frozen=True)
class Sentence:
    """A parsed sentence: tokens plus optional NER spans.

    NER spans are ``(token_index, text, label)`` tuples with 0-based
    token indices, matching the convention of token-level NER output.
    """

    id: int
    tokens: tuple[Token, ...]
    ner_spans: tuple[tuple[int, str, str], ...] = ()

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"sentence id must be >= 0, got {self.id}")

    def words(self) -> list[str]:
        return [t.word for t in self.tokens]

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]

    @property
    def root(self) -> Token:
        for t in self.tokens:
            if t.head == 0:
                return t
        raise ValueError(f"sentence {self.id} has no root token")

    def token_at(self, index: int) -> Token:
        """Token by 1-based index."""
        return self.tokens[index - 1]

    def dependents(self, token: Token) -> list[Token]:
        return [t for t in self.tokens if t.head == token.index]


@dataclass(frozen=True)
class Document:
    """An ordered collection of sentences with 0-based contiguous ids."""

    doc_id: str
    sentences: tuple[Sentence, ...]
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for i, sent in enumerate(self.sentences):
            if sent.id != i:
                raise ValueError(
                    f"sentence ids must be contiguous from 0; "
                    f"position {i} has id {sent.id}"
                )

    def __len__(self) -> int:
        return len(self.sentences)

    def sentence(self, sid: int) -> Sentence:
        if not 0 <= sid < len(self.sentences):
            raise KeyError(f"no sentence {sid} in document {self.doc_id!r}")
        return self.sentences[sid]

    def lemma_set(self) -> frozenset[str]:
        return frozenset(t.lemma for s in self.sentences for t in s.tokens)

    def first_occurrences(self) -> dict[str, int]:
        """Lemma -> id of the first sentence containing it."""
        first: dict[str, int] = {}
        for sent in self.sentences:
            for tok in sent.tokens:
                first.setdefault(tok.lemma, sent.id)
        return first


def _parse_misc_ner(misc: str) -> str | None:
    if misc in ("", "_"):
        return None
    for part in misc.split("|"):
        if part.startswith("NER="):
            label = part[len("NER="):]
            if label and label != "O":
                return label
    return None


def _split_columns(line: str) -> list[str]:
    # Tab-separated per the format; whitespace-delimited input is accepted
    # as a convenience for hand-written fixtures.
    if "\t" in line:
        return line.split("\t")
    return line.split()


def parse_conllu(text: str, doc_id: str = "doc") -> Document:
    """Parse CoNLL-U ``text`` into a :class:`Document`.

    Sentences are blank-line separated blocks; comment lines start with
    ``#``.  Multiword-token ranges (``3-4``) and empty nodes (``5.1``)
    are skipped.  Structural problems raise :class:`ConlluParseError`
    naming the offending line: wrong column count, non-contiguous token
    ids, a head outside ``0..len(tokens)``, or a sentence without
    exactly one root.  Empty input yields an empty document.
    """
    sentences: list[Sentence] = []
    rows: list[tuple[int, list[str]]] = []

    def flush(last_line_no: int) -> None:
        if not rows:
            return
        tokens: list[Token] = []
        spans: list[tuple[int, str, str]] = []
        for expected, (line_no, cols) in enumerate(rows, start=1):
            try:
                idx = int(cols[0])
            except ValueError:
                raise ConlluParseError(line_no, f"bad token id {cols[0]!r}")
            if idx != expected:
                raise ConlluParseError(
                    line_no, f"token ids must be contiguous; expected {expected}, got {idx}"
                )
            word = cols[1]
            lemma = cols[2] if cols[2] not in ("", "_") else word.lower()
            upos = cols[3] if cols[3] != "_" else ""
            xpos = cols[4] if cols[4] != "_" else None
            try:
                head = int(cols[6])
            except ValueError:
                raise ConlluParseError(line_no, f"bad head {cols[6]!r}")
            deprel = cols[7] if cols[7] not in ("", "_") else "dep"
            try:
                tokens.append(
                    Token(index=idx, word=word, lemma=lemma, upos=upos,
                          xpos=xpos, head=head, deprel=deprel)
                )
            except ValueError as exc:
                raise ConlluParseError(line_no, str(exc))
            label = _parse_misc_ner(cols[9])
            if label is not None:
                spans.append((idx - 1, word, label))
        n = len(tokens)
        roots = 0
        for (line_no, _), tok in zip(rows, tokens):
            if tok.head > n:
                raise ConlluParseError(
                    line_no, f"head {tok.head} out of range for {n} tokens"
                )
            if tok.head == tok.index:
                raise ConlluParseError(line_no, "token cannot head itself")
            if tok.head == 0:
                roots += 1
        if roots != 1:
            raise ConlluParseError(
                rows[0][0], f"sentence must have exactly one root, found {roots}"
            )
        sentences.append(
            Sentence(id=len(sentences), tokens=tuple(tokens), ner_spans=tuple(spans))
        )
        rows.clear()

    line_no = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.lstrip().startswith("#"):
            continue
        cols = _split_columns(line)
        if len(cols) != 10:
            raise ConlluParseError(
                line_no, f"expected 10 columns, got {len(cols)}"
            )
        first = cols[0]
        if "-" in first or "." in first:
            continue
        rows.append((line_no, cols))
    flush(line_no + 1)
    return Document(doc_id=doc_id, sentences=tuple(sentences))


def to_conllu(doc: Document) -> str:
    """Serialize ``doc`` back to CoNLL-U.

    Only per-token NER spans whose text equals the token's surface form
    are representable in MISC; spans attached from a sidecar with free
    text are dropped by this round trip.
    """
    lines: list[str] = []
    for sent in doc.sentences:
        by_index = {idx: (text, label) for idx, text, label in sent.ner_spans}
        for tok in sent.tokens:
            misc = "_"
            span = by_index.get(tok.index - 1)
            if span is not None and span[0] == tok.word:
                misc = f"NER={span[1]}"
            lines.append("\t".join([
                str(tok.index),
                tok.word,
                tok.lemma,
                tok.upos or "_",
                tok.xpos or "_",
                "_",
                str(tok.head),
                tok.deprel,
                "_",
                misc,
            ]))
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def attach_ner(
    doc: Document,
    sidecar: Sequence[tuple[int, Sequence[tuple[int, str, str]]]],
) -> Document:
    """Return a new document with sidecar NER spans merged in.

    ``sidecar`` is a sequence of ``(sentence_id, spans)`` pairs where each
    span is ``(token_index, text, label)`` with 0-based indices.  Sidecar
    spans override inline spans on the same token index.  Unknown
    sentence ids raise :class:`UnknownSentenceError` listing all of them.
    """
    known = {s.id for s in doc.sentences}
    bad = {sid for sid, _ in sidecar if sid not in known}
    if bad:
        raise UnknownSentenceError(bad)
    extra: dict[int, list[tuple[int, str, str]]] = {}
    for sid, spans in sidecar:
        extra.setdefault(sid, []).extend(
            (int(i), str(t), str(l)) for i, t, l in spans
        )
    new_sentences = []
    for sent in doc.sentences:
        if sent.id not in extra:
            new_sentences.append(sent)
            continue
        merged = {idx: (text, label) for idx, text, label in sent.ner_spans}
        for idx, text, label in extra[sent.id]:
            if not 0 <= idx < len(sent.tokens):
                raise UnknownSentenceError({sent.id})
            merged[idx] = (text, label)
        spans = tuple(
            (idx, text, label)
            for idx, (text, label) in sorted(merged.items())
        )
        new_sentences.append(dataclasses.replace(sent, ner_spans=spans))
    return dataclasses.replace(doc, sentences=tuple(new_sentences))


def load_ner_sidecar(text: str) -> list[tuple[int, list[tuple[int, str, str]]]]:
    """Parse a JSON NER sidecar.

    Expected shape: ``[{"sentence": 0, "spans": [[idx, text, label], ...]},
    ...]``.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("NER sidecar must be a JSON array")
    out: list[tuple[int, list[tuple[int, str, str]]]] = []
    for entry in data:
        if not isinstance(entry, dict) or "sentence" not in entry:
            raise ValueError("each sidecar entry needs a 'sentence' key")
        spans = [
            (int(s[0]), str(s[1]), str(s[2]))
            for s in entry.get("spans", [])
        ]
        out.append((int(entry["sentence"]), spans))
    return out


def plain_text_note() -> dict:
    """Contract for preprocessing raw text outside this package.

    The engine only ingests dependency-parsed input; a tokenizer/parser
    (e.g. a UD pipeline) must produce what this note describes.
    """
    return {
        "format_version": FORMAT_VERSION,
        "accepts": ["conllu"],
        "requires": [
            "ten tab-separated columns per token",
            "blank line between sentences",
            "exactly one root token (HEAD=0) per sentence",
            "lemma column filled, or '_' to fall back to the lowered form",
        ],
        "optional": [
            "MISC column 'NER=LABEL' entries for named entities",
            "JSON sidecar: [{'sentence': id, 'spans': [[index, text, label]]}]",
        ],
        "note": "raw plain text must be parsed by an external UD pipeline first",
    }
