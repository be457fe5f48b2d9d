"""Turning free-form question text into a parsed one-sentence document.

Best source first: a question bank of real parses (a ``.q.conllu`` file
with ``# text = ...`` comments) keyed by normalized text.  Otherwise a
deliberately small fallback parser guesses from the document's own
word-to-lemma facts: known words inherit their lemma and tag, unknown
words are treated as nouns, and everything hangs off the first verb.
"""

from __future__ import annotations

import string
from typing import Mapping

from .factdb import FactDB
from .ingest import Document, Sentence, Token, parse_conllu

_UNIVERSAL_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})


def normalize_question(text: str) -> str:
    return " ".join(text.split()).strip().strip("?!. ").lower()


def load_question_bank(text: str) -> dict[str, Document]:
    """Parse a ``.q.conllu`` file into a normalized-text -> parse map.

    Each sentence block must carry a ``# text = ...`` comment naming the
    question it parses.
    """
    bank: dict[str, Document] = {}
    blocks = [b for b in text.split("\n\n") if b.strip()]
    for block in blocks:
        question_text = None
        for line in block.splitlines():
            stripped = line.strip()
            if stripped.startswith("# text"):
                _, _, value = stripped.partition("=")
                question_text = value.strip()
                break
        if question_text is None:
            continue
        doc = parse_conllu(block + "\n", doc_id="question")
        if len(doc) != 1:
            continue
        bank[normalize_question(question_text)] = doc
    return bank


def word_lookup(db: FactDB) -> dict[str, tuple[str, str]]:
    """Case-insensitive surface word -> (lemma, tag), first fact wins."""
    table: dict[str, tuple[str, str]] = {}
    for fact in db.family("w2l"):
        word, lemma, tag = fact.args
        table.setdefault(word.lower(), (lemma, tag))
    return table


def parse_question(
    text: str,
    db: FactDB,
    question_bank: Mapping[str, Document] | None = None,
) -> Document:
    """Parse question ``text`` into a one-sentence document.

    The question bank is consulted first.  The fallback tokenizes on
    whitespace, strips surrounding punctuation, resolves lemma and tag
    through the document's ``w2l`` facts, treats unknown words as nouns,
    and attaches every token to the first verb (or the first token).
    """
    if question_bank:
        hit = question_bank.get(normalize_question(text))
        if hit is not None:
            return hit
    lookup = word_lookup(db)
    words = []
    for raw in text.split():
        stripped = raw.strip(string.punctuation)
        if stripped:
            words.append(stripped)
    if not words:
        raise ValueError("question contains no words")

    drafts = []
    for word in words:
        known = lookup.get(word.lower())
        if known is not None:
            lemma, tag = known
            if tag in _UNIVERSAL_TAGS:
                upos, xpos = tag, None
            else:
                upos, xpos = "", tag
        else:
            lemma, upos, xpos = word.lower(), "NOUN", None
        drafts.append((word, lemma, upos, xpos))

    def draft_category(upos: str, xpos: str | None) -> str:
        probe = Token(index=1, word="x", lemma="x", upos=upos,
                      xpos=xpos, head=0, deprel="root")
        return probe.category

    root_index = next(
        (i for i, (_, _, upos, xpos) in enumerate(drafts)
         if draft_category(upos, xpos) == "VERB"),
        0,
    )
    tokens = []
    for i, (word, lemma, upos, xpos) in enumerate(drafts):
        if i == root_index:
            head, deprel = 0, "root"
        else:
            head, deprel = root_index + 1, "dep"
        tokens.append(Token(
            index=i + 1, word=word, lemma=lemma, upos=upos,
            xpos=xpos, head=head, deprel=deprel,
        ))
    sentence = Sentence(id=0, tokens=tuple(tokens))
    return Document(doc_id="question", sentences=(sentence,))
