"""Extractive summary and keyphrase synthesis over the ranked graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .ingest import Document, NOUN, Sentence, Token
from .textgraph import LemmaNode, RankMap, SentenceNode, TextGraph

CONTEXT_DEPRELS = frozenset({"amod", "compound", "nmod", "flat", "nummod"})

NOUN_WEIGHT = 2.0
ACCEPT_RATIO = 0.6
MAX_WINDOW = 4


@dataclass(frozen=True)
class SummaryEntry:
    sid: int
    words: tuple[str, ...]
    rank: float

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class Keyphrase:
    text: str
    head_lemma: str
    score: float


def extract_summary(doc: Document, ranks: RankMap, k: int) -> list[SummaryEntry]:
    """Top-``k`` sentences by rank, emitted in document order.

    Rank ties break on the lower sentence id.  ``ranks`` must cover
    every sentence of ``doc``.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    scored = []
    for sent in doc.sentences:
        node = SentenceNode(sent.id)
        if node not in ranks:
            raise ValueError(f"ranks missing sentence {sent.id}")
        scored.append((sent, ranks[node]))
    scored.sort(key=lambda pair: (-pair[1], pair[0].id))
    chosen = sorted(scored[:k], key=lambda pair: pair[0].id)
    return [
        SummaryEntry(sid=sent.id, words=tuple(sent.words()), rank=score)
        for sent, score in chosen
    ]


def _context_tokens(sent: Sentence, tok: Token) -> list[Token]:
    context = [
        d for d in sent.dependents(tok) if d.deprel in CONTEXT_DEPRELS
    ]
    if tok.deprel in CONTEXT_DEPRELS and tok.head != 0:
        context.append(sent.token_at(tok.head))
    return context


def extract_keyphrases(
    doc: Document,
    g: TextGraph,
    ranks: RankMap,
    max_phrases: int = 10,
) -> list[Keyphrase]:
    """Synthesize short noun phrases from dependency context windows.

    For each occurrence of a noun lemma, the candidate words are the
    occurrence itself plus its directly linked modifier context
    (``amod``/``compound``/``nmod``/``flat``/``nummod`` dependents, and
    the head when the noun itself fills such a role).  Candidates are
    contiguous position windows of two to four of those words containing
    the noun; an occurrence with no context contributes the single word
    instead.  A window scores the rank-weighted average of its words
    with the noun counted twice, and survives only if it reaches
    ``ACCEPT_RATIO`` of the noun's own rank.  Windows deduplicate on
    their lemma sequence, keeping the best score.
    """
    if max_phrases < 0:
        raise ValueError(f"max_phrases must be >= 0, got {max_phrases}")

    def rank_of(tok: Token) -> float:
        return ranks.get(LemmaNode(tok.lemma, tok.category), 0.0)

    occurrences: dict[LemmaNode, list[tuple[Sentence, Token]]] = {}
    for sent in doc.sentences:
        for tok in sent.tokens:
            if tok.category == NOUN:
                occurrences.setdefault(
                    LemmaNode(tok.lemma, tok.category), []
                ).append((sent, tok))

    nouns = sorted(
        (n for n in g.lemma_nodes() if n.category == NOUN and n in occurrences),
        key=lambda node: (-ranks.get(node, 0.0), node.sort_key()),
    )

    best: dict[tuple[str, ...], Keyphrase] = {}
    for noun in nouns:
        noun_rank = ranks.get(noun, 0.0)
        for sent, tok in occurrences[noun]:
            context = _context_tokens(sent, tok)
            if not context:
                windows = [[tok]]
            else:
                chosen = sorted({t.index: t for t in [tok] + context}.values(),
                                key=lambda t: t.index)
                windows = []
                for size in range(2, min(MAX_WINDOW, len(chosen)) + 1):
                    for start in range(len(chosen) - size + 1):
                        window = chosen[start:start + size]
                        if any(t.index == tok.index for t in window):
                            windows.append(window)
            for window in windows:
                others = [t for t in window if t.index != tok.index]
                score = (
                    NOUN_WEIGHT * noun_rank + sum(rank_of(t) for t in others)
                ) / (NOUN_WEIGHT + len(others))
                if score < ACCEPT_RATIO * noun_rank:
                    continue
                key = tuple(t.lemma for t in window)
                phrase = Keyphrase(
                    text=" ".join(t.word for t in window),
                    head_lemma=noun.lemma,
                    score=score,
                )
                kept = best.get(key)
                if kept is None or phrase.score > kept.score:
                    best[key] = phrase
    result = sorted(best.values(), key=lambda p: (-p.score, p.text))
    return result[:max_phrases]
