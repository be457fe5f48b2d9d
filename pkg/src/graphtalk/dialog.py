"""Interactive question answering over a digested document.

A question is itself a parsed document: it gets its own text graph and
PageRank, whose top lemmas personalize a rank over the document graph.
Query lemmas are expanded through the lexical database and through
recent dialog memory, candidate sentences are scored by a mix of
normalized signals, and two discrete bonuses reward sentences reached
by a bounded relational closure walk or matching a wh-question's named
entities.
"""

from __future__ import annotations

import dataclasses
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .factdb import FactDB, SENT_TAG
from .ingest import Document, NOUN
from .relations import IS_A, PART_OF, LexDB, SvoFact
from .textgraph import (
    CONTENT_CATEGORIES,
    GraphOptions,
    LemmaNode,
    RankMap,
    SentenceNode,
    TextGraph,
    build_graph,
    normalize_sentence_ranks_by_length,
    pagerank,
    personalized_pagerank,
)

DEFAULT_ANSWERS = 3
DEFAULT_TOP_LEMMAS = 8
DEFAULT_MEMORY_WINDOW = 3
DEFAULT_TC_STEPS = 3
EXPANSION_WEIGHT = 0.5
NO_CONTENT_MARKER = "no relevant content"

_PERSON_LABELS = frozenset({"PERSON", "ORGANIZATION", "TITLE"})
_PLACE_LABELS = frozenset({"LOCATION", "CITY", "COUNTRY", "STATE_OR_PROVINCE"})
_AMOUNT_LABELS = frozenset({"NUMBER", "ORDINAL", "MONEY"})
_TIME_LABELS = frozenset({"DATE", "TIME", "DURATION"})

WH_LABEL_FAMILIES: dict[str, frozenset[str]] = {
    "who": _PERSON_LABELS,
    "whom": _PERSON_LABELS,
    "whose": _PERSON_LABELS,
    "where": _PLACE_LABELS,
    "when": _TIME_LABELS,
}

# Wh lemmas acting as wildcards in query-edge matching.  "what"/"which"
# and bare "how" carry no label family; "how many"/"how much" routes to
# the amount family via the bigram check in :func:`wh_label_families`.
WH_WILDCARDS = frozenset({
    "who", "whom", "whose", "what", "which", "where", "when", "how",
})


class DocView:
    """Read-oriented projection of a document database.

    Everything the answerer needs per sentence, derived once from the
    ``sent``, ``w2l``, ``edge`` and ``ner`` facts: surface words, lemma
    sets, lemma-to-lemma dependency rows and NER spans.
    """

    def __init__(self, db: FactDB):
        word_to_lemmas: dict[str, set[str]] = {}
        for fact in db.family("w2l"):
            word, lemma, _ = fact.args
            word_to_lemmas.setdefault(word, set()).add(lemma)
        self.word_to_lemmas = {
            w: frozenset(ls) for w, ls in word_to_lemmas.items()
        }
        self._words: dict[int, tuple[str, ...]] = {}
        self._lemma_sets: dict[int, frozenset[str]] = {}
        self.lengths: dict[int, int] = {}
        for fact in db.family("sent"):
            sid, words = fact.args
            self._words[sid] = words
            self.lengths[sid] = len(words)
            lemmas: set[str] = set()
            for word in words:
                lemmas.update(self.word_to_lemmas.get(word, ()))
            self._lemma_sets[sid] = frozenset(lemmas)
        self.sids: tuple[int, ...] = tuple(sorted(self._words))
        self._dep_rows: dict[int, list[tuple[str, str, str]]] = {}
        for fact in db.family("edge"):
            sid, lemma_from, tag_from, label, lemma_to, tag_to = fact.args
            if tag_from == SENT_TAG or tag_to == SENT_TAG:
                continue
            self._dep_rows.setdefault(sid, []).append(
                (lemma_from, label, lemma_to)
            )
        self._ner: dict[int, tuple[tuple[int, str, str], ...]] = {}
        for fact in db.family("ner"):
            sid, pairs = fact.args
            self._ner[sid] = tuple(
                (idx, text, label) for idx, (text, label) in pairs
            )
        self.all_lemmas: frozenset[str] = frozenset(
            lemma for ls in self.word_to_lemmas.values() for lemma in ls
        )

    @classmethod
    def from_factdb(cls, db: FactDB) -> "DocView":
        return cls(db)

    def words(self, sid: int) -> tuple[str, ...]:
        return self._words.get(sid, ())

    def lemma_set(self, sid: int) -> frozenset[str]:
        return self._lemma_sets.get(sid, frozenset())

    def dep_rows(self, sid: int) -> Sequence[tuple[str, str, str]]:
        return self._dep_rows.get(sid, ())

    def ner(self, sid: int) -> tuple[tuple[int, str, str], ...]:
        return self._ner.get(sid, ())


@dataclass(frozen=True)
class MemoryEntry:
    """What one answered query leaves behind for overlap detection."""

    edges: frozenset[tuple[str, str, str]]
    expanded: Mapping[str, float]
    answer_ids: tuple[int, ...]


class DialogMemory:
    """Bounded window over the most recent memory entries."""

    def __init__(self, entries: Sequence[MemoryEntry] = (),
                 window: int = DEFAULT_MEMORY_WINDOW):
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        self.window = window
        self.entries: tuple[MemoryEntry, ...] = tuple(entries)[-window:]

    def push(self, entry: MemoryEntry) -> "DialogMemory":
        return DialogMemory(self.entries + (entry,), self.window)

    def recent_first(self) -> Iterable[MemoryEntry]:
        return reversed(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class QueryContext:
    """Everything derived from one question against one document."""

    question: Document
    query_graph: TextGraph
    query_rank: RankMap
    pers_lemmas: tuple[tuple[str, str], ...]
    personalization: dict
    pers_ranks: RankMap
    pers_sentences: tuple[tuple[int, float], ...]
    expanded: dict[str, float] = field(default_factory=dict)
    weak_match: bool = False


@dataclass(frozen=True)
class ClosureResult:
    """One grounded path found by :func:`tc`.

    ``steps_left`` is the step budget remaining after the walk,
    ``sentence`` the id grounding the final fact, and ``path`` the
    ``(lemma, relation)`` pairs in walk order.
    """

    steps_left: int
    sentence: int
    path: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Answer:
    sid: int
    words: tuple[str, ...]
    score: float

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class AnswerSet:
    """Ranked answers plus the context the service layer exposes."""

    answers: tuple[Answer, ...]
    weak_match: bool = False
    marker: str | None = None
    query_ranks: tuple[tuple[str, float], ...] = ()
    pers_words: tuple[tuple[str, float], ...] = ()
    wh_hits: tuple[tuple[int, str], ...] = ()


def query_dep_edges(g: TextGraph) -> list[tuple[str, str, str]]:
    """All lemma-to-lemma dependency edges of a graph as label triples."""
    rows = []
    for src, dst, kind, _ in g.sorted_edges():
        if kind.name != "dep":
            continue
        if isinstance(src, LemmaNode) and isinstance(dst, LemmaNode):
            rows.append((src.lemma, kind.label, dst.lemma))
    return rows


def content_dep_edges(g: TextGraph) -> frozenset[tuple[str, str, str]]:
    """Dependency triples whose both endpoints are content lemmas."""
    rows = set()
    for src, dst, kind, _ in g.sorted_edges():
        if (
            kind.name == "dep"
            and isinstance(src, LemmaNode) and isinstance(dst, LemmaNode)
            and src.category in CONTENT_CATEGORIES
            and dst.category in CONTENT_CATEGORIES
        ):
            rows.add((src.lemma, kind.label, dst.lemma))
    return frozenset(rows)


def build_query_context(
    question: Document,
    db: FactDB,
    g: TextGraph,
    options: GraphOptions | None = None,
    top_lemmas: int = DEFAULT_TOP_LEMMAS,
) -> QueryContext:
    """Rank the question's own graph and personalize the document rank.

    The question's top lemma nodes (by query rank, ties on the node sort
    key) become the personalization distribution over document nodes: an
    exact ``(lemma, category)`` match takes the lemma's full query
    weight, otherwise the weight is split equally over same-lemma nodes
    of other categories.  When nothing matches (or the question graph is
    empty) the document rank falls back to the uniform teleport and the
    context is flagged ``weak_match``.
    """
    options = options or GraphOptions()
    qoptions = dataclasses.replace(options, enable_first_in=False)
    query_graph = build_graph(question, qoptions)
    if query_graph.node_count():
        query_rank = pagerank(query_graph, qoptions)
    else:
        query_rank = {}

    top_nodes = sorted(
        (n for n in query_graph.lemma_nodes()),
        key=lambda n: (-query_rank.get(n, 0.0), n.sort_key()),
    )[:top_lemmas]
    pers_lemmas = tuple((n.lemma, n.category) for n in top_nodes)

    doc_by_lemma: dict[str, list[LemmaNode]] = {}
    for node in g.lemma_nodes():
        doc_by_lemma.setdefault(node.lemma, []).append(node)

    personalization: dict = {}
    for qnode in top_nodes:
        weight = query_rank.get(qnode, 0.0)
        if weight <= 0.0:
            continue
        if qnode in g:
            personalization[qnode] = personalization.get(qnode, 0.0) + weight
            continue
        matches = doc_by_lemma.get(qnode.lemma, [])
        if matches:
            share = weight / len(matches)
            for node in matches:
                personalization[node] = personalization.get(node, 0.0) + share

    weak_match = not query_graph.node_count() or not personalization
    if personalization:
        raw = personalized_pagerank(g, personalization, options)
    else:
        raw = pagerank(g, options)

    lengths = {
        fact.args[0]: len(fact.args[1]) for fact in db.family("sent")
    }
    pers_ranks = normalize_sentence_ranks_by_length(raw, lengths)
    pers_sentences = tuple(sorted(
        (
            (node.sid, score)
            for node, score in pers_ranks.items()
            if isinstance(node, SentenceNode)
        ),
        key=lambda pair: (-pair[1], pair[0]),
    ))
    return QueryContext(
        question=question,
        query_graph=query_graph,
        query_rank=query_rank,
        pers_lemmas=pers_lemmas,
        personalization=personalization,
        pers_ranks=pers_ranks,
        pers_sentences=pers_sentences,
        weak_match=weak_match,
    )


def detect_overlap(ctx: QueryContext, memory: DialogMemory) -> MemoryEntry | None:
    """Most recent memory entry sharing a content dependency edge."""
    current = content_dep_edges(ctx.query_graph)
    if not current:
        return None
    for entry in memory.recent_first():
        if entry.edges & current:
            return entry
    return None


def expand_query(
    ctx: QueryContext,
    db: FactDB,
    lex: LexDB | None,
    memory: DialogMemory,
    expansion_weight: float = EXPANSION_WEIGHT,
    view: DocView | None = None,
) -> QueryContext:
    """Weighted expansion of the question's content lemmas.

    Content lemmas carry their query rank.  One-step neighbors through
    the lexical relation maps that occur in the document join at
    ``expansion_weight`` times their source's weight; when dialog memory
    overlaps, the overlapping entry's expanded lemmas join the same way.
    The highest weight wins when a lemma arrives via several routes.
    """
    content: dict[str, float] = {}
    for sent in ctx.question.sentences:
        for tok in sent.tokens:
            if tok.category not in CONTENT_CATEGORIES:
                continue
            node = LemmaNode(tok.lemma, tok.category)
            weight = ctx.query_rank.get(node, 1.0)
            if tok.lemma not in content or weight > content[tok.lemma]:
                content[tok.lemma] = weight

    expanded = dict(content)
    if lex is not None and content:
        doc_lemmas = (view or DocView(db)).all_lemmas
        for lemma in sorted(content):
            neighbors: set[str] = set()
            for offset in lex.synsets_of(lemma):
                for rel in (lex.hypernym, lex.hyponym, lex.meronym, lex.holonym):
                    for target in rel.get(offset, ()):
                        neighbors.update(lex.synsets[target])
            for other in sorted(neighbors & (doc_lemmas - {lemma})):
                weight = expansion_weight * content[lemma]
                if weight > expanded.get(other, 0.0):
                    expanded[other] = weight

    past = detect_overlap(ctx, memory)
    if past is not None:
        for lemma, weight in past.expanded.items():
            merged = expansion_weight * weight
            if merged > expanded.get(lemma, 0.0):
                expanded[lemma] = merged
    return dataclasses.replace(ctx, expanded=expanded)


def tc(
    k: int,
    start: str,
    rels: Iterable[str],
    goal: str,
    db: FactDB,
    ontology: Sequence[SvoFact] = (),
) -> list[ClosureResult]:
    """Bounded transitive closure over the SVO facts.

    Walks up to ``k`` steps from ``start`` along facts whose verb is in
    ``rels``.  A step may not re-enter a lemma already departed from.
    Reaching ``goal`` over a fact that carries a sentence id yields a
    result grounded in that sentence; ontology facts (no sentence id)
    may serve as intermediate steps only.  Exploration continues past a
    hit, so longer paths to the same goal are also reported.  Results
    are deduplicated on ``(path, sentence)`` and returned in
    deterministic depth-first order.
    """
    rel_set = frozenset(rels)
    adjacency: dict[str, list[tuple[str, str, int | None]]] = {}
    for fact in db.family("svo"):
        subject, verb, obj, sid = fact.args
        if verb in rel_set:
            adjacency.setdefault(subject, []).append((verb, obj, sid))
    for fact in ontology:
        if fact.verb in rel_set:
            adjacency.setdefault(fact.subject, []).append(
                (fact.verb, fact.object, fact.sentence)
            )
    for edges in adjacency.values():
        edges.sort(key=lambda e: (e[0], e[1], e[2] is None, e[2] or 0))

    results: list[ClosureResult] = []
    seen: set[tuple[tuple[tuple[str, str], ...], int]] = set()

    def walk(node: str, steps_left: int,
             departed: frozenset[str],
             path: tuple[tuple[str, str], ...]) -> None:
        for verb, obj, sid in adjacency.get(node, ()):
            if obj in departed:
                continue
            new_path = path + ((node, verb),)
            if obj == goal and sid is not None:
                key = (new_path, sid)
                if key not in seen:
                    seen.add(key)
                    results.append(ClosureResult(
                        steps_left=k - len(new_path),
                        sentence=sid,
                        path=new_path,
                    ))
            if steps_left > 1:
                walk(obj, steps_left - 1, departed | {node}, new_path)

    if k >= 1:
        walk(start, k, frozenset(), ())
    return results


def wh_label_families(question: Document) -> frozenset[str]:
    """NER label families requested by the question's wh words."""
    labels: set[str] = set()
    for sent in question.sentences:
        lemmas = [t.lemma for t in sent.tokens]
        for i, lemma in enumerate(lemmas):
            if lemma in WH_LABEL_FAMILIES:
                labels.update(WH_LABEL_FAMILIES[lemma])
            elif lemma == "how" and i + 1 < len(lemmas) \
                    and lemmas[i + 1] in ("many", "much"):
                labels.update(_AMOUNT_LABELS)
    return frozenset(labels)


def wh_match(
    question: Document,
    db: FactDB,
    expanded: Mapping[str, float] | frozenset[str] | set[str],
    pers_sentences: Sequence[tuple[int, float]] | None = None,
    view: DocView | None = None,
) -> list[tuple[int, str]]:
    """Entities answering the question's wh words.

    A sentence qualifies when it bears at least one NER span whose label
    belongs to a family requested by a wh word and shares at least one
    expanded lemma with the query.  When ``pers_sentences`` is given,
    only sentences scoring strictly above the median personalized score
    survive.  Returns ``(sentence id, entity text)`` pairs, sentence
    order then span order, deduplicated.
    """
    labels = wh_label_families(question)
    if not labels:
        return []
    view = view or DocView(db)
    allowed: set[int] | None = None
    if pers_sentences is not None and len(pers_sentences) > 0:
        median = statistics.median(score for _, score in pers_sentences)
        allowed = {sid for sid, score in pers_sentences if score > median}
    hits: list[tuple[int, str]] = []
    seen: set[tuple[int, str]] = set()
    for sid in view.sids:
        if allowed is not None and sid not in allowed:
            continue
        spans = [s for s in view.ner(sid) if s[2] in labels]
        if not spans:
            continue
        if not (view.lemma_set(sid) & set(expanded)):
            continue
        for _, text, _ in spans:
            key = (sid, text)
            if key not in seen:
                seen.add(key)
                hits.append(key)
    return hits


def _minmax(values: Sequence[float]) -> list[float]:
    if not values:
        return []
    lo, hi = min(values), max(values)
    if hi - lo <= 0.0:
        return [0.0] * len(values)
    return [(v - lo) / (hi - lo) for v in values]


def _edge_matches(row: tuple[str, str, str],
                  query_edges: Sequence[tuple[str, str, str]]) -> bool:
    row_from, row_label, row_to = row
    for q_from, q_label, q_to in query_edges:
        if q_label != row_label:
            continue
        if q_from not in WH_WILDCARDS and q_from != row_from:
            continue
        if q_to not in WH_WILDCARDS and q_to != row_to:
            continue
        return True
    return False


def _merge_lemma_ranks(ranks: RankMap, top: int | None = None) -> tuple:
    merged: dict[str, float] = {}
    for node, score in ranks.items():
        if isinstance(node, LemmaNode):
            merged[node.lemma] = merged.get(node.lemma, 0.0) + score
    rows = sorted(merged.items(), key=lambda kv: (-kv[1], kv[0]))
    if top is not None:
        rows = rows[:top]
    return tuple(rows)


def answer(
    question: Document,
    db: FactDB,
    g: TextGraph,
    lex: LexDB | None = None,
    memory: DialogMemory | None = None,
    n: int = DEFAULT_ANSWERS,
    options: GraphOptions | None = None,
    ontology: Sequence[SvoFact] = (),
    view: DocView | None = None,
    tc_steps: int = DEFAULT_TC_STEPS,
    top_lemmas: int = DEFAULT_TOP_LEMMAS,
) -> tuple[AnswerSet, DialogMemory]:
    """Answer ``question`` against a digested document.

    Candidate sentences share at least one expanded lemma with the
    query.  Three signals are min-max normalized over the candidates and
    averaged: personalized sentence rank, the count of sentence
    dependency rows matching query edges (wh words as wildcards), and
    the summed weight of expanded lemmas present.  A unit bonus is added
    for sentences grounding a closure walk between noun personalization
    lemmas, and another for wh entity matches.  The top ``n`` by score
    (ties to the lower id) come back in sentence order, and the memory
    window advances.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    memory = memory or DialogMemory()
    view = view or DocView(db)
    ctx = build_query_context(question, db, g, options, top_lemmas)
    ctx = expand_query(ctx, db, lex, memory, view=view)

    expanded_set = set(ctx.expanded)
    candidates = [
        sid for sid in view.sids
        if view.lemma_set(sid) & expanded_set
    ]

    wh_hits = wh_match(
        question, db, ctx.expanded,
        pers_sentences=ctx.pers_sentences, view=view,
    )
    wh_sids = {sid for sid, _ in wh_hits}

    seeds = []
    for lemma, category in ctx.pers_lemmas:
        if category == NOUN and lemma not in seeds:
            seeds.append(lemma)
    rels = {fact.args[1] for fact in db.family("svo")}
    rels.update(f.verb for f in ontology)
    rels.update((IS_A, PART_OF))
    tc_sids: set[int] = set()
    for a in seeds:
        for c in seeds:
            if a == c:
                continue
            for result in tc(tc_steps, a, rels, c, db, ontology):
                tc_sids.add(result.sentence)

    q_edges = query_dep_edges(ctx.query_graph)
    pers_signal = [
        ctx.pers_ranks.get(SentenceNode(sid), 0.0) for sid in candidates
    ]
    edge_signal = [
        float(sum(
            1 for row in view.dep_rows(sid) if _edge_matches(row, q_edges)
        ))
        for sid in candidates
    ]
    overlap_signal = [
        sum(w for lemma, w in ctx.expanded.items()
            if lemma in view.lemma_set(sid))
        for sid in candidates
    ]
    mm_pers = _minmax(pers_signal)
    mm_edge = _minmax(edge_signal)
    mm_overlap = _minmax(overlap_signal)

    scored = []
    for i, sid in enumerate(candidates):
        score = (mm_pers[i] + mm_edge[i] + mm_overlap[i]) / 3.0
        if sid in tc_sids:
            score += 1.0
        if sid in wh_sids:
            score += 1.0
        scored.append((sid, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    chosen = sorted(scored[:n], key=lambda pair: pair[0])

    answers = tuple(
        Answer(sid=sid, words=view.words(sid), score=score)
        for sid, score in chosen
    )
    entry = MemoryEntry(
        edges=content_dep_edges(ctx.query_graph),
        expanded=dict(ctx.expanded),
        answer_ids=tuple(a.sid for a in answers),
    )
    new_memory = memory.push(entry)
    result = AnswerSet(
        answers=answers,
        weak_match=ctx.weak_match,
        marker=None if answers else NO_CONTENT_MARKER,
        query_ranks=_merge_lemma_ranks(ctx.query_rank),
        pers_words=_merge_lemma_ranks(ctx.pers_ranks, top=25),
        wh_hits=tuple(wh_hits),
    )
    return result, new_memory
