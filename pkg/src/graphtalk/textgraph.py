"""Lemma + sentence text graph and its ranking operations.

A document becomes a directed weighted graph over two node kinds:
lemma nodes ``(lemma, category)`` and sentence nodes ``(sid)``.  Edges
come from five rewriting rules applied to every sentence:

1. dependency edges whose label marks a subject or object role point
   head lemma -> dependent lemma, keeping the label;
2. every other dependency edge is reversed: dependent -> head;
3. ``about``: sentence -> noun lemma for every noun filling a
   subject/object role in that sentence;
4. ``recommend``: content lemma (noun or verb) -> its sentence, and
   sentence -> verbs of its main predicates;
5. optionally ``first_in``: content lemma -> the first sentence that
   contains it.

Parallel edge occurrences collapse into one edge whose weight is the
occurrence count.  Ranking is damped PageRank over this graph, with an
optional personalization distribution for query-focused ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import _rankcore
from .ingest import Document, NOUN, OTHER, VERB, Sentence, Token

SUBJ_LABELS = frozenset({"nsubj", "nsubj:pass", "csubj"})
OBJ_LABELS = frozenset({"obj", "dobj", "iobj"})
SUBJ_OBJ_LABELS = SUBJ_LABELS | OBJ_LABELS

# Dependents that carry a clause's predicate when attached to the root
# or to another predicate verb.
PREDICATE_DEPRELS = frozenset({"root", "ccomp", "xcomp", "advcl", "conj"})

CONTENT_CATEGORIES = frozenset({NOUN, VERB})


class EmptyGraphError(ValueError):
    """Ranking was asked for a graph with no nodes."""


class PersonalizationError(ValueError):
    """Personalization weights empty, all zero, or disjoint from the graph."""


@dataclass(frozen=True)
class LemmaNode:
    lemma: str
    category: str

    def sort_key(self):
        return (0, self.lemma, self.category)

    def display(self) -> str:
        return f"{self.lemma}/{self.category}"


@dataclass(frozen=True)
class SentenceNode:
    sid: int

    def sort_key(self):
        return (1, self.sid, "")

    def display(self) -> str:
        return f"s{self.sid}"


NodeId = LemmaNode | SentenceNode


@dataclass(frozen=True)
class EdgeKind:
    """Edge flavor: ``dep`` with a deprel label, or a synthetic kind."""

    name: str
    label: str | None = None

    def __post_init__(self):
        if self.name not in ("dep", "about", "recommend", "first_in"):
            raise ValueError(f"unknown edge kind {self.name!r}")
        if self.name == "dep" and not self.label:
            raise ValueError("dep edges require a label")
        if self.name != "dep" and self.label is not None:
            raise ValueError(f"{self.name} edges carry no label")

    @classmethod
    def dep(cls, label: str) -> "EdgeKind":
        return cls("dep", label)

    def as_label(self) -> str:
        """Label used in fact output and exports."""
        return self.label if self.name == "dep" else self.name

    def sort_key(self):
        return (self.name, self.label or "")


ABOUT = EdgeKind("about")
RECOMMEND = EdgeKind("recommend")
FIRST_IN = EdgeKind("first_in")


@dataclass(frozen=True)
class GraphOptions:
    """Graph construction and ranking parameters."""

    enable_first_in: bool = False
    damping: float = 0.85
    epsilon: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must be in (0, 1), got {self.damping}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


class TextGraph:
    """Directed weighted multigraph with collapsed parallel edges."""

    def __init__(self):
        self.nodes: set[NodeId] = set()
        self.edges: dict[tuple[NodeId, NodeId, EdgeKind], float] = {}
        self._arrays = None
        self._sorted_nodes: tuple[NodeId, ...] | None = None

    def add_node(self, node: NodeId) -> None:
        self.nodes.add(node)
        self._invalidate()

    def add_edge(self, src: NodeId, dst: NodeId, kind: EdgeKind,
                 weight: float = 1.0) -> None:
        if weight <= 0:
            raise ValueError(f"edge weight must be positive, got {weight}")
        self.nodes.add(src)
        self.nodes.add(dst)
        key = (src, dst, kind)
        self.edges[key] = self.edges.get(key, 0.0) + weight
        self._invalidate()

    def _invalidate(self) -> None:
        self._arrays = None
        self._sorted_nodes = None

    def __contains__(self, node: NodeId) -> bool:
        return node in self.nodes

    def node_count(self) -> int:
        return len(self.nodes)

    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_nodes(self) -> tuple[NodeId, ...]:
        if self._sorted_nodes is None:
            self._sorted_nodes = tuple(
                sorted(self.nodes, key=lambda n: n.sort_key())
            )
        return self._sorted_nodes

    def lemma_nodes(self) -> list[LemmaNode]:
        return [n for n in self.sorted_nodes() if isinstance(n, LemmaNode)]

    def sentence_nodes(self) -> list[SentenceNode]:
        return [n for n in self.sorted_nodes() if isinstance(n, SentenceNode)]

    def sorted_edges(self) -> list[tuple[NodeId, NodeId, EdgeKind, float]]:
        return [
            (s, d, k, w)
            for (s, d, k), w in sorted(
                self.edges.items(),
                key=lambda item: (
                    item[0][0].sort_key(),
                    item[0][1].sort_key(),
                    item[0][2].sort_key(),
                ),
            )
        ]

    def to_arrays(self):
        """COO arrays for the rank kernel, cached until the graph changes.

        Returns ``(nodes, index, src, dst, val, dangling)`` where ``val``
        is already divided by each source's total out-weight and
        ``dangling`` is a boolean mask over node indices.
        """
        if self._arrays is None:
            nodes = self.sorted_nodes()
            index = {n: i for i, n in enumerate(nodes)}
            m = len(self.edges)
            src = np.empty(m, dtype=np.int64)
            dst = np.empty(m, dtype=np.int64)
            val = np.empty(m, dtype=np.float64)
            out_sum = np.zeros(len(nodes), dtype=np.float64)
            for e, ((s, d, _), w) in enumerate(sorted(
                self.edges.items(),
                key=lambda item: (
                    item[0][0].sort_key(),
                    item[0][1].sort_key(),
                    item[0][2].sort_key(),
                ),
            )):
                src[e] = index[s]
                dst[e] = index[d]
                val[e] = w
                out_sum[index[s]] += w
            dangling = out_sum == 0.0
            if m:
                val /= out_sum[src]
            self._arrays = (nodes, index, src, dst, val, dangling)
        return self._arrays


def _node_of(token: Token) -> LemmaNode:
    return LemmaNode(token.lemma, token.category)


def iter_edge_instances(
    doc: Document, enable_first_in: bool = False
) -> Iterator[tuple[int, NodeId, NodeId, EdgeKind]]:
    """Yield one ``(sid, src, dst, kind)`` tuple per rule application.

    This is the single source of truth for the rewriting rules: the
    graph is their weighted aggregate and the relational Edge facts are
    their per-sentence projection.  ``first_in`` instances are yielded
    last, attributed to the lemma's first sentence.
    """
    first_seen: dict[LemmaNode, int] = {}
    for sent in doc.sentences:
        snode = SentenceNode(sent.id)
        for tok in sent.tokens:
            if tok.head == 0:
                continue
            head = sent.token_at(tok.head)
            if tok.deprel in SUBJ_OBJ_LABELS:
                yield sent.id, _node_of(head), _node_of(tok), EdgeKind.dep(tok.deprel)
            else:
                yield sent.id, _node_of(tok), _node_of(head), EdgeKind.dep(tok.deprel)
        for tok in sent.tokens:
            if tok.deprel in SUBJ_OBJ_LABELS and tok.category == NOUN:
                yield sent.id, snode, _node_of(tok), ABOUT
        for tok in sent.tokens:
            if tok.category in CONTENT_CATEGORIES:
                yield sent.id, _node_of(tok), snode, RECOMMEND
        for tok in sent.tokens:
            if tok.category == VERB and tok.deprel in PREDICATE_DEPRELS:
                yield sent.id, snode, _node_of(tok), RECOMMEND
        if enable_first_in:
            for tok in sent.tokens:
                if tok.category in CONTENT_CATEGORIES:
                    first_seen.setdefault(_node_of(tok), sent.id)
    if enable_first_in:
        for node, sid in sorted(first_seen.items(), key=lambda kv: kv[0].sort_key()):
            yield sid, node, SentenceNode(sid), FIRST_IN


def build_graph(doc: Document, options: GraphOptions | None = None) -> TextGraph:
    """Build the text graph of ``doc`` under ``options``.

    Every sentence gets a node and every token's lemma gets a node, so
    isolated nodes are possible; rank mass still reaches them through
    teleportation.  ``first_in`` edges each have weight 1 by
    construction (one per content lemma).
    """
    options = options or GraphOptions()
    g = TextGraph()
    for sent in doc.sentences:
        g.add_node(SentenceNode(sent.id))
        for tok in sent.tokens:
            g.add_node(_node_of(tok))
    for _, src, dst, kind in iter_edge_instances(doc, options.enable_first_in):
        g.add_edge(src, dst, kind, 1.0)
    return g


RankMap = dict  # NodeId -> float


def _run_kernel(g: TextGraph, teleport: np.ndarray,
                options: GraphOptions) -> RankMap:
    nodes, _, src, dst, val, dangling = g.to_arrays()
    x = _rankcore.power_iteration(
        src, dst, val, dangling, teleport,
        options.damping, options.epsilon, options.max_iterations,
    )
    total = float(x.sum())
    if total > 0:
        x = x / total
    return {node: float(score) for node, score in zip(nodes, x)}


def pagerank(g: TextGraph, options: GraphOptions | None = None) -> RankMap:
    """Damped PageRank with uniform teleport; scores sum to 1."""
    options = options or GraphOptions()
    if not g.nodes:
        raise EmptyGraphError("cannot rank an empty graph")
    n = g.node_count()
    teleport = np.full(n, 1.0 / n, dtype=np.float64)
    return _run_kernel(g, teleport, options)


def personalized_pagerank(
    g: TextGraph,
    personalization: Mapping[NodeId, float],
    options: GraphOptions | None = None,
) -> RankMap:
    """PageRank whose teleport is proportional to ``personalization``.

    Weights for nodes outside the graph are dropped; if nothing positive
    remains, :class:`PersonalizationError` is raised.  Dangling mass is
    redistributed by the same personalized distribution.
    """
    options = options or GraphOptions()
    if not g.nodes:
        raise EmptyGraphError("cannot rank an empty graph")
    nodes, index, *_ = g.to_arrays()
    teleport = np.zeros(len(nodes), dtype=np.float64)
    for node, weight in personalization.items():
        if weight < 0:
            raise PersonalizationError(
                f"personalization weights must be >= 0, got {weight}"
            )
        if node in index:
            teleport[index[node]] += float(weight)
    total = float(teleport.sum())
    if total <= 0.0:
        raise PersonalizationError(
            "personalization has no positive weight on graph nodes"
        )
    teleport /= total
    return _run_kernel(g, teleport, options)


def normalize_sentence_ranks(ranks: RankMap, doc: Document) -> RankMap:
    """Divide sentence scores by ``1 + ln(1 + length)`` and renormalize.

    Damps the advantage long sentences get from sheer token count.  All
    node scores are rescaled afterwards so the map still sums to 1.
    """
    lengths = {s.id: len(s.tokens) for s in doc.sentences}
    return normalize_sentence_ranks_by_length(ranks, lengths)


def normalize_sentence_ranks_by_length(
    ranks: RankMap, lengths: Mapping[int, int]
) -> RankMap:
    adjusted: RankMap = {}
    for node, score in ranks.items():
        if isinstance(node, SentenceNode):
            if node.sid not in lengths:
                raise ValueError(f"no length known for sentence {node.sid}")
            score = score / (1.0 + math.log(1.0 + lengths[node.sid]))
        adjusted[node] = score
    total = sum(adjusted.values())
    if total <= 0:
        return adjusted
    return {node: score / total for node, score in adjusted.items()}


def top_subgraph(g: TextGraph, ranks: RankMap, k: int,
                 lemma_only: bool = False) -> TextGraph:
    """Induced subgraph on the ``k`` best-ranked nodes.

    Ties break on the deterministic node sort key.  With ``lemma_only``
    sentence nodes are excluded before selection.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    candidates = [
        n for n in g.sorted_nodes()
        if not (lemma_only and isinstance(n, SentenceNode))
    ]
    candidates.sort(key=lambda n: (-ranks.get(n, 0.0), n.sort_key()))
    keep = set(candidates[:k])
    sub = TextGraph()
    for node in keep:
        sub.add_node(node)
    for (s, d, kind), w in g.edges.items():
        if s in keep and d in keep:
            sub.add_edge(s, d, kind, w)
    return sub


def dump(g: TextGraph, ranks: RankMap | None = None) -> dict:
    """JSON-ready dict of nodes and edges in deterministic order."""
    nodes = []
    for node in g.sorted_nodes():
        entry: dict = {"id": node.display()}
        if isinstance(node, LemmaNode):
            entry["kind"] = "lemma"
            entry["lemma"] = node.lemma
            entry["category"] = node.category
        else:
            entry["kind"] = "sentence"
            entry["sid"] = node.sid
        if ranks is not None:
            entry["rank"] = ranks.get(node, 0.0)
        nodes.append(entry)
    edges = [
        {
            "from": s.display(),
            "to": d.display(),
            "kind": k.name,
            "label": k.as_label(),
            "weight": w,
        }
        for s, d, k, w in g.sorted_edges()
    ]
    return {"nodes": nodes, "edges": edges}


def to_dot(g: TextGraph, ranks: RankMap | None = None) -> str:
    """Graphviz text for the graph (intended for small subgraphs)."""
    lines = ["digraph textgraph {"]
    for node in g.sorted_nodes():
        label = node.display()
        if ranks is not None and node in ranks:
            label = f"{label}\\n{ranks[node]:.4f}"
        shape = "box" if isinstance(node, SentenceNode) else "ellipse"
        lines.append(f'  "{node.display()}" [label="{label}", shape={shape}];')
    for s, d, k, w in g.sorted_edges():
        lines.append(
            f'  "{s.display()}" -> "{d.display()}" '
            f'[label="{k.as_label()}", weight={w:g}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
