"""Shared builders and random generators for the test suite."""

from __future__ import annotations

import random

from graphtalk.factdb import Fact, FactDB
from graphtalk.ingest import Document, Sentence, Token
from graphtalk.textgraph import (
    ABOUT,
    FIRST_IN,
    RECOMMEND,
    EdgeKind,
    LemmaNode,
    SentenceNode,
    TextGraph,
)


def tok(index, word, upos, head, deprel, lemma=None, xpos=None):
    return Token(index=index, word=word,
                 lemma=(lemma or word).lower(), upos=upos,
                 xpos=xpos, head=head, deprel=deprel)


def sent(sid, tokens, ner=()):
    return Sentence(id=sid, tokens=tuple(tokens), ner_spans=tuple(ner))


def doc(sentences, doc_id="test"):
    return Document(doc_id=doc_id, sentences=tuple(sentences))


def simple_doc():
    """Two sentences: 'The dog chases a cat .' / 'Dogs bark .'"""
    s0 = sent(0, [
        tok(1, "The", "DET", 3, "det"),
        tok(2, "dog", "NOUN", 3, "nsubj"),
        tok(3, "chases", "VERB", 0, "root", lemma="chase"),
        tok(4, "a", "DET", 5, "det"),
        tok(5, "cat", "NOUN", 3, "obj"),
        tok(6, ".", "PUNCT", 3, "punct"),
    ])
    s1 = sent(1, [
        tok(1, "Dogs", "NOUN", 2, "nsubj", lemma="dog"),
        tok(2, "bark", "VERB", 0, "root"),
        tok(3, ".", "PUNCT", 2, "punct"),
    ])
    return doc([s0, s1])


_UPOS_CHOICES = ["NOUN", "VERB", "DET", "ADJ", "ADV", "PRON", "PROPN",
                 "AUX", "PUNCT", "ADP"]
_DEPREL_CHOICES = ["nsubj", "obj", "det", "amod", "punct", "advmod",
                   "compound", "nmod", "conj", "case", "obl", "iobj"]


def random_sentence(rng: random.Random, sid: int, vocab: list[str],
                    min_len=2, max_len=12) -> Sentence:
    n = rng.randint(min_len, max_len)
    root = rng.randrange(n)
    in_tree = [root]
    heads = [0] * n
    order = [i for i in range(n) if i != root]
    rng.shuffle(order)
    for i in order:
        heads[i] = rng.choice(in_tree) + 1
        in_tree.append(i)
    tokens = []
    for i in range(n):
        word = rng.choice(vocab)
        upos = rng.choice(_UPOS_CHOICES)
        deprel = "root" if i == root else rng.choice(_DEPREL_CHOICES)
        tokens.append(Token(
            index=i + 1, word=word.capitalize() if rng.random() < 0.2 else word,
            lemma=word, upos=upos, xpos=None,
            head=0 if i == root else heads[i], deprel=deprel,
        ))
    return Sentence(id=sid, tokens=tuple(tokens))


def random_document(rng: random.Random, sentences=5, vocab_size=30,
                    doc_id="random") -> Document:
    vocab = [f"w{i}" for i in range(vocab_size)]
    return Document(doc_id=doc_id, sentences=tuple(
        random_sentence(rng, sid, vocab) for sid in range(sentences)
    ))


def random_graph(rng: random.Random, max_nodes=50) -> TextGraph:
    g = TextGraph()
    n_lemmas = rng.randint(1, max(1, max_nodes - 5))
    n_sents = rng.randint(0, min(5, max_nodes - n_lemmas))
    lemmas = [
        LemmaNode(f"w{i}", rng.choice(["NOUN", "VERB", "OTHER"]))
        for i in range(n_lemmas)
    ]
    sents = [SentenceNode(i) for i in range(n_sents)]
    nodes = lemmas + sents
    for node in nodes:
        g.add_node(node)
    kinds = [EdgeKind.dep("nsubj"), EdgeKind.dep("obj"), EdgeKind.dep("det"),
             ABOUT, RECOMMEND, FIRST_IN]
    n_edges = rng.randint(0, 3 * len(nodes))
    for _ in range(n_edges):
        g.add_edge(rng.choice(nodes), rng.choice(nodes), rng.choice(kinds),
                   rng.choice([1.0, 1.0, 2.0, 0.5]))
    return g


_ATOM_POOL = [
    "dog", "cat", "nsubj", "x1", "is_a", "part_of",
    "Dog", "NN", "SENT", "", " ", "it's", "a b c", "don't stop",
    "back\\slash", "quote'quote", "über", "...", "_under", "9lives",
    "March", "DATE", "['", "\\", "'", "(paren)", "comma,comma",
]


def random_atom(rng: random.Random) -> str:
    return rng.choice(_ATOM_POOL)


def random_float(rng: random.Random) -> float:
    return rng.choice([
        rng.random(),
        rng.random() * 1e-9,
        rng.random() * 1e9,
        0.2162991696472837,
        1.0,
        -rng.random(),
        0.0,
    ])


def random_fact(rng: random.Random) -> Fact:
    family = rng.choice([
        "keyword", "summary", "dep", "edge", "rank", "w2l", "svo",
        "ner", "sent",
    ])
    a = lambda: random_atom(rng)
    sid = rng.randint(0, 99)
    if family == "keyword":
        return Fact("keyword", (a(),))
    if family == "summary":
        return Fact("summary", (sid, tuple(a() for _ in range(rng.randint(0, 6)))))
    if family == "dep":
        return Fact("dep", (sid, a(), a(), a(), a(), a()))
    if family == "edge":
        ends = [a(), rng.randint(0, 99)]
        return Fact("edge", (sid, rng.choice(ends), a(), a(),
                             rng.choice(ends), a()))
    if family == "rank":
        key = rng.choice([a(), rng.randint(0, 99)])
        return Fact("rank", (key, random_float(rng)))
    if family == "w2l":
        return Fact("w2l", (a(), a(), a()))
    if family == "svo":
        return Fact("svo", (a() or "s", a() or "v", a() or "o", sid))
    if family == "ner":
        pairs = tuple(
            (rng.randint(0, 20), (a(), a()))
            for _ in range(rng.randint(0, 4))
        )
        return Fact("ner", (sid, pairs))
    return Fact("sent", (sid, tuple(a() for _ in range(rng.randint(0, 8)))))


def random_factdb(rng: random.Random, max_facts=40) -> FactDB:
    return FactDB.from_facts(
        random_fact(rng) for _ in range(rng.randint(0, max_facts))
    )


def random_svo_rows(rng: random.Random, max_lemmas=12, max_facts=20):
    """Random grounded + ontology rows for closure testing."""
    lemmas = [f"l{i}" for i in range(rng.randint(2, max_lemmas))]
    verbs = ["is_a", "part_of", "chase", "see"]
    rows = []
    for _ in range(rng.randint(1, max_facts)):
        sid = rng.choice([None, rng.randint(0, 9), rng.randint(0, 9)])
        rows.append((rng.choice(lemmas), rng.choice(verbs),
                     rng.choice(lemmas), sid))
    return lemmas, verbs, rows
