"""Relational fact database with a Prolog-style clause exchange format.

Nine fact families describe a digested document: ``keyword``,
``summary``, ``dep``, ``edge``, ``rank``, ``w2l``, ``svo``, ``ner`` and
``sent``.  The database preserves insertion order inside each family,
iterates family-major, and round-trips losslessly through
:func:`export_clauses` / :func:`parse_clauses` with deterministic bytes.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .ingest import Document
from .mining import Keyphrase, SummaryEntry
from .relations import SvoFact
from .textgraph import (
    LemmaNode,
    RankMap,
    SentenceNode,
    TextGraph,
    iter_edge_instances,
)

SENT_TAG = "SENT"

FAMILIES = (
    "keyword", "summary", "dep", "edge", "rank", "w2l", "svo", "ner", "sent",
)

FAMILY_FIELDS: dict[str, tuple[str, ...]] = {
    "keyword": ("phrase",),
    "summary": ("sentence", "words"),
    "dep": ("sentence", "word_from", "tag_from", "label", "word_to", "tag_to"),
    "edge": ("sentence", "lemma_from", "tag_from", "label", "lemma_to", "tag_to"),
    "rank": ("key", "value"),
    "w2l": ("word", "lemma", "tag"),
    "svo": ("subject", "verb", "object", "sentence"),
    "ner": ("sentence", "pairs"),
    "sent": ("sentence", "words"),
}

_LIST_FIELDS = {("summary", "words"), ("sent", "words")}
_PAIRLIST_FIELDS = {("ner", "pairs")}

_BARE_ATOM = re.compile(r"[a-z][a-z0-9_]*\Z")
_NUMBER = re.compile(r"-?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)")


class UnknownFamilyError(ValueError):
    def __init__(self, family: str):
        super().__init__(f"unknown fact family {family!r}")
        self.family = family


class CrossDocumentError(ValueError):
    """Inputs to the database builder disagree about the document."""


class ClauseParseError(ValueError):
    """Malformed clause text; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Fact:
    """One relational fact: a family name plus its argument tuple.

    Argument values are ``str``, ``int``, ``float`` or nested tuples
    (word lists and NER pairs), so facts are hashable and comparable.
    """

    family: str
    args: tuple

    def __post_init__(self):
        fields = FAMILY_FIELDS.get(self.family)
        if fields is None:
            raise UnknownFamilyError(self.family)
        if len(self.args) != len(fields):
            raise ValueError(
                f"{self.family} takes {len(fields)} arguments, "
                f"got {len(self.args)}"
            )

    def get(self, field: str):
        fields = FAMILY_FIELDS[self.family]
        try:
            return self.args[fields.index(field)]
        except ValueError:
            raise KeyError(f"{self.family} has no field {field!r}")


class FactDB:
    """Insertion-ordered fact store with per-field lookup indexes."""

    def __init__(self, facts: Iterable[Fact] = ()):
        self._by_family: dict[str, list[Fact]] = {f: [] for f in FAMILIES}
        self._indexes: dict[tuple[str, str], dict[object, list[Fact]]] = {}
        for fact in facts:
            self._by_family[fact.family].append(fact)

    @classmethod
    def from_facts(cls, facts: Iterable[Fact]) -> "FactDB":
        return cls(facts)

    def family(self, name: str) -> tuple[Fact, ...]:
        if name not in FAMILY_FIELDS:
            raise UnknownFamilyError(name)
        return tuple(self._by_family[name])

    def facts(self) -> Iterator[Fact]:
        """All facts, family-major then insertion order."""
        for name in FAMILIES:
            yield from self._by_family[name]

    def counts(self) -> dict[str, int]:
        return {name: len(self._by_family[name]) for name in FAMILIES}

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_family.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactDB):
            return NotImplemented
        return all(
            Counter(self._by_family[f]) == Counter(other._by_family[f])
            for f in FAMILIES
        )

    def _index(self, family: str, field: str) -> dict[object, list[Fact]]:
        key = (family, field)
        if key not in self._indexes:
            pos = FAMILY_FIELDS[family].index(field)
            index: dict[object, list[Fact]] = {}
            for fact in self._by_family[family]:
                index.setdefault(fact.args[pos], []).append(fact)
            self._indexes[key] = index
        return self._indexes[key]

    def lookup(self, family: str, **bound) -> list[Fact]:
        """Facts of ``family`` whose named fields equal the bound values.

        Uses a lazily built field index for the first bound field and
        filters the rest; insertion order is preserved.
        """
        fields = FAMILY_FIELDS.get(family)
        if fields is None:
            raise UnknownFamilyError(family)
        for name in bound:
            if name not in fields:
                raise KeyError(f"{family} has no field {name!r}")
        if not bound:
            return list(self._by_family[family])
        names = sorted(bound, key=fields.index)
        first = names[0]
        candidates = self._index(family, first).get(bound[first], [])
        rest = names[1:]
        if not rest:
            return list(candidates)
        positions = [(fields.index(n), bound[n]) for n in rest]
        return [
            f for f in candidates
            if all(f.args[p] == v for p, v in positions)
        ]


def _endpoint(node) -> tuple[object, str]:
    if isinstance(node, LemmaNode):
        return node.lemma, node.category
    if isinstance(node, SentenceNode):
        return node.sid, SENT_TAG
    raise TypeError(f"unexpected node type {type(node).__name__}")


def build_factdb(
    doc: Document,
    g: TextGraph,
    ranks: RankMap,
    summary: Sequence[SummaryEntry],
    keyphrases: Sequence[Keyphrase],
    svos: Sequence[SvoFact],
) -> FactDB:
    """Assemble the nine fact families for one digested document.

    All inputs must describe ``doc``: sentence ids are checked against
    the document, ``ranks`` must cover the graph's nodes, and the graph
    must be the weighted aggregate of the document's edge instances.
    Violations raise :class:`CrossDocumentError`.
    """
    valid_sids = {s.id for s in doc.sentences}

    bad = {e.sid for e in summary if e.sid not in valid_sids}
    bad |= {
        f.sentence for f in svos
        if f.sentence is not None and f.sentence not in valid_sids
    }
    if bad:
        raise CrossDocumentError(f"sentence ids not in document: {sorted(bad)}")
    unbound = [f for f in svos if f.sentence is None]
    if unbound:
        raise CrossDocumentError(
            "ontology facts (sentence=None) do not belong in a document database"
        )
    missing = [n for n in g.nodes if n not in ranks]
    if missing:
        raise CrossDocumentError(
            f"ranks missing {len(missing)} graph node(s)"
        )

    has_first_in = any(k.name == "first_in" for (_, _, k) in g.edges)
    instances = list(iter_edge_instances(doc, has_first_in))
    aggregate: dict = {}
    for sid, src, dst, kind in instances:
        key = (src, dst, kind)
        aggregate[key] = aggregate.get(key, 0.0) + 1.0
    if aggregate != g.edges:
        raise CrossDocumentError("graph does not derive from document")

    facts: list[Fact] = []
    for phrase in keyphrases:
        facts.append(Fact("keyword", (phrase.text,)))
    for entry in summary:
        facts.append(Fact("summary", (entry.sid, tuple(entry.words))))
    for sent in doc.sentences:
        for tok in sent.tokens:
            if tok.head == 0:
                continue
            head = sent.token_at(tok.head)
            facts.append(Fact("dep", (
                sent.id, head.word, head.tag, tok.deprel, tok.word, tok.tag,
            )))
    seen_edges: set = set()
    for sid, src, dst, kind in instances:
        key = (sid, src, dst, kind)
        if key in seen_edges:
            continue
        seen_edges.add(key)
        from_val, from_tag = _endpoint(src)
        to_val, to_tag = _endpoint(dst)
        facts.append(Fact("edge", (
            sid, from_val, from_tag, kind.as_label(), to_val, to_tag,
        )))
    for node in g.sorted_nodes():
        key = node.lemma if isinstance(node, LemmaNode) else node.sid
        facts.append(Fact("rank", (key, float(ranks[node]))))
    seen_w2l: set = set()
    for sent in doc.sentences:
        for tok in sent.tokens:
            triple = (tok.word, tok.lemma, tok.tag)
            if triple not in seen_w2l:
                seen_w2l.add(triple)
                facts.append(Fact("w2l", triple))
    for svo in svos:
        facts.append(Fact("svo", (svo.subject, svo.verb, svo.object, svo.sentence)))
    for sent in doc.sentences:
        if sent.ner_spans:
            pairs = tuple(
                (idx, (text, label)) for idx, text, label in sent.ner_spans
            )
            facts.append(Fact("ner", (sent.id, pairs)))
    for sent in doc.sentences:
        facts.append(Fact("sent", (sent.id, tuple(sent.words()))))
    return FactDB(facts)


def render_atom(value: str) -> str:
    if _BARE_ATOM.match(value):
        return value
    escaped = value.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def _render_scalar(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean fact arguments are not supported")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return render_atom(value)
    raise TypeError(f"cannot render {type(value).__name__} as a clause term")


def _render_arg(family: str, field: str, value) -> str:
    if (family, field) in _LIST_FIELDS:
        return "[" + ",".join(_render_scalar(v) for v in value) + "]"
    if (family, field) in _PAIRLIST_FIELDS:
        parts = [
            f"({_render_scalar(idx)},({_render_scalar(text)},{_render_scalar(label)}))"
            for idx, (text, label) in value
        ]
        return "[" + ",".join(parts) + "]"
    return _render_scalar(value)


def export_clauses(db: FactDB) -> str:
    """Serialize the database, one clause per line.

    Families appear in canonical order, facts within each family in
    insertion order, so the same database always exports the same
    bytes.  Atoms that are not lower-case identifiers are single-quoted
    with ``\\`` escapes; floats use the shortest round-tripping form.
    """
    lines = []
    for fact in db.facts():
        fields = FAMILY_FIELDS[fact.family]
        rendered = ",".join(
            _render_arg(fact.family, field, value)
            for field, value in zip(fields, fact.args)
        )
        lines.append(f"{fact.family}({rendered}).")
    return "\n".join(lines) + ("\n" if lines else "")


class _ClauseScanner:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def error(self, message: str) -> ClauseParseError:
        return ClauseParseError(self.line_no, message)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r} at column {self.pos + 1}")
        self.pos += 1

    def read_functor(self) -> str:
        self.skip_ws()
        m = re.match(r"[a-z][a-z0-9_]*", self.text[self.pos:])
        if not m:
            raise self.error("expected a functor")
        self.pos += m.end()
        return m.group(0)

    def read_term(self):
        self.skip_ws()
        ch = self.peek()
        if ch == "'":
            return self._read_quoted()
        if ch == "[":
            return self._read_list()
        if ch == "(":
            return self._read_tuple()
        m = _NUMBER.match(self.text, self.pos)
        if m:
            text = m.group(0)
            self.pos = m.end()
            if "." in text or "e" in text or "E" in text:
                return float(text)
            return int(text)
        m = re.match(r"[a-z][a-z0-9_]*", self.text[self.pos:])
        if m:
            self.pos += m.end()
            return m.group(0)
        raise self.error(f"unexpected character {ch!r} at column {self.pos + 1}")

    def _read_quoted(self) -> str:
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated quoted atom")
            ch = self.text[self.pos]
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.error("dangling escape in quoted atom")
                out.append(self.text[self.pos + 1])
                self.pos += 2
                continue
            if ch == "'":
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1

    def _read_list(self) -> tuple:
        self.pos += 1
        items = []
        self.skip_ws()
        if self.peek() == "]":
            self.pos += 1
            return ("list", tuple(items))
        while True:
            items.append(self.read_term())
            self.skip_ws()
            ch = self.peek()
            if ch == ",":
                self.pos += 1
                continue
            if ch == "]":
                self.pos += 1
                return ("list", tuple(items))
            raise self.error("expected ',' or ']' in list")

    def _read_tuple(self) -> tuple:
        self.pos += 1
        items = [self.read_term()]
        self.skip_ws()
        while self.peek() == ",":
            self.pos += 1
            items.append(self.read_term())
            self.skip_ws()
        self.expect(")")
        if len(items) < 2:
            raise self.error("parenthesized terms need at least two elements")
        return ("tuple", tuple(items))


def _coerce_scalar(value, want: str, scanner: _ClauseScanner, field: str):
    if want == "int":
        if isinstance(value, int):
            return value
    elif want == "atom":
        if isinstance(value, str):
            return value
    elif want == "atom_or_int":
        if isinstance(value, (str, int)):
            return value
    elif want == "number":
        if isinstance(value, (int, float)):
            return float(value)
    raise scanner.error(f"field {field!r} has the wrong type")


_SCALAR_KINDS: dict[tuple[str, str], str] = {
    ("keyword", "phrase"): "atom",
    ("summary", "sentence"): "int",
    ("dep", "sentence"): "int",
    ("dep", "word_from"): "atom",
    ("dep", "tag_from"): "atom",
    ("dep", "label"): "atom",
    ("dep", "word_to"): "atom",
    ("dep", "tag_to"): "atom",
    ("edge", "sentence"): "int",
    ("edge", "lemma_from"): "atom_or_int",
    ("edge", "tag_from"): "atom",
    ("edge", "label"): "atom",
    ("edge", "lemma_to"): "atom_or_int",
    ("edge", "tag_to"): "atom",
    ("rank", "key"): "atom_or_int",
    ("rank", "value"): "number",
    ("w2l", "word"): "atom",
    ("w2l", "lemma"): "atom",
    ("w2l", "tag"): "atom",
    ("svo", "subject"): "atom",
    ("svo", "verb"): "atom",
    ("svo", "object"): "atom",
    ("svo", "sentence"): "int",
    ("ner", "sentence"): "int",
    ("sent", "sentence"): "int",
}


def _coerce_arg(family: str, field: str, value, scanner: _ClauseScanner):
    if (family, field) in _LIST_FIELDS:
        if not (isinstance(value, tuple) and value and value[0] == "list"):
            raise scanner.error(f"field {field!r} must be a list")
        words = []
        for item in value[1]:
            if not isinstance(item, str):
                raise scanner.error(f"field {field!r} must contain atoms")
            words.append(item)
        return tuple(words)
    if (family, field) in _PAIRLIST_FIELDS:
        if not (isinstance(value, tuple) and value and value[0] == "list"):
            raise scanner.error(f"field {field!r} must be a list")
        pairs = []
        for item in value[1]:
            ok = (
                isinstance(item, tuple) and item[0] == "tuple"
                and len(item[1]) == 2 and isinstance(item[1][0], int)
                and isinstance(item[1][1], tuple) and item[1][1][0] == "tuple"
                and len(item[1][1][1]) == 2
                and all(isinstance(x, str) for x in item[1][1][1])
            )
            if not ok:
                raise scanner.error(
                    f"field {field!r} must contain (index,(text,label)) pairs"
                )
            idx = item[1][0]
            text, label = item[1][1][1]
            pairs.append((idx, (text, label)))
        return tuple(pairs)
    return _coerce_scalar(value, _SCALAR_KINDS[(family, field)], scanner, field)


def parse_clauses(text: str) -> FactDB:
    """Parse clause text back into a :class:`FactDB`.

    One clause per line; blank lines are ignored.  Unknown functors,
    arity mismatches and type mismatches raise
    :class:`ClauseParseError` naming the line.  Exporting the parsed
    database reproduces the input bytes.
    """
    facts: list[Fact] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        scanner = _ClauseScanner(raw.rstrip(), line_no)
        functor = scanner.read_functor()
        if functor not in FAMILY_FIELDS:
            raise scanner.error(f"unknown fact family {functor!r}")
        scanner.expect("(")
        args = [scanner.read_term()]
        scanner.skip_ws()
        while scanner.peek() == ",":
            scanner.pos += 1
            args.append(scanner.read_term())
            scanner.skip_ws()
        scanner.expect(")")
        scanner.expect(".")
        scanner.skip_ws()
        if scanner.pos != len(scanner.text):
            raise scanner.error("trailing characters after clause")
        fields = FAMILY_FIELDS[functor]
        if len(args) != len(fields):
            raise scanner.error(
                f"{functor} takes {len(fields)} arguments, got {len(args)}"
            )
        coerced = tuple(
            _coerce_arg(functor, field, value, scanner)
            for field, value in zip(fields, args)
        )
        facts.append(Fact(functor, coerced))
    return FactDB.from_facts(facts)
