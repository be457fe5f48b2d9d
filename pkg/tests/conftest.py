"""Shared fixtures: data files, parsed fixture documents, mini lexicon."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

from graphtalk.ingest import parse_conllu
from graphtalk.relations import load_lexdb

DATA_DIR = Path(__file__).parent / "data"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdict lines past output capturing."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "VERDICT_LINES", None)
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_text() -> str:
    return (DATA_DIR / "golden_rules.conllu").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_doc(golden_text):
    return parse_conllu(golden_text, "golden")


@pytest.fixture(scope="session")
def golden_edges() -> set[tuple[str, str, str, float]]:
    """Hand-derived edge multiset as (from, kind, to, weight) tuples."""
    rows = set()
    text = (DATA_DIR / "golden_edges.txt").read_text(encoding="utf-8")
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        src, kind, dst, weight = line.split("|")
        rows.add((src, kind, dst, float(weight)))
    return rows


@pytest.fixture(scope="session")
def covid_text() -> str:
    return (DATA_DIR / "covid_mini.conllu").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def covid_doc(covid_text):
    return parse_conllu(covid_text, "covid_mini")


@pytest.fixture(scope="session")
def mini_wn_dir() -> Path:
    return DATA_DIR / "mini_wn"


@pytest.fixture(scope="session")
def mini_lex(mini_wn_dir):
    return load_lexdb(mini_wn_dir)
