"""Shared fixtures: parsed corpus systems and corpus paths."""

from __future__ import annotations

from pathlib import Path

import pytest

from chclab import parse_system

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
RAND = CORPUS / "rand"


def load(name: str):
    return parse_system((CORPUS / name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def lockstep():
    return load("lockstep.chc")


@pytest.fixture(scope="session")
def lockstep_proc():
    return load("lockstep_proc.chc")


@pytest.fixture(scope="session")
def addition_loops():
    return load("addition_loops.chc")


@pytest.fixture(scope="session")
def ladder():
    return load("ladder.chc")


@pytest.fixture(scope="session")
def no_init():
    return load("no_init.chc")


@pytest.fixture(scope="session")
def corpus_paths():
    """Every bundled system: the five named ones plus the random batch."""
    named = sorted(CORPUS.glob("*.chc"))
    rand = sorted(RAND.glob("*.chc"))
    assert len(named) == 5 and len(rand) == 20
    return named + rand


@pytest.fixture(scope="session")
def corpus_systems(corpus_paths):
    return [(p.name, parse_system(p.read_text(encoding="utf-8"))) for p in corpus_paths]
