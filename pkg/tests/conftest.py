import pathlib

import pytest

from contactcheck import parse_spec

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "contactcheck" / "data"

CORPUS = [
    "nonconstant-k",
    "heisenberg",
    "hyperbolic",
    "euclidean",
    "flat-contact",
    "darboux",
    "corrupted-phi",
]


def load(name):
    text = (DATA / f"{name}.cmspec").read_text()
    return parse_spec(text, name=name)


@pytest.fixture(scope="session")
def corpus():
    return {name: load(name) for name in CORPUS}


@pytest.fixture(scope="session")
def counterexample():
    return load("nonconstant-k")


@pytest.fixture(scope="session")
def heisenberg():
    return load("heisenberg")


@pytest.fixture(scope="session")
def hyperbolic():
    return load("hyperbolic")


@pytest.fixture(scope="session")
def tables(corpus):
    # compute_tables is expensive enough to share across the whole session
    from contactcheck import compute_tables

    return {name: compute_tables(spec) for name, spec in corpus.items()}
