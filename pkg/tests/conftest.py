from importlib.resources import files
from pathlib import Path

import pytest

from growthfn.grammar import parse_grammar, to_poly_system

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = ("dyck.grm", "charney_b3.grm", "charney_b3_braidweighted.grm")


def corpus_text(name):
    return files("growthfn.corpus").joinpath(name).read_text()


def load(name):
    path = FIXTURES / name
    text = path.read_text() if path.exists() else corpus_text(name)
    return parse_grammar(text)


@pytest.fixture
def dyck():
    return load("dyck.grm")


@pytest.fixture
def b3():
    return load("charney_b3.grm")


@pytest.fixture
def b3w():
    return load("charney_b3_braidweighted.grm")


@pytest.fixture
def catalan():
    return load("catalan.grm")


@pytest.fixture(params=CORPUS)
def bundled(request):
    g = load(request.param)
    return request.param, g, to_poly_system(g)
