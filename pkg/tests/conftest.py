import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from phirank.core import Alphabet, parse_regex  # noqa: E402
from phirank.automata import compile  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=0, help="seed for the random expression corpora")


@pytest.fixture(scope="session")
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture(scope="session")
def ab():
    return Alphabet("01")


@pytest.fixture(scope="session")
def dfa_of():
    """compile(regex) over an alphabet given as a string."""

    def make(regex, alphabet="01"):
        a = Alphabet(alphabet)
        return compile(parse_regex(regex, a), a)

    return make
