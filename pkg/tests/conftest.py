import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tmmine.corpus import corpus_dir
from tmmine.workspace import Workspace


@pytest.fixture(scope="session")
def licensing():
    return Workspace.discover(corpus_dir("licensing")).load()


@pytest.fixture(scope="session")
def ed():
    return Workspace.discover(corpus_dir("ed")).load()


@pytest.fixture(scope="session")
def licensing_dir():
    return corpus_dir("licensing")


@pytest.fixture(scope="session")
def ed_dir():
    return corpus_dir("ed")
