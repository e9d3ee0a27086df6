import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from revint import generate_source, parse, prepare

ROOT = pathlib.Path(__file__).resolve().parent.parent
SORT_PATH = ROOT / "programs" / "sort.rpl"

CORPUS_SIZE = 200


@pytest.fixture(scope="session")
def sort_source() -> str:
    return SORT_PATH.read_text()


@pytest.fixture(scope="session")
def sort_prepared(sort_source):
    return prepare(parse(sort_source))


@pytest.fixture(scope="session")
def corpus():
    """Generated programs shared by the heavy property tests."""
    return [prepare(parse(generate_source(seed))) for seed in range(CORPUS_SIZE)]
