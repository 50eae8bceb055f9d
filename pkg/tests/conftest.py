import pytest

from tbix.corpus import ingest_text
from tbix.index import build_index
from tbix.selftest import REFERENCE_LINES

# Three-document reference corpus used across the suite; all expected
# values in the tests were enumerated by hand against it.


@pytest.fixture(scope="session")
def ref_corpus():
    return ingest_text(REFERENCE_LINES)


@pytest.fixture(scope="session")
def ref_index(ref_corpus):
    return build_index(ref_corpus)


@pytest.fixture(scope="session")
def tid(ref_corpus):
    """Token -> term id shorthand for the reference corpus."""
    return ref_corpus.vocab.id
