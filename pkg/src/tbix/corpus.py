"""Document ingestion, tokenization, and dense id assignment.

One document per non-empty input line. Document ids follow line order;
term ids are assigned after ingestion, in ascending lexicographic token
order, so they do not depend on where a token first appears. Ingestion is
single-writer; a finished Corpus is immutable and safe for concurrent
reads.
"""

import re
from dataclasses import dataclass
from pathlib import Path

from tbix.errors import CorpusDecodeError, EmptyCorpusError, EmptyQueryError, UnknownTermError

# Maximal runs of alphanumeric characters; underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_]+")


def tokenize(text):
    """Lowercase and split on runs of non-alphanumeric characters.

    No stopword removal: every token is kept, duplicates included.
    """
    return _TOKEN_RE.findall(text.lower())


class Vocabulary:
    """Bidirectional token <-> term-id map; ids are dense and lexicographic."""

    def __init__(self, tokens):
        self._tokens = tuple(tokens)
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}

    @property
    def tokens(self):
        return self._tokens

    def id(self, token):
        return self._ids[token]

    def get(self, token):
        return self._ids.get(token)

    def token(self, term_id):
        return self._tokens[term_id]

    def __contains__(self, token):
        return token in self._ids

    def __len__(self):
        return len(self._tokens)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._tokens == other._tokens


class Corpus:
    """Tokenized documents plus the finalized vocabulary."""

    def __init__(self, docs, vocab):
        self.docs = tuple(tuple(d) for d in docs)
        self.vocab = vocab

    @property
    def doc_count(self):
        return len(self.docs)

    @property
    def term_count(self):
        return len(self.vocab)

    def __eq__(self, other):
        return (
            isinstance(other, Corpus)
            and self.docs == other.docs
            and self.vocab == other.vocab
        )


def ingest_text(lines):
    """Build a Corpus from an iterable of text lines.

    Each line whose content is non-empty becomes one document, in order.
    Raises EmptyCorpusError when no documents remain.
    """
    docs = [tokenize(line) for line in lines if line.strip()]
    if not docs:
        raise EmptyCorpusError("no documents in input")
    seen = set()
    for doc in docs:
        seen.update(doc)
    return Corpus(docs, Vocabulary(sorted(seen)))


def ingest(source):
    """Ingest a UTF-8, newline-separated document stream.

    ``source`` is a path or a binary file object. Invalid UTF-8 is
    rejected with the byte offset of the first bad byte.
    """
    if hasattr(source, "read"):
        data = source.read()
    else:
        data = Path(source).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError("input is not valid UTF-8", exc.start) from None
    return ingest_text(text.splitlines())


@dataclass(frozen=True)
class Query:
    """Deduplicated term ids in first-occurrence order.

    ``unknown`` records query tokens absent from the vocabulary; any such
    token makes the conjunction empty, which the engine reports via the
    result rather than an error.
    """

    terms: tuple
    unknown: tuple = ()


def parse_query(text, corpus):
    """Tokenize query text and map it onto term ids.

    ``corpus`` may be a Corpus or a bare Vocabulary. Raises
    EmptyQueryError when the text has no tokens at all and
    UnknownTermError when none of the tokens are in the vocabulary.
    """
    vocab = corpus.vocab if hasattr(corpus, "vocab") else corpus
    tokens = tokenize(text)
    if not tokens:
        raise EmptyQueryError("query has no tokens")
    terms = []
    unknown = []
    for tok in tokens:
        tid = vocab.get(tok)
        if tid is None:
            if tok not in unknown:
                unknown.append(tok)
        elif tid not in terms:
            terms.append(tid)
    if not terms:
        raise UnknownTermError(unknown)
    return Query(terms=tuple(terms), unknown=tuple(unknown))
