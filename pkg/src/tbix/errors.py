"""Exception types shared across the package."""


class TbixError(Exception):
    """Base class for all tbix errors."""


class EmptyCorpusError(TbixError):
    """The ingestion source contained no documents."""


class CorpusDecodeError(TbixError):
    """Corpus bytes are not valid UTF-8; carries the byte offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (byte {position})")
        self.position = position


class EmptyQueryError(TbixError):
    """Query text contained no tokens."""


class UnknownTermError(TbixError):
    """None of the query tokens exist in the vocabulary."""

    def __init__(self, tokens):
        super().__init__("unknown terms: " + ", ".join(tokens))
        self.tokens = tuple(tokens)


class CodecError(TbixError):
    """Invalid codec input, or a malformed encoded byte stream."""


class ScopeError(TbixError):
    """A membership model was probed for a term outside its scope."""

    def __init__(self, term_id):
        super().__init__(f"term {term_id} is outside the model scope")
        self.term_id = term_id


class IndexFileError(TbixError):
    """Index file is missing a section, truncated, or corrupt."""

    def __init__(self, path, offset, message):
        super().__init__(f"{path}: {message} (offset {offset})")
        self.path = str(path)
        self.offset = offset
