class SvaError(ValueError):
    """Base class for every assertion front-end failure.

    ``kind`` is one of ``"lex"``, ``"parse"`` or ``"subset"``.  Reports use it
    to keep malformed text apart from well-formed SVA that uses constructs the
    checker does not model.
    """

    kind = "error"

    def __init__(self, message: str, offset: int = 0, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.offset = offset
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "message": self.message,
            "offset": self.offset,
            "line": self.line,
            "column": self.column,
        }


class SvaLexError(SvaError):
    kind = "lex"


class SvaParseError(SvaError):
    kind = "parse"


class SvaSubsetError(SvaError):
    """Recognized SystemVerilog construct that lies outside the supported subset."""

    kind = "subset"
