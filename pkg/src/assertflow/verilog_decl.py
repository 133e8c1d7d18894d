"""Declaration table for Verilog signal-definition files.

Only declarations are interpreted.  Module bodies (``assign``, ``always``,
instances, functions) are skipped by balanced-delimiter scanning, so any
module-level ``input``/``output``/``inout``/``wire``/``reg``/``logic``/
``parameter`` declaration is picked up regardless of what surrounds it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional

DIRECTIONS = ("input", "output", "inout")
NET_TYPES = ("wire", "reg", "logic")


class DeclarationError(ValueError):
    pass


class VerilogLexError(DeclarationError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnsupportedConstructError(DeclarationError):
    def __init__(self, construct: str, line: int):
        super().__init__(f"line {line}: unsupported construct: {construct}")
        self.construct = construct
        self.line = line


class DuplicateIdentifierError(DeclarationError):
    def __init__(self, identifier: str, line: int, first_line: int):
        super().__init__(f"line {line}: '{identifier}' already declared on line {first_line}")
        self.identifier = identifier
        self.line = line


@dataclass(frozen=True)
class SignalDeclaration:
    identifier: str
    direction: str  # input, output, inout, internal
    kind: str  # wire, reg, logic, parameter
    width_bits: int
    msb: int = 0
    lsb: int = 0
    comment: str = ""
    source_line: int = 0

    def to_dict(self) -> dict:
        return {
            "identifier": self.identifier,
            "direction": self.direction,
            "kind": self.kind,
            "width_bits": self.width_bits,
            "msb": self.msb,
            "lsb": self.lsb,
            "comment": self.comment,
            "source_line": self.source_line,
        }


@dataclass(frozen=True)
class _Tok:
    kind: str  # ident, number, sym, eof
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)"
    r"|(?P<nl>\n)"
    r"|(?P<line_comment>//[^\n]*)"
    r"|(?P<block_comment>/\*.*?\*/)"
    r"|(?P<directive>`[A-Za-z_][^\n]*)"
    r"|(?P<string>\"(?:\\.|[^\"\\\n])*\")"
    r"|(?P<number>(?:\d[\d_]*)?\s*'[sS]?[bBoOdDhH]\s*[0-9a-fA-FxXzZ?_]+|\d[\d_]*(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_$]*|\$[A-Za-z_][A-Za-z0-9_$]*)"
    r"|(?P<sym>\*\*|<<<|>>>|<=|>=|==|!=|&&|\|\||<<|>>|\+:|-:|[()\[\]{}:;,=#@.+\-*/%&|^~!<>?])",
    re.S,
)

_BLOCK_OPEN = {
    "begin": "end",
    "case": "endcase",
    "casex": "endcase",
    "casez": "endcase",
    "function": "endfunction",
    "task": "endtask",
    "generate": "endgenerate",
    "fork": "join",
    "specify": "endspecify",
}
_BLOCK_CLOSE = {"end", "endcase", "endfunction", "endtask", "endgenerate", "join", "join_any", "join_none", "endspecify"}


def _tokenize(source: str):
    tokens = []
    comments = {}
    line = 1
    line_start = 0
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN.match(source, pos)
        if m is None:
            ch = source[pos]
            if ch == "\\":
                raise UnsupportedConstructError("escaped identifier", line)
            raise VerilogLexError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group(0)
        column = pos - line_start + 1
        if kind == "line_comment":
            comments.setdefault(line, text[2:].strip())
        elif kind in ("ident", "number", "sym", "string"):
            tokens.append(_Tok(kind, text, line, column))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Tok("eof", "", line, pos - line_start + 1))
    return tokens, comments


class _DeclParser:
    def __init__(self, source: str):
        self.tokens, self.comments = _tokenize(source)
        self.pos = 0
        self.decls: dict = {}
        self.order: list = []

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("ident", "sym")

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            tok = self.tok
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DeclarationError(f"line {tok.line}: expected {text!r}, found {found}")
        return self.advance()

    # ---------------------------------------------------------------
    def parse(self) -> list:
        while self.tok.kind != "eof":
            word = self.tok.text
            if word in ("module", "macromodule"):
                self.module_header()
            elif word == "endmodule":
                self.advance()
            elif word in DIRECTIONS or word in NET_TYPES or word in ("parameter", "localparam", "integer"):
                self.declaration()
            else:
                self.skip_item()
        return [self.decls[name] for name in self.order]

    def module_header(self) -> None:
        self.advance()
        if self.tok.kind != "ident":
            raise DeclarationError(f"line {self.tok.line}: expected module name")
        self.advance()
        if self.at("#"):
            self.advance()
            self.expect("(")
            while not self.at(")"):
                if self.tok.kind == "eof":
                    raise DeclarationError("unterminated parameter port list")
                if self.at(","):
                    self.advance()
                    continue
                if self.tok.text in ("parameter", "localparam"):
                    self.declaration(terminators=(",", ")"))
                else:
                    self.parameters(terminators=(",", ")"))
            self.advance()
        if self.at("("):
            self.advance()
            if self.tok.text in DIRECTIONS:
                self.ansi_ports()
            else:
                self.skip_balanced(")")
            self.expect(")")
        self.expect(";")

    def ansi_ports(self) -> None:
        direction, kind, rng = "input", "wire", None
        while not self.at(")"):
            if self.tok.kind == "eof":
                raise DeclarationError("unterminated port list")
            if self.tok.text in DIRECTIONS:
                direction = self.advance().text
                kind, rng = "wire", None
                if self.tok.text in NET_TYPES:
                    kind = self.advance().text
                if self.at("signed"):
                    self.advance()
                if self.at("["):
                    rng = self.range()
            name = self.identifier()
            self.add(name, direction, kind, rng)
            if self.at("["):
                raise UnsupportedConstructError(f"unpacked array port '{name.text}'", name.line)
            if not self.at(")"):
                self.expect(",")

    def declaration(self, terminators=(";",)) -> None:
        start = self.advance()
        word = start.text
        if word in ("parameter", "localparam"):
            self.parameters(terminators)
            return
        direction = "internal"
        kind = "wire"
        rng = None
        if word in DIRECTIONS:
            direction = word
            if self.tok.text in NET_TYPES:
                kind = self.advance().text
        elif word == "integer":
            kind, rng = "reg", (31, 0)
        else:
            kind = word
        if self.at("signed") or self.at("unsigned"):
            self.advance()
        if self.at("["):
            rng = self.range()
        while True:
            name = self.identifier()
            if self.at("["):
                raise UnsupportedConstructError(f"unpacked array '{name.text}'", name.line)
            self.add(name, direction, kind, rng)
            if self.at("="):
                self.advance()
                self.skip_expression()
            if self.at(","):
                self.advance()
                continue
            if self.tok.text in terminators:
                if self.tok.text == ";":
                    self.advance()
                return
            tok = self.tok
            raise DeclarationError(f"line {tok.line}: unexpected {tok.text!r} in declaration")

    def parameters(self, terminators) -> None:
        if self.tok.text in ("integer", "signed", "unsigned"):
            self.advance()
        rng = self.range() if self.at("[") else (31, 0)
        while True:
            name = self.identifier()
            self.add(name, "internal", "parameter", rng)
            self.expect("=")
            self.skip_expression()
            if self.at(","):
                self.advance()
                # in a #( ) list a new 'parameter' keyword may follow the comma
                if self.tok.text in ("parameter", "localparam"):
                    return
                continue
            if self.tok.text in terminators:
                if self.tok.text == ";":
                    self.advance()
                return
            tok = self.tok
            raise DeclarationError(f"line {tok.line}: unexpected {tok.text!r} in parameter declaration")

    def identifier(self) -> _Tok:
        tok = self.tok
        if tok.kind != "ident" or tok.text.startswith("$"):
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DeclarationError(f"line {tok.line}: expected identifier, found {found}")
        return self.advance()

    def range(self) -> tuple:
        open_tok = self.expect("[")
        parts = []
        depth = 0
        while True:
            tok = self.tok
            if tok.kind == "eof":
                raise DeclarationError(f"line {open_tok.line}: unterminated range")
            if tok.text == "[":
                depth += 1
            if tok.text == "]":
                if depth == 0:
                    break
                depth -= 1
            parts.append(self.advance())
        self.advance()
        text = "[" + "".join(t.text for t in parts) + "]"
        if len(parts) == 3 and parts[1].text == ":" and all(_is_int(t) for t in (parts[0], parts[2])):
            return _int_value(parts[0]), _int_value(parts[2])
        raise UnsupportedConstructError(f"non-literal range {text}", open_tok.line)

    def add(self, name: _Tok, direction: str, kind: str, rng) -> None:
        msb, lsb = rng if rng is not None else (0, 0)
        decl = SignalDeclaration(
            identifier=name.text,
            direction=direction,
            kind=kind,
            width_bits=abs(msb - lsb) + 1,
            msb=msb,
            lsb=lsb,
            comment=self.comments.get(name.line, ""),
            source_line=name.line,
        )
        existing = self.decls.get(name.text)
        if existing is None:
            self.decls[name.text] = decl
            self.order.append(name.text)
            return
        merged = _merge_non_ansi(existing, decl)
        if merged is None:
            raise DuplicateIdentifierError(name.text, name.line, existing.source_line)
        self.decls[name.text] = merged

    def skip_expression(self) -> None:
        depth = 0
        while self.tok.kind != "eof":
            text = self.tok.text
            if depth == 0 and text in (",", ";", ")"):
                return
            if text in ("(", "[", "{"):
                depth += 1
            elif text in (")", "]", "}"):
                depth -= 1
            self.advance()

    def skip_balanced(self, closer: str) -> None:
        depth = 0
        while self.tok.kind != "eof":
            text = self.tok.text
            if depth == 0 and text == closer:
                return
            if text in ("(", "[", "{"):
                depth += 1
            elif text in (")", "]", "}"):
                depth -= 1
            self.advance()

    def skip_item(self) -> None:
        """Skip one non-declaration module item, including nested blocks."""
        blocks = 0
        parens = 0
        while self.tok.kind != "eof":
            tok = self.advance()
            text = tok.text
            if tok.kind == "ident":
                if text in _BLOCK_OPEN:
                    blocks += 1
                elif text in _BLOCK_CLOSE:
                    blocks -= 1
                    if blocks <= 0 and parens == 0:
                        return
                elif text == "endmodule" and blocks <= 0:
                    self.pos -= 1
                    return
            elif text in ("(", "[", "{"):
                parens += 1
            elif text in (")", "]", "}"):
                parens -= 1
            elif text == ";" and blocks <= 0 and parens <= 0:
                return


def _merge_non_ansi(a: SignalDeclaration, b: SignalDeclaration) -> Optional[SignalDeclaration]:
    """Combine ``output x;`` with ``reg x;`` (or the reverse) for the same identifier."""
    ports = [d for d in (a, b) if d.direction != "internal"]
    nets = [d for d in (a, b) if d.direction == "internal" and d.kind in NET_TYPES]
    if len(ports) != 1 or len(nets) != 1:
        return None
    port, net = ports[0], nets[0]
    if port.width_bits != net.width_bits:
        return None
    return replace(port, kind=net.kind if net.kind != "wire" else port.kind, comment=port.comment or net.comment)


def _is_int(tok: _Tok) -> bool:
    return tok.kind == "number" and "'" not in tok.text and "." not in tok.text


def _int_value(tok: _Tok) -> int:
    return int(tok.text.replace("_", ""))


def parse_declarations(source) -> list:
    """Return one ``SignalDeclaration`` per declared identifier, in source order.

    ``source`` is HDL text or a path to a ``.v``/``.sv`` file.
    """
    if isinstance(source, Path):
        source = source.read_text(encoding="utf-8")
    return _DeclParser(source).parse()


def lookup(table: Iterable[SignalDeclaration], identifier: str) -> Optional[SignalDeclaration]:
    """Exact, case-sensitive lookup."""
    if isinstance(table, dict):
        return table.get(identifier)
    for decl in table:
        if decl.identifier == identifier:
            return decl
    return None


def format_declarations(decls) -> str:
    """Render a declaration table as one Verilog declaration per line."""
    lines = []
    for d in decls:
        rng = f"[{d.msb}:{d.lsb}] " if (d.width_bits > 1 or d.msb or d.lsb or d.kind == "parameter") else ""
        if d.kind == "parameter":
            text = f"parameter {rng}{d.identifier} = 0;"
        elif d.direction == "internal":
            text = f"{d.kind} {rng}{d.identifier};"
        else:
            text = f"{d.direction} {d.kind} {rng}{d.identifier};"
        if d.comment:
            text += f" // {d.comment}"
        lines.append(text)
    return "\n".join(lines) + ("\n" if lines else "")
