"""Recursive-descent parser for the assertion subset.

Operator binding follows IEEE 1800 for the operators that are included:
boolean operators bind tighter than ``[*n]``, which binds tighter than ``##``,
then ``not``, ``and``, ``or`` and finally the right-associative implications.
"""

from __future__ import annotations

from typing import Optional

from . import ast
from .errors import SvaParseError, SvaSubsetError
from .lexer import SUPPORTED_OPS, UNSUPPORTED_KEYWORDS, Token, tokenize

# Valid SystemVerilog prefix operators (reductions, sign) that the subset omits.
_PREFIX_OUTSIDE_SUBSET = frozenset({"&", "|", "^", "~&", "~|", "~^", "^~", "-", "+"})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.properties: dict = {}

    # -- token helpers -------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.kind in ("op", "keyword") and tok.text == text

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        self.unexpected(f"expected {text!r}")

    def error(self, message: str, tok: Optional[Token] = None, cls=SvaParseError):
        tok = tok or self.tok
        return cls(message, tok.offset, tok.line, tok.column)

    def unexpected(self, expected: str):
        tok = self.tok
        if tok.kind == "keyword" and tok.text in UNSUPPORTED_KEYWORDS:
            raise self.error(f"'{tok.text}' is outside the supported subset", cls=SvaSubsetError)
        if tok.kind == "op" and tok.text not in SUPPORTED_OPS:
            raise self.error(f"operator '{tok.text}' is outside the supported subset", cls=SvaSubsetError)
        if tok.kind == "string":
            raise self.error("string arguments are outside the supported subset", cls=SvaSubsetError)
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise self.error(f"{expected}, found {found}")

    def integer(self, what: str) -> int:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return tok.value[0]
        if tok.kind == "ident":
            raise self.error(f"non-literal {what} is outside the supported subset", cls=SvaSubsetError)
        if tok.kind == "op" and tok.text == "$":
            raise self.error(f"unbounded {what} is outside the supported subset", cls=SvaSubsetError)
        self.unexpected(f"expected integer {what}")

    # -- statements ----------------------------------------------------
    def statements(self) -> list:
        result = []
        while self.tok.kind != "eof":
            if self.at("property"):
                self.property_declaration()
            else:
                result.append(self.assertion())
        return result

    def property_declaration(self) -> None:
        self.expect("property")
        name_tok = self.tok
        if name_tok.kind != "ident":
            self.unexpected("expected property name")
        self.advance()
        if self.at("("):
            raise self.error("property formal arguments are outside the supported subset", cls=SvaSubsetError)
        self.expect(";")
        clocking = self.clocking() if self.at("@") else None
        disable = self.disable_iff() if self.at("disable") else None
        body = self.prop()
        self.accept(";")
        self.expect("endproperty")
        if self.accept(":"):
            end_tok = self.advance()
            if end_tok.text != name_tok.text:
                raise self.error("endproperty label does not match property name", end_tok)
        if name_tok.text in self.properties:
            raise self.error(f"property '{name_tok.text}' declared twice", name_tok)
        self.properties[name_tok.text] = (clocking, disable, body)

    def assertion(self) -> ast.SvaAst:
        label = None
        if self.tok.kind == "ident" and self.peek().kind == "op" and self.peek().text == ":":
            label = self.advance().text
            self.advance()
        tok = self.tok
        if tok.kind == "keyword" and tok.text in ("cover", "assume", "restrict"):
            raise self.error(f"'{tok.text}' statements are outside the supported subset", cls=SvaSubsetError)
        self.expect("assert")
        if self.at("(") or self.at("final") or self.at("#"):
            raise self.error("immediate and deferred assertions are outside the supported subset", cls=SvaSubsetError)
        self.expect("property")
        open_tok = self.expect("(")
        clocking = self.clocking() if self.at("@") else None
        disable = self.disable_iff() if self.at("disable") else None
        body = self.prop()
        self.expect(")")
        if self.at("else") or self.tok.kind == "sysid":
            raise self.error("action blocks are outside the supported subset", cls=SvaSubsetError)
        self.expect(";")

        if clocking is None and disable is None and isinstance(body, ast.Ident) and body.name in self.properties:
            name = body.name
            clocking, disable, body = self.properties[name]
            label = label or name
        if clocking is None:
            raise self.error("assertions must carry an explicit clocking event", open_tok, cls=SvaSubsetError)
        return ast.SvaAst(clocking=clocking, body=body, disable_iff=disable, label=label)

    def clocking(self) -> ast.Clocking:
        at_tok = self.expect("@")
        if not self.at("("):
            raise self.error("clocking event must be parenthesized with an edge", at_tok, cls=SvaSubsetError)
        self.advance()
        edge_tok = self.tok
        if not (self.at("posedge") or self.at("negedge")):
            if edge_tok.kind in ("ident", "keyword"):
                raise self.error("clocking event needs posedge or negedge", cls=SvaSubsetError)
            self.unexpected("expected 'posedge' or 'negedge'")
        self.advance()
        clock_tok = self.tok
        if clock_tok.kind != "ident":
            self.unexpected("expected clock identifier")
        self.advance()
        if not self.at(")"):
            if self.at("or") or self.at(",") or self.at("iff"):
                raise self.error("compound clocking events are outside the supported subset", cls=SvaSubsetError)
            self.unexpected("expected ')'")
        self.advance()
        return ast.Clocking(edge_tok.text, clock_tok.text)

    def disable_iff(self) -> ast.Node:
        self.expect("disable")
        self.expect("iff")
        self.expect("(")
        start = self.tok
        cond = self.prop()
        if not ast.is_expr(cond):
            raise self.error("disable iff condition must be a boolean expression", start)
        self.expect(")")
        return cond

    # -- properties ----------------------------------------------------
    def prop(self) -> ast.Node:
        start = self.tok
        left = self.prop_or()
        for op in ("|->", "|=>"):
            if self.at(op):
                op_tok = self.advance()
                self.check_antecedent(left, start, op_tok)
                right = self.prop()
                return ast.Implication(left, op == "|->", right)
        return left

    def check_antecedent(self, node, start: Token, op_tok: Token) -> None:
        if ast.is_sequence(node):
            return
        if isinstance(node, (ast.PropAnd, ast.PropOr)) and all(ast.is_sequence(c) for c in ast.children(node)):
            raise self.error("sequence and/or in an antecedent is outside the supported subset", start, cls=SvaSubsetError)
        raise self.error(f"left operand of '{op_tok.text}' must be a sequence", op_tok)

    def prop_or(self) -> ast.Node:
        left = self.prop_and()
        while self.at("or"):
            self.advance()
            left = ast.PropOr(left, self.prop_and())
        return left

    def prop_and(self) -> ast.Node:
        left = self.prop_not()
        while self.at("and"):
            self.advance()
            left = ast.PropAnd(left, self.prop_not())
        return left

    def prop_not(self) -> ast.Node:
        if self.accept("not"):
            return ast.Not(self.prop_not())
        return self.seq()

    # -- sequences -----------------------------------------------------
    def seq(self) -> ast.Node:
        if self.at("##"):
            self.advance()
            lo, hi = self.delay()
            right_tok = self.tok
            right = self.seq_rep()
            self.require_sequence(right, right_tok)
            left = ast.Delay(None, lo, hi, right)
        else:
            left = self.seq_rep()
        while self.at("##"):
            op_tok = self.advance()
            self.require_sequence(left, op_tok)
            lo, hi = self.delay()
            right_tok = self.tok
            right = self.seq_rep()
            self.require_sequence(right, right_tok)
            left = ast.Delay(left, lo, hi, right)
        return left

    def require_sequence(self, node, tok: Token) -> None:
        if not ast.is_sequence(node):
            raise self.error("sequence operand expected, found a property", tok)

    def delay(self) -> tuple:
        if self.at("[*") or self.at("[+]") or self.at("[=") or self.at("[->"):
            raise self.error("repetition-style delays are outside the supported subset", cls=SvaSubsetError)
        if self.accept("["):
            lo = self.integer("delay bound")
            self.expect(":")
            hi_tok = self.tok
            hi = self.integer("delay bound")
            self.expect("]")
            if lo > hi:
                raise self.error("delay range lower bound exceeds upper bound", hi_tok)
            return lo, hi
        if self.at("("):
            raise self.error("expression delays are outside the supported subset", cls=SvaSubsetError)
        n = self.integer("delay")
        return n, n

    def seq_rep(self) -> ast.Node:
        start = self.tok
        node = self.expr(0)
        while True:
            if self.at("[=") or self.at("[->") or self.at("[+]"):
                raise self.error("goto/non-consecutive repetition is outside the supported subset", cls=SvaSubsetError)
            if not self.at("[*"):
                return node
            op_tok = self.advance()
            self.require_sequence(node, start)
            if self.at("]"):
                raise self.error("unbounded repetition is outside the supported subset", cls=SvaSubsetError)
            count = self.integer("repetition count")
            if self.at(":"):
                raise self.error("ranged repetition is outside the supported subset", cls=SvaSubsetError)
            self.expect("]")
            if count == 0:
                raise self.error("empty repetition [*0] is outside the supported subset", op_tok, cls=SvaSubsetError)
            node = ast.Repeat(node, count)

    # -- boolean expressions --------------------------------------------
    def expr(self, level: int) -> ast.Node:
        if level == len(ast.BINARY_LEVELS):
            return self.unary()
        ops = ast.BINARY_LEVELS[level]
        left_tok = self.tok
        left = self.expr(level + 1)
        while self.tok.kind == "op" and self.tok.text in ops:
            op_tok = self.advance()
            if not ast.is_expr(left):
                raise self.error(f"operator '{op_tok.text}' needs boolean operands", left_tok)
            right_tok = self.tok
            right = self.expr(level + 1)
            if not ast.is_expr(right):
                raise self.error(f"operator '{op_tok.text}' needs boolean operands", right_tok)
            left = ast.Binary(op_tok.text, left, right)
        if level == 0 and self.tok.kind == "op" and self.tok.text not in SUPPORTED_OPS:
            self.unexpected("unexpected operator")
        return left

    def unary(self) -> ast.Node:
        tok = self.tok
        if tok.kind == "op" and tok.text in ast.UNARY_OPS:
            self.advance()
            operand_tok = self.tok
            operand = self.unary()
            if not ast.is_expr(operand):
                raise self.error(f"operator '{tok.text}' needs a boolean operand", operand_tok)
            return ast.Unary(tok.text, operand)
        return self.primary()

    def primary(self) -> ast.Node:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            node = ast.Ident(tok.text)
            if self.at("["):
                return self.select(node)
            if self.at("(") or self.at("."):
                raise self.error("calls and hierarchical references are outside the supported subset", cls=SvaSubsetError)
            return node
        if tok.kind == "number":
            self.advance()
            return ast.Number(*tok.value)
        if tok.kind == "sysid":
            return self.syscall()
        if self.at("("):
            self.advance()
            node = self.prop()
            self.expect(")")
            return node
        if tok.kind == "op" and tok.text in _PREFIX_OUTSIDE_SUBSET:
            raise self.error(f"unary operator '{tok.text}' is outside the supported subset", cls=SvaSubsetError)
        self.unexpected("expected expression")

    def select(self, base: ast.Ident) -> ast.Node:
        self.expect("[")
        msb = self.integer("select index")
        if self.tok.kind == "op" and self.tok.text in ("+", "-") and self.peek().text == ":":
            raise self.error("indexed part-selects are outside the supported subset", cls=SvaSubsetError)
        if self.accept(":"):
            lsb = self.integer("select index")
            self.expect("]")
            return ast.PartSelect(base, msb, lsb)
        self.expect("]")
        return ast.BitSelect(base, msb)

    def syscall(self) -> ast.Node:
        name_tok = self.advance()
        name = name_tok.text
        if name not in ast.SYSTEM_FUNCTIONS:
            raise self.error(f"system function {name} is outside the supported subset", name_tok, cls=SvaSubsetError)
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                if name == "$past" and len(args) == 1:
                    count_tok = self.tok
                    count = self.integer("$past depth")
                    if count < 1:
                        raise self.error("$past depth must be at least 1", count_tok)
                    args.append(ast.Number(count))
                    if self.at(","):
                        raise self.error("$past gating arguments are outside the supported subset", cls=SvaSubsetError)
                    break
                arg_tok = self.tok
                arg = self.prop()
                if not ast.is_expr(arg):
                    raise self.error(f"{name} argument must be a boolean expression", arg_tok)
                args.append(arg)
                if not self.accept(","):
                    break
        close_tok = self.tok
        lo, hi = ast.SYSTEM_FUNCTIONS[name]
        if len(args) > hi:
            raise self.error(f"{name} takes at most {hi} argument(s)", close_tok, cls=SvaSubsetError)
        self.expect(")")
        if len(args) < lo:
            raise self.error(f"{name} needs at least {lo} argument(s)", close_tok)
        return ast.SysCall(name, tuple(args))


def parse_sva(text: str) -> ast.SvaAst:
    """Parse exactly one assertion statement, optionally preceded by property declarations."""
    parser = _Parser(text)
    statements = parser.statements()
    if len(statements) != 1:
        tok = parser.tok
        raise SvaParseError(
            f"expected exactly one assertion, found {len(statements)}", tok.offset, tok.line, tok.column
        )
    return statements[0]


def parse_sva_file(text: str) -> list:
    """Parse every assertion in an ``.sva`` document."""
    return _Parser(text).statements()
