"""SystemVerilog Assertion subset: lexer, parser, AST, identifier scan, printer."""

from .ast import Clocking, SvaAst, walk
from .errors import SvaError, SvaLexError, SvaParseError, SvaSubsetError
from .parser import parse_sva, parse_sva_file
from .printer import format_node, pretty_print


def scan_identifiers(tree: SvaAst) -> set:
    """Signal identifiers referenced by an assertion, including its clock.

    System function names are not identifiers and never appear in the result.
    """
    names = {tree.clocking.clock}
    roots = [tree.body] if tree.disable_iff is None else [tree.body, tree.disable_iff]
    for root in roots:
        for node in walk(root):
            if type(node).__name__ == "Ident":
                names.add(node.name)
    return names


__all__ = [
    "Clocking",
    "SvaAst",
    "SvaError",
    "SvaLexError",
    "SvaParseError",
    "SvaSubsetError",
    "format_node",
    "parse_sva",
    "parse_sva_file",
    "pretty_print",
    "scan_identifiers",
]
