"""Immutable AST for the supported SystemVerilog Assertion subset.

Boolean expressions, sequences and properties share one node family.  A bare
boolean expression is a valid sequence, and a sequence is a valid property, so
the layering is expressed by the helper predicates at the bottom of the module
rather than by separate class hierarchies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

# Names accepted in ``$name(...)`` calls, with their arity bounds.
SYSTEM_FUNCTIONS = {
    "$past": (1, 2),
    "$rose": (1, 1),
    "$fell": (1, 1),
    "$stable": (1, 1),
    "$bits": (1, 1),
    "$onehot": (1, 1),
    "$onehot0": (1, 1),
}

UNARY_OPS = ("!", "~")
# Lowest binding first; each entry is one precedence level.
BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
)
BINARY_OPS = tuple(op for level in BINARY_LEVELS for op in level)


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Number:
    value: int
    width: Optional[int] = None  # None for unsized literals


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class BitSelect:
    base: Ident
    index: int


@dataclass(frozen=True)
class PartSelect:
    base: Ident
    msb: int
    lsb: int


@dataclass(frozen=True)
class SysCall:
    name: str
    args: tuple


@dataclass(frozen=True)
class Delay:
    """``left ##[lo:hi] right``; ``left`` is None for a leading delay."""

    left: Optional["Node"]
    lo: int
    hi: int
    right: "Node"


@dataclass(frozen=True)
class Repeat:
    operand: "Node"
    count: int


@dataclass(frozen=True)
class Implication:
    antecedent: "Node"
    overlapping: bool  # True for |->, False for |=>
    consequent: "Node"


@dataclass(frozen=True)
class Not:
    operand: "Node"


@dataclass(frozen=True)
class PropAnd:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class PropOr:
    left: "Node"
    right: "Node"


Expr = Union[Ident, Number, Unary, Binary, BitSelect, PartSelect, SysCall]
Node = Union[Expr, Delay, Repeat, Implication, Not, PropAnd, PropOr]

EXPR_TYPES = (Ident, Number, Unary, Binary, BitSelect, PartSelect, SysCall)
SEQUENCE_TYPES = EXPR_TYPES + (Delay, Repeat)


@dataclass(frozen=True)
class Clocking:
    edge: str  # "posedge" or "negedge"
    clock: str


@dataclass(frozen=True)
class SvaAst:
    clocking: Clocking
    body: Node
    disable_iff: Optional[Node] = None
    label: Optional[str] = None


def is_expr(node) -> bool:
    return isinstance(node, EXPR_TYPES)


def is_sequence(node) -> bool:
    if isinstance(node, EXPR_TYPES):
        return True
    if isinstance(node, Delay):
        return (node.left is None or is_sequence(node.left)) and is_sequence(node.right)
    if isinstance(node, Repeat):
        return is_sequence(node.operand)
    return False


def children(node) -> tuple:
    if isinstance(node, (Unary, Not)):
        return (node.operand,)
    if isinstance(node, Repeat):
        return (node.operand,)
    if isinstance(node, (Binary, PropAnd, PropOr)):
        return (node.left, node.right)
    if isinstance(node, (BitSelect, PartSelect)):
        return (node.base,)
    if isinstance(node, SysCall):
        return node.args
    if isinstance(node, Delay):
        return (node.right,) if node.left is None else (node.left, node.right)
    if isinstance(node, Implication):
        return (node.antecedent, node.consequent)
    return ()


def walk(node):
    """Pre-order traversal over a node and all of its descendants."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(children(current)))
