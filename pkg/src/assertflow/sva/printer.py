from __future__ import annotations

from . import ast

_ATOMS = (ast.Ident, ast.Number, ast.BitSelect, ast.PartSelect, ast.SysCall)


def format_node(node) -> str:
    if isinstance(node, ast.Ident):
        return node.name
    if isinstance(node, ast.Number):
        if node.width is None:
            return str(node.value)
        return f"{node.width}'h{node.value:x}"
    if isinstance(node, ast.BitSelect):
        return f"{node.base.name}[{node.index}]"
    if isinstance(node, ast.PartSelect):
        return f"{node.base.name}[{node.msb}:{node.lsb}]"
    if isinstance(node, ast.SysCall):
        return f"{node.name}({', '.join(format_node(a) for a in node.args)})"
    if isinstance(node, ast.Unary):
        return node.op + _wrap(node.operand)
    if isinstance(node, ast.Binary):
        return f"{_wrap(node.left)} {node.op} {_wrap(node.right)}"
    if isinstance(node, ast.Delay):
        delay = f"##{node.lo}" if node.lo == node.hi else f"##[{node.lo}:{node.hi}]"
        if node.left is None:
            return f"{delay} {_wrap(node.right)}"
        return f"{_wrap(node.left)} {delay} {_wrap(node.right)}"
    if isinstance(node, ast.Repeat):
        return f"{_wrap(node.operand)}[*{node.count}]"
    if isinstance(node, ast.Implication):
        op = "|->" if node.overlapping else "|=>"
        return f"{_wrap(node.antecedent)} {op} {_wrap(node.consequent)}"
    if isinstance(node, ast.Not):
        return f"not {_wrap(node.operand)}"
    if isinstance(node, ast.PropAnd):
        return f"{_wrap(node.left)} and {_wrap(node.right)}"
    if isinstance(node, ast.PropOr):
        return f"{_wrap(node.left)} or {_wrap(node.right)}"
    raise TypeError(f"not an assertion node: {node!r}")


def _wrap(node) -> str:
    text = format_node(node)
    return text if isinstance(node, _ATOMS) else f"({text})"


def pretty_print(tree: ast.SvaAst) -> str:
    """Canonical single-line text; every composite operand is parenthesized."""
    parts = []
    if tree.label:
        parts.append(f"{tree.label}: ")
    parts.append(f"assert property (@({tree.clocking.edge} {tree.clocking.clock}) ")
    if tree.disable_iff is not None:
        parts.append(f"disable iff ({format_node(tree.disable_iff)}) ")
    parts.append(format_node(tree.body))
    parts.append(");")
    return "".join(parts)
