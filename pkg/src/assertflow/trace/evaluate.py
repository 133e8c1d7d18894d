"""Clocked, 4-state evaluation of subset assertions over a finite trace.

Every clock sample starts one attempt.  Boolean values are three-valued:
``True``, ``False`` and ``None`` (unknown, from x/z bits, missing history or
obligations that run past the end of the trace).  An attempt that cannot be
decided is inconclusive rather than failing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..sva import ast
from ..sva import scan_identifiers
from .vcd import Trace, sample

PASS = "pass"
FAIL = "fail"
VACUOUS_PASS = "vacuous_pass"
INCONCLUSIVE = "inconclusive"


class EvaluationError(ValueError):
    pass


class UnknownIdentifierError(EvaluationError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("identifiers missing from trace: " + ", ".join(self.names))


class UnsupportedConstructError(EvaluationError):
    pass


class NotAWidthAssertion(EvaluationError):
    pass


@dataclass
class Verdict:
    outcome: str
    attempts: int = 0
    first_failure: Optional[tuple] = None  # (sample index, explanation)
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "attempts": self.attempts,
            "first_failure": list(self.first_failure) if self.first_failure else None,
            "counts": dict(self.counts),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Verdict":
        first = data.get("first_failure")
        return cls(data["outcome"], data.get("attempts", 0), tuple(first) if first else None, dict(data.get("counts", {})))


def _and(values) -> Optional[bool]:
    result = True
    for v in values:
        if v is False:
            return False
        if v is None:
            result = None
    return result


def _or(values) -> Optional[bool]:
    result = False
    for v in values:
        if v is True:
            return True
        if v is None:
            result = None
    return result


def horizon(node) -> int:
    """Number of samples after the attempt start that ``node`` may consult."""
    if ast.is_expr(node):
        return 0
    if isinstance(node, ast.Delay):
        left = 0 if node.left is None else horizon(node.left)
        return left + node.hi + horizon(node.right)
    if isinstance(node, ast.Repeat):
        return node.count * horizon(node.operand) + node.count - 1
    if isinstance(node, ast.Implication):
        return horizon(node.antecedent) + (0 if node.overlapping else 1) + horizon(node.consequent)
    if isinstance(node, ast.Not):
        return horizon(node.operand)
    if isinstance(node, (ast.PropAnd, ast.PropOr)):
        return max(horizon(node.left), horizon(node.right))
    raise UnsupportedConstructError(f"cannot evaluate {type(node).__name__}")


class _Sampled:
    """Signal values sampled at each clock edge."""

    def __init__(self, raw: dict, widths: dict, length: int):
        self.raw = raw  # name -> list of 4-state strings or None
        self.widths = widths
        self.n = length

    # -- expressions: (value or None, width) ----------------------------
    def width(self, node) -> int:
        if isinstance(node, ast.Ident):
            return self.widths[node.name]
        if isinstance(node, ast.Number):
            return node.width or 32
        if isinstance(node, ast.BitSelect):
            return 1
        if isinstance(node, ast.PartSelect):
            return abs(node.msb - node.lsb) + 1
        if isinstance(node, ast.Unary):
            return 1 if node.op == "!" else self.width(node.operand)
        if isinstance(node, ast.Binary):
            if node.op in ("&", "|", "^"):
                return max(self.width(node.left), self.width(node.right))
            return 1
        if isinstance(node, ast.SysCall):
            if node.name == "$bits":
                return 32
            if node.name == "$past":
                return self.width(node.args[0])
            return 1
        raise UnsupportedConstructError(f"{type(node).__name__} is not a boolean expression")

    def bits(self, name: str, k: int) -> Optional[str]:
        if k < 0 or k >= self.n:
            return None
        return self.raw[name][k]

    def value(self, node, k: int) -> Optional[int]:
        if isinstance(node, ast.Ident):
            text = self.bits(node.name, k)
            if text is None or any(c not in "01" for c in text):
                return None
            return int(text, 2)
        if isinstance(node, ast.Number):
            return node.value
        if isinstance(node, (ast.BitSelect, ast.PartSelect)):
            name = node.base.name
            text = self.bits(name, k)
            if text is None:
                return None
            hi, lo = (node.index, node.index) if isinstance(node, ast.BitSelect) else (max(node.msb, node.lsb), min(node.msb, node.lsb))
            width = self.widths[name]
            if hi >= width:
                return None
            chunk = text[width - 1 - hi : width - lo]
            if any(c not in "01" for c in chunk):
                return None
            return int(chunk, 2)
        if isinstance(node, ast.Unary):
            if node.op == "!":
                t = self.truth(node.operand, k)
                return None if t is None else int(not t)
            v = self.value(node.operand, k)
            if v is None:
                return None
            return ~v & ((1 << self.width(node.operand)) - 1)
        if isinstance(node, ast.Binary):
            return self._binary(node, k)
        if isinstance(node, ast.SysCall):
            return self._syscall(node, k)
        raise UnsupportedConstructError(f"{type(node).__name__} is not a boolean expression")

    def _binary(self, node: ast.Binary, k: int) -> Optional[int]:
        op = node.op
        if op == "&&":
            r = _and([self.truth(node.left, k), self.truth(node.right, k)])
            return None if r is None else int(r)
        if op == "||":
            r = _or([self.truth(node.left, k), self.truth(node.right, k)])
            return None if r is None else int(r)
        a = self.value(node.left, k)
        b = self.value(node.right, k)
        if a is None or b is None:
            return None
        if op == "&":
            return a & b
        if op == "|":
            return a | b
        if op == "^":
            return a ^ b
        return int(
            {"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
        )

    def _syscall(self, node: ast.SysCall, k: int) -> Optional[int]:
        name = node.name
        arg = node.args[0]
        if name == "$bits":
            return self.width(arg)
        if name == "$past":
            depth = node.args[1].value if len(node.args) > 1 else 1
            return self.value(arg, k - depth) if k - depth >= 0 else None
        if name in ("$onehot", "$onehot0"):
            v = self.value(arg, k)
            if v is None:
                return None
            ones = bin(v).count("1")
            return int(ones == 1 if name == "$onehot" else ones <= 1)
        cur = self.value(arg, k)
        prev = self.value(arg, k - 1) if k >= 1 else None
        if name == "$stable":
            return None if cur is None or prev is None else int(cur == prev)
        # An edge needs both ends; one known wrong end already rules it out.
        want_now, want_before = {"$rose": (1, 0), "$fell": (0, 1)}.get(name, (None, None))
        if want_now is None:
            raise UnsupportedConstructError(f"system function {name}")
        now = None if cur is None else (cur & 1) == want_now
        before = None if prev is None else (prev & 1) == want_before
        r = _and([now, before])
        return None if r is None else int(r)

    def truth(self, node, k: int) -> Optional[bool]:
        v = self.value(node, k)
        return None if v is None else v != 0

    # -- sequences: {end sample: True (certain) or None (possible)} ---------
    def match(self, node, i: int) -> dict:
        if ast.is_expr(node):
            t = self.truth(node, i) if i < self.n else None
            return {} if t is False else {i: t}
        if isinstance(node, ast.Delay):
            starts = {i - 1: True} if node.left is None else self.match(node.left, i)
            return self._advance(starts, node.lo, node.hi, node.right, fused=node.left is None)
        if isinstance(node, ast.Repeat):
            ends = self.match(node.operand, i)
            for _ in range(node.count - 1):
                ends = self._advance(ends, 1, 1, node.operand)
            return ends
        raise UnsupportedConstructError(f"{type(node).__name__} used where a sequence is required")

    def _advance(self, starts: dict, lo: int, hi: int, right, fused: bool = False) -> dict:
        out: dict = {}
        for end, certain in starts.items():
            for d in range(lo, hi + 1):
                begin = end + d + (1 if fused else 0)
                for stop, c2 in self.match(right, begin).items():
                    both = True if certain and c2 else None
                    if out.get(stop) is not True:
                        out[stop] = both
        return out

    # -- properties: (truth, non-vacuous) -------------------------------
    def prop(self, node, i: int) -> tuple:
        if ast.is_sequence(node):
            ends = self.match(node, i)
            if any(v is True for v in ends.values()):
                return True, True
            return (None, False) if ends else (False, False)
        if isinstance(node, ast.Implication):
            ends = self.match(node.antecedent, i)
            if not ends:
                return True, False
            shift = 0 if node.overlapping else 1
            values = []
            nonvacuous = False
            for end in sorted(ends):
                value, nv = self.prop(node.consequent, end + shift)
                if ends[end] is True:
                    values.append(value)
                    nonvacuous = nonvacuous or (value is True and nv)
                else:
                    values.append(True if value is True else None)
            result = _and(values)
            return result, result is True and nonvacuous
        if isinstance(node, ast.Not):
            value, _ = self.prop(node.operand, i)
            return (None if value is None else not value), value is False
        if isinstance(node, (ast.PropAnd, ast.PropOr)):
            a, nva = self.prop(node.left, i)
            b, nvb = self.prop(node.right, i)
            if isinstance(node, ast.PropAnd):
                result = _and([a, b])
                return result, result is True and (nva or nvb)
            result = _or([a, b])
            return result, result is True and ((a is True and nva) or (b is True and nvb))
        raise UnsupportedConstructError(f"cannot evaluate {type(node).__name__}")


def evaluate(tree: ast.SvaAst, trace: Trace) -> Verdict:
    """Check ``tree`` on every clock sample of ``trace`` and aggregate the attempts."""
    resolved = {}
    missing = []
    for name in scan_identifiers(tree):
        full = trace.lookup(name)
        if full is None:
            missing.append(name)
        else:
            resolved[name] = full
    if missing:
        raise UnknownIdentifierError(missing)

    times = sample(trace, resolved[tree.clocking.clock], tree.clocking.edge)
    raw = {name: [trace.value_before(full, t) for t in times] for name, full in resolved.items()}
    widths = {name: trace.widths[full] for name, full in resolved.items()}
    sampled = _Sampled(raw, widths, len(times))
    depth = horizon(tree.body)

    counts = {"pass": 0, "fail": 0, "vacuous": 0, "inconclusive": 0, "cancelled": 0}
    first_failure = None
    for i in range(len(times)):
        if tree.disable_iff is not None:
            window = range(i, min(i + depth, len(times) - 1) + 1)
            if any(sampled.truth(tree.disable_iff, k) is True for k in window):
                counts["cancelled"] += 1
                continue
        value, nonvacuous = sampled.prop(tree.body, i)
        if value is False:
            counts["fail"] += 1
            if first_failure is None:
                first_failure = (i, f"attempt started at sample {i} (time {times[i]}) failed")
        elif value is None:
            counts["inconclusive"] += 1
        elif nonvacuous:
            counts["pass"] += 1
        else:
            counts["vacuous"] += 1

    attempts = len(times) - counts["cancelled"]
    if counts["fail"]:
        outcome = FAIL
    elif counts["pass"]:
        outcome = PASS
    elif counts["inconclusive"]:
        outcome = INCONCLUSIVE
    else:
        outcome = VACUOUS_PASS
    return Verdict(outcome, attempts, first_failure, counts)


def _width_terms(node) -> list:
    if isinstance(node, (ast.PropAnd,)) or (isinstance(node, ast.Binary) and node.op == "&&"):
        return _width_terms(node.left) + _width_terms(node.right)
    if isinstance(node, ast.Binary) and node.op == "==":
        for call, lit in ((node.left, node.right), (node.right, node.left)):
            if (
                isinstance(call, ast.SysCall)
                and call.name == "$bits"
                and isinstance(call.args[0], ast.Ident)
                and isinstance(lit, ast.Number)
            ):
                return [(call.args[0].name, lit.value)]
    raise NotAWidthAssertion("assertion body is not a $bits(signal) == N comparison")


def is_width_assertion(tree: ast.SvaAst) -> bool:
    try:
        _width_terms(tree.body)
    except NotAWidthAssertion:
        return False
    return True


def check_width(tree: ast.SvaAst, declarations) -> Verdict:
    """Decide ``$bits(sig) == N`` assertions against declared widths, without a trace."""
    from ..verilog_decl import lookup

    terms = _width_terms(tree.body)
    missing = [name for name, _ in terms if lookup(declarations, name) is None]
    if missing:
        raise UnknownIdentifierError(missing)
    for name, expected in terms:
        declared = lookup(declarations, name).width_bits
        if declared != expected:
            return Verdict(
                FAIL, 1, (0, f"$bits({name}) is {declared}, assertion expects {expected}"), {"fail": 1}
            )
    return Verdict(PASS, 1, None, {"pass": 1})
