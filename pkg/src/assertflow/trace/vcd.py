"""Value change dump reader.

Only the parts of IEEE 1364 VCD needed for clocked assertion checking are
modelled: scopes, ``$var`` declarations, timestamps and scalar/vector value
changes.  Real-valued variables are rejected.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union


class VcdError(ValueError):
    pass


class VcdHeaderError(VcdError):
    pass


class UnknownCodeError(VcdError):
    def __init__(self, code: str, time: int):
        super().__init__(f"value change for undeclared identifier code {code!r} at time {time}")
        self.code = code


class WidthMismatchError(VcdError):
    pass


class ClockError(KeyError):
    pass


class ClockNotFoundError(ClockError):
    pass


class ClockNotScalarError(ClockError):
    pass


@dataclass
class Trace:
    """Per-signal timelines keyed by dot-joined hierarchical name.

    Aliased variables (several names sharing one identifier code) share the
    same timeline list.  Values are 4-state strings, most significant bit
    first, always exactly ``widths[name]`` characters long.
    """

    timescale: str = ""
    signals: dict = field(default_factory=dict)
    widths: dict = field(default_factory=dict)
    aliases: dict = field(default_factory=dict)  # identifier code -> list of names
    end_time: int = 0
    _times: dict = field(default_factory=dict, repr=False, compare=False)
    _samples: dict = field(default_factory=dict, repr=False, compare=False)

    def lookup(self, name: str) -> Optional[str]:
        """Resolve ``name`` to a full signal name: exact match, else a unique leaf match."""
        if name in self.signals:
            return name
        suffix = "." + name
        hits = [full for full in self.signals if full.endswith(suffix)]
        if not hits:
            return None
        # Prefer the shallowest scope; ambiguity among equally deep names is refused.
        depth = min(full.count(".") for full in hits)
        shallow = [full for full in hits if full.count(".") == depth]
        if len(shallow) == 1:
            return shallow[0]
        # Aliases of a single net are not ambiguous.
        if len({id(self.signals[full]) for full in shallow}) == 1:
            return sorted(shallow)[0]
        return None

    def value_before(self, name: str, time: int) -> Optional[str]:
        """Value of ``name`` just before ``time`` (the preponed sample)."""
        timeline = self.signals[name]
        times = self._times.get(name)
        if times is None or len(times) != len(timeline):
            times = [t for t, _ in timeline]
            self._times[name] = times
        idx = bisect.bisect_left(times, time) - 1
        if idx < 0:
            return None
        return timeline[idx][1]

    @classmethod
    def from_cycles(cls, values: dict, clock: str = "clk", period: int = 10, widths: Optional[dict] = None) -> "Trace":
        """Build a trace whose k-th rising clock edge samples ``values[name][k]``.

        Each entry may be an int, a bit string or None (all-x).  Signals change
        at the falling edge preceding the rising edge that samples them.
        """
        widths = dict(widths or {})
        length = max((len(v) for v in values.values()), default=0)
        half = period // 2
        trace = cls(timescale="1ns")
        clock_line = [(0, "0")]
        for k in range(length):
            rise = (k + 1) * period
            clock_line.append((rise, "1"))
            clock_line.append((rise + half, "0"))
        trace.signals[clock] = clock_line
        trace.widths[clock] = 1
        for name, seq in values.items():
            width = widths.get(name, 1)
            line = []
            for k, raw in enumerate(seq):
                text = _format_value(raw, width)
                t = 0 if k == 0 else k * period + half
                if not line or line[-1][1] != text:
                    line.append((t, text))
            trace.signals[name] = line
            trace.widths[name] = width
        trace.end_time = length * period + half
        return trace


def _format_value(raw, width: int) -> str:
    if raw is None:
        return "x" * width
    if isinstance(raw, str):
        return raw.lower().rjust(width, "0")
    return format(int(raw) & ((1 << width) - 1), f"0{width}b")


def _extend(value: str, width: int, code: str, time: int) -> str:
    if len(value) > width:
        raise WidthMismatchError(
            f"value {value!r} for code {code!r} at time {time} is wider than its declared {width} bit(s)"
        )
    if len(value) < width:
        pad = value[0] if value[0] in "xz" else "0"
        value = pad * (width - len(value)) + value
    return value


def parse_vcd(source: Union[str, Path]) -> Trace:
    """Parse VCD text, or a path to a ``.vcd`` file."""
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    tokens = text.split()
    trace = Trace()
    scopes: list = []
    code_width: dict = {}
    code_line: dict = {}
    i = 0
    n = len(tokens)

    def until_end(start: int, what: str) -> int:
        try:
            return tokens.index("$end", start)
        except ValueError:
            raise VcdHeaderError(f"unterminated {what} section") from None

    # header
    while True:
        if i >= n:
            raise VcdHeaderError("missing $enddefinitions")
        tok = tokens[i]
        if tok in ("$date", "$version", "$comment"):
            i = until_end(i + 1, tok) + 1
        elif tok == "$timescale":
            end = until_end(i + 1, tok)
            trace.timescale = "".join(tokens[i + 1 : end])
            i = end + 1
        elif tok == "$scope":
            end = until_end(i + 1, tok)
            if end - i != 3:
                raise VcdHeaderError("malformed $scope declaration")
            scopes.append(tokens[i + 2])
            i = end + 1
        elif tok == "$upscope":
            if not scopes:
                raise VcdHeaderError("$upscope without matching $scope")
            scopes.pop()
            i = until_end(i + 1, tok) + 1
        elif tok == "$var":
            end = until_end(i + 1, tok)
            fields = tokens[i + 1 : end]
            if len(fields) < 4:
                raise VcdHeaderError("malformed $var declaration: " + " ".join(fields))
            var_type, size, code, ref = fields[:4]
            if var_type in ("real", "realtime"):
                raise VcdHeaderError(f"real-valued variable {ref!r} is not supported")
            try:
                width = int(size)
            except ValueError:
                raise VcdHeaderError(f"non-integer width {size!r} for {ref!r}") from None
            if width < 1:
                raise VcdHeaderError(f"non-positive width for {ref!r}")
            if code in code_width and code_width[code] != width:
                raise VcdHeaderError(f"identifier code {code!r} declared with conflicting widths")
            code_width[code] = width
            timeline = code_line.setdefault(code, [])
            name = ".".join(scopes + [ref])
            trace.signals[name] = timeline
            trace.widths[name] = width
            trace.aliases.setdefault(code, []).append(name)
            i = end + 1
        elif tok == "$enddefinitions":
            i = until_end(i + 1, tok) + 1
            break
        else:
            raise VcdHeaderError(f"unexpected token {tok!r} in header")

    # value changes
    time = 0
    while i < n:
        tok = tokens[i]
        head = tok[0]
        if head == "#":
            try:
                new_time = int(tok[1:])
            except ValueError:
                raise VcdError(f"malformed timestamp {tok!r}") from None
            if new_time < time:
                raise VcdError(f"timestamp {new_time} goes backwards from {time}")
            time = new_time
            i += 1
        elif head == "$":
            if tok == "$comment":
                i = until_end(i + 1, tok)
            i += 1
        elif head in "bB":
            if i + 1 >= n:
                raise VcdError("vector value change without identifier code")
            _record(code_line, code_width, tokens[i + 1], tok[1:].lower(), time)
            i += 2
        elif head in "rR":
            raise VcdError("real value changes are not supported")
        elif head in "01xXzZ":
            _record(code_line, code_width, tok[1:], head.lower(), time)
            i += 1
        else:
            raise VcdError(f"unexpected token {tok!r} at time {time}")

    trace.end_time = time
    return trace


def _record(code_line: dict, code_width: dict, code: str, value: str, time: int) -> None:
    if code not in code_line:
        raise UnknownCodeError(code, time)
    if not value or any(c not in "01xz" for c in value):
        raise VcdError(f"malformed value {value!r} for code {code!r} at time {time}")
    value = _extend(value, code_width[code], code, time)
    timeline = code_line[code]
    if timeline and timeline[-1][0] == time:
        timeline.pop()
    if timeline and timeline[-1][1] == value:
        return
    timeline.append((time, value))


def sample(trace: Trace, clock: str, edge: str = "posedge") -> list:
    """Times at which ``clock`` makes a clean 0->1 (posedge) or 1->0 (negedge) transition."""
    full = trace.lookup(clock)
    if full is None:
        raise ClockNotFoundError(clock)
    if trace.widths[full] != 1:
        raise ClockNotScalarError(clock)
    key = (full, edge)
    cached = trace._samples.get(key)
    if cached is not None:
        return list(cached)
    before, after = ("0", "1") if edge == "posedge" else ("1", "0")
    times = []
    previous = None
    for t, value in trace.signals[full]:
        if previous == before and value == after:
            times.append(t)
        previous = value
    trace._samples[key] = times
    return list(times)
