"""Parse / print / parse / print validation of the parser and printer."""

from __future__ import annotations

from dataclasses import dataclass

from .parser import parse_any
from .printer import pretty_print


@dataclass
class RoundtripReport:
    passed: bool
    p1: str
    p2: str
    divergence: str | None = None


def first_difference(a: str, b: str) -> str | None:
    if a == b:
        return None
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            break
    else:
        i = min(len(a), len(b))
    line = a.count("\n", 0, i) + 1
    return f"offset {i} (line {line}): {a[i:i + 20]!r} vs {b[i:i + 20]!r}"


def roundtrip_check(text: str) -> RoundtripReport:
    """Print the parse of ``text``, re-parse that, print again and diff.

    Passes when both printouts agree byte for byte and the re-parsed tree is
    structurally equal to the original one. Parse errors propagate.
    """
    a0 = parse_any(text)
    p1 = pretty_print(a0)
    a1 = parse_any(p1)
    p2 = pretty_print(a1)
    if p1 != p2:
        return RoundtripReport(False, p1, p2, first_difference(p1, p2))
    if a1 != a0:
        return RoundtripReport(False, p1, p2, "re-parsed tree differs from the original")
    return RoundtripReport(True, p1, p2)
