"""Line-oriented ASCII helpers shared by the envelope and share file formats.

Records are LF-terminated lines. Header lines hold ``key=decimal`` fields
separated by two spaces, in a fixed order. Digit lists are written as bare
characters when the modulus is at most 10 and comma-separated otherwise.
"""

from __future__ import annotations

from typing import Sequence

from .errors import Malformed


def format_digits(digits: Sequence[int], k: int) -> str:
    if k <= 10:
        return "".join(str(x) for x in digits)
    return ",".join(str(x) for x in digits)


def parse_digits(text: str, k: int, count: int, line: int, field: str) -> tuple[int, ...]:
    items = list(text) if k <= 10 else (text.split(",") if text else [])
    if any(not (x.isascii() and x.isdigit()) for x in items):
        raise Malformed(f"bad digit list {text!r}", line, field)
    digits = tuple(int(x) for x in items)
    if len(digits) != count:
        raise Malformed(f"expected {count} digits, got {len(digits)}", line, field)
    if any(x >= k for x in digits):
        raise Malformed(f"digit outside Z_{k}", line, field)
    return digits


def split_lines(text: str, expected: int) -> list[str]:
    if not text.endswith("\n"):
        raise Malformed("input is not LF-terminated (truncated?)")
    lines = text[:-1].split("\n")
    if any("\r" in ln for ln in lines):
        raise Malformed("CR characters are not allowed")
    if len(lines) != expected:
        raise Malformed(f"expected {expected} lines, got {len(lines)}")
    return lines


def parse_fields(line_text: str, names: Sequence[str], line: int) -> dict[str, int]:
    """Parse ``a=1  b=2`` with exactly the given keys in the given order."""
    parts = line_text.split("  ")
    if len(parts) != len(names):
        raise Malformed(f"expected fields {', '.join(names)}", line)
    out = {}
    for part, name in zip(parts, names):
        key, sep, value = part.partition("=")
        if key != name or not sep:
            raise Malformed(f"expected {name}=..., got {part!r}", line, name)
        if not value.isdigit() or (len(value) > 1 and value[0] == "0"):
            raise Malformed(f"not a decimal: {value!r}", line, name)
        out[name] = int(value)
    return out


def parse_text_field(line_text: str, name: str, line: int) -> str:
    prefix = name + "="
    if not line_text.startswith(prefix):
        raise Malformed(f"missing {prefix!r} line", line, name)
    return line_text[len(prefix):]
