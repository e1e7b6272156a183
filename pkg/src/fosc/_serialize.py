"""Deterministic text serialization helpers.

All floats are printed with 17 significant digits ('.' decimal
separator, no locale dependence) so identical inputs produce
byte-identical output files on every run.
"""

from __future__ import annotations

import json
import math
import re


def fmt(x: float) -> str:
    """A float with 17 significant digits."""
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats rendered via :func:`fmt`.

    Key order is insertion order; callers build dicts deterministically.
    """
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(k)}: {dumps(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = ",\n".join(f"{pad}  {dumps(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj} has no JSON form")
        return fmt(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


def write_json(path, obj) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(dumps(obj) + "\n")


def write_csv(path, header: str, rows) -> None:
    """Rows are iterables of already-formatted strings or numbers."""
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row))
            fh.write("\n")


_COMPLEX_RE = re.compile(
    r"""^\s*(?P<re>[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)?
        \s*(?P<im>[+-]\s*(\d+\.?\d*|\.\d+)?([eE][+-]?\d+)?)?\s*(?P<i>[ij])?\s*$""",
    re.VERBOSE,
)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' text (also plain reals, 'bi', 'a-bi', j accepted)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        pass
    m = _COMPLEX_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse complex number {text!r}")
    re_part = float(m.group("re") or 0.0)
    if m.group("i"):
        im_raw = m.group("im")
        if im_raw is None:  # forms like '2i'
            return complex(0.0, re_part)
        im = float(im_raw if im_raw not in ("+", "-") else im_raw + "1")
        return complex(re_part, im)
    if m.group("im"):
        raise ValueError(f"cannot parse complex number {text!r}")
    return complex(re_part, 0.0)


def complex_to_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, str):
        return parse_complex(obj)
    raise ValueError(f"cannot read complex value from {obj!r}")
