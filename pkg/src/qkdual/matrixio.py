"""Plain-text matrix and state vector format.

    dim <d>
    <d rows of d complex literals>       (matrix)
    <d rows of 1 complex literal>        (state vector)

Literals look like ``0.5+1e-3i``, ``-1-0.25i`` or a bare real ``2``. Blank
lines and lines starting with ``#`` are ignored. The writer emits 17
significant digits so values round-trip exactly.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import ParseError

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_REAL})(?:([+-]{_REAL})i)?$|^([+-]?{_REAL})i$")


def parse_complex(token: str) -> complex:
    m = _COMPLEX.match(token)
    if not m:
        raise ParseError(f"bad complex literal {token!r}")
    re_part, im_part, pure_im = m.groups()
    if pure_im is not None:
        return complex(0.0, float(pure_im))
    return complex(float(re_part), float(im_part) if im_part else 0.0)


def _fmt_real(x: float) -> str:
    return format(x + 0.0, ".17g")


def format_complex(z: complex) -> str:
    z = complex(z)
    im = z.imag + 0.0
    sign = "-" if im < 0 else "+"
    return f"{_fmt_real(z.real)}{sign}{_fmt_real(abs(im))}i"


def parse_array(text: str) -> np.ndarray:
    """Parse a matrix (shape (d, d)) or a state vector (shape (d,))."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit():
        raise ParseError(f"expected 'dim <d>' header, got {lines[0]!r}")
    d = int(head[1])
    if d < 2 or d & (d - 1):
        raise ParseError(f"dim must be 2^n with n >= 1, got {d}")
    rows = [ln.split() for ln in lines[1:]]
    if len(rows) != d:
        raise ParseError(f"expected {d} rows, got {len(rows)}")
    widths = {len(r) for r in rows}
    if widths not in ({d}, {1}):
        raise ParseError(f"every row must have {d} entries (matrix) or 1 entry (vector)")
    values = np.array([[parse_complex(tok) for tok in r] for r in rows], dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ParseError("non-finite entry")
    return values[:, 0].copy() if widths == {1} else values


def format_array(a) -> str:
    a = np.asarray(a, dtype=complex)
    rows = a.reshape(-1, 1) if a.ndim == 1 else a
    out = [f"dim {rows.shape[0]}"]
    out += [" ".join(format_complex(z) for z in row) for row in rows]
    return "\n".join(out) + "\n"


def load_array(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_array(text)


def save_array(path, a) -> None:
    Path(path).write_text(format_array(a))
