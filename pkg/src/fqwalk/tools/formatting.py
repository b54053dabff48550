"""
Text rendering shared by the CLI reports.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, List, Sequence

import numpy as np

from ..config import PRINT_ZERO_TOL


def format_complex(z: complex, zero_tol: float = PRINT_ZERO_TOL) -> str:
    """``re+imi`` with 12 significant digits; tiny values become ``0~``."""
    z = complex(z)
    if abs(z) < zero_tol:
        return "0~"
    re_, im_ = z.real, z.imag
    if abs(re_) < zero_tol:
        re_ = 0.0
    if abs(im_) < zero_tol:
        im_ = 0.0
    return f"{re_ + 0.0:.12g}{im_ + 0.0:+.12g}i"


def format_complex_exact(z: complex) -> str:
    z = complex(z)
    return "%.12e%+.12ei" % (z.real, z.imag)


def format_matrix(m: np.ndarray, exact: bool = True) -> List[str]:
    fmt = format_complex_exact if exact else format_complex
    return ["  ".join(fmt(x) for x in row) for row in np.atleast_2d(m)]


def format_real(x: float) -> str:
    return f"{x:.12g}"


def render_table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Left-aligned columns padded to the widest cell."""
    rows = [[str(c) for c in r] for r in rows]
    head = [str(h) for h in header]
    widths = [len(h) for h in head]
    for r in rows:
        for i, c in enumerate(r):
            widths[i] = max(widths[i], len(c))
    lines = ["  ".join(c.ljust(w) for c, w in zip(head, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def render(header: Sequence[str], rows: Iterable[Sequence[object]], fmt: str) -> str:
    if fmt == "csv":
        return render_csv(header, rows)
    return render_table(header, rows)
