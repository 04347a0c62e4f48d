"""Text format for complex matrices, shared by every tool in the package.

One matrix row per line, entries comma separated.  Each entry is ``a+bi`` or
``a-bi`` with decimal ``a`` and ``b``; zero parts may be omitted (``2``,
``3i``) and a bare ``i`` means coefficient one.  Lines that are blank or
start with ``#`` are skipped on input.
"""

from __future__ import annotations

import cmath
import re

import numpy as np

__all__ = [
    "parse_complex",
    "format_complex",
    "parse_matrix",
    "format_matrix",
    "load_matrix",
    "save_matrix",
]

_BARE_UNIT = re.compile(r"(?<![0-9.])j")


def parse_complex(text: str) -> complex:
    """Parse one ``a+bi`` entry."""
    s = text.strip().replace(" ", "").lower()
    if not s:
        raise ValueError("empty matrix entry")
    # python's complex() wants 'j' and an explicit coefficient on the unit
    t = _BARE_UNIT.sub("1j", s.replace("i", "j"))
    try:
        z = complex(t)
    except ValueError as exc:
        raise ValueError(f"malformed complex entry {text!r}") from exc
    if not (cmath.isfinite(z)):
        raise ValueError(f"non-finite complex entry {text!r}")
    return z


def format_complex(z: complex, digits: int = 12) -> str:
    """Canonical ``a+bi`` form with both parts always present."""
    z = complex(z)
    re_part = z.real + 0.0  # clear -0.0
    im_part = z.imag + 0.0
    return f"{re_part:.{digits}g}{im_part:+.{digits}g}i"


def parse_matrix(text: str) -> np.ndarray:
    """Parse a whole matrix; rows must all have the same length."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            row = [parse_complex(f) for f in stripped.split(",")]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
        rows.append(row)
    if not rows:
        raise ValueError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows have inconsistent lengths")
    return np.array(rows, dtype=complex)


def format_matrix(m, digits: int = 12) -> str:
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    return "\n".join(
        ", ".join(format_complex(x, digits) for x in row) for row in a
    )


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def save_matrix(path, m, digits: int = 12) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(m, digits) + "\n")
