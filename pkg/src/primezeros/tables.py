"""Zero tables: ordinates of critical-line zeros and their text file format.

The file format is one decimal ordinate per line; blank lines and lines
whose first non-blank character is ``#`` are ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ZeroTableFormatError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


def riemann_von_mangoldt(T: float) -> float:
    """Smooth part of the zero-counting function N(T)."""
    x = T / (2.0 * math.pi)
    return x * math.log(x) - x + 7.0 / 8.0


@dataclass(frozen=True)
class ZeroTable:
    """Strictly increasing positive ordinates ``gamma_n``.

    ``complete_from``/``complete_to`` give the height range in which the
    table claims to list every zero.  A table whose first entry is the
    first zero (~14.1347) is complete from 0.
    """

    gammas: np.ndarray = field(default_factory=lambda: np.zeros(0))
    complete_to: float | None = None
    complete_from: float | None = None

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float).ravel()
        if g.size and (g[0] <= 0 or np.any(np.diff(g) <= 0)):
            raise ValueError("zero ordinates must be positive and strictly increasing")
        g.flags.writeable = False
        object.__setattr__(self, "gammas", g)
        if self.complete_to is None:
            object.__setattr__(self, "complete_to", float(g[-1]) if g.size else 0.0)
        if self.complete_from is None:
            start = 0.0 if (not g.size or self.starts_at_first) else float(g[0])
            object.__setattr__(self, "complete_from", start)

    def __len__(self):
        return self.gammas.size

    def __iter__(self):
        return iter(self.gammas.tolist())

    @property
    def starts_at_first(self) -> bool:
        return bool(self.gammas.size) and 14.0 < self.gammas[0] < 14.2

    def density_consistent(self, slack: float = 2.0) -> bool:
        """Whether the count up to the last entry is near the Riemann-von Mangoldt value."""
        if not self.gammas.size:
            return True
        T = float(self.gammas[-1])
        return abs(self.gammas.size - riemann_von_mangoldt(T)) <= slack

    def covers(self, lo: float, hi: float) -> bool:
        return self.complete_from <= max(lo, 0.0) and hi <= self.complete_to

    def first(self, n: int) -> "ZeroTable":
        """The first ``n`` entries (complete up to the n-th zero)."""
        g = self.gammas[:n]
        return ZeroTable(g.copy(), complete_to=float(g[-1]) if g.size else 0.0,
                         complete_from=self.complete_from)


def read_zero_table(path) -> ZeroTable:
    values = []
    prev_line = None
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            raise ZeroTableFormatError(f"line {lineno}: not a number: {line!r}", line=lineno) from None
        if not math.isfinite(value) or value <= 0:
            raise ZeroTableFormatError(f"line {lineno}: ordinate must be positive and finite", line=lineno)
        if values and value <= values[-1]:
            raise ZeroTableFormatError(
                f"line {lineno}: {value} does not exceed the previous entry "
                f"{values[-1]} (line {prev_line})", line=lineno)
        values.append(value)
        prev_line = lineno
    return ZeroTable(np.array(values))


def write_zero_table(table: ZeroTable, path, header: str | None = None) -> None:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend(f"{g:.15g}" for g in table.gammas.tolist())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
