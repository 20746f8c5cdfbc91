"""Shared matrix text format.

First non-comment line: "rows cols" (base-10 integers). Then `rows` lines of
`cols` space-separated decimal floats. Lines starting with '#' are comments.
Values are written with 17 significant digits so a save/load round trip is
bit-exact.
"""

import numpy as np

from .kernel import as_matrix


def save_matrix(path, m):
    a = as_matrix(m)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(format(x, ".17g") for x in row) + "\n")


def load_matrix(path):
    rows = cols = None
    data = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if rows is None:
                parts = line.split()
                if len(parts) != 2:
                    raise IOError(f"{path}: line {lineno}: expected 'rows cols'")
                try:
                    rows, cols = int(parts[0]), int(parts[1])
                except ValueError:
                    raise IOError(f"{path}: line {lineno}: bad dimensions {line!r}")
                if rows <= 0 or cols <= 0:
                    raise IOError(f"{path}: line {lineno}: dimensions must be positive")
                continue
            if len(data) >= rows:
                raise IOError(
                    f"{path}: line {lineno}: extra data row (declared {rows} rows)"
                )
            parts = line.split()
            if len(parts) != cols:
                raise IOError(
                    f"{path}: line {lineno}: expected {cols} values, got {len(parts)}"
                )
            try:
                data.append([float(x) for x in parts])
            except ValueError:
                raise IOError(f"{path}: line {lineno}: unparsable value")
    if rows is None:
        raise IOError(f"{path}: no header line found")
    if len(data) != rows:
        raise IOError(f"{path}: declared {rows} rows but found {len(data)}")
    return np.array(data)
