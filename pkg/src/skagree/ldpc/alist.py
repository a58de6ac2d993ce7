"""Reading and writing parity-check matrices in the alist text format.

Layout: "n m", "max_col_w max_row_w", column weights, row weights, then the
1-based row indices of each column (zero-padded to max_col_w) and the 1-based
column indices of each row (zero-padded to max_row_w).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .peg import ParityCheckMatrix


def write_alist(h: ParityCheckMatrix, path) -> None:
    csc = h.to_sparse().tocsc()
    csr = h.to_sparse()
    n, m = h.n, h.num_checks
    col_w = np.diff(csc.indptr)
    row_w = np.diff(csr.indptr)
    max_col = int(col_w.max(initial=0))
    max_row = int(row_w.max(initial=0))
    lines = [
        f"{n} {m}",
        f"{max_col} {max_row}",
        " ".join(str(w) for w in col_w),
        " ".join(str(w) for w in row_w),
    ]
    for v in range(n):
        rows = csc.indices[csc.indptr[v]:csc.indptr[v + 1]] + 1
        padded = list(rows) + [0] * (max_col - rows.size)
        lines.append(" ".join(str(r) for r in padded))
    for c in range(m):
        cols = csr.indices[csr.indptr[c]:csr.indptr[c + 1]] + 1
        padded = list(cols) + [0] * (max_row - cols.size)
        lines.append(" ".join(str(col) for col in padded))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path) -> ParityCheckMatrix:
    with open(path) as fh:
        rows = [[int(tok) for tok in line.split()] for line in fh if line.strip()]
    n, m = rows[0]
    col_w = rows[2]
    if len(col_w) != n or len(rows) < 4 + n:
        raise ValueError("malformed alist file")
    entries_c = []
    entries_v = []
    for v in range(n):
        for r in rows[4 + v]:
            if r > 0:
                entries_c.append(r - 1)
                entries_v.append(v)
    matrix = sp.csr_matrix(
        (np.ones(len(entries_c), dtype=np.uint8), (entries_c, entries_v)),
        shape=(m, n),
    )
    return ParityCheckMatrix(matrix)
