"""Dense exact linear algebra over F_p, sized for desk-scale systems.

Pivoting is deterministic: within each column the pivot is the first
(lowest-index) row with a nonzero entry.
"""

from __future__ import annotations


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon form; returns (matrix, pivot column indices)."""
    a = [[v % p for v in row] for row in rows]
    if not a:
        return a, []
    m, ncols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        pivot = next((i for i in range(r, m) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(v * inv) % p for v in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                fac = a[i][c]
                a[i] = [(vi - fac * vr) % p for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: list[list[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def solve(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of A x = rhs over F_p (free variables 0), or None."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [row + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, p)
    for i, row in enumerate(red):
        if all(v == 0 for v in row[:ncols]) and row[ncols] % p:
            return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        if c < ncols:
            x[c] = red[r][ncols]
    return x


class SpanTracker:
    """Incremental row space over F_p; reports whether each added vector is new."""

    def __init__(self, p: int):
        self.p = p
        self.rows: list[list[int]] = []   # kept in echelon form
        self.pivots: list[int] = []

    def _reduce(self, vec: list[int]) -> list[int]:
        v = [x % self.p for x in vec]
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                fac = v[c]
                v = [(a - fac * b) % self.p for a, b in zip(v, row)]
        return v

    def add(self, vec: list[int]) -> bool:
        """Insert vec; True if it increased the span, False if dependent."""
        v = self._reduce(vec)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = pow(v[c], self.p - 2, self.p)
        v = [(x * inv) % self.p for x in v]
        self.rows.append(v)
        self.pivots.append(c)
        return True
