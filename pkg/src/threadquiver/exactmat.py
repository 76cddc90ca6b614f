"""Small exact linear algebra kit over the rationals.

Matrices are lists of lists of Fractions (ints are accepted and coerced).
Everything here is dimension-level plumbing for the representation engine;
sizes stay tiny, so plain fraction Gaussian elimination is enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def copy(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def shape(m: Matrix):
    return (len(m), len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    rows, cols = shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    out = zeros(ra, cb)
    for i in range(ra):
        arow = a[i]
        orow = out[i]
        for k in range(ca):
            aik = arow[k]
            if aik:
                brow = b[k]
                for j in range(cb):
                    if brow[j]:
                        orow[j] += aik * brow[j]
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    return [sum(aij * vj for aij, vj in zip(row, v) if vj) for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def is_zero(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def _rref(m: Matrix):
    """In-place reduced row echelon form; returns pivot column list."""
    rows, cols = shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rref(m: Matrix):
    out = [[Fraction(x) for x in row] for row in m]
    pivots = _rref(out)
    return out, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix) -> List[Vector]:
    """Basis of the right kernel {v : m v = 0}."""
    rows, cols = shape(m)
    if cols == 0:
        return []
    if rows == 0:
        return [[Fraction(i == j) for i in range(cols)] for j in range(cols)]
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def column_space(m: Matrix) -> List[Vector]:
    """Basis of the column span, as column vectors."""
    if not m or not m[0]:
        return []
    _, pivots = rref(m)
    return [[m[i][c] for i in range(len(m))] for c in pivots]


def solve(m: Matrix, b: Vector):
    """One solution of m x = b, or None if inconsistent."""
    rows, cols = shape(m)
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    for r in range(len(pivots), rows):
        if red[r][cols]:
            return None
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def solve_matrix(m: Matrix, b: Matrix):
    """X with m X = b, or None; columns solved independently."""
    rows, cols = shape(m)
    rb, cb = shape(b)
    if rb != rows:
        raise ValueError("shape mismatch in solve_matrix")
    out_cols = []
    for j in range(cb):
        x = solve(m, [b[i][j] for i in range(rows)])
        if x is None:
            return None
        out_cols.append(x)
    return transpose([c for c in out_cols]) if out_cols else zeros(cols, 0)


def hstack(blocks: List[Matrix], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for b in blocks:
        if b and len(b) != rows:
            raise ValueError("hstack row mismatch")
        for i in range(rows):
            out[i].extend(b[i] if b else [])
    return out


def basis_matrix(vectors: List[Vector]) -> Matrix:
    """Column matrix assembled from a list of vectors."""
    if not vectors:
        return []
    n = len(vectors[0])
    return [[v[i] for v in vectors] for i in range(n)]
