"""
Exact Linear Algebra over Cyclotomic Fields
app/algebra/linalg.py
"""
from typing import List, Sequence, Tuple

from app.algebra.cycnum import CycNum, ONE, ZERO

Matrix = List[List[CycNum]]


def row_reduce(rows: Sequence[Sequence], ncols: int) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form

    Args:
        rows: matrix rows (entries coercible to CycNum)
        ncols: number of columns

    Returns:
        (nonzero reduced rows, pivot columns)
    """
    m = [[CycNum.coerce(x) for x in row] for row in rows]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][col].inv()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                factor = m[i][col]
                m[i] = [a - factor * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of the right null space"""
    reduced, pivots = row_reduce(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(row_reduce(rows, ncols)[1])


def determinant(rows: Sequence[Sequence]) -> CycNum:
    """Determinant of a square matrix by Gaussian elimination"""
    m = [[CycNum.coerce(x) for x in row] for row in rows]
    n = len(m)
    det = ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        lead = m[col][col]
        det = det * lead
        inv = lead.inv()
        for i in range(col + 1, n):
            factor = m[i][col] * inv
            if factor:
                m[i] = [a - factor * b for a, b in zip(m[i], m[col])]
    return det
