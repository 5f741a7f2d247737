"""Exact rational Gaussian elimination, particular solutions and null
spaces, for small integer matrices."""

from fractions import Fraction


def _echelon(rows):
    """Row-reduce a matrix of Fractions in place; returns pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_linear(matrix, rhs):
    """One exact solution x of matrix @ x = rhs (free variables set to 0),
    or None if inconsistent."""
    if not matrix:
        return []
    aug = [
        [Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)
    ]
    pivots = _echelon(aug)
    ncols = len(matrix[0])
    if ncols in pivots:
        return None  # pivot in the rhs column: inconsistent
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = aug[r][-1]
    return x


def null_space_basis(matrix):
    """Basis (list of Fraction vectors) of the null space of the matrix."""
    if not matrix:
        return []
    rows = [[Fraction(v) for v in row] for row in matrix]
    pivots = _echelon(rows)
    ncols = len(matrix[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][fc]
        basis.append(v)
    return basis


def mat_vec(matrix, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in matrix]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))
