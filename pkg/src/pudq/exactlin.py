"""Small dense matrices over the exact coefficient fields (lists of lists)."""

from __future__ import annotations

from gmpy2 import mpq

from .errors import ExactnessError
from .scalars import Scalar, QuadExt, as_coeff, is_real

__all__ = ["identity", "matmul", "transpose", "inverse", "det", "charpoly", "inertia", "mat_eq", "symplectic_form"]


def identity(n: int):
    return [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def symplectic_form(d: int):
    """``J = [[0, I], [-I, 0]]`` for coordinates listed before momenta."""
    n = 2 * d
    J = [[mpq(0)] * n for _ in range(n)]
    for i in range(d):
        J[i][d + i] = mpq(1)
        J[d + i][i] = mpq(-1)
    return J


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = mpq(0)
            for t in range(k):
                a, b = A[i][t], B[t][j]
                if a and b:
                    s = s + a * b
            row.append(s)
        out.append(row)
    return out


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_eq(A, B) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def _inv(c):
    if isinstance(c, (Scalar, QuadExt)):
        return c.inverse()
    return 1 / c


def inverse(A):
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` if singular."""
    n = len(A)
    M = [[as_coeff(v) for v in row] + e for row, e in zip(A, identity(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = _inv(M[col][col])
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            f = M[r][col]
            if r != col and f:
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def det(A):
    n = len(A)
    M = [[as_coeff(v) for v in row] for row in A]
    d = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = -d
        d = d * M[col][col]
        inv = _inv(M[col][col])
        for r in range(col + 1, n):
            f = M[r][col] * inv
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return d


def charpoly(A):
    """Coefficients ``[c_0, ..., c_n]`` of ``det(x I - A)`` (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    M = [[mpq(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = matmul(A, M)
        M = [[AM[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = matmul(A, M)
        tr = sum((AM[i][i] for i in range(n)), mpq(0))
        coeffs[n - k] = -tr / k
    return coeffs


def inertia(S):
    """``(n_plus, n_minus, n_zero)`` of a real symmetric rational matrix, exactly.

    The characteristic polynomial of a symmetric matrix has only real roots, so
    Descartes' rule of signs counts the positive and negative eigenvalues exactly.
    """
    if not all(is_real(v) and not isinstance(v, QuadExt) for row in S for v in row):
        raise ExactnessError("inertia needs a real rational matrix")
    if not mat_eq(S, transpose(S)):
        raise ValueError("inertia needs a symmetric matrix")
    c = charpoly(S)
    zero = next(i for i, v in enumerate(c) if v)
    c = c[zero:]

    def changes(seq):
        s = [v for v in seq if v]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))

    plus = changes(c)
    minus = changes([v * (-1) ** i for i, v in enumerate(c)])
    return plus, minus, zero
