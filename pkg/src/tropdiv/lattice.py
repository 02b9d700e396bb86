"""Exact linear algebra over Q and Z: determinants, solving, Hermite normal form."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(A) -> Matrix:
    return [[Fraction(x) for x in row] for row in A]


def det(A) -> Fraction:
    M = to_fractions(A)
    n = len(M)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            out = -out
        out *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return out


def rref(A) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = to_fractions(A)
    rows = len(M)
    cols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A) -> int:
    return len(rref(A)[1]) if A else 0


def inverse(A) -> Matrix:
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(to_fractions(A))]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def matmul(A, B) -> Matrix:
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def vecmat(v, A) -> list[Fraction]:
    """Row vector times matrix."""
    n = len(A[0]) if A else 0
    return [sum((v[i] * A[i][j] for i in range(len(v))), Fraction(0)) for j in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def leading_minors(A) -> list[Fraction]:
    return [det([row[:k] for row in A[:k]]) for k in range(1, len(A) + 1)]


# ----------------------------------------------------------------------------
# integer lattices


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite(A: Sequence[Sequence[int]], transform: bool = False):
    """Row-style Hermite normal form of an integer matrix.

    Returns ``H`` (nonzero rows only) or, with ``transform``, ``(H_full, U)``
    where ``U`` is unimodular with ``U A = H_full`` (zero rows kept at the bottom).
    """
    H = [list(map(int, row)) for row in A]
    m = len(H)
    n = len(H[0]) if H else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _ext_gcd(a, b)
            ua, ub = -b // g, a // g
            H[r], H[i] = ([x * p + y * q for p, q in zip(H[r], H[i])],
                          [ua * p + ub * q for p, q in zip(H[r], H[i])])
            U[r], U[i] = ([x * p + y * q for p, q in zip(U[r], U[i])],
                          [ua * p + ub * q for p, q in zip(U[r], U[i])])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            f = H[i][c] // H[r][c]
            if f:
                H[i] = [p - f * q for p, q in zip(H[i], H[r])]
                U[i] = [p - f * q for p, q in zip(U[i], U[r])]
        r += 1
    if transform:
        return H, U
    return [row for row in H if any(row)]


def in_row_lattice(v: Sequence[int], H: Sequence[Sequence[int]]) -> bool:
    """Membership of an integer vector in the row span of a Hermite form ``H``."""
    v = list(map(int, v))
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        f = v[c] // row[c]
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


def clear_denominators(vectors) -> tuple[list[list[int]], int]:
    """Scale rational vectors by the lcm of all denominators."""
    den = 1
    for v in vectors:
        for x in v:
            den = lcm(den, Fraction(x).denominator)
    return [[int(Fraction(x) * den) for x in v] for v in vectors], den


def in_rational_row_lattice(v, rows) -> bool:
    """Whether ``v`` is an integer combination of ``rows`` (all rational)."""
    scaled, _ = clear_denominators(list(rows) + [v])
    return in_row_lattice(scaled[-1], hermite(scaled[:-1]))


def integer_kernel(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """A basis of the saturated lattice ``{y in Z^n : A y = 0}``."""
    n = len(A[0]) if A else 0
    At = [[int(A[i][j]) for i in range(len(A))] for j in range(n)]
    if not A:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    H, U = hermite(At, transform=True)
    return [U[i] for i in range(n) if not any(H[i])]
