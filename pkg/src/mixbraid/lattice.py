"""Exact integer linear algebra on small dense matrices.

Matrices are lists of rows of Python ints, vectors are tuples or lists of
ints. Nothing here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

IntVec = tuple
IntMat = list


def zeros(rows: int, cols: int) -> IntMat:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMat:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    if not M:
        return (0, 0)
    return (len(M), len(M[0]))


def transpose(M: Sequence[Sequence[int]]) -> IntMat:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMat:
    if not A:
        return []
    if len(A[0]) != len(B):
        raise ValueError(f"shape mismatch {shape(A)} x {shape(B)}")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> IntVec:
    if A and len(A[0]) != len(x):
        raise ValueError("shape mismatch in matvec")
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def copy(M: Sequence[Sequence[int]]) -> IntMat:
    return [list(r) for r in M]


def det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ValueError("det of non-square matrix")
    A = copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination."""
    A = copy(M)
    rows, cols = shape(A)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, rows):
            if A[i][c]:
                f, g = A[i][c], A[r][c]
                A[i] = [g * x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def rational_inverse(M: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> IntMat:
    inv = rational_inverse(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def rational_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Some rational solution of A x = b (free variables set to 0), or None."""
    rows, cols = len(A), (len(A[0]) if A else 0)
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
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
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = M[i][cols]
    return x


# --- normal forms -----------------------------------------------------------

def _hnf(A: Sequence[Sequence[int]], track: bool) -> tuple[IntMat, IntMat | None]:
    H = copy(A)
    m, n = shape(H)
    U = identity(m) if track else None
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid on column c below row r
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                if track:
                    U[r], U[piv] = U[piv], U[r]
            done = True
            for i in nz:
                if i != r and H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    if track:
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                if track:
                    U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    if track:
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            r += 1
    return H, U


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat]:
    """Row-style HNF: returns (H, U) with U unimodular and U*A = H.

    H is in row echelon form, pivots positive, entries above a pivot reduced
    into [0, pivot).
    """
    return _hnf(A, True)


def row_span_basis(rows: Sequence[Sequence[int]]) -> IntMat:
    """Nonzero rows of the HNF: a basis of the integer row span."""
    if not rows:
        return []
    H, _ = _hnf(rows, False)
    return [r for r in H if any(r)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat, IntMat]:
    """Returns (U, D, V) with U*M*V = D diagonal, d_i | d_{i+1}, d_i >= 0."""
    D = copy(M)
    m, n = shape(D)
    if m == 0 or n == 0:
        return identity(m), D, identity(n)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q*row_src
        D[dst] = [x - q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q*col_src
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // p)
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // p)
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            # divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(shape(D))) if D[i][i] != 0]


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> IntMat:
    """Rows form a Z-basis of {x in Z^n : A x = 0}."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return identity(n)
    H, U = hermite_normal_form(transpose(A))
    # U * A^T = H ; rows of U whose H-row vanishes span the kernel of A
    return [U[i] for i in range(len(H)) if not any(H[i])]


def integer_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> IntVec | None:
    """Canonical integer solution of A x = b, or None.

    Uses the row HNF of A^T: U A^T = H, so A = H^T U^{-T}. Writing
    x = U^T y turns the system into H^T y = b, which is lower triangular in
    the pivot variables. Free variables are set to zero.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    if m != len(b):
        raise ValueError("right-hand side length mismatch")
    if m == 0:
        return tuple([0] * n)
    H, U = hermite_normal_form(transpose(A))
    # H is n x m ; H^T y = b
    y = [0] * n
    resid = list(b)
    row = 0
    for c in range(m):
        if row < n and H[row][c] != 0:
            p = H[row][c]
            if resid[c] % p:
                return None
            y[row] = resid[c] // p
            for cc in range(c, m):
                resid[cc] -= y[row] * H[row][cc]
            row += 1
        elif resid[c] != 0:
            return None
    if any(resid):
        return None
    x = tuple(sum(U[i][j] * y[i] for i in range(n)) for j in range(n))
    return x


# --- enumeration ------------------------------------------------------------

def lattice_points_in_box(lower: Sequence[int], upper_exclusive: Sequence[int]) -> list[IntVec]:
    if len(lower) != len(upper_exclusive):
        raise ValueError("box bounds of different lengths")
    for lo, hi in zip(lower, upper_exclusive):
        if lo >= hi:
            raise ValueError(f"empty interval [{lo}, {hi})")
    return [tuple(p) for p in product(*(range(lo, hi) for lo, hi in zip(lower, upper_exclusive)))]


# --- formal combinations of characters --------------------------------------

class MonomialVector:
    """Finite integer combination of lattice points, sum c_p x^p."""

    __slots__ = ("_d",)

    def __init__(self, data: dict | Iterable | None = None):
        self._d: dict[tuple, int] = {}
        if data is None:
            return
        items = data.items() if isinstance(data, dict) else data
        for p, c in items:
            self._add(tuple(p), c)

    def _add(self, p: tuple, c: int) -> None:
        v = self._d.get(p, 0) + c
        if v:
            self._d[p] = v
        else:
            self._d.pop(p, None)

    @classmethod
    def monomial(cls, p: Sequence[int], c: int = 1) -> "MonomialVector":
        return cls({tuple(p): c})

    def items(self) -> list[tuple[tuple, int]]:
        return sorted(self._d.items())

    def __iter__(self) -> Iterator[tuple]:
        return iter(sorted(self._d))

    def __len__(self) -> int:
        return len(self._d)

    def __getitem__(self, p) -> int:
        return self._d.get(tuple(p), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialVector) and self._d == other._d

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __add__(self, other: "MonomialVector") -> "MonomialVector":
        out = MonomialVector(self._d)
        for p, c in other._d.items():
            out._add(p, c)
        return out

    def __neg__(self) -> "MonomialVector":
        return MonomialVector({p: -c for p, c in self._d.items()})

    def __sub__(self, other: "MonomialVector") -> "MonomialVector":
        return self + (-other)

    def scale(self, k: int) -> "MonomialVector":
        return MonomialVector({p: k * c for p, c in self._d.items()})

    def shift(self, chi: Sequence[int]) -> "MonomialVector":
        """Multiply by the monomial x^chi."""
        return MonomialVector({tuple(a + b for a, b in zip(p, chi)): c for p, c in self._d.items()})

    def __mul__(self, other: "MonomialVector") -> "MonomialVector":
        out = MonomialVector()
        for p, c in self._d.items():
            for q, e in other._d.items():
                out._add(tuple(a + b for a, b in zip(p, q)), c * e)
        return out

    def support(self) -> list[tuple]:
        return sorted(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def to_json(self) -> list:
        return [[list(p), c] for p, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "MonomialVector":
        return cls((tuple(p), c) for p, c in data)

    def __repr__(self) -> str:
        if not self._d:
            return "0"
        return " + ".join(f"{c}*x^{p}" for p, c in self.items())
