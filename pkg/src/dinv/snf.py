"""Exact integer linear algebra: Bareiss minors, rational solves, Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def leading_minors(M) -> list[int]:
    """All leading principal minors, by fraction-free (Bareiss) elimination.

    No pivoting is done, so a vanishing minor stops the elimination; later
    minors are then reported through a plain determinant.
    """
    A = [list(map(int, row)) for row in M]
    n = len(A)
    minors = []
    prev = 1
    for k in range(n):
        piv = A[k][k]
        minors.append(piv)
        if piv == 0:
            minors.extend(
                determinant([row[: j + 1] for row in M[: j + 1]]) for j in range(k + 1, n)
            )
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][k] * A[k][j]) // prev
        prev = piv
    return minors


def determinant(M) -> int:
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][k] * A[k][j]) // prev
        prev = piv
    return sign * A[n - 1][n - 1]


def solve(M, b) -> list[Fraction]:
    """Solve ``M x = b`` exactly; ``M`` must be nonsingular."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[k], A[piv] = A[piv], A[k]
        inv = 1 / A[k][k]
        A[k] = [v * inv for v in A[k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [vi - f * vk for vi, vk in zip(A[i], A[k])]
    return [A[i][n] for i in range(n)]


def inverse(M) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[k], A[piv] = A[piv], A[k]
        inv = 1 / A[k][k]
        A[k] = [v * inv for v in A[k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                f = A[i][k]
                A[i] = [vi - f * vk for vi, vk in zip(A[i], A[k])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V = diag(diagonal)`` with ``U`` unimodular; ``U_inv`` is its inverse.

    Only the left transform is kept: it is all that is needed to identify the
    cokernel ``Z^n / M Z^n`` with ``sum Z/d_i``.
    """

    diagonal: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    U_inv: tuple[tuple[int, ...], ...]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 1)

    @property
    def nontrivial_positions(self) -> tuple[int, ...]:
        return tuple(k for k, d in enumerate(self.diagonal) if d != 1)

    def coordinates(self, y) -> tuple[int, ...]:
        """Image of the integer vector ``y`` in ``sum Z/d_i`` (nontrivial factors)."""
        out = []
        for k in self.nontrivial_positions:
            z = sum(u * v for u, v in zip(self.U[k], y))
            d = self.diagonal[k]
            out.append(z % d if d else z)
        return tuple(out)

    def lift(self, coords) -> list[int]:
        """An integer vector whose image is ``coords``."""
        z = [0] * len(self.diagonal)
        for k, c in zip(self.nontrivial_positions, coords):
            z[k] = c
        return [sum(u * v for u, v in zip(row, z)) for row in self.U_inv]


def smith_form(M) -> SmithForm:
    A = [list(map(int, row)) for row in M]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Ui = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_sub(i, t, q):  # R_i -= q R_t
        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
        U[i] = [a - q * b for a, b in zip(U[i], U[t])]
        for r in Ui:
            r[t] += q * r[i]

    def row_swap(i, t):
        A[i], A[t] = A[t], A[i]
        U[i], U[t] = U[t], U[i]
        for r in Ui:
            r[i], r[t] = r[t], r[i]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_sub(j, t, q):  # C_j -= q C_t
        for r in A:
            r[j] -= q * r[t]

    def col_swap(j, t):
        for r in A:
            r[j], r[t] = r[t], r[j]

    diag = []
    for t in range(min(n, m)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, m) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            if i != t:
                row_swap(i, t)
            if j != t:
                col_swap(j, t)
            dirty = False
            for i in range(t + 1, n):
                if A[i][t]:
                    row_sub(i, t, A[i][t] // A[t][t])
                    dirty |= A[i][t] != 0
            for j in range(t + 1, m):
                if A[t][j]:
                    col_sub(j, t, A[t][j] // A[t][t])
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            piv = A[t][t]
            bad = next((i for i in range(t + 1, n)
                        for j in range(t + 1, m) if A[i][j] % piv), None)
            if bad is None:
                break
            # fold a row carrying a non-multiple into the pivot row
            row_sub(t, bad, -1)
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
    diag.extend([0] * (n - len(diag)))
    return SmithForm(tuple(diag), tuple(map(tuple, U)), tuple(map(tuple, Ui)))
