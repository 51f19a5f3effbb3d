"""Generalized Cartan matrices: validation and type tests."""

from __future__ import annotations

from fractions import Fraction as Q
from typing import List, Optional, Sequence, Tuple

from .intlinalg import kernel_basis, qmat, rank


class MatrixValidationError(ValueError):
    """Base class for generalized-Cartan-matrix violations."""


class DiagonalNotTwo(MatrixValidationError):
    pass


class PositiveOffDiagonal(MatrixValidationError):
    pass


class AsymmetricZero(MatrixValidationError):
    pass


class KacMoodyMatrix:
    """An integer matrix a[i][j] with 2 on the diagonal, nonpositive entries
    off it, and a symmetric zero pattern."""

    def __init__(self, entries: Sequence[Sequence[int]]):
        n = len(entries)
        a = [[int(x) for x in row] for row in entries]
        if any(len(row) != n for row in a):
            raise MatrixValidationError("matrix must be square")
        for i in range(n):
            if a[i][i] != 2:
                raise DiagonalNotTwo(f"a[{i}][{i}] = {a[i][i]} != 2")
            for j in range(n):
                if i != j and a[i][j] > 0:
                    raise PositiveOffDiagonal(f"a[{i}][{j}] = {a[i][j]} > 0")
                if i != j and (a[i][j] == 0) != (a[j][i] == 0):
                    raise AsymmetricZero(f"a[{i}][{j}] = 0 but a[{j}][{i}] != 0")
        self.entries: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in a)
        self.n = n

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, KacMoodyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"KacMoodyMatrix({[list(r) for r in self.entries]})"

    def rank(self) -> int:
        return rank(qmat(self.entries))

    def max_offdiag(self) -> int:
        return max(
            (-self.entries[i][j] for i in range(self.n) for j in range(self.n) if i != j),
            default=0,
        )

    def is_simply_laced(self) -> bool:
        return self.max_offdiag() <= 1

    def submatrix(self, idx: Sequence[int]) -> "KacMoodyMatrix":
        return KacMoodyMatrix([[self.entries[i][j] for j in idx] for i in idx])

    def is_finite_type(self) -> bool:
        """All principal minors positive: the classical finite-type criterion."""
        from itertools import combinations

        for r in range(1, self.n + 1):
            for idx in combinations(range(self.n), r):
                if _det(qmat(self.submatrix(idx).entries)) <= 0:
                    return False
        return True

    def positive_null_vector(self) -> Optional[List[Q]]:
        """A vector c > 0 with sum_j c_j a[i][j] = 0 for all i, when one exists.

        Its existence (for an indecomposable matrix) characterizes affine type;
        the associated weight sum_j c_j alpha_j is fixed by every simple
        reflection, which drives the prenilpotence obstruction.
        """
        ker = kernel_basis(qmat(self.entries))
        if len(ker) != 1:
            return None
        v = ker[0]
        if all(x > 0 for x in v):
            return v
        if all(x < 0 for x in v):
            return [-x for x in v]
        return None

    def is_affine_type(self) -> bool:
        return self.positive_null_vector() is not None and not self.is_finite_type()


def _det(mat) -> Q:
    m = [row[:] for row in mat]
    n = len(m)
    det = Q(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = Q(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def validate_matrix(raw: Sequence[Sequence[int]]) -> KacMoodyMatrix:
    """Validate an integer matrix, raising a diagnostic naming the violated rule."""
    return KacMoodyMatrix(raw)
