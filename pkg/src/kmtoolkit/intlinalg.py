"""Exact linear algebra over Q and Z, plus the quadratic field Q(sqrt 2).

Everything here works on lists of lists of Fractions/ints; matrices are
small (lattice ranks, truncated weight spaces), so dense Gaussian
elimination and textbook Hermite/Smith reductions are the right tools.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

Q = Fraction

# ---------------------------------------------------------------------------
# rational matrices


def qmat(rows: Iterable[Iterable]) -> List[List[Q]]:
    return [[Q(x) for x in row] for row in rows]


def mat_mul(a: Sequence[Sequence[Q]], b: Sequence[Sequence[Q]]) -> List[List[Q]]:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[Q(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for j in range(k):
            c = ai[j]
            if c:
                bj = b[j]
                row = out[i]
                for l in range(m):
                    if bj[l]:
                        row[l] += c * bj[l]
    return out


def mat_vec(a: Sequence[Sequence[Q]], v: Sequence[Q]) -> List[Q]:
    return [sum((c * x for c, x in zip(row, v)), Q(0)) for row in a]


def identity(n: int) -> List[List[Q]]:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def rref(rows: Sequence[Sequence[Q]]) -> Tuple[List[List[Q]], List[int]]:
    """Reduced row echelon form; returns (rref rows without zero rows, pivot columns)."""
    mat = [list(map(Q, r)) for r in rows]
    pivots: List[int] = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Q(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Q]]) -> int:
    return len(rref(rows)[0])


def in_row_span(rows: Sequence[Sequence[Q]], v: Sequence[Q]) -> bool:
    if not rows:
        return all(x == 0 for x in v)
    return rank(list(rows)) == rank(list(rows) + [list(v)])


def solve_in_span(rows: Sequence[Sequence[Q]], v: Sequence[Q]) -> Optional[List[Q]]:
    """Coefficients c with sum c_i rows[i] = v, or None."""
    if not rows:
        return [] if all(x == 0 for x in v) else None
    ncols = len(rows[0])
    # augmented transpose system: rows^T * c = v
    aug = [[rows[i][j] for i in range(len(rows))] + [Q(v[j])] for j in range(ncols)]
    red, piv = rref(aug)
    ncoef = len(rows)
    coeffs = [Q(0)] * ncoef
    for row, p in zip(red, piv):
        if p == ncoef:  # pivot in the constant column: inconsistent
            return None
        coeffs[p] = row[-1]
    # verify (handles free variables set to zero)
    for j in range(ncols):
        if sum(coeffs[i] * rows[i][j] for i in range(ncoef)) != v[j]:
            return None
    return coeffs


def kernel_basis(rows: Sequence[Sequence[Q]]) -> List[List[Q]]:
    """Basis of {x : M x = 0} for M given by rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# integer lattices


def hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row Hermite normal form of the lattice spanned by integer rows.

    Returns a basis in echelon form with positive pivots and reduced
    entries above each pivot; zero rows are dropped.
    """
    mat = [list(map(int, r)) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        # clear column c below row r by gcd steps
        while True:
            nz = [i for i in range(r, len(mat)) if mat[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(mat[i][c]))
            mat[r], mat[i0] = mat[i0], mat[r]
            if mat[r][c] < 0:
                mat[r] = [-x for x in mat[r]]
            done = True
            for i in range(r + 1, len(mat)):
                if mat[i][c] != 0:
                    q = mat[i][c] // mat[r][c]
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
                    if mat[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(mat) and mat[r][c] != 0:
            for i in range(r):
                q = mat[i][c] // mat[r][c]
                if q:
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
            r += 1
            if r == len(mat):
                break
    return [row for row in mat[:r] if any(row)]


def snf_diagonal(rows: Sequence[Sequence[int]]) -> List[int]:
    """Elementary divisors d1 | d2 | ... of an integer matrix (nonzero ones)."""
    mat = [list(map(int, r)) for r in rows]
    if not mat or not mat[0]:
        return []
    n, m = len(mat), len(mat[0])
    divisors: List[int] = []
    top = 0
    while top < min(n, m):
        # find nonzero pivot with minimal absolute value
        best = None
        for i in range(top, n):
            for j in range(top, m):
                if mat[i][j] != 0 and (best is None or abs(mat[i][j]) < abs(mat[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        mat[top], mat[i0] = mat[i0], mat[top]
        for row in mat:
            row[top], row[j0] = row[j0], row[top]
        p = mat[top][top]
        dirty = False
        for i in range(top + 1, n):
            if mat[i][top] % p:
                dirty = True
            q = mat[i][top] // p
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[top])]
        for j in range(top + 1, m):
            if mat[top][j] % p:
                dirty = True
            q = mat[top][j] // p
            if q:
                for row in mat:
                    row[j] -= q * row[top]
        if any(mat[i][top] for i in range(top + 1, n)) or any(
            mat[top][j] for j in range(top + 1, m)
        ):
            continue
        if dirty:
            continue
        # ensure divisibility of the remaining block
        bad = next(
            (
                (i, j)
                for i in range(top + 1, n)
                for j in range(top + 1, m)
                if mat[i][j] % p
            ),
            None,
        )
        if bad is not None:
            i, _ = bad
            mat[top] = [x + y for x, y in zip(mat[top], mat[i])]
            continue
        divisors.append(abs(p))
        top += 1
    return divisors


def lattice_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(hnf(rows))


def is_saturated(rows: Sequence[Sequence[int]]) -> bool:
    """True iff Z^n / (row lattice) is torsion-free."""
    divs = snf_diagonal(rows)
    return all(d == 1 for d in divs)


def lattice_member(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Is integer vector v in the Z-span of the rows?"""
    h = hnf(rows)
    w = list(map(int, v))
    for row in h:
        p = next(i for i, x in enumerate(row) if x)
        if w[p] % row[p]:
            return False
        q = w[p] // row[p]
        w = [x - q * y for x, y in zip(w, row)]
    return not any(w)


def primitive_vector(v: Sequence[Q]) -> List[int]:
    """Scale a nonzero rational vector to a primitive integer vector (sign kept)."""
    den = math.lcm(*[x.denominator for x in v]) if v else 1
    ints = [int(x * den) for x in v]
    g = math.gcd(*[abs(x) for x in ints if x] or [1])
    return [x // g for x in ints]


def integer_kernel(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """HNF basis of the lattice {x in Z^n : M x = 0} for integer rows M."""
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return []
    m, n = len(mat), len(mat[0])
    # rows of aug = (column i of M, e_i); reduce the left block over Z
    aug = [
        [mat[j][i] for j in range(m)] + [1 if k == i else 0 for k in range(n)]
        for i in range(n)
    ]
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, n) if aug[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(aug[i][c]))
            aug[r], aug[i0] = aug[i0], aug[r]
            if aug[r][c] < 0:
                aug[r] = [-x for x in aug[r]]
            done = True
            for i in range(r + 1, n):
                if aug[i][c]:
                    q = aug[i][c] // aug[r][c]
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[r])]
                    if aug[i][c]:
                        done = False
            if done:
                break
        if r < n and aug[r][c] != 0:
            r += 1
            if r == n:
                break
    return hnf([row[m:] for row in aug[r:]])


def saturate(rows: Sequence[Sequence[int]], ambient: int) -> List[List[int]]:
    """HNF basis of the saturation (Q-span intersect Z^ambient) of the row lattice."""
    qrows = qmat(rows)
    if not qrows or not any(any(r) for r in qrows):
        return []
    ker = kernel_basis(qrows)
    if not ker:
        return hnf([[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)])
    kint = [primitive_vector(v) for v in ker]
    return integer_kernel(kint)


def complement_basis(rows: Sequence[Sequence[int]], ambient: int) -> List[List[int]]:
    """Integer vectors completing a *saturated* row lattice to a basis of Z^ambient.

    Raises ValueError when the lattice is not saturated (no complement exists).
    """
    h = hnf(rows)
    if h and not is_saturated(h):
        raise ValueError("lattice is not a direct factor")
    chosen: List[List[int]] = [list(r) for r in h]
    out: List[List[int]] = []
    for j in range(ambient):
        e = [1 if k == j else 0 for k in range(ambient)]
        if not in_row_span(qmat(chosen), qmat([e])[0]):
            chosen.append(e)
            out.append(e)
    full = hnf(chosen)
    if len(full) != ambient or not is_saturated(full):
        raise ValueError("failed to complete to a basis")
    return out


# ---------------------------------------------------------------------------
# the real quadratic field Q(sqrt 2), used for the dense value-group model


class QSqrt2:
    """Exact element a + b*sqrt(2) with rational a, b; totally ordered."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Q(a)
        self.b = Q(b)

    # -- arithmetic
    def __add__(self, other):
        other = _coerce(other)
        return QSqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        return QSqrt2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    # -- order
    def sign(self) -> int:
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        s = a * a - 2 * b * b  # sign of (a - b*sqrt2)*(a + b*sqrt2)
        if a > 0:  # b < 0
            return 1 if s > 0 else -1
        return 1 if s < 0 else -1  # a < 0 < b

    def __eq__(self, other):
        other = _coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - _coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - _coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - _coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - _coerce(other)).sign() >= 0

    def floor(self) -> int:
        lo = math.floor(float(self.a) + float(self.b) * math.sqrt(2)) - 2
        while not (QSqrt2(lo + 1) > self):
            lo += 1
        while QSqrt2(lo) > self:
            lo -= 1
        return lo

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt2"


def _coerce(x) -> QSqrt2:
    if isinstance(x, QSqrt2):
        return x
    return QSqrt2(Q(x))
