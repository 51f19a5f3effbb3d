"""Root generating systems: a Kac-Moody matrix with a cocharacter lattice Y,
simple roots in X = Y* and simple coroots in Y, plus the standard extension
constructions and morphism classification.

Lattices are handled through a fixed basis: an element of Y is an integer
coordinate vector, an element of X is the row of its values on that basis.
All rank/torsion questions reduce to Hermite/Smith normal forms.
"""

from __future__ import annotations

import json
from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .cartan import KacMoodyMatrix, validate_matrix
from .intlinalg import (
    complement_basis,
    hnf,
    in_row_span,
    is_saturated,
    lattice_rank,
    qmat,
    rank,
    saturate,
    snf_diagonal,
    solve_in_span,
)


class NotAMorphism(ValueError):
    pass


class PreconditionFlagsFailed(ValueError):
    pass


class RootDatum:
    """Quadruple (A, Y, roots, coroots) with <root_j, coroot_i> = a[i][j]."""

    def __init__(
        self,
        matrix: KacMoodyMatrix,
        y_rank: int,
        alpha_bar: Sequence[Sequence[int]],
        alpha_check: Sequence[Sequence[int]],
        name: str = "",
    ):
        self.matrix = matrix
        self.y_rank = int(y_rank)
        self.alpha_bar = [list(map(int, r)) for r in alpha_bar]
        self.alpha_check = [list(map(int, r)) for r in alpha_check]
        self.name = name
        n = matrix.n
        if len(self.alpha_bar) != n or len(self.alpha_check) != n:
            raise ValueError("need one root and one coroot per index")
        for v in self.alpha_bar + self.alpha_check:
            if len(v) != self.y_rank:
                raise ValueError("coordinate length must match the rank of Y")
        for i in range(n):
            for j in range(n):
                if self.pair(j, i) != matrix[i, j]:
                    raise ValueError(
                        f"<root_{j}, coroot_{i}> = {self.pair(j, i)} != a[{i}][{j}]"
                    )

    # -- basic accessors
    @property
    def index_set(self) -> range:
        return range(self.matrix.n)

    def pair(self, j: int, i: int) -> int:
        """<alpha_bar_j, alpha_check_i>."""
        return sum(b * c for b, c in zip(self.alpha_bar[j], self.alpha_check[i]))

    def eval_root(self, root_coords: Sequence[int], y: Sequence) -> object:
        """Value of sum_j n_j alpha_bar_j on y in Y (or Y tensor anything)."""
        total = 0
        for nj, bar in zip(root_coords, self.alpha_bar):
            if nj:
                total = total + nj * sum(b * yk for b, yk in zip(bar, y))
        return total

    # -- flags
    def is_libre(self) -> bool:
        """Simple roots linearly independent in X."""
        return rank(qmat(self.alpha_bar)) == self.matrix.n

    def is_adjoint(self) -> bool:
        """Simple roots generate X (the dual lattice)."""
        return is_saturated(self.alpha_bar) and lattice_rank(self.alpha_bar) == self.y_rank

    def is_colibre(self) -> bool:
        """Simple coroots linearly independent in Y."""
        return rank(qmat(self.alpha_check)) == self.matrix.n

    def is_coadjoint(self) -> bool:
        """Simple coroots generate Y."""
        return (
            lattice_rank(self.alpha_check) == self.y_rank
            and is_saturated(self.alpha_check)
        )

    def is_sans_cotorsion(self) -> bool:
        """Y / (coroot lattice) torsion-free."""
        return is_saturated(self.alpha_check)

    def flags(self) -> Dict[str, bool]:
        return {
            "libre": self.is_libre(),
            "adjoint": self.is_adjoint(),
            "colibre": self.is_colibre(),
            "coadjoint": self.is_coadjoint(),
            "sans_cotorsion": self.is_sans_cotorsion(),
        }

    # -- serialization
    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix.entries],
            "Y_rank": self.y_rank,
            "alpha_bar_coords": [list(r) for r in self.alpha_bar],
            "alpha_check_coords": [list(r) for r in self.alpha_check],
            "name": self.name,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RootDatum":
        return cls(
            validate_matrix(doc["matrix"]),
            doc["Y_rank"],
            doc["alpha_bar_coords"],
            doc["alpha_check_coords"],
            doc.get("name", ""),
        )

    @classmethod
    def load(cls, path: str) -> "RootDatum":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self):
        tag = self.name or f"rank{self.matrix.n}"
        return f"RootDatum({tag}, dim={self.y_rank})"


class SgrMorphism:
    """A linear map Y -> Y' (integer matrix, rows = images of basis vectors)
    together with an index injection, compatible with roots and coroots."""

    def __init__(
        self,
        source: RootDatum,
        target: RootDatum,
        lattice_map: Sequence[Sequence[int]],
        index_injection: Optional[Sequence[int]] = None,
    ):
        self.source = source
        self.target = target
        self.map_rows = [list(map(int, r)) for r in lattice_map]
        self.index_injection = list(index_injection or range(source.matrix.n))
        if len(self.map_rows) != source.y_rank or any(
            len(r) != target.y_rank for r in self.map_rows
        ):
            raise NotAMorphism("lattice map has wrong shape")
        if len(set(self.index_injection)) != source.matrix.n:
            raise NotAMorphism("index map must be injective")
        for i, i2 in enumerate(self.index_injection):
            if self.apply(source.alpha_check[i]) != target.alpha_check[i2]:
                raise NotAMorphism(f"coroot {i} is not mapped to coroot {i2}")
            for y in range(source.y_rank):
                basis = [1 if k == y else 0 for k in range(source.y_rank)]
                lhs = sum(
                    b * v for b, v in zip(target.alpha_bar[i2], self.apply(basis))
                )
                rhs = source.alpha_bar[i][y]
                if lhs != rhs:
                    raise NotAMorphism(f"root {i2} does not pull back to root {i}")

    def apply(self, y: Sequence[int]) -> List[int]:
        out = [0] * self.target.y_rank
        for c, row in zip(y, self.map_rows):
            if c:
                for k, x in enumerate(row):
                    out[k] += c * x
        return out

    # -- classification helpers
    def _is_injective(self) -> bool:
        return rank(qmat(self.map_rows)) == self.source.y_rank

    def _is_surjective(self) -> bool:
        divs = snf_diagonal(self.map_rows)
        return len(divs) == self.target.y_rank and all(d == 1 for d in divs)

    def _cokernel_torsion_free(self) -> bool:
        return is_saturated(self.map_rows)

    def _dual_injective(self) -> bool:
        # dual map X' -> X is transpose; injective iff the map has full row rank
        # on the target side, i.e. rank = dim Y'.
        return rank(qmat(self.map_rows)) == self.target.y_rank

    def classify(self) -> Set[str]:
        """Kinds per the overlapping taxonomy of SGR morphisms."""
        kinds: Set[str] = set()
        same_index = (
            self.source.matrix.n == self.target.matrix.n
            and self.index_injection == list(range(self.source.matrix.n))
        )
        if same_index:
            kinds.add("commutative")
        inj = self._is_injective()
        if same_index and self._is_surjective():
            kinds.add("central-torique")
        if same_index and inj and self.source.y_rank == self.target.y_rank:
            kinds.add("central-finie")
        if same_index and self._dual_injective():
            kinds.add("central")
        if inj and self._cokernel_torsion_free():
            kinds.add("sous-SGR")
            if same_index:
                kinds.add("semi-directe")
                if self._is_directe():
                    kinds.add("directe")
        if not kinds:
            kinds.add("none")
        return kinds

    def _is_directe(self) -> bool:
        """Does phi(Y) admit a complement inside the common kernel of the
        target's simple roots?  That holds iff the image is a direct factor
        and the root kernel surjects onto the quotient."""
        tgt = self.target
        img = hnf(self.map_rows)
        if img and not is_saturated(img):
            return False
        kernel_rows = _integer_kernel_of_functionals(tgt.alpha_bar)
        probe = hnf(img + kernel_rows)
        return len(probe) == tgt.y_rank and is_saturated(probe)


def is_split_central_toric(m: SgrMorphism) -> bool:
    """For a central-toric extension: Ker(phi) admits a complement containing
    the source's coroot lattice.  The only candidate complement is the
    saturation of Q^vee plus a complement of the saturated kernel+coroot span,
    so the test reduces to lattice identities."""
    if "central-torique" not in m.classify():
        return False
    ker = _integer_kernel(m.map_rows)
    if not ker:
        return True
    cor = hnf(m.source.alpha_check)
    if lattice_rank(ker + cor) != len(ker) + len(cor):
        return False
    sat_cor = saturate(cor, m.source.y_rank)
    joint = hnf(sat_cor + ker)
    return hnf(saturate(ker + cor, m.source.y_rank)) == joint


def _integer_kernel(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    from .intlinalg import kernel_basis, primitive_vector

    ker = kernel_basis(qmat(rows))
    return hnf([primitive_vector(v) for v in ker]) if ker else []


def _integer_kernel_of_functionals(functionals: Sequence[Sequence[int]]) -> List[List[int]]:
    from .intlinalg import kernel_basis, primitive_vector

    mat = qmat(functionals)
    ker = kernel_basis(mat) if mat else []
    return hnf([primitive_vector(v) for v in ker]) if ker else []


# ---------------------------------------------------------------------------
# constructions


def build_simply_connected(a: KacMoodyMatrix, name: str = "") -> RootDatum:
    """Y free on the coroots; roots given by the matrix columns."""
    n = a.n
    alpha_check = [[1 if k == i else 0 for k in range(n)] for i in range(n)]
    alpha_bar = [[a[i, j] for i in range(n)] for j in range(n)]
    return RootDatum(a, n, alpha_bar, alpha_check, name or "simply-connected")


def extend_sc(s: RootDatum) -> Tuple[RootDatum, SgrMorphism]:
    """Central-toric extension with free coroots and torsion-free cokernel:
    Y^sc = Y + Z^I, coroot_i += u_i, roots extended by zero."""
    n, d = s.matrix.n, s.y_rank
    y_rank = d + n
    alpha_bar = [bar + [0] * n for bar in s.alpha_bar]
    alpha_check = [
        chk + [1 if k == i else 0 for k in range(n)]
        for i, chk in enumerate(s.alpha_check)
    ]
    ext = RootDatum(s.matrix, y_rank, alpha_bar, alpha_check, (s.name or "S") + "^sc")
    proj = [[1 if i == j else 0 for j in range(d)] for i in range(d)] + [
        [0] * d for _ in range(n)
    ]
    return ext, SgrMorphism(ext, s, proj)


def extend_l(s: RootDatum) -> Tuple[RootDatum, SgrMorphism]:
    """Semi-direct extension with independent roots.

    A duplicator coordinate is added only for indices whose root is
    Q-dependent on the ones already kept, so an already-free datum is
    returned unchanged and the loop-model example stays 2-dimensional.
    """
    n, d = s.matrix.n, s.y_rank
    kept: List[List[Q]] = []
    new_for: List[int] = []
    for i in range(n):
        v = qmat([s.alpha_bar[i]])[0]
        if in_row_span(kept, v):
            new_for.append(i)
        else:
            kept.append(v)
    extra = len(new_for)
    y_rank = d + extra
    alpha_bar = []
    for i in range(n):
        tail = [0] * extra
        if i in new_for:
            tail[new_for.index(i)] = 1
        alpha_bar.append(s.alpha_bar[i] + tail)
    alpha_check = [chk + [0] * extra for chk in s.alpha_check]
    ext = RootDatum(s.matrix, y_rank, alpha_bar, alpha_check, (s.name or "S") + "^l")
    incl = [[1 if i == j else 0 for j in range(y_rank)] for i in range(d)]
    return ext, SgrMorphism(s, ext, incl)


def extend_mat(s: RootDatum) -> Tuple[RootDatum, SgrMorphism]:
    """The free+cofree+torsion-free sub-datum of dimension 2r - rank(A).

    Requires the input to be libre, colibre and sans-cotorsion; chooses the
    supplementary vectors greedily from a complement of the coroot lattice.
    """
    if not (s.is_libre() and s.is_colibre() and s.is_sans_cotorsion()):
        raise PreconditionFlagsFailed("extend_mat needs libre, colibre, sans-cotorsion")
    r = s.matrix.n
    srank = s.matrix.rank()
    psi = lambda y: [sum(b * yk for b, yk in zip(s.alpha_bar[i], y)) for i in range(r)]
    cor = hnf(s.alpha_check)
    comp = complement_basis(cor, s.y_rank)
    psi_q = [qmat([psi(c)])[0] for c in s.alpha_check]
    chosen: List[List[int]] = []
    span = [v[:] for v in psi_q]
    for cand in comp:
        img = qmat([psi(cand)])[0]
        if not in_row_span(span, img):
            chosen.append(cand)
            span.append(img)
        if len(chosen) == r - srank:
            break
    if len(chosen) != r - srank:
        raise PreconditionFlagsFailed("could not find a supplementary family")
    basis = [list(c) for c in s.alpha_check] + chosen  # basis of Y^mat inside Y
    y_rank = len(basis)
    # express roots and coroots in the new basis
    alpha_bar = [
        [sum(b * yk for b, yk in zip(s.alpha_bar[i], vec)) for vec in basis]
        for i in range(r)
    ]
    alpha_check = [[1 if k == i else 0 for k in range(y_rank)] for i in range(r)]
    sub = RootDatum(s.matrix, y_rank, alpha_bar, alpha_check, (s.name or "S") + "^mat")
    incl = [list(vec) for vec in basis]
    return sub, SgrMorphism(sub, s, incl)


def adjoint_quotient(s: RootDatum) -> Tuple[RootDatum, SgrMorphism]:
    """The adjoint datum on the dual of the image root lattice; the canonical
    map from s is always a central extension."""
    qbar = hnf(s.alpha_bar)
    k = len(qbar)
    # Y^ad = dual of the lattice spanned by the roots; the map sends y to
    # the functional (q |-> q(y)) expressed on the basis qbar.
    lattice_map = [[sum(q * y for q, y in zip(row, basis)) for row in qbar] for basis in _unit_rows(s.y_rank)]
    sat_rows = hnf(lattice_map)
    alpha_check = [
        [sum(q * y for q, y in zip(row, s.alpha_check[i])) for row in qbar]
        for i in range(s.matrix.n)
    ]
    # roots in the new X = (Y^ad)* : alpha_bar_i^{ad}(bar*(y)) must equal
    # alpha_bar_i(y); on the basis dual to qbar that is the coefficient vector
    # of alpha_bar_i over qbar.
    alpha_bar = []
    for i in range(s.matrix.n):
        coeffs = solve_in_span(qmat(qbar), qmat([s.alpha_bar[i]])[0])
        if coeffs is None or any(c.denominator != 1 for c in coeffs):
            raise NotAMorphism("root does not lie in the integral row span")
        alpha_bar.append([int(c) for c in coeffs])
    ad = RootDatum(s.matrix, k, alpha_bar, alpha_check, (s.name or "S") + "^ad")
    return ad, SgrMorphism(s, ad, lattice_map)


def _unit_rows(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def classify_morphism(m: SgrMorphism) -> Set[str]:
    return m.classify()


def is_isomorphism(a: RootDatum, b: RootDatum, lattice_map: Sequence[Sequence[int]]) -> bool:
    """Check that an explicit integer map Y_a -> Y_b is an isomorphism of data."""
    if a.matrix != b.matrix or a.y_rank != b.y_rank:
        return False
    divs = snf_diagonal(lattice_map)
    if len(divs) != a.y_rank or any(d != 1 for d in divs):
        return False
    try:
        SgrMorphism(a, b, lattice_map)
    except NotAMorphism:
        return False
    return True
