"""Root lattice combinatorics: simple reflections, real-root orbits, closed
and prenilpotent sets, and membership in the Tits cone.

Roots live in the lattice Q spanned by the simple roots; a root is an integer
coordinate tuple over the index set.  All searches are truncated by a global
height bound carried by every RootSet, and operations refuse to mix bounds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .cartan import KacMoodyMatrix
from .intlinalg import mat_mul, qmat

Coords = Tuple[int, ...]


class HeightBoundMismatch(ValueError):
    pass


class NotPrenilpotent(ValueError):
    pass


def height(coords: Sequence[int]) -> int:
    return sum(coords)


def is_positive(coords: Sequence[int]) -> bool:
    return all(c >= 0 for c in coords) and any(c > 0 for c in coords)


def is_negative(coords: Sequence[int]) -> bool:
    return all(c <= 0 for c in coords) and any(c < 0 for c in coords)


def reflect_root(a: KacMoodyMatrix, i: int, coords: Sequence[int]) -> Coords:
    """s_i on Q: alpha -> alpha - <alpha, coroot_i> alpha_i."""
    pairing = sum(coords[j] * a[i, j] for j in range(a.n))
    out = list(coords)
    out[i] -= pairing
    return tuple(out)


def reflection_matrix(a: KacMoodyMatrix, i: int) -> List[List[Q]]:
    """Matrix of s_i acting on Q in the simple-root basis (columns = images)."""
    n = a.n
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        cols.append(reflect_root(a, i, e))
    return [[Q(cols[j][k]) for j in range(n)] for k in range(n)]


@dataclass(frozen=True)
class RootVector:
    coords: Coords
    classification: str  # real / imaginary / not-a-root / unknown-beyond-bound
    witness_word: Optional[Tuple[int, ...]] = None  # w with root = w(alpha_j)
    witness_simple: Optional[int] = None
    multiplicity: Optional[int] = None

    @property
    def height(self) -> int:
        return height(self.coords)

    def __repr__(self):
        return f"RootVector({self.coords}, {self.classification})"


class WeylElement:
    """A Weyl word together with its action matrix on Q; equality is equality
    of matrices (the action on Q is faithful by construction)."""

    def __init__(self, a: KacMoodyMatrix, word: Sequence[int] = ()):
        self.a = a
        self.word = tuple(word)
        mat = [[Q(1) if i == j else Q(0) for j in range(a.n)] for i in range(a.n)]
        for i in reversed(self.word):  # apply rightmost letter first
            mat = mat_mul(reflection_matrix(a, i), mat)
        self.matrix = mat

    def apply(self, coords: Sequence[int]) -> Coords:
        out = [sum(self.matrix[k][j] * coords[j] for j in range(self.a.n)) for k in range(self.a.n)]
        assert all(x.denominator == 1 for x in out)
        return tuple(int(x) for x in out)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.a, self.word + other.word)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.matrix))

    def __repr__(self):
        return f"WeylElement({list(self.word)})"


@dataclass
class RootSet:
    matrix: KacMoodyMatrix
    height_bound: int
    roots: Dict[Coords, RootVector] = field(default_factory=dict)
    closed_flag: Optional[bool] = None

    def __contains__(self, coords) -> bool:
        return tuple(coords) in self.roots

    def __iter__(self):
        return iter(sorted(self.roots))

    def __len__(self):
        return len(self.roots)

    def positive(self) -> List[Coords]:
        return sorted(c for c in self.roots if is_positive(c))

    def check_bound(self, other: "RootSet"):
        if self.height_bound != other.height_bound:
            raise HeightBoundMismatch(
                f"bounds differ: {self.height_bound} vs {other.height_bound}"
            )


def simple_reflection(a: KacMoodyMatrix, i: int, coords: Sequence[int]) -> Coords:
    """Reflection on the root lattice; on X or Y use `reflect_dual` / `reflect_y`."""
    return reflect_root(a, i, coords)


def reflect_y(datum, i: int, y: Sequence[int]) -> List[int]:
    """s_i on Y: y -> y - <alpha_bar_i, y> coroot_i."""
    val = sum(b * yk for b, yk in zip(datum.alpha_bar[i], y))
    return [yk - val * c for yk, c in zip(y, datum.alpha_check[i])]


def reflect_x(datum, i: int, x: Sequence[int]) -> List[int]:
    """s_i on X = Y*: x -> x - x(coroot_i) alpha_bar_i."""
    val = sum(xk * c for xk, c in zip(x, datum.alpha_check[i]))
    return [xk - val * b for xk, b in zip(x, datum.alpha_bar[i])]


def real_roots(a: KacMoodyMatrix, n_bound: int) -> RootSet:
    """All real roots of height magnitude <= n_bound, by breadth-first orbit
    closure of the simples under simple reflections; each carries a witness."""
    if n_bound < 1:
        raise ValueError("bound must be >= 1")
    found: Dict[Coords, RootVector] = {}
    queue: deque = deque()
    for j in range(a.n):
        e = [0] * a.n
        e[j] = 1
        rv = RootVector(tuple(e), "real", (), j, 1)
        found[rv.coords] = rv
        queue.append(rv)
        neg = RootVector(tuple(-x for x in e), "real", (), j, 1)
    # BFS with deterministic expansion order (lexicographic tie-break comes
    # from sorting the queue seeds; reflections applied in index order)
    while queue:
        rv = queue.popleft()
        for i in range(a.n):
            img = reflect_root(a, i, rv.coords)
            if abs(height(img)) > n_bound or img in found:
                continue
            new = RootVector(img, "real", (i,) + rv.witness_word, rv.witness_simple, 1)
            found[img] = new
            queue.append(new)
    # orbit of the simples is symmetric under negation only when -alpha_i is
    # reachable; add negatives explicitly (w = longest-in-string trick not
    # needed: -alpha = s_alpha(alpha), realized through the witness of alpha)
    out: Dict[Coords, RootVector] = {}
    for coords, rv in found.items():
        out[coords] = rv
    for coords, rv in list(found.items()):
        neg = tuple(-x for x in coords)
        if neg not in out:
            # s_i(alpha_i) = -alpha_i: witness for -w(alpha_j) is w s_j
            word = rv.witness_word + (rv.witness_simple,)
            out[neg] = RootVector(neg, "real", word, rv.witness_simple, 1)
    rs = RootSet(a, n_bound, out)
    return rs


def verify_witness(a: KacMoodyMatrix, rv: RootVector) -> bool:
    w = WeylElement(a, rv.witness_word or ())
    e = [0] * a.n
    e[rv.witness_simple] = 1
    return w.apply(e) == rv.coords


def all_roots(a: KacMoodyMatrix, n_bound: int, algebra) -> RootSet:
    """Roots as nonzero weight spaces of a height-truncated algebra, with
    multiplicities, cross-classified against the real-root orbit."""
    if algebra.height_bound < n_bound:
        raise HeightBoundMismatch("algebra built below the requested bound")
    reals = real_roots(a, n_bound)
    out: Dict[Coords, RootVector] = {}
    for coords in algebra.positive_weights(n_bound):
        mult = algebra.dim(coords)
        if mult == 0:
            continue
        for sgn in (1, -1):
            c = tuple(sgn * x for x in coords)
            if c in reals.roots:
                rv = reals.roots[c]
                out[c] = RootVector(c, "real", rv.witness_word, rv.witness_simple, mult)
            else:
                out[c] = RootVector(c, "imaginary", None, None, mult)
    return RootSet(a, n_bound, out)


# ---------------------------------------------------------------------------
# closed and prenilpotent sets


def _nonneg_combinations(alpha: Coords, beta: Coords, bound: int):
    """(p, q, p*alpha + q*beta) over p, q >= 1 within the height bound."""
    n = len(alpha)
    for p in range(1, bound + 1):
        for q in range(1, bound + 1):
            combo = tuple(p * alpha[k] + q * beta[k] for k in range(n))
            if abs(height(combo)) <= bound:
                yield p, q, combo


def is_closed(psi: Iterable[Coords], delta: RootSet) -> bool:
    """Exhaustive pair scan within the truncation of the ambient root set."""
    members = {tuple(c) for c in psi}
    for alpha in members:
        for beta in members:
            for _, _, combo in _nonneg_combinations(alpha, beta, delta.height_bound):
                if (combo in delta.roots or not any(combo)) and any(combo):
                    if combo not in members:
                        return False
    return True


def is_ideal(psi_prime: Iterable[Coords], psi: Iterable[Coords], delta: RootSet) -> bool:
    sub = {tuple(c) for c in psi_prime}
    members = {tuple(c) for c in psi}
    if not sub <= members:
        return False
    for alpha in sub:
        for beta in members:
            for _, _, combo in _nonneg_combinations(alpha, beta, delta.height_bound):
                if combo in delta.roots and combo not in sub:
                    return False
    return True


@dataclass
class PrenilpotenceResult:
    status: str  # "true" / "false" / "unknown"
    witness_pos: Optional[Tuple[int, ...]] = None
    witness_neg: Optional[Tuple[int, ...]] = None
    obstruction: Optional[str] = None


def is_prenilpotent(
    a: KacMoodyMatrix,
    alpha: Coords,
    beta: Coords,
    search_depth: int = 8,
) -> PrenilpotenceResult:
    """Three-valued bounded decision with explicit witnesses or obstruction.

    The only implemented obstruction certificate: some p*alpha + q*beta with
    p, q >= 1 equals a nonzero nonnegative vector fixed by every simple
    reflection (possible in affine type), which no Weyl image can make
    negative.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha == tuple(-x for x in beta):
        return PrenilpotenceResult("false", obstruction="opposite roots")
    null = a.positive_null_vector()
    if null is not None:
        # is some p*alpha + q*beta (p, q > 0) a nonzero multiple of the
        # invariant vector?  solve p*alpha + q*beta - t*null = 0
        rows = [[Q(alpha[k]), Q(beta[k]), -null[k]] for k in range(a.n)]
        for p, q, t in _q_kernel(rows):
            if p * q > 0 and t != 0:
                return PrenilpotenceResult(
                    "false", obstruction="invariant positive combination"
                )
    # bounded BFS over Weyl words for both witnesses
    wit_pos = _search_sign(a, alpha, beta, +1, search_depth)
    if wit_pos is None:
        return PrenilpotenceResult("unknown")
    wit_neg = _search_sign(a, alpha, beta, -1, search_depth)
    if wit_neg is None:
        return PrenilpotenceResult("unknown")
    return PrenilpotenceResult("true", wit_pos, wit_neg)


def _q_kernel(rows):
    from .intlinalg import kernel_basis

    if not rows:
        return []
    return kernel_basis(rows)


def _search_sign(a, alpha, beta, sign, depth) -> Optional[Tuple[int, ...]]:
    want = is_positive if sign > 0 else is_negative
    start = (alpha, beta)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (pa, pb), word = queue.popleft()
        if want(pa) and want(pb):
            return word
        if len(word) >= depth:
            continue
        for i in range(a.n):
            img = (reflect_root(a, i, pa), reflect_root(a, i, pb))
            if img not in seen:
                seen.add(img)
                queue.append((img, (i,) + word))
    return None


def interval(
    a: KacMoodyMatrix,
    alpha: Coords,
    beta: Coords,
    reals: RootSet,
    assume_prenilpotent: bool = False,
) -> List[Coords]:
    """[alpha, beta] = {p alpha + q beta real, p,q >= 0} ordered: alpha first,
    interior by increasing p/q, beta last."""
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha == beta or alpha == tuple(-x for x in beta):
        raise NotPrenilpotent("pair must be two non-collinear roots")
    if not assume_prenilpotent:
        res = is_prenilpotent(a, alpha, beta)
        if res.status == "false":
            raise NotPrenilpotent("pair has an obstruction")
        if res.status == "unknown":
            raise NotPrenilpotent("prenilpotence not verified within depth")
    interior = []
    for p, q, combo in _nonneg_combinations(alpha, beta, reals.height_bound):
        if combo in reals.roots:
            interior.append((Q(p, q), combo))
    interior.sort(key=lambda t: (t[0], t[1]))
    return [alpha] + [c for _, c in interior] + [beta]


# ---------------------------------------------------------------------------
# Tits cone


@dataclass
class TitsConeResult:
    status: str  # inside / inside-interior / outside / unknown
    witness_word: Optional[Tuple[int, ...]] = None
    dominant: Optional[Tuple[Q, ...]] = None
    steps: int = 0


def tits_cone_membership(
    a: KacMoodyMatrix, v: Sequence, iteration_cap: int = 200
) -> TitsConeResult:
    """Dominance descent in simple-root-value coordinates.

    v is given by its tuple of values (alpha_i(v))_i.  Descent reflects at a
    negative coordinate; reaching an all-nonnegative point certifies "inside"
    (interior iff the stabilizer of the dominant point is finite, an exact
    principal-minor test on the vanishing set).  Outside is certified only by
    a reflection-invariant nonnegative form being negative (affine families).
    """
    vals = [Q(x) if not hasattr(x, "sign") else x for x in v]
    null = a.positive_null_vector()
    if null is not None:
        inv = sum(c * x for c, x in zip(null, vals))
        if _neg(inv):
            return TitsConeResult("outside")
    word: List[int] = []
    cur = list(vals)
    for step in range(iteration_cap):
        neg_idx = next((i for i in range(a.n) if _neg(cur[i])), None)
        if neg_idx is None:
            vanishing = [i for i in range(a.n) if _zero(cur[i])]
            finite = (
                a.submatrix(vanishing).is_finite_type() if vanishing else True
            )
            status = "inside-interior" if finite else "inside"
            return TitsConeResult(status, tuple(word), tuple(cur), step)
        # s_i in value coordinates: (s_i v)_j = v_j - a[i][j] v_i
        vi = cur[neg_idx]
        cur = [cur[j] - a[neg_idx, j] * vi for j in range(a.n)]
        word.append(neg_idx)
    return TitsConeResult("unknown", steps=iteration_cap)


def _neg(x) -> bool:
    return (x.sign() < 0) if hasattr(x, "sign") else (x < 0)


def _zero(x) -> bool:
    return (x.sign() == 0) if hasattr(x, "sign") else (x == 0)
