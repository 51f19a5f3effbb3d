"""Height-truncated graded Lie algebra from the defining presentation.

The positive part is generated by the e_i inside the word algebra; weight
spaces are computed degree by degree as spans of left-normed brackets.  The
negative part is the mirror image (words in the f_i), the zero part is
Y tensor Q.  Mixed brackets go through the adjoint action of letter
operators, which is enough because the adjoint representation of the
enveloping algebra is multiplicative on words.
"""

from __future__ import annotations

import math
from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Tuple

from .cartan import KacMoodyMatrix
from .intlinalg import hnf, integer_kernel, kernel_basis, qmat, solve_in_span
from .rootdata import RootDatum
from .weyl import RootVector, real_roots, HeightBoundMismatch
from .wordalg import (
    Vec,
    Weight,
    Word,
    WordEngine,
    weight_height,
    weight_nonneg,
    weight_sub,
)


class WeightOutOfBound(ValueError):
    pass


class NotRealRoot(ValueError):
    pass


class IntegralFormUnavailable(ValueError):
    pass


class AlgElement:
    """General element: positive word components, negative word components
    (stored by the positive weight of their mirror) and an h-part over Y."""

    __slots__ = ("pos", "neg", "h")

    def __init__(self, pos=None, neg=None, h=None, y_rank=0):
        self.pos: Dict[Weight, Vec] = {k: dict(v) for k, v in (pos or {}).items() if v}
        self.neg: Dict[Weight, Vec] = {k: dict(v) for k, v in (neg or {}).items() if v}
        self.h: List[Q] = list(h) if h is not None else [Q(0)] * y_rank

    def is_zero(self) -> bool:
        return not self.pos and not self.neg and not any(self.h)

    def copy(self) -> "AlgElement":
        return AlgElement(self.pos, self.neg, list(self.h))

    def __add__(self, other: "AlgElement") -> "AlgElement":
        out = self.copy()
        for mu, vec in other.pos.items():
            tgt = out.pos.setdefault(mu, {})
            for w, c in vec.items():
                tgt[w] = tgt.get(w, Q(0)) + c
                if tgt[w] == 0:
                    del tgt[w]
            if not tgt:
                del out.pos[mu]
        for mu, vec in other.neg.items():
            tgt = out.neg.setdefault(mu, {})
            for w, c in vec.items():
                tgt[w] = tgt.get(w, Q(0)) + c
                if tgt[w] == 0:
                    del tgt[w]
            if not tgt:
                del out.neg[mu]
        if len(other.h) > len(out.h):
            out.h = out.h + [Q(0)] * (len(other.h) - len(out.h))
        for k, c in enumerate(other.h):
            out.h[k] += c
        return out

    def scale(self, c) -> "AlgElement":
        c = Q(c)
        return AlgElement(
            {mu: {w: x * c for w, x in vec.items()} for mu, vec in self.pos.items()},
            {mu: {w: x * c for w, x in vec.items()} for mu, vec in self.neg.items()},
            [x * c for x in self.h],
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return (
            isinstance(other, AlgElement)
            and self.pos == other.pos
            and self.neg == other.neg
            and _padded(self.h, other.h)
        )

    def __repr__(self):
        return f"AlgElement(pos={self.pos}, neg={self.neg}, h={self.h})"


def _padded(a, b):
    n = max(len(a), len(b))
    pa = list(a) + [Q(0)] * (n - len(a))
    pb = list(b) + [Q(0)] * (n - len(b))
    return pa == pb


class LieElement:
    """An element of a single weight space, in basis coordinates."""

    __slots__ = ("algebra", "key", "coords")

    def __init__(self, algebra, key, coords):
        self.algebra = algebra
        self.key = key  # ("pos", mu) | ("neg", mu) | ("h",)
        self.coords = [Q(c) for c in coords]

    def __repr__(self):
        return f"LieElement({self.key}, {self.coords})"

    def is_zero(self):
        return not any(self.coords)

    def __add__(self, other):
        assert self.key == other.key
        return LieElement(self.algebra, self.key, [a + b for a, b in zip(self.coords, other.coords)])

    def scale(self, c):
        return LieElement(self.algebra, self.key, [Q(c) * x for x in self.coords])

    def __eq__(self, other):
        return isinstance(other, LieElement) and self.key == other.key and self.coords == other.coords


class GradedLieAlgebra:
    """Weight-space bases and brackets of the presented algebra, truncated at
    a height bound, over exact rationals with integral-form tracking."""

    def __init__(self, datum: RootDatum, height_bound: int):
        if height_bound < 1:
            raise ValueError("height bound must be >= 1")
        self.datum = datum
        self.a: KacMoodyMatrix = datum.matrix
        self.n = self.a.n
        self.height_bound = height_bound
        self.engine = WordEngine.get(self.a)
        self._basis: Dict[Weight, List[Vec]] = {}
        self._zbasis: Dict[Weight, List[Vec]] = {}

    # ------------------------------------------------------------------
    # weight spaces of the positive part

    def positive_weights(self, bound: Optional[int] = None) -> List[Weight]:
        bound = self.height_bound if bound is None else bound
        out = []

        def rec(prefix, remaining, pos):
            if pos == self.n:
                if any(prefix):
                    out.append(tuple(prefix))
                return
            for k in range(remaining + 1):
                rec(prefix + [k], remaining - k, pos + 1)

        rec([], bound, 0)
        return sorted(out, key=lambda m: (weight_height(m), m))

    def basis(self, mu: Weight) -> List[Vec]:
        """Q-basis of the weight space, as reduced word vectors (greedy
        lexicographically-first independent left-normed brackets)."""
        mu = tuple(mu)
        if mu in self._basis:
            return self._basis[mu]
        if not weight_nonneg(mu) or not any(mu):
            return []
        if weight_height(mu) > self.height_bound:
            raise WeightOutOfBound(f"{mu} beyond height bound {self.height_bound}")
        if weight_height(mu) == 1:
            i = mu.index(1)
            self._basis[mu] = [self.engine.reduce(mu, {(i,): Q(1)})]
            return self._basis[mu]
        words = self.engine.basis_words(mu)
        idx = {w: k for k, w in enumerate(words)}
        rows: List[List[Q]] = []
        chosen: List[Vec] = []
        for i in range(self.n):
            if mu[i] == 0:
                continue
            sub = list(mu)
            sub[i] -= 1
            for b in self.basis(tuple(sub)):
                cand = self._word_commutator(b, i, mu)
                if not cand:
                    continue
                row = [cand.get(w, Q(0)) for w in words]
                if _independent(rows, row):
                    rows.append(row)
                    chosen.append(cand)
        self._basis[mu] = chosen
        return chosen

    def _word_commutator(self, vec: Vec, i: int, mu: Weight) -> Vec:
        raw: Dict[Word, Q] = {}
        for w, c in vec.items():
            raw[w + (i,)] = raw.get(w + (i,), Q(0)) + c
            raw[(i,) + w] = raw.get((i,) + w, Q(0)) - c
        return self.engine.reduce(mu, raw)

    def dim(self, mu: Weight) -> int:
        mu = tuple(mu)
        if weight_nonneg(mu):
            return len(self.basis(mu)) if any(mu) else self.datum.y_rank
        neg = tuple(-x for x in mu)
        if weight_nonneg(neg):
            return len(self.basis(neg))
        return 0

    def integral_basis(self, mu: Weight) -> List[Vec]:
        """Z-basis of (weight space) intersect (integral form)."""
        mu = tuple(mu)
        if mu in self._zbasis:
            return self._zbasis[mu]
        span = self.basis(mu)
        if not span:
            self._zbasis[mu] = []
            return []
        words = self.engine.basis_words(mu)
        zl = self.engine.integral_lattice(mu)
        span_rows = [[v.get(w, Q(0)) for w in words] for v in span]
        ann = kernel_basis(span_rows)
        if not ann:
            conds: List[List[int]] = []
        else:
            raw = [
                [sum(z.get(w, Q(0)) * phi[k] for k, w in enumerate(words)) for z in zl]
                for phi in ann
            ]
            den = math.lcm(*[c.denominator for row in raw for c in row] or [1])
            conds = [[int(c * den) for c in row] for row in raw]
        if conds:
            coeffs = integer_kernel(conds)
        else:
            coeffs = hnf([[1 if i == j else 0 for j in range(len(zl))] for i in range(len(zl))])
        out = []
        for cvec in coeffs:
            vec: Vec = {}
            for c, z in zip(cvec, zl):
                if c:
                    for w, x in z.items():
                        vec[w] = vec.get(w, Q(0)) + c * x
                        if vec[w] == 0:
                            del vec[w]
            if vec:
                out.append(vec)
        self._zbasis[mu] = out
        return out

    # ------------------------------------------------------------------
    # element plumbing

    def element(self, key, coords) -> AlgElement:
        """Lift basis coordinates to a word/h representation."""
        if key == ("h",):
            return AlgElement(h=[Q(c) for c in coords], y_rank=self.datum.y_rank)
        kind, mu = key
        vec: Vec = {}
        for c, b in zip(coords, self.basis(tuple(mu))):
            if c:
                for w, x in b.items():
                    vec[w] = vec.get(w, Q(0)) + Q(c) * x
                    if vec[w] == 0:
                        del vec[w]
        if kind == "pos":
            return AlgElement(pos={tuple(mu): vec}, y_rank=self.datum.y_rank)
        return AlgElement(neg={tuple(mu): vec}, y_rank=self.datum.y_rank)

    def coords_of(self, el: AlgElement, key) -> List[Q]:
        if key == ("h",):
            return list(el.h)
        kind, mu = key
        mu = tuple(mu)
        vec = el.pos.get(mu, {}) if kind == "pos" else el.neg.get(mu, {})
        words = self.engine.basis_words(mu)
        rows = [[b.get(w, Q(0)) for w in words] for b in self.basis(mu)]
        target = [vec.get(w, Q(0)) for w in words]
        sol = solve_in_span(rows, target)
        if sol is None:
            raise ValueError("element does not lie in the weight space span")
        return sol

    def generator_e(self, i: int) -> AlgElement:
        mu = tuple(1 if k == i else 0 for k in range(self.n))
        return AlgElement(pos={mu: {(i,): Q(1)}}, y_rank=self.datum.y_rank)

    def generator_f(self, i: int) -> AlgElement:
        mu = tuple(1 if k == i else 0 for k in range(self.n))
        return AlgElement(neg={mu: {(i,): Q(1)}}, y_rank=self.datum.y_rank)

    def coroot(self, i: int) -> AlgElement:
        return AlgElement(h=[Q(c) for c in self.datum.alpha_check[i]], y_rank=self.datum.y_rank)

    def h_element(self, y: Sequence) -> AlgElement:
        return AlgElement(h=[Q(c) for c in y], y_rank=self.datum.y_rank)

    # ------------------------------------------------------------------
    # letter adjoints

    def _pair_weight_coroot(self, mu: Weight, j: int) -> int:
        """<weight mu, coroot_j> = sum_k mu_k a[j][k]."""
        return sum(mu[k] * self.a[j, k] for k in range(self.n))

    def ad_e(self, i: int, el: AlgElement) -> AlgElement:
        out = AlgElement(y_rank=len(el.h))
        # on the positive part: word commutator
        for mu, vec in el.pos.items():
            target = tuple(m + (1 if k == i else 0) for k, m in enumerate(mu))
            raw: Dict[Word, Q] = {}
            for w, c in vec.items():
                raw[(i,) + w] = raw.get((i,) + w, Q(0)) + c
                raw[w + (i,)] = raw.get(w + (i,), Q(0)) - c
            red = self.engine.reduce(target, raw)
            if red:
                _acc(out.pos, target, red)
        # on h: [e_i, h] = -alpha_i(h) e_i
        if any(el.h):
            val = sum(b * c for b, c in zip(self.datum.alpha_bar[i], el.h))
            if val:
                unit = tuple(1 if k == i else 0 for k in range(self.n))
                _acc(out.pos, unit, {(i,): -val})
        # on the negative part: derivation formula
        for nu, vec in el.neg.items():
            unit = tuple(1 if k == i else 0 for k in range(self.n))
            lower: Dict[Word, Q] = {}
            hpart: Dict[Word, Q] = {}
            for w, c in vec.items():
                suffix_pair = 0
                for l in range(len(w) - 1, -1, -1):
                    if w[l] == i:
                        deleted = w[:l] + w[l + 1 :]
                        if suffix_pair:
                            lower[deleted] = lower.get(deleted, Q(0)) + c * suffix_pair
                        hpart[deleted] = hpart.get(deleted, Q(0)) + c
                    suffix_pair += self.a[i, w[l]]
            if nu == unit:
                coeff = hpart.get((), Q(0))
                if coeff:
                    for k, x in enumerate(self.datum.alpha_check[i]):
                        out.h[k] += -coeff * x  # [e_i, f_i] = -coroot_i
            else:
                target = weight_sub(nu, unit)
                red_h = self.engine.reduce(target, hpart)
                if red_h:
                    raise ValueError("adjoint left the algebra: input not in g")
            target = weight_sub(nu, unit)
            if weight_nonneg(target) and any(target):
                red = self.engine.reduce(target, lower)
                if red:
                    _acc(out.neg, target, red)
        return out

    def ad_f(self, j: int, el: AlgElement) -> AlgElement:
        out = AlgElement(y_rank=len(el.h))
        for nu, vec in el.neg.items():
            target = tuple(m + (1 if k == j else 0) for k, m in enumerate(nu))
            raw: Dict[Word, Q] = {}
            for w, c in vec.items():
                raw[(j,) + w] = raw.get((j,) + w, Q(0)) + c
                raw[w + (j,)] = raw.get(w + (j,), Q(0)) - c
            red = self.engine.reduce(target, raw)
            if red:
                _acc(out.neg, target, red)
        if any(el.h):
            val = sum(b * c for b, c in zip(self.datum.alpha_bar[j], el.h))
            if val:
                unit = tuple(1 if k == j else 0 for k in range(self.n))
                _acc(out.neg, unit, {(j,): val})  # [f_j, h] = alpha_j(h) f_j
        for mu, vec in el.pos.items():
            unit = tuple(1 if k == j else 0 for k in range(self.n))
            lower: Dict[Word, Q] = {}
            hpart: Dict[Word, Q] = {}
            for w, c in vec.items():
                suffix_pair = 0
                for l in range(len(w) - 1, -1, -1):
                    if w[l] == j:
                        deleted = w[:l] + w[l + 1 :]
                        if suffix_pair:
                            lower[deleted] = lower.get(deleted, Q(0)) + c * suffix_pair
                        hpart[deleted] = hpart.get(deleted, Q(0)) + c
                    suffix_pair += self.a[j, w[l]]
            if mu == unit:
                coeff = hpart.get((), Q(0))
                if coeff:
                    for k, x in enumerate(self.datum.alpha_check[j]):
                        out.h[k] += coeff * x  # [f_j, e_j] = +coroot_j
            else:
                target = weight_sub(mu, unit)
                red_h = self.engine.reduce(target, hpart)
                if red_h:
                    raise ValueError("adjoint left the algebra: input not in g")
            target = weight_sub(mu, unit)
            if weight_nonneg(target) and any(target):
                red = self.engine.reduce(target, lower)
                if red:
                    _acc(out.pos, target, red)
        return out

    # ------------------------------------------------------------------
    # brackets

    def ad_apply(self, x: AlgElement, y: AlgElement) -> AlgElement:
        """[x, y] for x in the algebra (any representation), y arbitrary."""
        out = AlgElement(y_rank=max(len(x.h), len(y.h)))
        for mu, vec in x.pos.items():
            for w, c in vec.items():
                cur = y
                for i in reversed(w):
                    cur = self.ad_e(i, cur)
                out = out + cur.scale(c)
        for nu, vec in x.neg.items():
            for w, c in vec.items():
                cur = y
                for j in reversed(w):
                    cur = self.ad_f(j, cur)
                out = out + cur.scale(c)
        if any(x.h):
            # [h, y]: scalar action by weights
            for mu, vec in y.pos.items():
                val = self._eval_weight(mu, x.h)
                if val:
                    _acc(out.pos, mu, {w: c * val for w, c in vec.items()})
            for nu, vec in y.neg.items():
                val = -self._eval_weight(nu, x.h)
                if val:
                    _acc(out.neg, nu, {w: c * val for w, c in vec.items()})
        return out

    def _eval_weight(self, mu: Weight, h: Sequence[Q]) -> Q:
        total = Q(0)
        for k, m in enumerate(mu):
            if m:
                total += m * sum(b * c for b, c in zip(self.datum.alpha_bar[k], h))
        return total

    def bracket(self, x: AlgElement, y: AlgElement) -> AlgElement:
        return self.ad_apply(x, y)

    def bracket_elements(self, x: LieElement, y: LieElement) -> AlgElement:
        return self.bracket(self.element(x.key, x.coords), self.element(y.key, y.coords))

    # ------------------------------------------------------------------
    # exponentials of letter adjoints and the reflection automorphisms

    def exp_ad_letter(self, kind: str, i: int, el: AlgElement, cap: int = 64) -> AlgElement:
        step = self.ad_e if kind == "e" else self.ad_f
        out = el
        term = el
        k = 1
        while True:
            term = step(i, term).scale(Q(1, k))
            if term.is_zero():
                return out
            out = out + term
            k += 1
            if k > cap:
                raise HeightBoundMismatch("exponential of adjoint did not terminate")

    def s_star(self, i: int, el: AlgElement) -> AlgElement:
        """exp(ad e_i) exp(ad f_i) exp(ad e_i)."""
        out = self.exp_ad_letter("e", i, el)
        out = self.exp_ad_letter("f", i, out)
        return self.exp_ad_letter("e", i, out)

    def real_root_vector(self, rv: RootVector) -> Tuple[AlgElement, AlgElement]:
        """(e_alpha, f_alpha) with [e_alpha, f_alpha] = -coroot(alpha),
        obtained by transporting a generator along the recorded witness."""
        if rv.classification != "real" or rv.witness_simple is None:
            raise NotRealRoot(str(rv))
        el = self.generator_e(rv.witness_simple)
        fe = self.generator_f(rv.witness_simple)
        for i in reversed(rv.witness_word or ()):
            el = self.s_star(i, el)
            fe = self.s_star(i, fe)
        return el, fe

    # ------------------------------------------------------------------
    # divided adjoint powers and linear tests

    def ad_f_divided_matrix(self, j: int, q: int, mu: Weight):
        """Matrix of ad(f_j)^q / q! from g_mu to g_{mu - q alpha_j}, in the
        integral bases; None when the target space is zero."""
        mu = tuple(mu)
        target = tuple(m - q * (1 if k == j else 0) for k, m in enumerate(mu))
        if not weight_nonneg(target) or not any(target):
            return None
        if not self.integral_basis(target):
            return None
        cols = []
        fact = Q(1, math.factorial(q))
        for b in self.integral_basis(mu):
            el = AlgElement(pos={mu: b}, y_rank=self.datum.y_rank)
            for _ in range(q):
                el = self.ad_f(j, el)
            el = el.scale(fact)
            cols.append(self._coords_over_integral(target, el.pos.get(target, {})))
        return cols  # list of coordinate columns

    def _coords_over_integral(self, mu: Weight, vec: Vec) -> List[Q]:
        words = self.engine.basis_words(mu)
        rows = [[b.get(w, Q(0)) for w in words] for b in self.integral_basis(mu)]
        target = [vec.get(w, Q(0)) for w in words]
        sol = solve_in_span(rows, target)
        if sol is None:
            raise ValueError("vector outside the integral span")
        return sol

    def gk_kernel(self, mu: Weight, prime: Optional[int] = None) -> Tuple[int, List[List[Q]]]:
        """Dimension and basis (coordinates over the integral basis of g_mu)
        of {X in g_mu : ad(f_j^{(q)}) X = 0 for all j, 1 <= q <= height(mu)}.

        Over a prime field the integral matrices are reduced mod p; a
        non-unit denominator raises IntegralFormUnavailable.
        """
        mu = tuple(mu)
        d = len(self.integral_basis(mu))
        if d == 0:
            return 0, []
        qmax = weight_height(mu)
        stacked: List[List[Q]] = []
        for j in range(self.n):
            for qq in range(1, qmax + 1):
                cols = self.ad_f_divided_matrix(j, qq, mu)
                if cols is None:
                    continue
                tdim = len(cols[0])
                for r in range(tdim):
                    stacked.append([cols[c][r] for c in range(d)])
        if prime is None:
            if not stacked:
                return d, [[Q(1) if i == k else Q(0) for k in range(d)] for i in range(d)]
            ker = kernel_basis(stacked)
            return len(ker), ker
        # reduce integrally mod p
        rows_int: List[List[int]] = []
        for row in stacked:
            for c in row:
                if c.denominator % prime == 0:
                    raise IntegralFormUnavailable(
                        f"denominator {c.denominator} not a unit mod {prime}"
                    )
            rows_int.append([int(c.numerator * pow(c.denominator, -1, prime)) % prime for c in row])
        ker = _modp_kernel(rows_int, d, prime)
        return len(ker), [[Q(x) for x in row] for row in ker]

    # ------------------------------------------------------------------
    # generation over prime fields

    def generated_dims(self, prime: int) -> Dict[Weight, Tuple[int, int]]:
        """For each positive weight within bound: (dim of the subalgebra
        generated by the e_i over F_p, dim of the full weight space)."""
        gen: Dict[Weight, List[List[int]]] = {}
        out: Dict[Weight, Tuple[int, int]] = {}
        for mu in self.positive_weights():
            full = len(self.integral_basis(mu))
            if weight_height(mu) == 1:
                basis_vectors = [[1]] if full else []
            else:
                cand: List[List[int]] = []
                for i in range(self.n):
                    if mu[i] == 0:
                        continue
                    sub = tuple(m - (1 if k == i else 0) for k, m in enumerate(mu))
                    for coords in gen.get(sub, []):
                        lift = AlgElement(y_rank=self.datum.y_rank)
                        for c, b in zip(coords, self.integral_basis(sub)):
                            if c % prime:
                                lift = lift + AlgElement(pos={sub: b}, y_rank=self.datum.y_rank).scale(c)
                        br = self.ad_e(i, lift.scale(-1))  # [lift, e_i] = -ad_e(i)(lift)
                        vec = br.pos.get(mu, {})
                        if vec:
                            co = self._coords_over_integral(mu, vec)
                            if any(c.denominator != 1 for c in co):
                                raise IntegralFormUnavailable(str(mu))
                            cand.append([int(c) % prime for c in co])
                basis_vectors = _modp_row_basis(cand, full, prime)
            gen[mu] = basis_vectors
            out[mu] = (len(basis_vectors), full)
        return out

    def check_generation(self, prime: Optional[int] = None) -> bool:
        """Is the positive part generated by the e_i (over Q always; over F_p
        by comparison with the reduced integral form)?"""
        if prime is None:
            return True  # by construction of the weight spaces
        dims = self.generated_dims(prime)
        return all(g == f for g, f in dims.values())


def _acc(store: Dict[Weight, Vec], mu: Weight, vec: Vec):
    tgt = store.setdefault(mu, {})
    for w, c in vec.items():
        tgt[w] = tgt.get(w, Q(0)) + c
        if tgt[w] == 0:
            del tgt[w]
    if not tgt:
        del store[mu]


def _independent(rows: List[List[Q]], row: List[Q]) -> bool:
    if not any(row):
        return False
    if not rows:
        return True
    from .intlinalg import rank

    return rank(rows + [row]) > rank(rows)


def _modp_kernel(rows: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    mat = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for row, pcol in zip(mat, pivots):
            v[pcol] = (-row[fcol]) % p
        out.append(v)
    return out


def _modp_row_basis(rows: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    basis: List[List[int]] = []
    mat: List[List[int]] = []
    for row in rows:
        cur = [x % p for x in row]
        for b in mat:
            lead = next((k for k, x in enumerate(b) if x), None)
            if lead is not None and cur[lead]:
                f = (cur[lead] * pow(b[lead], -1, p)) % p
                cur = [(x - f * y) % p for x, y in zip(cur, b)]
        if any(cur):
            mat.append(cur)
            basis.append([x % p for x in row])
    return basis


def build(datum: RootDatum, height_bound: int) -> GradedLieAlgebra:
    return GradedLieAlgebra(datum, height_bound)
