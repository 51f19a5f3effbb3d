"""Divided-power enveloping machinery: ordered PBW monomials, the binomial
weight-zero algebra, the Lambda polynomials and their exponential sequences,
twisted exponentials, and the finite quotient used to separate the closure
of the minimal unipotent group from the full pro-unipotent one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .liealg import AlgElement, GradedLieAlgebra
from .wordalg import (
    TensorElement,
    TruncationOverflow,
    UElement,
    Vec,
    Weight,
    WordEngine,
    weight_height,
)


class ExponentialSequenceUnavailable(ValueError):
    pass


class NotAffineInstance(ValueError):
    pass


class NonIntegralCoefficient(ValueError):
    pass


class NotInvertible(ValueError):
    pass


# ---------------------------------------------------------------------------
# Mitzman Lambda polynomials


class MitzmanPolynomial:
    """Sparse polynomial in weighted indeterminates Z_1, Z_2, ... ; a monomial
    is a tuple of exponents (k_1, ..., k_m) meaning Z_1^k_1 ... Z_m^k_m."""

    def __init__(self, coeffs: Dict[Tuple[int, ...], Q]):
        self.coeffs = {_trim(m): Q(c) for m, c in coeffs.items() if c}

    def __eq__(self, other):
        return isinstance(other, MitzmanPolynomial) and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Q(0)) + c
        return MitzmanPolynomial(out)

    def scale(self, c):
        return MitzmanPolynomial({m: x * Q(c) for m, x in self.coeffs.items()})

    def __mul__(self, other):
        out: Dict[Tuple[int, ...], Q] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = _madd(m1, m2)
                out[m] = out.get(m, Q(0)) + c1 * c2
        return MitzmanPolynomial(out)

    def total_weight_homogeneous(self) -> Optional[int]:
        """The common weighted degree (Z_j has weight j), or None if mixed."""
        degs = {sum((j + 1) * k for j, k in enumerate(m)) for m in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def max_plain_degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)

    def has_constant_term(self) -> bool:
        return () in self.coeffs

    def substitute_sum(self, n_vars: int) -> "MitzmanPolynomial":
        """Z_j -> Z_j + Z'_j, encoded with primed variables at indices
        n_vars..2*n_vars-1; used for the binomial-type identity."""
        out = MitzmanPolynomial({(): Q(1)})
        result: Dict[Tuple[int, ...], Q] = {}
        for m, c in self.coeffs.items():
            term = MitzmanPolynomial({(): c})
            for j, k in enumerate(m):
                zj = MitzmanPolynomial({_unit(j, 2 * n_vars): Q(1)})
                zjp = MitzmanPolynomial({_unit(n_vars + j, 2 * n_vars): Q(1)})
                s = zj + zjp
                for _ in range(k):
                    term = term * s
            for mm, cc in term.coeffs.items():
                result[mm] = result.get(mm, Q(0)) + cc
        return MitzmanPolynomial(result)

    def evaluate(self, values: Sequence, one, mul, add, scale):
        """Generic evaluation with Z_j = values[j-1] in any commutative ring
        presented by callables."""
        total = None
        for m, c in sorted(self.coeffs.items()):
            term = one
            for j, k in enumerate(m):
                for _ in range(k):
                    term = mul(term, values[j])
            term = scale(term, c)
            total = term if total is None else add(total, term)
        return total if total is not None else scale(one, 0)

    def __repr__(self):
        parts = []
        for m, c in sorted(self.coeffs.items()):
            mono = "*".join(
                f"Z{j+1}" + (f"^{k}" if k > 1 else "")
                for j, k in enumerate(m)
                if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) or "0"


def _trim(m: Tuple[int, ...]) -> Tuple[int, ...]:
    m = tuple(m)
    while m and m[-1] == 0:
        m = m[:-1]
    return m


def _madd(a, b):
    n = max(len(a), len(b))
    return _trim(tuple((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)))


def _unit(j, n):
    return tuple(1 if k == j else 0 for k in range(n))


def mitzman_lambda(n: int) -> MitzmanPolynomial:
    """Coefficient of zeta^n in exp(sum_j Z_j zeta^j / j), by direct series
    exponentiation (not the recursion, which stays available as a check)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    # series S = sum_{j=1..n} (Z_j / j) zeta^j, as a list of polynomials
    series: List[MitzmanPolynomial] = [MitzmanPolynomial({}) for _ in range(n + 1)]
    for j in range(1, n + 1):
        series[j] = MitzmanPolynomial({_unit(j - 1, n): Q(1, j)})
    # exp(S) truncated
    out = [MitzmanPolynomial({}) for _ in range(n + 1)]
    out[0] = MitzmanPolynomial({(): Q(1)})
    power = [MitzmanPolynomial({}) for _ in range(n + 1)]
    power[0] = MitzmanPolynomial({(): Q(1)})
    for k in range(1, n + 1):
        # power = S^k / k! computed incrementally: power *= S / k
        new = [MitzmanPolynomial({}) for _ in range(n + 1)]
        for d1 in range(n + 1):
            if not power[d1].coeffs:
                continue
            for d2 in range(1, n + 1 - d1):
                if not series[d2].coeffs:
                    continue
                term = (power[d1] * series[d2]).scale(Q(1, k))
                new[d1 + d2] = new[d1 + d2] + term
        power = new
        for d in range(n + 1):
            out[d] = out[d] + power[d]
    return out[n]


def lambda_recursion_check(n: int) -> bool:
    """n L_n = sum_{p=1..n} Z_p L_{n-p}."""
    lhs = mitzman_lambda(n).scale(n)
    rhs = MitzmanPolynomial({})
    for p in range(1, n + 1):
        zp = MitzmanPolynomial({_unit(p - 1, n): Q(1)})
        rhs = rhs + zp * mitzman_lambda(n - p)
    return lhs == rhs


def lambda_addition_check(n: int) -> bool:
    """L_n(Z + Z') = sum_{p+q=n} L_p(Z) L_q(Z')."""
    lhs = mitzman_lambda(n).substitute_sum(n)
    rhs = MitzmanPolynomial({})
    for p in range(n + 1):
        lp = mitzman_lambda(p)
        lq = mitzman_lambda(n - p)
        # move the primed copy to indices n..2n-1
        lq_shift = MitzmanPolynomial(
            {tuple([0] * n) + _pad(m, n): c for m, c in lq.coeffs.items()}
        )
        lp_pad = MitzmanPolynomial({_pad(m, 2 * n): c for m, c in lp.coeffs.items()})
        rhs = rhs + lp_pad * lq_shift
    return lhs == rhs


def _pad(m, n):
    return tuple(list(m) + [0] * (n - len(m)))


# ---------------------------------------------------------------------------
# the weight-zero binomial algebra


class BinomialU0:
    """Divided binomials in a rank-r torus: basis prod_k (h_k choose n_k),
    truncated by total degree.  Products use the Vandermonde expansion
    (h p)(h q) = sum_i C(i, p) C(p, i-q) (h i)."""

    def __init__(self, rank: int, degree_bound: int):
        self.rank = rank
        self.bound = degree_bound

    def one(self) -> Dict[Tuple[int, ...], Q]:
        return {tuple([0] * self.rank): Q(1)}

    def binom(self, k: int, n: int) -> Dict[Tuple[int, ...], Q]:
        if n > self.bound:
            raise TruncationOverflow("degree beyond bound")
        key = tuple(n if j == k else 0 for j in range(self.rank))
        return {key: Q(1)}

    def _mul_single(self, p: int, q: int) -> Dict[int, Q]:
        out: Dict[int, Q] = {}
        for i in range(max(p, q), p + q + 1):
            c = Q(math.comb(i, p) * math.comb(p, i - q))
            if c:
                out[i] = c
        return out

    def mul(self, x: Dict, y: Dict) -> Dict[Tuple[int, ...], Q]:
        out: Dict[Tuple[int, ...], Q] = {}
        for mx, cx in x.items():
            for my, cy in y.items():
                expansion = [self._mul_single(mx[k], my[k]) for k in range(self.rank)]
                for combo in iproduct(*[list(e.items()) for e in expansion]):
                    key = tuple(i for i, _ in combo)
                    if sum(key) > self.bound:
                        raise TruncationOverflow("product beyond degree bound")
                    coeff = cx * cy
                    for _, c in combo:
                        coeff *= c
                    out[key] = out.get(key, Q(0)) + coeff
                    if out[key] == 0:
                        del out[key]
        return out

    def counit(self, x: Dict) -> Q:
        return x.get(tuple([0] * self.rank), Q(0))

    def antipode(self, x: Dict) -> Dict[Tuple[int, ...], Q]:
        """(h choose n) -> (-h choose n) = (-1)^n sum_q C(n-1, n-q) (h choose q)."""
        out: Dict[Tuple[int, ...], Q] = {}
        for m, c in x.items():
            factors = []
            for k in range(self.rank):
                n = m[k]
                single = {}
                if n == 0:
                    single[0] = Q(1)
                else:
                    for q in range(n + 1):
                        coeff = Q((-1) ** n * math.comb(n - 1, n - q))
                        if coeff:
                            single[q] = coeff
                factors.append(single)
            for combo in iproduct(*[list(f.items()) for f in factors]):
                key = tuple(q for q, _ in combo)
                coeff = c
                for _, cc in combo:
                    coeff *= cc
                out[key] = out.get(key, Q(0)) + coeff
                if out[key] == 0:
                    del out[key]
        return out

    def coproduct(self, x: Dict) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Q]:
        out: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Q] = {}
        for m, c in x.items():
            splits_per_k = [[(p, m[k] - p) for p in range(m[k] + 1)] for k in range(self.rank)]
            for combo in iproduct(*splits_per_k):
                left = tuple(p for p, _ in combo)
                right = tuple(q for _, q in combo)
                key = (left, right)
                out[key] = out.get(key, Q(0)) + c
                if out[key] == 0:
                    del out[key]
        return out

    def antipode_convolution_is_counit(self, x: Dict) -> bool:
        acc: Dict[Tuple[int, ...], Q] = {}
        for (l, r), c in self.coproduct(x).items():
            term = self.mul({l: Q(1)}, self.antipode({r: Q(1)}))
            for m, cc in term.items():
                acc[m] = acc.get(m, Q(0)) + c * cc
                if acc[m] == 0:
                    del acc[m]
        expected = {tuple([0] * self.rank): self.counit(x)} if self.counit(x) else {}
        return acc == expected


# ---------------------------------------------------------------------------
# basis bookkeeping for PBW monomials


@dataclass(frozen=True)
class BasisKey:
    """One element of the global ordered basis of the positive part."""

    weight: Weight
    index: int  # position inside the weight space's integral basis

    def sort_key(self):
        return (weight_height(self.weight), tuple(-c for c in self.weight), self.index)


@dataclass(frozen=True)
class DividedPowerMonomial:
    exponents: Tuple[Tuple[BasisKey, int], ...]  # in global order, exps >= 1

    @property
    def weight(self) -> Weight:
        if not self.exponents:
            return ()
        n = len(self.exponents[0][0].weight)
        out = [0] * n
        for key, e in self.exponents:
            for k in range(n):
                out[k] += e * key.weight[k]
        return tuple(out)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def label(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for key, e in self.exponents:
            base = f"x[{','.join(map(str, key.weight))}]" + (
                f".{key.index}" if key.index else ""
            )
            parts.append(base + (f"^({e})" if e > 1 else ""))
        return "*".join(parts)


class EnvelopingTools:
    """PBW monomials and exponential machinery on top of a built algebra."""

    def __init__(self, algebra: GradedLieAlgebra, degree_bound: int = 8):
        self.g = algebra
        self.engine: WordEngine = algebra.engine
        self.degree_bound = degree_bound
        self._seq_cache: Dict[Tuple[Weight, int, int], List[UElement]] = {}

    # -- the globally ordered basis of the positive part
    def basis_keys(self, psi: Optional[Sequence[Weight]] = None) -> List[BasisKey]:
        weights = (
            [tuple(w) for w in psi]
            if psi is not None
            else [mu for mu in self.g.positive_weights() if self.g.dim(mu)]
        )
        keys = []
        for mu in weights:
            for k in range(len(self.g.integral_basis(mu))):
                keys.append(BasisKey(tuple(mu), k))
        return sorted(keys, key=BasisKey.sort_key)

    def key_vector(self, key: BasisKey) -> Vec:
        return self.g.integral_basis(key.weight)[key.index]

    def is_real_key(self, key: BasisKey, reals) -> bool:
        return tuple(key.weight) in reals.roots

    # -- enumeration
    def pbw_basis(
        self,
        psi: Optional[Sequence[Weight]],
        weight: Weight,
        degree_bound: int,
        reals=None,
    ) -> List[DividedPowerMonomial]:
        """Ordered divided-power monomials of the given weight and bounded
        degree.  Imaginary keys with exponent >= 2 need exponential
        sequences, available only in the affine rank-2 family."""
        weight = tuple(weight)
        keys = self.basis_keys(psi)
        out: List[DividedPowerMonomial] = []
        if not any(weight):
            return [DividedPowerMonomial(())]

        def rec(pos: int, remaining: Weight, degree_left: int, acc):
            if not any(remaining):
                out.append(DividedPowerMonomial(tuple(acc)))
                return
            if pos == len(keys) or degree_left == 0:
                return
            key = keys[pos]
            max_e = degree_left
            rec(pos + 1, remaining, degree_left, acc)
            cum = list(remaining)
            for e in range(1, max_e + 1):
                ok = True
                for k in range(len(cum)):
                    cum[k] -= key.weight[k]
                    if cum[k] < 0:
                        ok = False
                if not ok:
                    break
                if (
                    e >= 2
                    and reals is not None
                    and not self.is_real_key(key, reals)
                    and not self._affine_sequences_available()
                ):
                    raise ExponentialSequenceUnavailable(
                        f"imaginary divided power at weight {key.weight}"
                    )
                rec(pos + 1, tuple(cum), degree_left - e, acc + [(key, e)])

        rec(0, weight, degree_bound, [])
        out.sort(key=lambda m: tuple((k.sort_key(), e) for k, e in m.exponents))
        return out

    def _affine_sequences_available(self) -> bool:
        a = self.g.a
        return a.n == 2 and a.entries == ((2, -2), (-2, 2))

    # -- realization of monomials inside the word algebra
    def monomial_element(self, mon: DividedPowerMonomial, bound: int, keep=None, reals=None) -> UElement:
        out = UElement.one(self.engine, bound, keep)
        for key, e in mon.exponents:
            out = out * self.power_term(key, e, bound, keep, reals)
        return out

    def power_term(self, key: BasisKey, e: int, bound: int, keep=None, reals=None) -> UElement:
        """x^[e] for a basis vector x: the divided power for real keys, the
        canonical exponential-sequence term for affine imaginary ones."""
        vec = self.key_vector(key)
        x = UElement(self.engine, {tuple(key.weight): vec}, bound, keep)
        if e == 1:
            return x
        if reals is not None and self.is_real_key(key, reals):
            return self.divided_power(x, e)
        seq = self.exponential_sequence(key, e, bound, keep)
        return seq[e]

    def divided_power(self, x: UElement, e: int) -> UElement:
        out = x
        for k in range(2, e + 1):
            out = (out * x).scale(Q(1, k))
        return out

    # -- canonical commuting family in the affine rank-2 case
    def imaginary_family(self, key: BasisKey, count: int) -> List[AlgElement]:
        """x_1 = the basis vector at weight n*delta, x_j at weight j*n*delta,
        coherent under the loop realization (raising by one delta step is
        bracketing with the two generators and halving)."""
        if not self._affine_sequences_available():
            raise NotAffineInstance("canonical imaginary families: rank-2 affine only")
        mu = tuple(key.weight)
        if mu[0] != mu[1]:
            raise NotAffineInstance(f"{mu} is not an imaginary weight here")
        n_units = mu[0]
        g = self.g
        x1 = AlgElement(pos={mu: self.key_vector(key)}, y_rank=g.datum.y_rank)
        family = [x1]
        cur = x1
        for _ in range(2, count + 1):
            for _step in range(n_units):
                cur = g.ad_apply(cur, g.generator_e(1))
                cur = g.ad_apply(cur, g.generator_e(0))
                cur = cur.scale(Q(1, 2))
            family.append(cur)
        return family

    def exponential_sequence(self, key: BasisKey, up_to: int, bound: int, keep=None) -> List[UElement]:
        cache_key = (tuple(key.weight), key.index, up_to)
        if cache_key in self._seq_cache:
            return self._seq_cache[cache_key]
        fam = self.imaginary_family(key, up_to)
        vals = [
            UElement(self.engine, {_weight_of(x): x.pos[_weight_of(x)]}, bound, keep)
            for x in fam
        ]
        terms = [UElement.one(self.engine, bound, keep)]
        for p in range(1, up_to + 1):
            lam = mitzman_lambda(p)
            term = lam.evaluate(
                vals,
                one=UElement.one(self.engine, bound, keep),
                mul=lambda a, b: a * b,
                add=lambda a, b: a + b,
                scale=lambda a, c: a.scale(c),
            )
            terms.append(term)
        self._seq_cache[cache_key] = terms
        return terms

    # -- twisted exponentials
    def twisted_exp(self, terms: Sequence[UElement], lam) -> UElement:
        out = None
        power = Q(1)
        for p, t in enumerate(terms):
            coeff = Q(lam) ** p
            piece = t.scale(coeff)
            out = piece if out is None else out + piece
        return out

    def twisted_exp_real(self, vec: Vec, mu: Weight, lam, bound: int, keep=None) -> UElement:
        x = UElement(self.engine, {tuple(mu): vec}, bound, keep)
        terms = [UElement.one(self.engine, bound, keep)]
        cur = UElement.one(self.engine, bound, keep)
        p = 1
        while True:
            cur = (cur * x).scale(Q(1, p))
            if cur.is_zero() or weight_height(tuple(mu)) * p > bound:
                break
            terms.append(cur)
            p += 1
        return self.twisted_exp(terms, lam)

    def inverse_via_antipode(self, u: UElement) -> UElement:
        return u.antipode()

    # -- the enveloping filtration (number of Lie factors, not letters)
    def _filtration_span(self, mu: Weight, k: int) -> List[List[Q]]:
        """Row span (over the weight space's basis words) of products of at
        most k weight-homogeneous algebra elements of total weight mu."""
        mu = tuple(mu)
        words = self.engine.basis_words(mu)
        cache = getattr(self, "_filt_cache", None)
        if cache is None:
            cache = self._filt_cache = {}
        if (mu, k) in cache:
            return cache[(mu, k)]
        if k == 0 or not any(mu):
            rows = [[Q(1) if w == () else Q(0) for w in words]] if () in words else []
            cache[(mu, k)] = rows
            return rows
        vectors: List[Vec] = []
        # products g_nu * (filtration k-1 at mu - nu), plus level k-1 itself
        prev = self._filtration_span(mu, k - 1)
        vectors.extend({words[i]: row[i] for i in range(len(words)) if row[i]} for row in prev)
        for nu in self.g.positive_weights(weight_height(mu)):
            rest = tuple(m - n for m, n in zip(mu, nu))
            if any(x < 0 for x in rest):
                continue
            sub_rows = self._filtration_span(rest, k - 1)
            sub_words = self.engine.basis_words(rest)
            for b in self.g.basis(nu):
                for row in sub_rows:
                    raw: Vec = {}
                    for w1, c1 in b.items():
                        for i, c2 in enumerate(row):
                            if c2:
                                w = w1 + sub_words[i]
                                raw[w] = raw.get(w, Q(0)) + c1 * c2
                    red = self.engine.reduce(mu, raw)
                    if red:
                        vectors.append(red)
        from .intlinalg import rref

        rows = [[v.get(w, Q(0)) for w in words] for v in vectors]
        reduced, _ = rref(rows) if rows else ([], [])
        cache[(mu, k)] = reduced
        return reduced

    def filtration_lt(self, u: UElement, n: int) -> bool:
        """Is every weight component of u of enveloping filtration < n?"""
        from .intlinalg import in_row_span

        for mu, vec in u.comps.items():
            words = self.engine.basis_words(mu)
            target = [vec.get(w, Q(0)) for w in words]
            if not in_row_span(self._filtration_span(mu, n - 1), target):
                return False
        return True

    # -- verification of candidate sequences
    def exp_sequence_verify(self, x_vec: Vec, mu: Weight, terms: Sequence[UElement]):
        """Check weight homogeneity, the filtration condition, counit and
        coproduct conditions; returns (ok, first_failure_description)."""
        mu = tuple(mu)
        if not terms or terms[0].constant_term() != 1:
            return False, "term 0 must be 1"
        for n, t in enumerate(terms):
            if n == 0:
                continue
            target = tuple(n * m for m in mu)
            if any(w != target for w in t.weights()):
                return False, f"term {n} not homogeneous of weight {target}"
            # filtration: t - x^n/n! must be of enveloping filtration < n
            xpow = UElement(self.engine, {mu: x_vec}, t.bound, t.keep)
            acc = xpow
            for k in range(2, n + 1):
                acc = (acc * xpow).scale(Q(1, k))
            diff = t - acc
            if not diff.is_zero() and not self.filtration_lt(diff, n):
                return False, f"term {n} fails the filtration condition"
            if t.counit() != 0:
                return False, f"term {n} has nonzero counit"
            lhs = t.coproduct()
            rhs = None
            for p in range(n + 1):
                piece = TensorElement.tensor(terms[p], terms[n - p])
                rhs = piece if rhs is None else _tensor_add(rhs, piece)
            if (lhs - rhs).comps:
                return False, f"term {n} fails the coproduct condition"
        if len(terms) > 1:
            t1 = terms[1]
            if t1.component(mu) != {w: Q(c) for w, c in x_vec.items()}:
                return False, "term 1 must be the vector itself"
        return True, "ok"


def pbw_weight0_basis(rank: int, degree_bound: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of the binomial basis of the weight-zero part."""
    out = [tuple([0] * rank)]

    def rec(prefix, left, pos):
        if pos == rank:
            if any(prefix):
                out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, pos + 1)

    rec([], degree_bound, 0)
    return sorted(set(out))


def _tensor_add(a: TensorElement, b: TensorElement) -> TensorElement:
    comps = {k: dict(v) for k, v in a.comps.items()}
    for k, v in b.comps.items():
        tgt = comps.setdefault(k, {})
        for w, c in v.items():
            tgt[w] = tgt.get(w, Q(0)) + c
            if tgt[w] == 0:
                del tgt[w]
    return TensorElement(a.engine, {k: v for k, v in comps.items() if v}, a.bound)


def _weight_of(el: AlgElement) -> Weight:
    assert len(el.pos) == 1
    return next(iter(el.pos))
