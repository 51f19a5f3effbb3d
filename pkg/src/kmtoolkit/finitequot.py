"""The finite quotient separating the minimal unipotent group from the full
pro-unipotent one, for the rank-2 matrices [[2,-m],[-m,2]] (m >= 3) over F2.

The quotient keeps exactly the weight spaces a*alpha + b*beta with b <= 1 and
a + b <= 3 (an upward-closed complement), which leaves the ten monomials
1, e, e^(2), e^(3), f, ef, e^(2)f, e*f, e(e*f), e^(2)*f  with
e*f = [e,f] and e^(2)*f = ad(e^(2))(f).
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Tuple

from .envelop import EnvelopingTools, NonIntegralCoefficient, NotInvertible
from .instances import rank2_matrix, simply_connected
from .liealg import build
from .weyl import real_roots
from .wordalg import UElement


def _keep(mu: Tuple[int, int]) -> bool:
    return mu[1] <= 1 and mu[0] + mu[1] <= 3


class FiniteQuotient:
    """Ten-dimensional quotient algebra with its integral multiplication
    table reduced mod 2."""

    def __init__(self, m: int = 3):
        if m < 3:
            raise ValueError("the construction needs m >= 3")
        self.m = m
        self.datum = simply_connected(rank2_matrix(m), f"rank2-m{m}")
        self.g = build(self.datum, 4)
        self.tools = EnvelopingTools(self.g)
        self.reals = real_roots(self.datum.matrix, 4)
        self.bound = 8
        psi = [(1, 0), (0, 1), (1, 1), (2, 1)]
        kept_weights = [
            (0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)
        ]
        self.monomials = []
        for w in kept_weights:
            self.monomials.extend(self.tools.pbw_basis(psi, w, 6, self.reals))
        if len(self.monomials) != 10:
            raise AssertionError(f"expected 10 monomials, got {len(self.monomials)}")
        self._elements = [
            self.tools.monomial_element(mon, self.bound, _keep, self.reals)
            for mon in self.monomials
        ]
        self._coord_cache: Dict[Tuple[int, int], List[List[Q]]] = {}
        self.int_table = self._build_table()
        self.table2 = [
            [tuple(int(c) % 2 for c in row) for row in plane]
            for plane in self.int_table
        ]
        self.labels = [mon.label() for mon in self.monomials]

    # -- expressing quotient elements over the monomial basis
    def _coords(self, u: UElement) -> List[Q]:
        out = [Q(0)] * 10
        for mu, vec in u.comps.items():
            idxs = [k for k, mon in enumerate(self.monomials) if mon.weight == mu or (not mon.exponents and not any(mu))]
            words = self.g.engine.basis_words(mu)
            rows = [
                [self._elements[k].component(mu).get(w, Q(0)) for w in words]
                for k in idxs
            ]
            target = [vec.get(w, Q(0)) for w in words]
            from .intlinalg import solve_in_span

            sol = solve_in_span(rows, target)
            if sol is None:
                raise NonIntegralCoefficient(f"component at {mu} outside the basis span")
            for k, c in zip(idxs, sol):
                out[k] += c
        return out

    def _build_table(self) -> List[List[List[Q]]]:
        table = []
        for i, a in enumerate(self._elements):
            plane = []
            for j, b in enumerate(self._elements):
                coords = self._coords(a * b)
                for c in coords:
                    if c.denominator != 1:
                        raise NonIntegralCoefficient(
                            f"product {self.labels[i]} * {self.labels[j]} has coefficient {c}"
                        )
                plane.append(coords)
            table.append(plane)
        return table

    # -- F2 elements are coordinate tuples over the ten monomials
    def one(self) -> Tuple[int, ...]:
        return tuple(1 if k == 0 else 0 for k in range(10))

    def monomial(self, label: str) -> Tuple[int, ...]:
        k = self.labels.index(label)
        return tuple(1 if j == k else 0 for j in range(10))

    def index_of_weight_vector(self, weight: Tuple[int, int]) -> int:
        """Index of the unique degree-1 monomial at an imaginary weight."""
        for k, mon in enumerate(self.monomials):
            if mon.weight == weight and mon.degree == 1:
                return k
        raise KeyError(weight)

    def mul(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * 10
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                row = self.table2[i][j]
                for k in range(10):
                    out[k] ^= row[k]
        return tuple(out)

    def power(self, x: Sequence[int], n: int) -> Tuple[int, ...]:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    # -- distinguished elements
    def gen_a(self) -> Tuple[int, ...]:
        """exp of the alpha generator: 1 + e + e^(2) + e^(3)."""
        coords = [0] * 10
        for k, mon in enumerate(self.monomials):
            if all(key.weight[1] == 0 for key, _ in mon.exponents):
                coords[k] = 1
        return tuple(coords)

    def gen_b(self) -> Tuple[int, ...]:
        """exp of the beta generator: 1 + f."""
        coords = [0] * 10
        coords[0] = 1
        coords[self.labels.index(self._label_of_weight((0, 1)))] = 1
        return tuple(coords)

    def _label_of_weight(self, w) -> str:
        for mon in self.monomials:
            if mon.weight == w and mon.degree == 1:
                return mon.label()
        raise KeyError(w)

    def grouplike_exponentials(self) -> List[Tuple[int, ...]]:
        """Images of products exp(l1 x_alpha) exp(l2 x_beta) exp(l3 x_{a+b})
        exp(l4 x_{2a+b}) over F2^4, in the fixed basis order."""
        factors = []
        for key_weight in [(1, 0), (0, 1), (1, 1), (2, 1)]:
            coords = [0] * 10
            coords[0] = 1
            if key_weight == (1, 0):
                for k, mon in enumerate(self.monomials):
                    if mon.exponents and all(kk.weight == (1, 0) for kk, _ in mon.exponents):
                        coords[k] = 1
            else:
                coords[self.index_of_weight_vector(key_weight)] = 1
            factors.append(tuple(coords))
        out = []
        for bits in range(16):
            el = self.one()
            for pos in range(4):
                if bits & (1 << pos):
                    el = self.mul(el, factors[pos])
            out.append(el)
        return out

    def enumerate_group(
        self, generators: Sequence[Tuple[int, ...]], cap: int = 4096
    ) -> List[Tuple[int, ...]]:
        """Closure of the generators under multiplication."""
        for g in generators:
            if g[0] != 1:
                raise NotInvertible("generator has constant term != 1")
        seen = {self.one()}
        frontier = [self.one()]
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                    if len(seen) > cap:
                        raise AssertionError("closure exceeded cap")
            frontier = nxt
        return sorted(seen)

    def words_in_ab(self, max_len: int = 8) -> List[Tuple[int, ...]]:
        """The alternating words in a, b of length <= max_len (plus 1)."""
        a, b = self.gen_a(), self.gen_b()
        words = [self.one()]
        for start in (0, 1):
            cur = self.one()
            for k in range(max_len):
                cur = self.mul(cur, a if (k % 2 == start) else b)
                words.append(cur)
        return words


def quotient_report(m: int = 3) -> dict:
    """Machine-checkable summary of the counterexample computation."""
    Fq = FiniteQuotient(m)
    a, b = Fq.gen_a(), Fq.gen_b()
    ab = Fq.mul(a, b)
    ba = Fq.mul(b, a)
    ab2 = Fq.mul(ab, ab)
    ba2 = Fq.mul(ba, ba)
    expected = list(Fq.one())
    expected[Fq.index_of_weight_vector((1, 1))] = 1
    expected[Fq.index_of_weight_vector((2, 1))] = 1
    expected = tuple(expected)
    group = Fq.enumerate_group([a, b])
    ambient = Fq.grouplike_exponentials()
    exp_e2f = list(Fq.one())
    exp_e2f[Fq.index_of_weight_vector((2, 1))] = 1
    exp_e2f = tuple(exp_e2f)
    words = Fq.words_in_ab(8)
    return {
        "m": m,
        "basis": Fq.labels,
        "ab_squared_is_expected": ab2 == expected and ba2 == expected,
        "ab_fourth_is_one": Fq.power(ab, 4) == Fq.one() and Fq.power(ba, 4) == Fq.one(),
        "generated_order": len(group),
        "ambient_order": len(set(ambient)),
        "ambient_closed": all(
            Fq.mul(x, y) in set(ambient) for x in ambient for y in ambient
        ),
        "missing_exponential_absent": exp_e2f not in group,
        "word_count": len(words),
        "distinct_words": len(set(words)),
    }
