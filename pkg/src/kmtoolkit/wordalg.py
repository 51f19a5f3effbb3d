"""Height-truncated positive enveloping algebra as a quotient of the free
associative algebra on the Chevalley generators.

The positive part of the presented algebra has enveloping algebra
T(e_0..e_{n-1}) / (ideal generated by the defining relation elements), so a
weight space is the span of the words of that multidegree modulo the ideal's
component there.  Words are index tuples; weights are multidegree tuples.
Everything is cached per (matrix, weight).
"""

from __future__ import annotations

import math
from fractions import Fraction as Q
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cartan import KacMoodyMatrix
from .intlinalg import hnf, integer_kernel

Word = Tuple[int, ...]
Weight = Tuple[int, ...]
Vec = Dict[Word, Q]


class TruncationOverflow(ValueError):
    pass


def weight_add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def weight_sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def weight_height(w: Weight) -> int:
    return sum(w)


def weight_nonneg(w: Weight) -> bool:
    return all(x >= 0 for x in w)


class WordEngine:
    """Per-matrix cache of weight spaces of the positive enveloping algebra."""

    _instances: Dict[Tuple[Tuple[Tuple[int, ...], ...]], "WordEngine"] = {}

    def __init__(self, matrix: KacMoodyMatrix):
        self.a = matrix
        self.n = matrix.n
        self._words: Dict[Weight, List[Word]] = {}
        self._rewrite: Dict[Weight, Dict[Word, Vec]] = {}
        self._dim: Dict[Weight, int] = {}
        self._zlattice: Dict[Weight, List[List[Q]]] = {}

    @classmethod
    def get(cls, matrix: KacMoodyMatrix) -> "WordEngine":
        key = matrix.entries
        if key not in cls._instances:
            cls._instances[key] = cls(matrix)
        return cls._instances[key]

    # -- word enumeration
    def words(self, mu: Weight) -> List[Word]:
        if mu not in self._words:
            self._words[mu] = sorted(self._gen_words(mu))
        return self._words[mu]

    def _gen_words(self, mu: Weight) -> List[Word]:
        if not any(mu):
            return [()]
        out = []
        for i in range(self.n):
            if mu[i] > 0:
                sub = list(mu)
                sub[i] -= 1
                for w in self._gen_words(tuple(sub)):
                    out.append((i,) + w)
        return out

    # -- defining relation elements as word vectors
    def serre_elements(self) -> List[Tuple[Weight, Vec]]:
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    continue
                m = 1 - self.a[i, j]
                mu = [0] * self.n
                mu[i] = m
                mu[j] = 1
                vec: Vec = {}
                for k in range(m + 1):
                    word = (i,) * (m - k) + (j,) + (i,) * k
                    vec[word] = Q((-1) ** k * math.comb(m, k))
                out.append((tuple(mu), vec))
        return out

    # -- ideal reduction per weight
    def rewrite_rules(self, mu: Weight) -> Dict[Word, Vec]:
        """Echelonized ideal component: map pivot-word -> replacement vector
        over non-pivot words."""
        if mu in self._rewrite:
            return self._rewrite[mu]
        gens: List[Vec] = []
        for smu, svec in self.serre_elements():
            rest = weight_sub(mu, smu)
            if not weight_nonneg(rest):
                continue
            # u * s * v over all splittings rest = left + right
            for left_mu in _sub_weights(rest):
                right_mu = weight_sub(rest, left_mu)
                for u in self.words(left_mu):
                    for v in self.words(right_mu):
                        vec = {u + w + v: c for w, c in svec.items()}
                        gens.append(vec)
        rules: Dict[Word, Vec] = {}
        for vec in gens:
            vec = self._reduce_with(vec, rules)
            if not vec:
                continue
            pivot = max(vec)
            inv = Q(1) / vec[pivot]
            repl = {w: -c * inv for w, c in vec.items() if w != pivot}
            # substitute the new rule into existing replacements
            for p, r in rules.items():
                if pivot in r:
                    c = r.pop(pivot)
                    for w, x in repl.items():
                        r[w] = r.get(w, Q(0)) + c * x
                        if r[w] == 0:
                            del r[w]
            rules[pivot] = repl
        self._rewrite[mu] = rules
        self._dim[mu] = len(self.words(mu)) - len(rules)
        return rules

    def _reduce_with(self, vec: Vec, rules: Dict[Word, Vec]) -> Vec:
        out: Vec = {}
        stack = list(vec.items())
        while stack:
            w, c = stack.pop()
            if c == 0:
                continue
            if w in rules:
                for w2, x in rules[w].items():
                    stack.append((w2, c * x))
            else:
                out[w] = out.get(w, Q(0)) + c
                if out[w] == 0:
                    del out[w]
        return out

    def reduce(self, mu: Weight, vec: Vec) -> Vec:
        return self._reduce_with(vec, self.rewrite_rules(mu))

    def dim(self, mu: Weight) -> int:
        self.rewrite_rules(mu)
        return self._dim[mu]

    def basis_words(self, mu: Weight) -> List[Word]:
        rules = self.rewrite_rules(mu)
        return [w for w in self.words(mu) if w not in rules]

    # -- integral form
    def divided_products(self, mu: Weight) -> List[Tuple[Tuple[Tuple[int, int], ...], Vec]]:
        """Products of divided powers e_i^(k) (alternating blocks) of weight mu,
        as reduced word vectors; these span the integral form's weight space."""
        out = []
        for blocks in self._block_seqs(mu, prev=-1):
            denom = 1
            word: Word = ()
            for idx, k in blocks:
                denom *= math.factorial(k)
                word = word + (idx,) * k
            vec = self.reduce(mu, {word: Q(1, denom)})
            out.append((blocks, vec))
        return out

    def _block_seqs(self, mu: Weight, prev: int):
        if not any(mu):
            yield ()
            return
        for i in range(self.n):
            if i == prev or mu[i] == 0:
                continue
            for k in range(1, mu[i] + 1):
                sub = list(mu)
                sub[i] -= k
                for rest in self._block_seqs(tuple(sub), i):
                    yield ((i, k),) + rest

    def integral_lattice(self, mu: Weight) -> List[Dict[Word, Q]]:
        """Basis (over Z) of the integral form inside the weight space, as
        reduced word vectors."""
        if mu in self._zlattice:
            return self._zlattice[mu]
        basis_words = self.basis_words(mu)
        idx = {w: k for k, w in enumerate(basis_words)}
        rows = []
        for _, vec in self.divided_products(mu):
            rows.append([vec.get(w, Q(0)) for w in basis_words])
        if rows:
            den = math.lcm(*[c.denominator for row in rows for c in row] or [1])
            int_rows = [[int(c * den) for c in row] for row in rows]
            h = hnf(int_rows)
            lattice = [
                {basis_words[k]: Q(x, den) for k, x in enumerate(row) if x}
                for row in h
            ]
        else:
            lattice = []
        self._zlattice[mu] = lattice
        return lattice

    def in_integral_form(self, mu: Weight, vec: Vec) -> bool:
        coords = self.coords_in_lattice(mu, vec)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def coords_in_lattice(self, mu: Weight, vec: Vec) -> Optional[List[Q]]:
        """Rational coordinates of a reduced vector over the integral basis."""
        lattice = self.integral_lattice(mu)
        basis_words = self.basis_words(mu)
        from .intlinalg import solve_in_span

        rows = [[row.get(w, Q(0)) for w in basis_words] for row in lattice]
        target = [vec.get(w, Q(0)) for w in basis_words]
        return solve_in_span(rows, target)


def _sub_weights(mu: Weight) -> Iterable[Weight]:
    ranges = [range(m + 1) for m in mu]
    out = [()]
    for r in ranges:
        out = [w + (k,) for w in out for k in r]
    return out


# ---------------------------------------------------------------------------
# multi-weight elements


class UElement:
    """Sparse element of the truncated positive enveloping algebra: a map
    weight -> reduced word vector.  Arithmetic respects a height bound; the
    optional keep predicate projects onto a quotient by an upward-closed
    weight set (used by the finite quotient computations)."""

    __slots__ = ("engine", "comps", "bound", "keep")

    def __init__(self, engine: WordEngine, comps: Dict[Weight, Vec], bound: int, keep=None):
        self.engine = engine
        self.bound = bound
        self.keep = keep
        self.comps = {
            mu: vec
            for mu, vec in comps.items()
            if vec and (keep is None or keep(mu))
        }

    # -- constructors
    @classmethod
    def one(cls, engine: WordEngine, bound: int, keep=None) -> "UElement":
        zero = tuple([0] * engine.n)
        return cls(engine, {zero: {(): Q(1)}}, bound, keep)

    @classmethod
    def from_word(cls, engine: WordEngine, word: Word, bound: int, coeff=1, keep=None) -> "UElement":
        mu = [0] * engine.n
        for i in word:
            mu[i] += 1
        mu = tuple(mu)
        vec = engine.reduce(mu, {tuple(word): Q(coeff)})
        return cls(engine, {mu: vec}, bound, keep)

    def _compat(self, other: "UElement"):
        if self.engine is not other.engine or self.bound != other.bound:
            raise TruncationOverflow("mixing incompatible truncations")

    # -- arithmetic
    def __add__(self, other: "UElement") -> "UElement":
        self._compat(other)
        comps = {mu: dict(vec) for mu, vec in self.comps.items()}
        for mu, vec in other.comps.items():
            tgt = comps.setdefault(mu, {})
            for w, c in vec.items():
                tgt[w] = tgt.get(w, Q(0)) + c
                if tgt[w] == 0:
                    del tgt[w]
        return UElement(self.engine, comps, self.bound, self.keep or other.keep)

    def __neg__(self) -> "UElement":
        return self.scale(-1)

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def scale(self, c) -> "UElement":
        c = Q(c)
        if c == 0:
            return UElement(self.engine, {}, self.bound, self.keep)
        return UElement(
            self.engine,
            {mu: {w: x * c for w, x in vec.items()} for mu, vec in self.comps.items()},
            self.bound,
            self.keep,
        )

    def __mul__(self, other: "UElement") -> "UElement":
        self._compat(other)
        keep = self.keep or other.keep
        comps: Dict[Weight, Vec] = {}
        for mu1, v1 in self.comps.items():
            for mu2, v2 in other.comps.items():
                mu = weight_add(mu1, mu2)
                if keep is not None and not keep(mu):
                    continue
                if weight_height(mu) > self.bound:
                    if keep is None:
                        raise TruncationOverflow(
                            f"product weight {mu} exceeds height bound {self.bound}"
                        )
                    continue
                raw: Vec = {}
                for w1, c1 in v1.items():
                    for w2, c2 in v2.items():
                        w = w1 + w2
                        raw[w] = raw.get(w, Q(0)) + c1 * c2
                red = self.engine.reduce(mu, raw)
                if red:
                    tgt = comps.setdefault(mu, {})
                    for w, c in red.items():
                        tgt[w] = tgt.get(w, Q(0)) + c
                        if tgt[w] == 0:
                            del tgt[w]
        return UElement(self.engine, {m: v for m, v in comps.items() if v}, self.bound, keep)

    def commutator(self, other: "UElement") -> "UElement":
        return self * other - other * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, UElement):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(
            tuple(
                (mu, tuple(sorted(vec.items())))
                for mu, vec in sorted(self.comps.items())
            )
        )

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, mu: Weight) -> Vec:
        return dict(self.comps.get(tuple(mu), {}))

    def constant_term(self) -> Q:
        zero = tuple([0] * self.engine.n)
        return self.comps.get(zero, {}).get((), Q(0))

    def weights(self) -> List[Weight]:
        return sorted(self.comps)

    def max_filtration(self) -> int:
        """Filtration degree = max word length appearing (words are PBW-reduced)."""
        return max((len(w) for vec in self.comps.values() for w in vec), default=0)

    # -- coalgebra structure
    def coproduct(self) -> "TensorElement":
        out: Dict[Tuple[Weight, Weight], Dict[Tuple[Word, Word], Q]] = {}
        for mu, vec in self.comps.items():
            for w, c in vec.items():
                for split in _subsets(len(w)):
                    left = tuple(w[k] for k in split)
                    right = tuple(w[k] for k in range(len(w)) if k not in split)
                    lmu, rmu = _word_weight(self.engine.n, left), _word_weight(self.engine.n, right)
                    lred = self.engine.reduce(lmu, {left: Q(1)})
                    rred = self.engine.reduce(rmu, {right: Q(1)})
                    tgt = out.setdefault((lmu, rmu), {})
                    for wl, cl in lred.items():
                        for wr, cr in rred.items():
                            key = (wl, wr)
                            tgt[key] = tgt.get(key, Q(0)) + c * cl * cr
                            if tgt[key] == 0:
                                del tgt[key]
        return TensorElement(self.engine, {k: v for k, v in out.items() if v}, self.bound)

    def counit(self) -> Q:
        return self.constant_term()

    def antipode(self) -> "UElement":
        comps: Dict[Weight, Vec] = {}
        for mu, vec in self.comps.items():
            raw: Vec = {}
            for w, c in vec.items():
                raw[tuple(reversed(w))] = raw.get(tuple(reversed(w)), Q(0)) + c * (-1) ** len(w)
            red = self.engine.reduce(mu, raw)
            if red:
                comps[mu] = red
        return UElement(self.engine, comps, self.bound, self.keep)

    def is_grouplike(self) -> bool:
        """Group-like within the truncation: the coproduct agrees with the
        tensor square on pairs whose total weight survives."""
        square = TensorElement.tensor(self, self).project(self.bound, self.keep)
        return self.constant_term() == 1 and self.coproduct() == square

    def __repr__(self):
        terms = []
        for mu in sorted(self.comps):
            for w in sorted(self.comps[mu]):
                terms.append(f"{self.comps[mu][w]}*{''.join(map(str,w)) or '1'}")
        return " + ".join(terms) or "0"


def _word_weight(n: int, word: Word) -> Weight:
    mu = [0] * n
    for i in word:
        mu[i] += 1
    return tuple(mu)


@lru_cache(maxsize=None)
def _subsets(n: int):
    out = []
    for r in range(n + 1):
        out.extend(combinations(range(n), r))
    return out


class TensorElement:
    """Element of the truncated tensor square, in (word, word) coordinates."""

    __slots__ = ("engine", "comps", "bound")

    def __init__(self, engine, comps, bound):
        self.engine = engine
        self.comps = {k: v for k, v in comps.items() if v}
        self.bound = bound

    @classmethod
    def tensor(cls, x: UElement, y: UElement) -> "TensorElement":
        comps: Dict[Tuple[Weight, Weight], Dict[Tuple[Word, Word], Q]] = {}
        for mu1, v1 in x.comps.items():
            for mu2, v2 in y.comps.items():
                tgt = comps.setdefault((mu1, mu2), {})
                for w1, c1 in v1.items():
                    for w2, c2 in v2.items():
                        tgt[(w1, w2)] = tgt.get((w1, w2), Q(0)) + c1 * c2
        return cls(x.engine, comps, x.bound)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.comps == other.comps

    def project(self, bound: int, keep=None) -> "TensorElement":
        """Drop pairs whose total weight falls outside the truncation."""
        comps = {}
        for (mu1, mu2), vec in self.comps.items():
            total = weight_add(mu1, mu2)
            if weight_height(total) > bound:
                continue
            if keep is not None and not keep(total):
                continue
            comps[(mu1, mu2)] = vec
        return TensorElement(self.engine, comps, self.bound)

    def __sub__(self, other):
        comps = {k: dict(v) for k, v in self.comps.items()}
        for k, v in other.comps.items():
            tgt = comps.setdefault(k, {})
            for w, c in v.items():
                tgt[w] = tgt.get(w, Q(0)) - c
                if tgt[w] == 0:
                    del tgt[w]
        return TensorElement(self.engine, {k: v for k, v in comps.items() if v}, self.bound)

    def is_zero(self):
        return not self.comps

    def coproduct_left(self) -> "Tensor3Element":
        """Apply the coproduct to the left slot."""
        return self._coproduct_slot(0)

    def coproduct_right(self) -> "Tensor3Element":
        return self._coproduct_slot(1)

    def _coproduct_slot(self, slot: int) -> "Tensor3Element":
        out: Dict[Tuple[Word, Word, Word], Q] = {}
        n = self.engine.n
        for (mu1, mu2), vec in self.comps.items():
            for (w1, w2), c in vec.items():
                w = (w1, w2)[slot]
                other = (w1, w2)[1 - slot]
                for split in _subsets(len(w)):
                    left = tuple(w[k] for k in split)
                    right = tuple(w[k] for k in range(len(w)) if k not in split)
                    lred = self.engine.reduce(_word_weight(n, left), {left: Q(1)})
                    rred = self.engine.reduce(_word_weight(n, right), {right: Q(1)})
                    ored = self.engine.reduce(_word_weight(n, other), {other: Q(1)})
                    for wl, cl in lred.items():
                        for wr, cr in rred.items():
                            for wo, co in ored.items():
                                key = (
                                    (wl, wr, wo) if slot == 0 else (wo, wl, wr)
                                )
                                val = c * cl * cr * co
                                out[key] = out.get(key, Q(0)) + val
                                if out[key] == 0:
                                    del out[key]
        return Tensor3Element(out)


class Tensor3Element:
    __slots__ = ("comps",)

    def __init__(self, comps: Dict[Tuple[Word, Word, Word], Q]):
        self.comps = {k: v for k, v in comps.items() if v}

    def __eq__(self, other):
        return isinstance(other, Tensor3Element) and self.comps == other.comps
