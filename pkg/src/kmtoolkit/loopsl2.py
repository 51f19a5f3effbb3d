"""The concrete loop model: SL_2 over Laurent polynomials in t with valued
coefficients, its generators, the induced affine action, fixator-membership
predicates, free-product normal forms, lattice-chain filtrations and the
defining relation checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import INF, IndeterminateValuation, LaurentSeriesModel, PAdicModel

Entry = Dict[int, object]  # t-exponent -> scalar


class NotARealRoot(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class NotInN(ValueError):
    pass


class NotInUPlus(ValueError):
    pass


class PrecisionInsufficient(ValueError):
    pass


class StepCapExceeded(RuntimeError):
    pass


class LaurentMatrix:
    """Square matrix with entries finite Laurent polynomials in t over a
    valued scalar model."""

    def __init__(self, model, entries: Sequence[Sequence[Entry]]):
        self.model = model
        self.m = len(entries)
        self.entries = [
            [
                {k: v for k, v in entry.items() if not _surely_zero(v)}
                for entry in row
            ]
            for row in entries
        ]

    # -- constructors
    @classmethod
    def identity(cls, model, m: int = 2) -> "LaurentMatrix":
        return cls(
            model,
            [
                [{0: model.one()} if i == j else {} for j in range(m)]
                for i in range(m)
            ],
        )

    @classmethod
    def from_coeff_lists(cls, model, data) -> "LaurentMatrix":
        """Entries as lists of (t-exponent, coefficient) pairs; coefficients
        as lists of (uniformizer-exponent, field-element) pairs."""
        rows = []
        for row in data:
            out_row = []
            for entry in row:
                e: Entry = {}
                for texp, coeff in entry:
                    e[int(texp)] = model.el({int(a): int(b) for a, b in coeff})
                out_row.append(e)
            rows.append(out_row)
        return cls(model, rows)

    def to_coeff_lists(self):
        out = []
        for row in self.entries:
            out_row = []
            for entry in row:
                out_row.append(
                    [
                        [k, sorted([int(a), int(b)] for a, b in entry[k].coeffs.items())]
                        for k in sorted(entry)
                    ]
                )
            out.append(out_row)
        return out

    # -- algebra
    def __mul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        m = self.m
        out = [[{} for _ in range(m)] for _ in range(m)]
        for i in range(m):
            for j in range(m):
                acc: Entry = {}
                for k in range(m):
                    for e1, c1 in self.entries[i][k].items():
                        for e2, c2 in other.entries[k][j].items():
                            e = e1 + e2
                            prod = c1 * c2
                            acc[e] = acc[e] + prod if e in acc else prod
                out[i][j] = acc
        return LaurentMatrix(self.model, out)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix) or self.m != other.m:
            return NotImplemented
        for i in range(self.m):
            for j in range(self.m):
                if not _entry_eq(self.entries[i][j], other.entries[i][j], self.model):
                    return False
        return True

    def det(self) -> Entry:
        from itertools import permutations

        m = self.m
        acc: Entry = {}
        for perm in permutations(range(m)):
            sign = _perm_sign(perm)
            term: Entry = {0: self.model.one()}
            ok = True
            for i in range(m):
                term = _entry_mul(term, self.entries[i][perm[i]])
                if not term:
                    ok = False
                    break
            if not ok:
                continue
            for e, c in term.items():
                add = c if sign > 0 else -c
                acc[e] = acc[e] + add if e in acc else add
        return {e: c for e, c in acc.items() if not _surely_zero(c)}

    def is_sl(self) -> bool:
        d = self.det()
        one = self.model.one()
        return _entry_eq(d, {0: one}, self.model)

    def entry(self, i: int, j: int) -> Entry:
        return dict(self.entries[i][j])

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(
            self.model,
            [[self.entries[j][i] for j in range(self.m)] for i in range(self.m)],
        )

    def inverse2(self) -> "LaurentMatrix":
        """Inverse for m = 2 with det 1: adjugate."""
        assert self.m == 2
        a, b, c, d = (
            self.entries[0][0],
            self.entries[0][1],
            self.entries[1][0],
            self.entries[1][1],
        )
        return LaurentMatrix(
            self.model,
            [[d, _entry_neg(b)], [_entry_neg(c), a]],
        )

    def t_support(self) -> Tuple[int, int]:
        exps = [e for row in self.entries for entry in row for e in entry]
        return (min(exps), max(exps)) if exps else (0, 0)

    def is_monomial(self) -> bool:
        """Diagonal or antidiagonal with single-term entries."""
        diag = all(
            (len(self.entries[i][j]) == (1 if i == j else 0))
            for i in range(self.m)
            for j in range(self.m)
        )
        anti = self.m == 2 and all(
            (len(self.entries[i][j]) == (1 if i != j else 0))
            for i in range(2)
            for j in range(2)
        )
        return diag or anti

    def __repr__(self):
        def fmt(entry):
            return (
                " + ".join(f"({c})t^{e}" if e else f"({c})" for e, c in sorted(entry.items()))
                or "0"
            )

        rows = ["[" + ", ".join(fmt(e) for e in row) + "]" for row in self.entries]
        return "[" + "; ".join(rows) + "]"


def _surely_zero(c) -> bool:
    try:
        return c.is_zero()
    except IndeterminateValuation:
        return False


def _entry_eq(a: Entry, b: Entry, model) -> bool:
    keys = set(a) | set(b)
    z = model.zero()
    for k in keys:
        x = a.get(k, z)
        y = b.get(k, z)
        if not _surely_zero(x - y):
            return False
    return True


def _entry_mul(a: Entry, b: Entry) -> Entry:
    out: Entry = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            prod = c1 * c2
            out[e] = out[e] + prod if e in out else prod
    return {e: c for e, c in out.items() if not _surely_zero(c)}


def _entry_neg(a: Entry) -> Entry:
    return {e: -c for e, c in a.items()}


def _perm_sign(perm) -> int:
    sign = 1
    seen = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        k = start
        while k not in seen:
            seen.add(k)
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# roots and generators (m = 2 loop model)


def _root_shape(coords: Tuple[int, int]) -> Tuple[int, int]:
    """(epsilon, t-power) for a real root n0*alpha0 + n1*alpha1."""
    n0, n1 = coords
    eps = n1 - n0
    if eps not in (-1, 1):
        raise NotARealRoot(f"{coords} is not a real root of the loop model")
    return eps, n0


def root_generator_matrix(model, coords: Tuple[int, int]) -> "LaurentMatrix":
    """The matrix M with x_alpha(r) = 1 + r*M (nilpotent), following the
    integral basis conventions of the loop realization."""
    eps, mexp = _root_shape(coords)
    one = model.one()
    if eps == 1:
        c = one if mexp >= 0 else -one
        return LaurentMatrix(model, [[{}, {mexp: c}], [{}, {}]])
    c = one if mexp >= 1 else -one
    return LaurentMatrix(model, [[{}, {}], [{mexp: c}, {}]])


def root_element(model, coords: Tuple[int, int], r) -> "LaurentMatrix":
    """x_alpha(r) for a real root of the loop model."""
    eps, mexp = _root_shape(coords)
    g = LaurentMatrix.identity(model, 2)
    nil = root_generator_matrix(model, coords)
    ent = [[dict(e) for e in row] for row in g.entries]
    for i in range(2):
        for j in range(2):
            for e, c in nil.entries[i][j].items():
                add = r * c
                ent[i][j][e] = ent[i][j][e] + add if e in ent[i][j] else add
    return LaurentMatrix(model, ent)


def s_tilde(model, coords: Tuple[int, int], r) -> "LaurentMatrix":
    """x_alpha(r) x_{-alpha}(r^{-1}) x_alpha(r)."""
    neg = (-coords[0], -coords[1])
    return root_element(model, coords, r) * root_element(model, neg, r.inv()) * root_element(model, coords, r)


def coroot_element(model, coroot_h: int, r) -> "LaurentMatrix":
    """diag(r, r^{-1})^h for a coroot c*h in Y = Zh."""
    rinv = r.inv()
    a = _power(r, coroot_h) if coroot_h >= 0 else _power(rinv, -coroot_h)
    d = _power(rinv, coroot_h) if coroot_h >= 0 else _power(r, -coroot_h)
    return LaurentMatrix(model, [[{0: a}, {}], [{}, {0: d}]])


def _power(x, k: int):
    out = x.model.one()
    for _ in range(k):
        out = out * x
    return out


# ---------------------------------------------------------------------------
# the induced affine action on the witness apartment


@dataclass(frozen=True)
class AffineMapAD:
    """Affine map on (alpha_1-value, delta-value) coordinates:
    (a, d) -> (la*a + ld*d + ta, d + td)."""

    la: Q
    ld: Q
    ta: Q
    td: Q = Q(0)
    reflection: bool = False

    def apply(self, a, d):
        return (self.la * a + self.ld * d + self.ta, d + self.td)

    def is_identity(self) -> bool:
        return self.la == 1 and self.ld == 0 and self.ta == 0 and self.td == 0


def nu_of(g: LaurentMatrix) -> AffineMapAD:
    """Affine action of a monomial matrix: diag(c t^k, ...) acts by
    (a, d) -> (a - 2 w(c) - 2 k d, d); antidiagonal entries act by the
    corresponding reflections."""
    if g.m != 2 or not g.is_monomial():
        raise NotInN("matrix is not monomial")
    if g.entries[0][0]:
        ((k, c),) = g.entries[0][0].items()
        w = c.valuation()
        return AffineMapAD(Q(1), Q(-2 * k), Q(-2) * w)
    ((k, c),) = g.entries[0][1].items()
    w = c.valuation()
    return AffineMapAD(Q(-1), Q(-2 * k), Q(-2) * w, Q(0), True)


# ---------------------------------------------------------------------------
# fixator specifications


@dataclass(frozen=True)
class FixatorSpec:
    tag: str
    p: int = 0
    q: Q = Q(0)
    r: Q = Q(0)
    n: int = 0

    KNOWN = (
        "U0_ma_plus",
        "U0_pm_plus",
        "U0_ma_minus",
        "U0_nm_minus",
        "UOmega_p_ma_plus",
        "UOmega_p_pm_plus",
        "UOmega_p_nm_minus",
        "G_Omega_p",
        "G_qr",
    )


def _coeff_val(c) -> Q:
    return c.valuation()


def fixator_member(g: LaurentMatrix, spec: FixatorSpec) -> bool:
    """Entrywise congruence/valuation conditions; raises on indeterminate
    valuations."""
    if g.m != 2:
        raise ValueError("fixator predicates are for the 2x2 loop model")
    a, b, c, d = (
        g.entries[0][0],
        g.entries[0][1],
        g.entries[1][0],
        g.entries[1][1],
    )
    one = g.model.one()
    tag = spec.tag

    def all_integral(*entries):
        return all(_coeff_val(cc) >= 0 for e in entries for cc in e.values())

    def no_exponent_below(entry, bound):
        return all(e >= bound for e in entry)

    def no_exponent_above(entry, bound):
        return all(e <= bound for e in entry)

    def congruent_one_mod_t(entry):
        z = entry.get(0, g.model.zero())
        return _surely_zero(z - one) and no_exponent_below(entry, 0)

    def congruent_one_mod_tinv(entry):
        z = entry.get(0, g.model.zero())
        return _surely_zero(z - one) and no_exponent_above(entry, 0)

    if tag in ("U0_ma_plus", "U0_pm_plus"):
        return (
            all_integral(a, b, c, d)
            and all(no_exponent_below(e, 0) for e in (a, b, c, d))
            and congruent_one_mod_t(a)
            and congruent_one_mod_t(d)
            and no_exponent_below(c, 1)
        )
    if tag in ("U0_ma_minus", "U0_nm_minus"):
        return (
            all_integral(a, b, c, d)
            and all(no_exponent_above(e, 0) for e in (a, b, c, d))
            and congruent_one_mod_tinv(a)
            and congruent_one_mod_tinv(d)
            and no_exponent_above(b, -1)
        )
    if tag in ("UOmega_p_ma_plus", "UOmega_p_pm_plus"):
        return (
            all_integral(a, b, c, d)
            and all(no_exponent_below(e, 0) for e in (a, b, c, d))
            and congruent_one_mod_t(a)
            and congruent_one_mod_t(d)
            and no_exponent_below(c, 1)
            and all(_coeff_val(cc) >= spec.p for cc in c.values())
        )
    if tag == "UOmega_p_nm_minus":
        return (
            all_integral(a, b, d)
            and all(no_exponent_above(e, 0) for e in (a, b, c, d))
            and congruent_one_mod_tinv(a)
            and congruent_one_mod_tinv(d)
            and no_exponent_above(b, -1)
            and all(_coeff_val(cc) >= spec.p for cc in c.values())
        )
    if tag == "G_Omega_p":
        return all_integral(a, b, d) and all(
            _coeff_val(cc) >= spec.p for cc in c.values()
        )
    if tag == "G_qr":
        q, r = Q(spec.q), Q(spec.r)
        for entry, shift in ((a, Q(0)), (d, Q(0)), (b, q), (c, -q)):
            for j, cc in entry.items():
                if _coeff_val(cc) + j * r + shift < 0:
                    return False
        return True
    raise ValueError(f"unknown fixator tag {tag!r}")


def c2_admissible_r_bound(g: LaurentMatrix, p: int, q: Q) -> Q:
    """Largest |r| guaranteed for membership of an element of the p-th
    two-point fixator in the one-point fixator family at level (q, r)."""
    lo, hi = g.t_support()
    deg = max(abs(lo), abs(hi), 1)
    return min(Q(1), Q(q), Q(p) - Q(q)) / deg


def erratum_c2_crosscheck(g: LaurentMatrix, p: int, grid: Optional[List[Tuple[Q, Q]]] = None) -> dict:
    """Check membership in the (q, r) fixator family over a rational grid
    within the guaranteed range 0 < q < p, |r| bounded by the entry degrees."""
    if not fixator_member(g, FixatorSpec("UOmega_p_pm_plus", p=p)):
        raise ValueError("matrix is not in the stated two-point fixator")
    if grid is None:
        grid = []
        for kq in range(1, 6):
            q = Q(p) * Q(kq, 6)
            rb = c2_admissible_r_bound(g, p, q)
            for kr in range(-2, 3):
                grid.append((q, rb * Q(kr, 2)))
    results = []
    ok = True
    for q, r in grid:
        if not (0 < q < p):
            results.append({"q": str(q), "r": str(r), "status": "out-of-range"})
            continue
        member = fixator_member(g, FixatorSpec("G_qr", q=q, r=r))
        ok = ok and member
        results.append({"q": str(q), "r": str(r), "status": "member" if member else "FAIL"})
    return {"all_member": ok, "grid": results}


# ---------------------------------------------------------------------------
# free-product normal form in the positive unipotent group


@dataclass
class FreeProductWord:
    factors: List[Tuple[str, Entry]]  # ("s", poly in t) or ("i", poly in t*K[t])

    def evaluate(self, model) -> LaurentMatrix:
        out = LaurentMatrix.identity(model, 2)
        for kind, poly in self.factors:
            if kind == "s":
                mat = LaurentMatrix(model, [[{0: model.one()}, dict(poly)], [{}, {0: model.one()}]])
            else:
                mat = LaurentMatrix(model, [[{0: model.one()}, {}], [dict(poly), {0: model.one()}]])
            out = out * mat
        return out


def _poly_deg(entry: Entry) -> int:
    return max(entry) if entry else -1


def _poly_quotient(num: Entry, den: Entry, model) -> Entry:
    """Euclidean quotient of polynomials in t over the scalar field."""
    num = dict(num)
    dd = _poly_deg(den)
    lead_inv = den[dd].inv()
    quo: Entry = {}
    while _poly_deg(num) >= dd and num:
        dn = _poly_deg(num)
        coeff = num[dn] * lead_inv
        quo[dn - dd] = coeff
        for e, c in den.items():
            k = e + dn - dd
            cur = num.get(k, model.zero()) - coeff * c
            if _surely_zero(cur):
                num.pop(k, None)
            else:
                num[k] = cur
    return quo


def free_product_normal_form(g: LaurentMatrix) -> FreeProductWord:
    """Alternating factors by Euclidean degree peeling; round-trips exactly."""
    model = g.model
    a, b = dict(g.entries[0][0]), dict(g.entries[0][1])
    c, d = dict(g.entries[1][0]), dict(g.entries[1][1])
    for entry in (a, b, c, d):
        if any(e < 0 for e in entry):
            raise NotInUPlus("entries must be polynomials in t")
    if not _entry_eq({0: a.get(0, model.zero())}, {0: model.one()}, model) or not _entry_eq(
        {0: d.get(0, model.zero())}, {0: model.one()}, model
    ):
        raise NotInUPlus("must be unipotent modulo t")
    if 0 in c and not _surely_zero(c[0]):
        raise NotInUPlus("lower-left entry must vanish modulo t")
    if not g.is_sl():
        raise NotInUPlus("determinant must be 1")
    factors: List[Tuple[str, Entry]] = []
    cap = 200
    while cap:
        cap -= 1
        if not c:
            # a d = 1 with unipotent normalization forces a = d = 1
            if b:
                factors.append(("s", dict(b)))
            break
        if _poly_deg(a) >= _poly_deg(c):
            q = _poly_quotient(a, c, model)
            factors.append(("s", dict(q)))
            # g <- u^s(-q) g
            a = _poly_sub(a, _poly_mul(q, c, model), model)
            b = _poly_sub(b, _poly_mul(q, d, model), model)
        else:
            qfull = _poly_quotient(c, a, model)
            q = {e: cc for e, cc in qfull.items() if e >= 1}
            if not q:
                raise NotInUPlus("peeling failed: no positive-degree quotient")
            factors.append(("i", dict(q)))
            c = _poly_sub(c, _poly_mul(q, a, model), model)
            d = _poly_sub(d, _poly_mul(q, b, model), model)
    else:
        raise StepCapExceeded("normal form did not terminate")
    word = FreeProductWord(factors)
    if not (word.evaluate(model) == g):
        raise AssertionError("normal form failed to round-trip")
    return word


def _poly_mul(a: Entry, b: Entry, model) -> Entry:
    return _entry_mul(a, b)


def _poly_sub(a: Entry, b: Entry, model) -> Entry:
    out = dict(a)
    for e, c in b.items():
        cur = out.get(e, model.zero()) - c
        if _surely_zero(cur):
            out.pop(e, None)
        else:
            out[e] = cur
    return out


def in_U0_plusplus(g: LaurentMatrix) -> bool:
    """Membership in the subgroup generated by the integral generators: all
    factors of the reduced word must have integral coefficients."""
    word = free_product_normal_form(g)
    for _, poly in word.factors:
        for coeff in poly.values():
            if coeff.valuation() < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# lattice-chain filtration for SL_m loops


def filtration_index(g: LaurentMatrix, cap: int = 64) -> Optional[int]:
    """Largest n with (g - 1) V_i inside V_{i+n} for the standard lattice
    chain; None means at least the cap (identity within support)."""
    m = g.m
    best = None
    one = g.model.one()
    for i in range(m):
        for j in range(m):
            entry = dict(g.entries[i][j])
            if i == j:
                z = entry.get(0, g.model.zero()) - one
                if _surely_zero(z):
                    entry.pop(0, None)
                else:
                    entry[0] = z
            for e, cc in entry.items():
                if _surely_zero(cc):
                    continue
                level = e * m + (j - i)
                best = level if best is None else min(best, level)
    return best


# ---------------------------------------------------------------------------
# twisted exponential images


def twisted_exp_image(model, lam, n: int, precision: int) -> LaurentMatrix:
    """diag(1 + lam t^n + ... + lam^P t^{nP}, 1 - lam t^n)."""
    if precision < n:
        raise ValueError("precision must be at least n")
    u: Entry = {}
    power = model.one()
    for p in range(precision + 1):
        u[n * p] = power
        power = power * lam
    v: Entry = {0: model.one(), n: -lam}
    return LaurentMatrix(model, [[u, {}], [{}, v]])

# ---------------------------------------------------------------------------
# the loop representation of the abstract minimal datum


def pi_word_matrix(model, word: Sequence[int]) -> LaurentMatrix:
    """Image of a generator word (indices over the minimal loop datum:
    0 -> t E21, 1 -> E12) under the natural representation."""
    e0 = LaurentMatrix(model, [[{}, {}], [{1: model.one()}, {}]])
    e1 = LaurentMatrix(model, [[{}, {0: model.one()}], [{}, {}]])
    out = None
    for i in word:
        mat = e1 if i == 1 else e0
        out = mat if out is None else out * mat
    return out if out is not None else LaurentMatrix.identity(model, 2)


def pi_algebra_element(model, el, weight) -> LaurentMatrix:
    """Image of a positive-part element of the minimal loop datum's algebra."""
    acc = LaurentMatrix(model, [[{}, {}], [{}, {}]])
    vec = el.pos.get(tuple(weight), {})
    for word, coeff in vec.items():
        mat = pi_word_matrix(model, word)
        num, den = Q(coeff).numerator, Q(coeff).denominator
        scal = model.from_int(num) * model.from_int(den).inv()
        ent = [
            [
                {e: scal * c for e, c in mat.entries[i][j].items()}
                for j in range(2)
            ]
            for i in range(2)
        ]
        add = LaurentMatrix(model, ent)
        acc = _matrix_add(acc, add)
    return acc


def _matrix_add(x: LaurentMatrix, y: LaurentMatrix) -> LaurentMatrix:
    ent = []
    for i in range(x.m):
        row = []
        for j in range(x.m):
            e = dict(x.entries[i][j])
            for k, c in y.entries[i][j].items():
                e[k] = e[k] + c if k in e else c
            row.append(e)
        ent.append(row)
    return LaurentMatrix(x.model, ent)


# ---------------------------------------------------------------------------
# defining relation checks in the loop model


def check_steinberg_relations(model, samples: Optional[dict] = None) -> dict:
    """Matrix verification of the commutator and torus/reflection relations
    for sampled parameters; the commutator constants come from the abstract
    algebra via the prenilpotent-pair machinery."""
    from .instances import tilde_a1_minimal
    from .liealg import build
    from .weyl import real_roots, is_prenilpotent, interval

    datum = tilde_a1_minimal()
    g = build(datum, 6)
    reals = real_roots(datum.matrix, 6)
    report = {}

    rs = [model.from_int(1), model.from_int(2), model.uniformizer(1)]
    units = [model.from_int(1), model.from_int(model.p - 1 if hasattr(model, "p") else 2)]

    # KMT3: commutators of prenilpotent pairs match the constants table
    pairs = [
        ((0, 1), (1, 2)),  # alpha_1, alpha_1 + delta
        ((0, 1), (2, 3)),  # alpha_1, alpha_1 + 2 delta
        ((1, 0), (2, 1)),  # alpha_0, alpha_0 + delta
        ((0, -1), (-1, -2)),
        ((1, 2), (2, 3)),
    ]
    ok3 = True
    details3 = []
    from .liealg import GradedLieAlgebra  # noqa: F401
    from .commutators import commutator_constants

    for alpha, beta in pairs:
        res = is_prenilpotent(datum.matrix, alpha, beta)
        if res.status != "true":
            details3.append({"pair": [alpha, beta], "status": res.status})
            ok3 = False
            continue
        table = commutator_constants(g, alpha, beta, reals)
        for r in rs[:2]:
            for rp in rs[:2]:
                lhs = (
                    root_element(model, alpha, r)
                    * root_element(model, beta, rp)
                    * root_element(model, alpha, -r)
                    * root_element(model, beta, -rp)
                )
                rhs = LaurentMatrix.identity(model, 2)
                for (p, q, gamma), cval in table:
                    coeff = model.from_int(cval)
                    rr = _power(r, p) * _power(rp, q) * coeff
                    rhs = rhs * root_element(model, gamma, rr)
                if not (lhs == rhs):
                    ok3 = False
        details3.append({"pair": [list(alpha), list(beta)], "status": "checked"})
    report["KMT3"] = {"ok": ok3, "pairs": details3}

    # KMT4: torus conjugation scales root groups by the root value
    ok4 = True
    for s in units:
        t_mat = coroot_element(model, 1, s)  # diag(s, s^-1)
        for coords in [(0, 1), (1, 0), (1, 2)]:
            eps, _ = _root_shape(coords)
            val = _power(s, 2) if eps == 1 else _power(s.inv(), 2)
            for r in rs:
                lhs = t_mat * root_element(model, coords, r) * coroot_element(model, 1, s.inv())
                rhs = root_element(model, coords, val * r)
                ok4 = ok4 and (lhs == rhs)
    report["KMT4"] = {"ok": ok4}

    # KMT5: s~ conjugates the torus by the reflection
    ok5 = True
    for s in units:
        t_mat = coroot_element(model, 1, s)
        st = s_tilde(model, (0, 1), model.one())
        lhs = st * t_mat * st.inverse2()
        rhs = coroot_element(model, 1, s.inv())  # s_alpha(diag(s,1/s)) = diag(1/s,s)
        ok5 = ok5 and (lhs == rhs)
    report["KMT5"] = {"ok": ok5}

    # KMT6: s~(1/r) = s~ * coroot(r)
    ok6 = True
    for r in units:
        lhs = s_tilde(model, (0, 1), r.inv())
        rhs = s_tilde(model, (0, 1), model.one()) * coroot_element(model, 1, r)
        ok6 = ok6 and (lhs == rhs)
        lhs0 = s_tilde(model, (1, 0), r.inv())
        rhs0 = s_tilde(model, (1, 0), model.one()) * coroot_element(model, -1, r)
        ok6 = ok6 and (lhs0 == rhs0)
    report["KMT6"] = {"ok": ok6}

    # KMT7: s~ conjugates root groups with the sign of the algebra automorphism
    ok7 = True
    details7 = []
    for simple in ((0, 1), (1, 0)):
        st = s_tilde(model, simple, model.one())
        sidx = 1 if simple == (0, 1) else 0
        for coords in [(0, 1), (1, 0), (1, 2), (2, 1), (0, -1)]:
            from .weyl import reflect_root

            gamma = reflect_root(datum.matrix, sidx, coords)
            sign = _kmt7_sign(g, model, sidx, coords, gamma, reals)
            for r in rs:
                lhs = st * root_element(model, coords, r) * st.inverse2()
                rhs = root_element(
                    model, gamma, r if sign == 1 else -r
                )
                if not (lhs == rhs):
                    ok7 = False
            details7.append({"root": list(coords), "image": list(gamma), "sign": sign})
    report["KMT7"] = {"ok": ok7, "details": details7}
    report["ok"] = all(report[k]["ok"] for k in ("KMT3", "KMT4", "KMT5", "KMT6", "KMT7"))
    return report


def _kmt7_sign(g, model, simple_idx: int, coords, gamma, reals) -> int:
    """Sign in s*(e_beta) = sign * e_gamma, computed in the abstract algebra
    with both vectors normalized through the loop representation."""
    from .liealg import AlgElement

    ebeta = _loop_normalized_vector(g, model, coords, reals)
    image = g.s_star(simple_idx, ebeta)
    egamma = _loop_normalized_vector(g, model, gamma, reals)
    # compare image with +- egamma
    if _alg_eq(image, egamma):
        return 1
    if _alg_eq(image, egamma.scale(-1)):
        return -1
    raise AssertionError("reflection image is not +- the normalized basis vector")


def _alg_eq(x, y) -> bool:
    return (x - y).is_zero()


def _loop_normalized_vector(g, model, coords, reals):
    """Abstract weight vector whose loop image is the convention matrix."""
    from .liealg import AlgElement

    coords = tuple(coords)
    if all(c >= 0 for c in coords):
        basis = g.integral_basis(coords)
        assert len(basis) == 1
        el = AlgElement(pos={coords: basis[0]}, y_rank=g.datum.y_rank)
        mat = pi_algebra_element(model, el, coords)
        target = root_generator_matrix(model, coords)
        if mat == target:
            return el
        neg = LaurentMatrix(
            model,
            [[_entry_neg(e) for e in row] for row in target.entries],
        )
        if mat == neg:
            return el.scale(-1)
        raise AssertionError("loop image is not +- the convention matrix")
    # negative root: mirror of the positive one; [e, f] = -coroot fixes it
    pos = tuple(-c for c in coords)
    epos = _loop_normalized_vector(g, model, pos, reals)
    fvec = AlgElement(
        neg={pos: next(iter(epos.pos.values()))}, y_rank=g.datum.y_rank
    )
    # mirror of the normalized positive vector; check the pairing sign and
    # then compare against the convention by conjugating matrices is not
    # available (negative part has no direct representation here), so use
    # the bracket normalization [e_alpha, f_alpha] = -coroot(alpha).
    br = g.bracket(epos, fvec)
    coroot = _loop_coroot(g, pos)
    if br.h == [-c for c in coroot]:
        return fvec
    if br.h == list(coroot):
        return fvec.scale(-1)
    raise AssertionError("pairing is not +- the coroot")


def _loop_coroot(g, pos_coords):
    """Coroot of a real root in the minimal loop datum (Y = Zh)."""
    eps = pos_coords[1] - pos_coords[0]
    return [Q(eps)]


# ---------------------------------------------------------------------------
# best-effort constructive Iwasawa decomposition


def _entry_badness(entry: Entry) -> Q:
    bad = Q(0)
    for e, c in entry.items():
        v = c.valuation()
        if v < 0:
            bad += -v
    return bad


def _potential(g: LaurentMatrix) -> Q:
    bad = sum((_entry_badness(g.entries[i][j]) for i in range(2) for j in range(2)), Q(0))
    lo, hi = g.t_support()
    terms = sum(len(g.entries[i][j]) for i in range(2) for j in range(2))
    return bad * 100 + (hi - lo) * 2 + terms


def iwasawa_decompose(g: LaurentMatrix, step_cap: int = 400):
    """g = u * n * k with u in the positive unipotent group (polynomials in
    t, unipotent mod t), n monomial, k integral; greedy potential descent.

    The existence is a theorem; this search can fail (StepCapExceeded)."""
    model = g.model
    if not g.is_sl():
        raise ValueError("need determinant 1")
    u_acc = LaurentMatrix.identity(model, 2)
    k_acc = LaurentMatrix.identity(model, 2)
    core = g
    steps = 0
    while True:
        if _is_integral(core):
            return u_acc, LaurentMatrix.identity(model, 2), core * k_acc
        if core.is_monomial():
            return u_acc, core, k_acc
        diag_part = _try_monomial_times_integral(core)
        if diag_part is not None:
            n_mat, k_mat = diag_part
            return u_acc, n_mat, k_mat * k_acc
        steps += 1
        if steps > step_cap:
            raise StepCapExceeded("no decomposition found within the step cap")
        best = None
        cur_pot = _potential(core)
        for move, new_core, left, right in _iwasawa_moves(core):
            pot = _potential(new_core)
            if pot < cur_pot and (best is None or pot < best[0]):
                best = (pot, new_core, left, right)
        if best is None:
            raise StepCapExceeded("stuck: no potential-decreasing move")
        _, core, left, right = best
        if left is not None:
            u_acc = u_acc * left
        if right is not None:
            k_acc = right * k_acc


def _is_integral(g: LaurentMatrix) -> bool:
    try:
        return all(
            c.valuation() >= 0
            for i in range(2)
            for j in range(2)
            for c in g.entries[i][j].values()
        )
    except IndeterminateValuation:
        return False


def _try_monomial_times_integral(core: LaurentMatrix):
    """core = n * k with n monomial (diagonal off the a-entry, antidiagonal
    off the b-entry) and k integral, when that works."""
    model = core.model
    a = core.entries[0][0]
    b = core.entries[0][1]
    candidates = []
    if len(a) == 1:
        ((e, c),) = a.items()
        candidates.append(LaurentMatrix(model, [[{e: c}, {}], [{}, {-e: c.inv()}]]))
    if not a and len(b) == 1:
        ((e, c),) = b.items()
        candidates.append(LaurentMatrix(model, [[{}, {e: c}], [{-e: -(c.inv())}, {}]]))
    for n_mat in candidates:
        k_mat = n_mat.inverse2() * core
        if _is_integral(k_mat):
            return n_mat, k_mat
    return None


def _iwasawa_moves(core: LaurentMatrix):
    """Candidate moves: left peeling by unipotent factors over K, right
    multiplication by integral elementary matrices or the standard swap."""
    model = core.model
    one = model.one()
    a, b = core.entries[0][0], core.entries[0][1]
    c, d = core.entries[1][0], core.entries[1][1]
    cands = []

    def left_upper(q: Entry):
        mat = LaurentMatrix(model, [[{0: one}, q], [{}, {0: one}]])
        inv = LaurentMatrix(model, [[{0: one}, _entry_neg(q)], [{}, {0: one}]])
        return ("Ls", inv * core, mat, None)

    def left_lower(q: Entry):
        mat = LaurentMatrix(model, [[{0: one}, {}], [q, {0: one}]])
        inv = LaurentMatrix(model, [[{0: one}, {}], [_entry_neg(q), {0: one}]])
        return ("Li", inv * core, mat, None)

    def right_upper(q: Entry):
        mat = LaurentMatrix(model, [[{0: one}, q], [{}, {0: one}]])
        inv = LaurentMatrix(model, [[{0: one}, _entry_neg(q)], [{}, {0: one}]])
        return ("Rs", core * inv, None, mat)

    def right_lower(q: Entry):
        mat = LaurentMatrix(model, [[{0: one}, {}], [q, {0: one}]])
        inv = LaurentMatrix(model, [[{0: one}, {}], [_entry_neg(q), {0: one}]])
        return ("Ri", core * inv, None, mat)

    # monomial candidates from entry ratios; the pairing matches the row or
    # column operation each elementary factor performs
    for num, den, makers in (
        (a, c, (left_upper,)),
        (b, d, (left_upper,)),
        (c, a, (left_lower,)),
        (d, b, (left_lower,)),
        (b, a, (right_upper,)),
        (d, c, (right_upper,)),
        (a, b, (right_lower,)),
        (c, d, (right_lower,)),
    ):
        qs: List[Entry] = []
        for e1, c1 in num.items():
            for e2, c2 in den.items():
                try:
                    ratio = c1 * c2.inv()
                except (ZeroDivisionError, IndeterminateValuation):
                    continue
                if not ratio.exact:
                    continue  # keep the search in exact arithmetic
                qs.append({e1 - e2: ratio})
        if num and den:
            try:
                quo = _poly_quotient(num, den, model)
                if quo and all(cc.exact for cc in quo.values()):
                    qs.append(quo)
            except (ZeroDivisionError, IndeterminateValuation):
                pass
        for q0 in qs:
            for sign in (1, -1):
                q = {e: (cc if sign > 0 else -cc) for e, cc in q0.items()}
                for mk in makers:
                    if mk in (right_upper, right_lower) and any(
                        cc.valuation() < 0 for cc in q.values()
                    ):
                        continue  # right factors must stay integral
                    if mk is left_upper and any(e < 0 for e in q):
                        continue  # left factors must stay in the unipotent group
                    if mk is left_lower and any(e < 1 for e in q):
                        continue
                    cands.append(mk(q))
    # the standard integral swap on the right
    swap = LaurentMatrix(model, [[{}, {0: one}], [{0: -one}, {}]])
    cands.append(("Rw", core * swap.inverse2(), None, swap))
    return cands
