"""Exact valued-field scalar models.

Model A: truncated Laurent series over a prime field in a uniformizer, with
explicit precision tracking (valuations are exact as long as a nonzero
coefficient is known, or the element is exactly zero).
Model B: rationals with the p-adic valuation; fully exact.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Dict, Optional

INF = Q(10**9)  # sentinel valuation of exact zero


class IndeterminateValuation(ArithmeticError):
    pass


class LaurentSeriesModel:
    """K = (prime field)((w)) with coefficients known up to a precision window."""

    def __init__(self, p: int, precision: int = 16):
        self.p = p
        self.precision = precision

    def el(self, coeffs: Dict[int, int], known_upto: Optional[int] = None) -> "TruncatedLaurent":
        return TruncatedLaurent(self, coeffs, known_upto)

    def zero(self) -> "TruncatedLaurent":
        return self.el({})

    def one(self) -> "TruncatedLaurent":
        return self.el({0: 1})

    def from_int(self, n: int) -> "TruncatedLaurent":
        return self.el({0: n % self.p})

    def uniformizer(self, k: int = 1) -> "TruncatedLaurent":
        return self.el({k: 1})

    def __repr__(self):
        return f"F{self.p}((w)) @ {self.precision}"

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeriesModel)
            and self.p == other.p
            and self.precision == other.precision
        )


class TruncatedLaurent:
    __slots__ = ("model", "coeffs", "known_upto")

    def __init__(self, model: LaurentSeriesModel, coeffs: Dict[int, int], known_upto=None):
        self.model = model
        p = model.p
        self.known_upto = known_upto
        self.coeffs = {
            k: v % p
            for k, v in coeffs.items()
            if v % p and (known_upto is None or k < known_upto)
        }

    @property
    def exact(self) -> bool:
        return self.known_upto is None

    def valuation(self) -> Q:
        known = [k for k in self.coeffs]
        if known:
            return Q(min(known))
        if self.exact:
            return INF
        raise IndeterminateValuation(
            f"zero within precision window (< {self.known_upto})"
        )

    def is_zero(self) -> bool:
        if self.coeffs:
            return False
        if self.exact:
            return True
        raise IndeterminateValuation("cannot certify zero at finite precision")

    def __add__(self, other: "TruncatedLaurent") -> "TruncatedLaurent":
        ku = _min_opt(self.known_upto, other.known_upto)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TruncatedLaurent(self.model, out, ku)

    def __neg__(self):
        return TruncatedLaurent(self.model, {k: -v for k, v in self.coeffs.items()}, self.known_upto)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TruncatedLaurent") -> "TruncatedLaurent":
        ku = None
        if self.known_upto is not None:
            v = _lowest(other)
            ku = _min_opt(ku, None if v is None else self.known_upto + v)
            if v is None:
                ku = _min_opt(ku, self.known_upto)  # conservative
        if other.known_upto is not None:
            v = _lowest(self)
            ku = _min_opt(ku, None if v is None else other.known_upto + v)
            if v is None:
                ku = _min_opt(ku, other.known_upto)
        out: Dict[int, int] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return TruncatedLaurent(self.model, out, ku)

    def inv(self) -> "TruncatedLaurent":
        v = self.valuation()
        if v >= INF:
            raise ZeroDivisionError("inverse of zero")
        v = int(v)
        lead = self.coeffs[v]
        p = self.model.p
        lead_inv = pow(lead, -1, p)
        # u = lead * w^v * (1 + eps); invert the unit by geometric series
        eps = {k - v: (c * lead_inv) % p for k, c in self.coeffs.items() if k != v}
        prec = self.model.precision
        if self.known_upto is not None:
            prec = min(prec, self.known_upto - v)
        acc = {0: 1}
        power = {0: 1}
        for _ in range(prec):
            power = _poly_mul_mod(power, {k: -c for k, c in eps.items()}, p, prec)
            if not power:
                break
            for k, c in power.items():
                acc[k] = (acc.get(k, 0) + c) % p
        out = {k - v: (c * lead_inv) % p for k, c in acc.items()}
        known = None if (self.exact and not eps) else (-v + prec)
        return TruncatedLaurent(self.model, out, known)

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return NotImplemented
        diff = self - other
        return diff.is_zero()

    def __hash__(self):
        if not self.exact:
            raise TypeError("inexact scalars are unhashable")
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        terms = [f"{v}w^{k}" if k else str(v) for k, v in sorted(self.coeffs.items())]
        s = "+".join(terms) or "0"
        if not self.exact:
            s += f"+O(w^{self.known_upto})"
        return s


def _lowest(x: "TruncatedLaurent") -> Optional[int]:
    return min(x.coeffs) if x.coeffs else (0 if x.exact else None)


def _min_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _poly_mul_mod(a: Dict[int, int], b: Dict[int, int], p: int, bound: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            if k1 + k2 < bound:
                out[k1 + k2] = (out.get(k1 + k2, 0) + v1 * v2) % p
    return {k: v for k, v in out.items() if v}


class PAdicModel:
    """K = Q with the p-adic valuation; exact arithmetic throughout."""

    def __init__(self, p: int):
        self.p = p

    def el(self, x) -> "PAdicRational":
        return PAdicRational(self, Q(x))

    def zero(self):
        return self.el(0)

    def one(self):
        return self.el(1)

    def from_int(self, n: int):
        return self.el(n)

    def uniformizer(self, k: int = 1):
        return self.el(Q(self.p) ** k)

    def __repr__(self):
        return f"Q with v_{self.p}"

    def __eq__(self, other):
        return isinstance(other, PAdicModel) and self.p == other.p


class PAdicRational:
    __slots__ = ("model", "value")

    def __init__(self, model: PAdicModel, value: Q):
        self.model = model
        self.value = Q(value)

    @property
    def exact(self) -> bool:
        return True

    def valuation(self) -> Q:
        if self.value == 0:
            return INF
        p = self.model.p
        num, den = self.value.numerator, self.value.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return Q(v)

    def is_zero(self) -> bool:
        return self.value == 0

    def __add__(self, other):
        return PAdicRational(self.model, self.value + other.value)

    def __neg__(self):
        return PAdicRational(self.model, -self.value)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return PAdicRational(self.model, self.value * other.value)

    def inv(self):
        return PAdicRational(self.model, 1 / self.value)

    def __eq__(self, other):
        return isinstance(other, PAdicRational) and self.value == other.value

    def __hash__(self):
        return hash(("padic", self.value))

    def __repr__(self):
        return str(self.value)
