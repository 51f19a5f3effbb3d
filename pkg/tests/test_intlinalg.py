"""Exact linear algebra kernels."""

from fractions import Fraction as Q

from hypothesis import given, settings
from hypothesis import strategies as st

from kmtoolkit.intlinalg import (
    QSqrt2,
    complement_basis,
    hnf,
    is_saturated,
    kernel_basis,
    lattice_member,
    lattice_rank,
    qmat,
    rank,
    rref,
    saturate,
    snf_diagonal,
    solve_in_span,
)

ints = st.integers(min_value=-6, max_value=6)


def small_matrices(nrows=3, ncols=3):
    return st.lists(
        st.lists(ints, min_size=ncols, max_size=ncols), min_size=1, max_size=nrows
    )


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_hnf_spans_same_lattice(rows):
    h = hnf(rows)
    for r in rows:
        if any(r):
            assert lattice_member(h, r)
    for r in h:
        assert lattice_member(rows, r)


@settings(max_examples=100, deadline=None)
@given(small_matrices())
def test_snf_product_is_gcd_of_minors(rows):
    divs = snf_diagonal(rows)
    assert len(divs) == lattice_rank(rows)
    for i in range(len(divs) - 1):
        assert divs[i + 1] % divs[i] == 0


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_kernel_orthogonal(rows):
    mat = qmat(rows)
    for v in kernel_basis(mat):
        for row in mat:
            assert sum(a * b for a, b in zip(row, v)) == 0


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_saturation_is_saturated(rows):
    sat = saturate(rows, len(rows[0]))
    assert is_saturated(sat)
    for r in rows:
        if any(r):
            assert lattice_member(sat, r)


def test_complement_basis():
    rows = [[2, 1, 0], [0, 0, 1]]
    comp = complement_basis(rows, 3)
    assert lattice_rank(rows + comp) == 3
    assert is_saturated(hnf(rows + comp))


def test_solve_in_span():
    rows = qmat([[1, 2, 0], [0, 1, 1]])
    v = qmat([[2, 5, 1]])[0]
    c = solve_in_span(rows, v)
    assert c == [Q(2), Q(1)]
    assert solve_in_span(rows, qmat([[0, 0, 5]])[0]) is None


def test_rref_rank():
    assert rank(qmat([[1, 2], [2, 4]])) == 1
    red, piv = rref(qmat([[0, 1], [1, 0]]))
    assert piv == [0, 1]


class TestQSqrt2:
    def test_order(self):
        x = QSqrt2(1, 1)  # 1 + sqrt2 ~ 2.414
        assert x > 2 and x < Q(5, 2)
        assert QSqrt2(-1, 1) > 0  # sqrt2 - 1 > 0
        assert QSqrt2(3, -2) < 1  # 3 - 2 sqrt2 ~ 0.17

    def test_floor(self):
        assert QSqrt2(0, 1).floor() == 1
        assert QSqrt2(0, -1).floor() == -2
        assert QSqrt2(3).floor() == 3
        assert QSqrt2(Q(7, 2)).floor() == 3

    @settings(max_examples=100, deadline=None)
    @given(a=st.fractions(min_value=-8, max_value=8), b=st.fractions(min_value=-8, max_value=8))
    def test_sign_matches_float(self, a, b):
        import math

        x = QSqrt2(a, b)
        approx = float(a) + float(b) * math.sqrt(2)
        if abs(approx) > 1e-9:
            assert x.sign() == (1 if approx > 0 else -1)

    @settings(max_examples=60, deadline=None)
    @given(a=st.fractions(min_value=-8, max_value=8), b=st.fractions(min_value=-8, max_value=8))
    def test_floor_bracket(self, a, b):
        x = QSqrt2(a, b)
        n = x.floor()
        assert QSqrt2(n) <= x < QSqrt2(n + 1)
