"""Named root generating systems used throughout the toolkit and its tests."""

from __future__ import annotations

from .cartan import KacMoodyMatrix, validate_matrix
from .rootdata import RootDatum, build_simply_connected

A1 = validate_matrix([[2]])
A2 = validate_matrix([[2, -1], [-1, 2]])
C2 = validate_matrix([[2, -1], [-2, 2]])
A1xA1 = validate_matrix([[2, 0], [0, 2]])
TILDE_A1 = validate_matrix([[2, -2], [-2, 2]])


def rank2_matrix(m: int) -> KacMoodyMatrix:
    """The symmetric rank-2 matrix with off-diagonal -m."""
    return validate_matrix([[2, -m], [-m, 2]])


def affine_slm_matrix(m: int) -> KacMoodyMatrix:
    """Cyclic affine matrix of the loop groups of SL_m (m >= 3): index set
    {0..m-1}, a[i][j] = -1 for adjacent indices mod m."""
    if m < 3:
        raise ValueError("use TILDE_A1 for m = 2")
    a = [[2 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        a[i][(i + 1) % m] = -1
        a[i][(i - 1) % m] = -1
    return validate_matrix(a)


def tilde_a1_minimal() -> RootDatum:
    """The loop model datum: Y = Zh, roots +-2 on h, coroots +-h.

    Its complex algebra is sl_2 tensored with Laurent polynomials; index 1 is
    the classical root (upper triangular), index 0 the affine one.
    """
    return RootDatum(
        validate_matrix([[2, -2], [-2, 2]]),
        1,
        alpha_bar=[[-2], [2]],  # index order (0, 1)
        alpha_check=[[-1], [1]],
        name="tilde-a1-minimal",
    )


def tilde_a1_ell() -> RootDatum:
    """The free extension Y^l = Zh + Zd of the minimal loop datum, with the
    degree direction d paired against delta = alpha_0 + alpha_1."""
    return RootDatum(
        validate_matrix([[2, -2], [-2, 2]]),
        2,
        alpha_bar=[[-2, 1], [2, 0]],  # alpha_0 = delta - alpha_1, delta(d) = 1
        alpha_check=[[-1, 0], [1, 0]],
        name="tilde-a1-ell",
    )


def tilde_a1_mat() -> RootDatum:
    """The free+cofree datum Y^mat = Zh + Zd + Zc with central direction c."""
    return RootDatum(
        validate_matrix([[2, -2], [-2, 2]]),
        3,
        alpha_bar=[[-2, 1, 0], [2, 0, 0]],
        alpha_check=[[-1, 0, 1], [1, 0, 0]],  # coroot_0 = -h + c
        name="tilde-a1-mat",
    )


def affine_slm_loop_datum(m: int) -> RootDatum:
    """Loop datum of SL_m: Y = finite coroot lattice of sl_m, so that the
    algebra is sl_m over Laurent polynomials (no central/degree directions).

    Index 0 is the affine node; its root is minus the highest root of sl_m.
    """
    a = affine_slm_matrix(m)
    r = m - 1
    # finite simple roots as functionals on the coroot basis h_1..h_{m-1}
    finite_rows = [[0] * r for _ in range(r)]
    for i in range(r):
        finite_rows[i][i] = 2
        if i > 0:
            finite_rows[i][i - 1] = -1
        if i < r - 1:
            finite_rows[i][i + 1] = -1
    theta = [sum(finite_rows[k][j] for k in range(r)) for j in range(r)]
    alpha_bar = [[-x for x in theta]] + finite_rows
    alpha_check = [[-1] * r] + [[1 if j == i else 0 for j in range(r)] for i in range(r)]
    return RootDatum(a, r, alpha_bar, alpha_check, name=f"affine-sl{m}-loop")


def simply_connected(matrix: KacMoodyMatrix, name: str = "") -> RootDatum:
    return build_simply_connected(matrix, name)


NAMED = {
    "a1": lambda: simply_connected(A1, "a1"),
    "a2": lambda: simply_connected(A2, "a2"),
    "c2": lambda: simply_connected(C2, "c2"),
    "a1xa1": lambda: simply_connected(A1xA1, "a1xa1"),
    "tilde-a1": lambda: simply_connected(TILDE_A1, "tilde-a1"),
    "tilde-a1-minimal": tilde_a1_minimal,
    "tilde-a1-ell": tilde_a1_ell,
    "tilde-a1-mat": tilde_a1_mat,
    "rank2-m3": lambda: simply_connected(rank2_matrix(3), "rank2-m3"),
    "rank2-m4": lambda: simply_connected(rank2_matrix(4), "rank2-m4"),
    "affine-sl3-loop": lambda: affine_slm_loop_datum(3),
}


def get_instance(name: str) -> RootDatum:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown instance {name!r}; known: {sorted(NAMED)}")
