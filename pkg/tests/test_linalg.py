import random
from fractions import Fraction as F

import pytest

from bellreach.errors import DimensionMismatch, EmptyInput, SingularMatrix
from bellreach.linalg import (
    Kernel2x2,
    KernelKind,
    canonical_direction,
    identity,
    kernel_2x2,
    kernel_chain_zero,
    lcm_of_denominators,
    mat_mul,
    mat_pow,
    mat_vec,
    matrix,
    rank,
    solve_linear,
    vector,
    zero_matrix,
)


def test_solve_identity():
    b = vector(["1/2", "1/4", "0"])
    assert solve_linear(identity(3), b) == b


def test_solve_m1_alpha_policy():
    # Policy choosing alpha in s1 and the forced actions elsewhere gives the
    # triangular system x3 = 1/4, x2 = x3, x1 = 1/2 + (1/3) x3, whose hand
    # solution (7/12, 1/4, 1/4) is also the max fixed point of that MDP.
    a = matrix([["1", "0", "-1/3"], ["0", "1", "-1"], ["0", "0", "1"]])
    b = vector(["1/2", "0", "1/4"])
    assert solve_linear(a, b) == vector(["7/12", "1/4", "1/4"])


def test_solve_singular():
    with pytest.raises(SingularMatrix):
        solve_linear(zero_matrix(2), vector(["1", "0"]))


def test_solve_shape_errors():
    with pytest.raises(DimensionMismatch):
        solve_linear(matrix([["1", "0"]]), vector(["1"]))
    with pytest.raises(DimensionMismatch):
        solve_linear(identity(2), vector(["1"]))


def test_solve_random_roundtrip():
    rng = random.Random(7)
    solved = 0
    while solved < 100:
        d = rng.randint(1, 4)
        a = matrix(
            [[F(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(d)] for _ in range(d)]
        )
        b = vector([F(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(d)])
        try:
            x = solve_linear(a, b)
        except SingularMatrix:
            continue
        assert mat_vec(a, x) == b
        assert all(v.denominator > 0 for v in x)
        solved += 1


def test_lcm_of_denominators():
    assert lcm_of_denominators(vector(["7/12", "1/4", "13/24"])) == 24
    assert lcm_of_denominators(vector(["1/2"])) == 2
    assert lcm_of_denominators(vector(["1/3", "1/5", "1/2"])) == 30
    with pytest.raises(EmptyInput):
        lcm_of_denominators([])


def test_kernel_chain_zero_examples():
    assert kernel_chain_zero(zero_matrix(2), vector(["1", "-1"])) == 1
    assert kernel_chain_zero(identity(3), vector(["1/2", "0", "0"])) is None
    assert kernel_chain_zero(identity(3), vector(["0", "0", "0"])) == 0


def test_kernel_chain_zero_m2_generator():
    # First generator matrix of the three-state example family; its
    # determinant by cofactor expansion is
    # (1/3)(1/9 - 0) - (1/3)(1/9 - 0) + (1/3)(0 - 1/9) = -1/27 != 0,
    # so the kernel is trivial and no power kills a non-zero vector.
    g = matrix([["1/3", "1/3", "1/3"], ["1/3", "1/3", "0"], ["1/3", "0", "1/3"]])
    (r1, r2, r3) = g
    det = (
        r1[0] * (r2[1] * r3[2] - r2[2] * r3[1])
        - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
        + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
    )
    assert det == F(-1, 27)
    assert kernel_chain_zero(g, vector(["-1/2", "1/3", "1/3"])) is None


def test_kernel_chain_zero_shape_errors():
    with pytest.raises(DimensionMismatch):
        kernel_chain_zero(matrix([["1", "0"]]), vector(["1", "0"]))
    with pytest.raises(DimensionMismatch):
        kernel_chain_zero(identity(2), vector(["1"]))


def test_kernel_chain_stabilisation():
    # If no n <= d works, the kernel chain has stabilised: ker M^d equals
    # ker M^(d+1), checked through ranks.
    rng = random.Random(21)
    for _ in range(150):
        d = rng.randint(1, 3)
        rows = []
        for _ in range(d):
            if rng.random() < 0.3:
                rows.append([F(0)] * d)
            else:
                rows.append([F(rng.randint(0, 4), rng.randint(1, 4)) for _ in range(d)])
        if rng.random() < 0.3 and d >= 2:
            rows[-1] = list(rows[0])
        m = matrix(rows)
        eps = vector([F(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(d)])
        n = kernel_chain_zero(m, eps)
        if n is None:
            assert rank(mat_pow(m, d)) == rank(mat_pow(m, d + 1))
        else:
            assert n <= d
            v = eps
            for _ in range(n):
                v = mat_vec(m, v)
            assert all(x == 0 for x in v)


def test_kernel_2x2_line():
    k = kernel_2x2(matrix([["1/2", "1/3"], ["1/2", "1/3"]]))
    assert k == Kernel2x2(KernelKind.LINE, (F(-2), F(3)))


def test_kernel_2x2_trivial_and_full_plane():
    assert kernel_2x2(matrix([["1/2", "1/3"], ["1/2", "1/5"]])).kind is KernelKind.TRIVIAL
    assert kernel_2x2(zero_matrix(2)).kind is KernelKind.FULL_PLANE
    with pytest.raises(DimensionMismatch):
        kernel_2x2(identity(3))


def test_kernel_2x2_zero_row():
    k = kernel_2x2(matrix([["0", "0"], ["1/2", "1/5"]]))
    assert k == Kernel2x2(KernelKind.LINE, (F(-2), F(5)))


def test_kernel_2x2_direction_quadrant():
    rng = random.Random(5)
    for _ in range(200):
        row = (F(rng.randint(0, 5), rng.randint(1, 5)), F(rng.randint(0, 5), rng.randint(1, 5)))
        if row == (0, 0):
            continue
        scale = F(rng.randint(1, 4), rng.randint(1, 4))
        k = kernel_2x2(matrix([row, [scale * row[0], scale * row[1]]]))
        assert k.kind is KernelKind.LINE
        x, y = k.direction
        assert x <= 0 <= y and (x, y) != (0, 0)
        assert x.denominator == 1 and y.denominator == 1
        # The direction annihilates both rows exactly.
        assert row[0] * x + row[1] * y == 0


def test_canonical_direction():
    assert canonical_direction(vector(["-1/3", "1/2"])) == (F(-2), F(3))
    assert canonical_direction(vector(["2", "-5"])) == (F(-2), F(5))
    assert canonical_direction(vector(["0", "-3"])) == (F(0), F(1))
    assert canonical_direction(vector(["7", "0"])) == (F(-1), F(0))


def test_mat_mul_and_pow():
    m = matrix([["1/2", "0"], ["0", "1/3"]])
    assert mat_pow(m, 2) == matrix([["1/4", "0"], ["0", "1/9"]])
    assert mat_mul(identity(2), m) == m
