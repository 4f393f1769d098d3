"""Exact rational linear algebra on immutable tuples.

Scalars are ``fractions.Fraction`` values, which are always kept in lowest
terms with a positive denominator, so every result of every operation here
is in canonical form by construction.  Vectors are tuples of Fractions and
matrices are tuples of row tuples.  All functions are pure and no floating
point is used anywhere: the decision procedures built on top of this module
rely on exact equality tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatch, EmptyInput, SingularMatrix

RatLike = Union[Fraction, int, str]
Vec = "tuple[Fraction, ...]"
Mat = "tuple[tuple[Fraction, ...], ...]"

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(value: RatLike) -> Fraction:
    """Coerce an int, string like ``"7/12"``, or Fraction to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use exact rationals")
    return Fraction(value)


def vector(entries: Iterable[RatLike]) -> tuple[Fraction, ...]:
    return tuple(frac(e) for e in entries)


def matrix(rows: Iterable[Iterable[RatLike]]) -> tuple[tuple[Fraction, ...], ...]:
    m = tuple(vector(row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise DimensionMismatch("matrix rows have unequal lengths")
    return m


def identity(d: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)
    )


def zero_vector(d: int) -> tuple[Fraction, ...]:
    return (ZERO,) * d


def ones_vector(d: int) -> tuple[Fraction, ...]:
    return (ONE,) * d


def zero_matrix(d: int) -> tuple[tuple[Fraction, ...], ...]:
    return ((ZERO,) * d,) * d


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    _same_length(u, v)
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    _same_length(u, v)
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    _same_length(u, v)
    return sum((a * b for a, b in zip(u, v)), start=ZERO)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b) -> tuple[tuple[Fraction, ...], ...]:
    if a and b and len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    cols = list(zip(*b)) if b else []
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def mat_pow(m, k: int) -> tuple[tuple[Fraction, ...], ...]:
    out = identity(len(m))
    for _ in range(k):
        out = mat_mul(out, m)
    return out


def inf_norm(v: Sequence[Fraction]) -> Fraction:
    return max((abs(a) for a in v), default=ZERO)


def vec_le(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """Componentwise order: u <= v in every coordinate."""
    _same_length(u, v)
    return all(a <= b for a, b in zip(u, v))


def comparable(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """True when u <= v or v <= u componentwise."""
    return vec_le(u, v) or vec_le(v, u)


def in_unit_box(v: Sequence[Fraction]) -> bool:
    return all(ZERO <= a <= ONE for a in v)


def solve_linear(a, b) -> tuple[Fraction, ...]:
    """Solve A x = b exactly for a nonsingular square matrix A.

    Ordinary Gaussian elimination over the rationals; Fraction keeps every
    intermediate value in canonical form.  Raises SingularMatrix when
    det(A) = 0 and DimensionMismatch on shape errors.
    """
    d = len(a)
    if any(len(row) != d for row in a):
        raise DimensionMismatch("matrix is not square")
    if len(b) != d:
        raise DimensionMismatch("right-hand side has wrong length")
    rows = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if rows[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"no pivot in column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(d):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return tuple(row[d] for row in rows)


def rank(a) -> int:
    """Rank of a rectangular rational matrix by exact row echelon."""
    rows = [list(row) for row in a]
    if not rows:
        return 0
    n_cols = len(rows[0])
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators of a non-empty collection."""
    dens = [frac(v).denominator for v in values]
    if not dens:
        raise EmptyInput("need at least one rational")
    return lcm(*dens)


def kernel_chain_zero(m, eps) -> Optional[int]:
    """Least n >= 0 with M^n eps = 0, or None when no such n exists.

    The kernels ker M^n grow strictly until they stabilise, so dimensions
    bound the search: it suffices to test n <= d.  Uses repeated
    matrix-vector products to bound intermediate blowup.
    """
    d = len(m)
    if any(len(row) != d for row in m):
        raise DimensionMismatch("matrix is not square")
    if len(eps) != d:
        raise DimensionMismatch("vector length differs from matrix dimension")
    zero = zero_vector(d)
    v = tuple(eps)
    for n in range(d + 1):
        if v == zero:
            return n
        v = mat_vec(m, v)
    return None


class KernelKind(Enum):
    TRIVIAL = "trivial"
    LINE = "line"
    FULL_PLANE = "full-plane"


@dataclass(frozen=True)
class Kernel2x2:
    kind: KernelKind
    direction: Optional[tuple[Fraction, Fraction]] = None


def canonical_direction(v: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Canonical representative of a line direction in the closed second quadrant.

    Scales a non-zero 2-vector to coprime integers and orients it so the sign
    pattern is (-, +), (0, +), or (-, 0).  Lines through the open first or
    third quadrant have no such representative and are rejected; kernels of
    non-negative matrices never produce them.
    """
    if len(v) != 2:
        raise DimensionMismatch("direction must have length 2")
    x, y = frac(v[0]), frac(v[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no direction")
    scale = lcm(x.denominator, y.denominator)
    xi, yi = x * scale, y * scale
    g = gcd(int(xi), int(yi))
    xi, yi = xi / g, yi / g
    if xi > 0 or (xi == 0 and yi < 0):
        xi, yi = -xi, -yi
    if xi < 0 and yi < 0:
        raise ValueError("direction lies outside the closed second quadrant")
    return (xi, yi)


def kernel_2x2(m) -> Kernel2x2:
    """Kernel of a 2x2 matrix with non-negative entries.

    Trivial when det != 0, the full plane when M = 0, and otherwise a line
    whose direction is normalised into the closed second quadrant.
    """
    if len(m) != 2 or any(len(row) != 2 for row in m):
        raise DimensionMismatch("matrix must be 2x2")
    (a, b), (c, d) = m
    if a * d - b * c != 0:
        return Kernel2x2(KernelKind.TRIVIAL)
    if a == b == c == d == 0:
        return Kernel2x2(KernelKind.FULL_PLANE)
    row = (a, b) if (a, b) != (ZERO, ZERO) else (c, d)
    return Kernel2x2(KernelKind.LINE, canonical_direction((-row[1], row[0])))


def _same_length(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
