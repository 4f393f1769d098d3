"""Product families of tight-action rows and the planar incomparable decision.

Near the fixed point only tight actions are ever chosen, so the shifted
orbit x - mu evolves by componentwise-optimal multiplication with matrices
drawn row-wise from the per-state sets of tight-action row vectors (the
product family).  In dimension two the zero-lines of non-zero rows have
angles in [pi/2, pi] and are totally ordered; kernels of singular family
matrices are lines in that range.  That order forces a dichotomy: either
the shifted orbit never reaches zero, or its second iterate is already
comparable with zero.  :func:`decide_planar_incomparable` implements
exactly that two-step test.

Angles are never computed numerically; their order is decided exactly by
cross-product signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .bellman import ActionClass, BellmanOperator
from .errors import DimensionMismatch, PreconditionViolated, ZeroRow
from .linalg import (
    ZERO,
    canonical_direction,
    comparable,
    dot,
    inf_norm,
    kernel_2x2,
    KernelKind,
    vec_add,
    vec_sub,
)
from .mdp import Objective


@dataclass(frozen=True)
class ProductFamily:
    """Per state, the set of row vectors (over decision-state columns) of
    the tight actions; the implied matrix set takes one row from each."""

    rows: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.rows)


def build_product_family(
    op: BellmanOperator, mu: Sequence[Fraction]
) -> ProductFamily:
    """Collect each state's tight-action rows, deduplicated, order preserved."""
    classes = op.classify_actions(mu)
    per_state = []
    for pairs in op.action_rows():
        rows: list[tuple[Fraction, ...]] = []
        for action_id, row in pairs:
            if classes[action_id] is ActionClass.TIGHT and row not in rows:
                rows.append(row)
        per_state.append(tuple(rows))
    return ProductFamily(tuple(per_state))


def pfr_map(
    fam: ProductFamily, eps: Sequence[Fraction], obj: Objective
) -> tuple[Fraction, ...]:
    """Componentwise optimum of row . eps over each state's row set.

    Equals the lattice max (resp. min) of M . eps over all matrices of the
    family, since each component is optimised independently.
    """
    if len(eps) != fam.dimension:
        raise DimensionMismatch(
            f"vector has length {len(eps)}, expected {fam.dimension}"
        )
    pick = max if obj is Objective.MAX else min
    return tuple(pick(dot(row, eps) for row in rows) for rows in fam.rows)


def shift(x: Sequence[Fraction], mu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Exact componentwise difference x - mu."""
    return vec_sub(x, mu)


def unshift(eps: Sequence[Fraction], mu: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Inverse of :func:`shift`: mu + eps."""
    return vec_add(eps, mu)


class AngleOrder(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def line_angle_cmp(a: Sequence[Fraction], b: Sequence[Fraction]) -> AngleOrder:
    """Order of the zero-line angles of two non-negative, non-zero 2d rows.

    The line {v : row . v = 0} of a non-negative row has an angle in
    [pi/2, pi] measured counterclockwise from the positive x-axis; a
    positive cross product a1*b2 - a2*b1 means a's angle is smaller.
    """
    if len(a) != 2 or len(b) != 2:
        raise DimensionMismatch("rows must have length 2")
    if all(x == 0 for x in a) or all(x == 0 for x in b):
        raise ZeroRow("zero rows induce no line")
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return AngleOrder.LESS
    if cross < 0:
        return AngleOrder.GREATER
    return AngleOrder.EQUAL


@dataclass(frozen=True)
class KernelLine:
    """A kernel line of some singular family matrix, by canonical direction.

    ``lo`` marks the largest angle among kernel lines, ``hi`` the smallest.
    """

    direction: tuple[Fraction, Fraction]
    lo: bool
    hi: bool


@dataclass(frozen=True)
class KernelLineReport:
    lines: tuple[KernelLine, ...]
    full_plane: bool


def kernel_lines(fam: ProductFamily) -> KernelLineReport:
    """Kernel lines of all singular matrices of a two-state family.

    Enumerates one matrix per pair of rows, deduplicates lines by canonical
    direction, and marks the extremal angles.  An all-zero matrix (both rows
    zero) has the whole plane as kernel and is reported as a flag rather
    than a line.
    """
    if fam.dimension != 2:
        raise DimensionMismatch("kernel lines are defined for two states")
    directions: list[tuple[Fraction, Fraction]] = []
    full_plane = False
    for top in fam.rows[0]:
        for bottom in fam.rows[1]:
            kernel = kernel_2x2((top, bottom))
            if kernel.kind is KernelKind.FULL_PLANE:
                full_plane = True
            elif kernel.kind is KernelKind.LINE:
                if kernel.direction not in directions:
                    directions.append(kernel.direction)
    if not directions:
        return KernelLineReport((), full_plane)
    # Directions live in the closed second quadrant, so a positive cross
    # product d1 x d2 means d1's angle is smaller.
    def angle_less(d1, d2) -> bool:
        return d1[0] * d2[1] - d1[1] * d2[0] > 0

    lo = directions[0]
    hi = directions[0]
    for d in directions[1:]:
        if angle_less(lo, d):
            lo = d
        if angle_less(d, hi):
            hi = d
    lines = tuple(
        KernelLine(d, lo=(d == lo), hi=(d == hi)) for d in directions
    )
    return KernelLineReport(lines, full_plane)


class PlanarKind(Enum):
    REACHED = "reached"
    CONTINUE_COMPARABLE = "continue-comparable"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class PlanarOutcome:
    """Result of the two-step planar test.

    ``iterates`` holds the exactly computed operator iterates (one or two),
    so callers can extend traces without recomputing.
    """

    kind: PlanarKind
    steps: int
    iterates: tuple[tuple[Fraction, ...], ...]


def decide_planar_incomparable(
    op: BellmanOperator, x: Sequence[Fraction], mu: Sequence[Fraction]
) -> PlanarOutcome:
    """Two-dimensional decision for a start incomparable with the fixed point.

    Requires x strictly inside the tight-radius ball and incomparable with
    mu.  Computes the next two iterates: an exact hit yields REACHED with
    the step count; a comparable second iterate hands control back to the
    comparable-regime procedure; a still-incomparable second iterate proves
    the fixed point is never reached.
    """
    if op.dimension != 2:
        raise PreconditionViolated("planar decision requires exactly 2 states")
    delta = op.tight_radius(mu)
    x = tuple(x)
    if comparable(x, mu):
        raise PreconditionViolated("start vector is comparable with the fixed point")
    if inf_norm(vec_sub(x, mu)) >= delta:
        raise PreconditionViolated(
            f"start vector is not strictly inside the tight-radius ball ({delta})"
        )
    first = op.apply(x).value
    if first == tuple(mu):
        return PlanarOutcome(PlanarKind.REACHED, 1, (first,))
    second = op.apply(first).value
    if second == tuple(mu):
        return PlanarOutcome(PlanarKind.REACHED, 2, (first, second))
    if comparable(second, mu):
        return PlanarOutcome(PlanarKind.CONTINUE_COMPARABLE, 2, (first, second))
    return PlanarOutcome(PlanarKind.UNREACHABLE, 2, (first, second))
