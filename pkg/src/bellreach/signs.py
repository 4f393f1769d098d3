"""Finite sign abstraction of vectors relative to the fixed point.

A probability vector x comparable with the fixed point is abstracted to the
componentwise sign of x minus the fixed point.  In each of the four regimes
(objective crossed with the side of the fixed point the orbit lives on) the
abstraction commutes with one exact operator application, so reachability
of the fixed point reduces to reachability of the all-zero sign vector in a
finite space of at most 2^d vectors.

The step rule aggregates, per state, over the tight actions' successor sign
sets: an inner min or max over each tight action's successors, then an
outer max or min across the tight actions.  An inner aggregate over an
empty successor set contributes 0, because such an action evaluates to the
state's fixed-point entry everywhere.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Optional, Sequence

from .errors import DimensionMismatch, RegimeViolation
from .linalg import frac
from .mdp import Objective

SignVector = "tuple[int, ...]"

TightSuccessors = "tuple[tuple[frozenset[int], ...], ...]"


class Regime(Enum):
    """Pairing of objective and side: which abstract step rule applies.

    BELOW_MAX covers Max orbits starting at or below the fixed point and
    ABOVE_MIN covers Min orbits at or above it; both are valid on the whole
    comparable cone.  ABOVE_MAX and BELOW_MIN cover the opposite sides and
    are sound only inside the tight-radius ball, where leaking actions are
    never chosen.
    """

    BELOW_MAX = "below-max"
    ABOVE_MIN = "above-min"
    ABOVE_MAX = "above-max"
    BELOW_MIN = "below-min"

    @property
    def sign_range(self) -> frozenset[int]:
        if self in (Regime.BELOW_MAX, Regime.BELOW_MIN):
            return frozenset((-1, 0))
        return frozenset((0, 1))

    @property
    def aggregators(self) -> "tuple[Callable, Callable]":
        """(outer across tight actions, inner across successors)."""
        return {
            Regime.BELOW_MAX: (max, min),
            Regime.ABOVE_MIN: (min, max),
            Regime.ABOVE_MAX: (max, max),
            Regime.BELOW_MIN: (min, min),
        }[self]


def regime_for(objective: Objective, below: bool) -> Regime:
    if objective is Objective.MAX:
        return Regime.BELOW_MAX if below else Regime.ABOVE_MAX
    return Regime.BELOW_MIN if below else Regime.ABOVE_MIN


def sign_of(x: Sequence, mu: Sequence) -> tuple[int, ...]:
    """Componentwise sign of x - mu, in {-1, 0, +1}^d."""
    if len(x) != len(mu):
        raise DimensionMismatch(f"vector lengths differ: {len(x)} vs {len(mu)}")
    out = []
    for a, b in zip(x, mu):
        diff = frac(a) - frac(b)
        out.append(0 if diff == 0 else (1 if diff > 0 else -1))
    return tuple(out)


def abstract_step(
    e: Sequence[int], regime: Regime, tight_successors
) -> tuple[int, ...]:
    """One exact abstract step of the regime's rule."""
    if len(e) != len(tight_successors):
        raise DimensionMismatch(
            f"sign vector has length {len(e)}, expected {len(tight_successors)}"
        )
    admitted = regime.sign_range
    if any(s not in admitted for s in e):
        raise RegimeViolation(
            f"sign vector {tuple(e)} leaves the {regime.value} range {sorted(admitted)}"
        )
    outer, inner = regime.aggregators
    result = []
    for successor_sets in tight_successors:
        assert successor_sets, "every state must have at least one tight action"
        result.append(
            outer(inner((e[j] for j in s), default=0) for s in successor_sets)
        )
    return tuple(result)


def abstract_reach_zero(
    e0: Sequence[int], regime: Regime, tight_successors
) -> "tuple[bool, Optional[int]]":
    """Deterministic iteration of the abstract step until zero or a repeat.

    Returns (True, n) with the least n whose iterate is all-zero, or
    (False, None) once a previously seen sign vector recurs without zero
    having appeared.  The regime's space has 2^d elements, so the loop
    finishes within 2^d iterations.
    """
    d = len(tight_successors)
    zero = (0,) * d
    seen: set[tuple[int, ...]] = set()
    e = tuple(e0)
    steps = 0
    while True:
        if e == zero:
            return True, steps
        if e in seen:
            return False, None
        seen.add(e)
        e = abstract_step(e, regime, tight_successors)
        steps += 1
        assert steps <= 2**d, "abstract orbit exceeded its finite state space"
