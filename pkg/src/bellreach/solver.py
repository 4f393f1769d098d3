"""The full reachability decision, mortality, and the brute-force oracle.

:func:`decide_bor` answers whether iterating the operator from s ever hits
t exactly.  The dispatch:

1. s = t answers immediately.
2. When t differs from the fixed point, the orbit's distance to the fixed
   point never increases, so iteration can stop with a negative answer as
   soon as that distance drops below ||t - fixed point||.
3. When t is the fixed point and s is comparable with it, the sign
   abstraction decides: directly for Max-from-below and Min-from-above,
   and after riding the orbit into the tight-radius ball for the other two
   regimes.
4. When s is incomparable with the fixed point, the orbit is iterated,
   checking for exact hits and for the first comparable iterate (which
   re-enters case 3), until it is strictly inside the tight-radius ball.
   There, a unique tight action tuple reduces the question to a kernel
   chain of a single matrix; otherwise dimension two is settled by the
   planar two-step dichotomy, and anything else is honestly Undecided.

Positive verdicts carry the full exact trace; it is materialised by
re-applying the operator, so every abstract argument is re-confirmed
concretely before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence, Union

from .bellman import DEFAULT_ITERATION_CAP, ApplyResult, BellmanOperator
from .errors import InvalidInput, IterationCapExceeded
from .linalg import (
    ZERO,
    comparable,
    in_unit_box,
    inf_norm,
    matrix,
    ones_vector,
    vec_le,
    vec_sub,
    vector,
    zero_vector,
)
from .linalg import kernel_chain_zero
from .planar import (
    PlanarKind,
    build_product_family,
    decide_planar_incomparable,
    shift,
)
from .signs import Regime, abstract_reach_zero, regime_for, sign_of


class Certificate(Enum):
    """Why a start provably never reaches the target."""

    TARGET_NOT_FIXED_POINT_BOUND = "target-not-fixed-point-bound"
    ABSTRACTION_CYCLE = "abstraction-cycle"
    PLANAR_LEMMA = "planar-lemma"
    KERNEL_CHAIN = "kernel-chain"


@dataclass(frozen=True)
class Reachable:
    """The target is hit after exactly n applications; the trace lists the
    n+1 iterates from s to t, consecutive entries related by one application."""

    n: int
    trace: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Unreachable:
    certificate: Certificate


@dataclass(frozen=True)
class Undecided:
    reason: str


Verdict = Union[Reachable, Unreachable, Undecided]


@dataclass(frozen=True)
class MortalityVerdict:
    """Whether every start vector reaches the fixed point in finitely many
    steps; equivalent to reachability from both box corners 0 and 1.

    When mortal, ``n`` is the uniform bound max(n0, n1): monotonicity
    sandwiches every orbit between the two corner orbits.
    """

    mortal: bool
    n: Optional[int]
    from_zero: Verdict
    from_one: Verdict


def decide_bor(
    op: BellmanOperator,
    s: Sequence[Fraction],
    t: Sequence[Fraction],
    cap: int = DEFAULT_ITERATION_CAP,
) -> Verdict:
    """Decide whether some iterate of the operator maps s exactly onto t."""
    s = _checked_vector(op, s, "start")
    t = _checked_vector(op, t, "target")
    if s == t:
        return Reachable(0, (s,))
    mu = op.fixed_point()
    if t != mu:
        return _decide_target_off_fixed_point(op, s, t, mu, cap)
    trace = [s]
    if comparable(s, mu):
        return _decide_comparable(op, mu, trace, cap)
    return _decide_incomparable(op, mu, trace, cap)


def decide_mortality(op: BellmanOperator, cap: int = DEFAULT_ITERATION_CAP) -> MortalityVerdict:
    """Decide whether all starts reach the fixed point in finite time."""
    mu = op.fixed_point()
    from_zero = decide_bor(op, zero_vector(op.dimension), mu, cap)
    from_one = decide_bor(op, ones_vector(op.dimension), mu, cap)
    assert not isinstance(from_zero, Undecided) and not isinstance(from_one, Undecided), (
        "mortality reduces to comparable instances, which always decide"
    )
    mortal = isinstance(from_zero, Reachable) and isinstance(from_one, Reachable)
    bound = max(from_zero.n, from_one.n) if mortal else None
    return MortalityVerdict(mortal, bound, from_zero, from_one)


def brute_force_reach(
    op: BellmanOperator,
    s: Sequence[Fraction],
    t: Sequence[Fraction],
    max_n: int,
) -> Optional[int]:
    """Least n <= max_n with the n-th iterate equal to t, by plain exact
    iteration; the independent oracle for the decision procedures.

    The iterate is carried as an integer vector over one shared denominator,
    with actions pre-scaled to integer rows, so a step costs only
    small-by-big integer products and no gcd reductions; the denominator is
    compacted periodically.  This is the same exact map as ``op.apply``,
    evaluated through a different arithmetic route (tests cross-check the
    two), and it keeps even 10^4-step runs at desk scale.
    """
    if max_n < 0:
        raise InvalidInput("max_n must be non-negative")
    start = _checked_vector(op, s, "start")
    target = _checked_vector(op, t, "target")
    mdp = op.mdp
    scale = lcm(
        *([p.denominator for a in mdp.all_actions() for p in a.dist.values()] or [1])
    )
    index = {q: i for i, q in enumerate(mdp.decision_states)}
    forms = []
    for q in mdp.decision_states:
        scaled = []
        for a in mdp.actions[q]:
            row = [0] * op.dimension
            for dest, p in a.dist.items():
                if dest in index:
                    row[index[dest]] = int(p * scale)
            scaled.append((row, int(a.dist.get(mdp.target, ZERO) * scale)))
        forms.append(scaled)
    pick = max if op.objective.value == "max" else min
    denom = lcm(*([x.denominator for x in start] or [1]))
    nums = [int(x * denom) for x in start]
    t_num = [x.numerator for x in target]
    t_den = [x.denominator for x in target]
    for n in range(max_n + 1):
        if all(v * d == u * denom for v, d, u in zip(nums, t_den, t_num)):
            return n
        if n == max_n:
            break
        nums = [
            pick(sum(r * x for r, x in zip(row, nums)) + c * denom for row, c in scaled)
            for scaled in forms
        ]
        denom *= scale
        if n % 64 == 63:
            g = gcd(denom, *nums)
            if g > 1:
                denom //= g
                nums = [x // g for x in nums]
    return None


@dataclass(frozen=True)
class TraceStep:
    """One iterate plus, except for the start entry, the per-state sets of
    actions that attained the optimum in the application producing it."""

    vector: tuple[Fraction, ...]
    chosen: Optional[tuple[frozenset[str], ...]]


def trace(op: BellmanOperator, s: Sequence[Fraction], n: int) -> tuple[TraceStep, ...]:
    """The first n iterates from s with attaining-action annotations."""
    if n < 0:
        raise InvalidInput("step count must be non-negative")
    x = _checked_vector(op, s, "start")
    steps = [TraceStep(x, None)]
    for _ in range(n):
        result: ApplyResult = op.apply(x)
        x = result.value
        steps.append(TraceStep(x, result.argopt))
    return tuple(steps)


def _decide_target_off_fixed_point(op, s, t, mu, cap) -> Verdict:
    # Sound cutoff: the distance to the fixed point never increases, so once
    # it is below ||t - mu|| no later iterate can equal t.
    eps = inf_norm(vec_sub(t, mu))
    x = s
    trace_: list[tuple[Fraction, ...]] = [s]
    while True:
        if x == t:
            return Reachable(len(trace_) - 1, tuple(trace_))
        if inf_norm(vec_sub(x, mu)) < eps:
            return Unreachable(Certificate.TARGET_NOT_FIXED_POINT_BOUND)
        if len(trace_) > cap:
            raise IterationCapExceeded("no verdict within the iteration cap")
        x = op.apply(x).value
        trace_.append(x)


def _decide_comparable(op, mu, trace_, cap) -> Verdict:
    """Sign-abstraction decision for a start comparable with the fixed point.

    The entry vector is trace_[-1].  Max-from-below and Min-from-above are
    abstracted immediately; the other two regimes first ride the orbit into
    the tight-radius ball, where leaking actions stop mattering.
    """
    x = trace_[-1]
    regime = regime_for(op.objective, below=vec_le(x, mu))
    tight = op.tight_successors(mu)
    if regime in (Regime.ABOVE_MAX, Regime.BELOW_MIN):
        delta = op.tight_radius(mu)
        while inf_norm(vec_sub(x, mu)) >= delta:
            if len(trace_) > cap:
                raise IterationCapExceeded("no ball entry within the iteration cap")
            x = op.apply(x).value
            trace_.append(x)
    reached, extra = abstract_reach_zero(sign_of(x, mu), regime, tight)
    if not reached:
        return Unreachable(Certificate.ABSTRACTION_CYCLE)
    for _ in range(extra):
        x = op.apply(x).value
        trace_.append(x)
    assert x == mu, "abstract zero must coincide with an exact hit"
    return Reachable(len(trace_) - 1, tuple(trace_))


def _decide_incomparable(op, mu, trace_, cap) -> Verdict:
    # Ride the orbit for the certified horizon, watching for exact hits and
    # for the first comparable iterate (which re-enters the comparable
    # procedure).  The horizon guarantees the final iterate lies strictly
    # inside the tight-radius ball, where the remaining cases are dispatched.
    delta = op.tight_radius(mu)
    horizon = op.convergence_steps(delta, cap).steps
    x = trace_[-1]
    while True:
        if x == mu:
            return Reachable(len(trace_) - 1, tuple(trace_))
        if comparable(x, mu):
            return _decide_comparable(op, mu, trace_, cap)
        if len(trace_) - 1 >= horizon:
            break
        x = op.apply(x).value
        trace_.append(x)
    # x is strictly inside the ball and still incomparable with mu.
    assert inf_norm(vec_sub(x, mu)) < delta
    family = build_product_family(op, mu)
    if all(len(rows) == 1 for rows in family.rows):
        single = matrix(rows[0] for rows in family.rows)
        chain = kernel_chain_zero(single, shift(x, mu))
        if chain is None:
            return Unreachable(Certificate.KERNEL_CHAIN)
        for _ in range(chain):
            x = op.apply(x).value
            trace_.append(x)
        # Inside the ball a unique tight tuple makes the operator affine, so
        # the kernel chain transfers exactly; re-application confirms it.
        assert x == mu, "kernel-chain hit must be confirmed by exact application"
        return Reachable(len(trace_) - 1, tuple(trace_))
    if op.dimension == 2:
        outcome = decide_planar_incomparable(op, x, mu)
        trace_.extend(outcome.iterates)
        if outcome.kind is PlanarKind.REACHED:
            return Reachable(len(trace_) - 1, tuple(trace_))
        if outcome.kind is PlanarKind.CONTINUE_COMPARABLE:
            return _decide_comparable(op, mu, trace_, cap)
        return Unreachable(Certificate.PLANAR_LEMMA)
    multi = [
        op.mdp.decision_states[i]
        for i, rows in enumerate(family.rows)
        if len(rows) > 1
    ]
    return Undecided(
        f"start stays incomparable with the fixed point into its tight-radius "
        f"ball in dimension {op.dimension} and state(s) {', '.join(multi)} have "
        "multiple tight actions; this configuration is beyond the implemented "
        "procedures"
    )


def _checked_vector(op: BellmanOperator, v: Sequence, label: str) -> tuple[Fraction, ...]:
    vec = vector(v)
    if len(vec) != op.dimension:
        raise InvalidInput(
            f"{label} vector has length {len(vec)}, expected {op.dimension}"
        )
    if not in_unit_box(vec):
        raise InvalidInput(f"{label} vector {vec} leaves the unit box [0, 1]^d")
    return vec
