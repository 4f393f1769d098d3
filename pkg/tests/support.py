"""Shared test helpers: fixture MDPs, random generators, independent oracles.

The oracles here deliberately avoid the code paths they check: reachability
values come from exhaustive positional-policy enumeration with reachability
pruning, and end components come from exhaustive subset search.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product

from bellreach import (
    Mdp,
    Objective,
    build_mdp,
    maximal_end_components,
    solve_linear,
)
from bellreach.linalg import ONE, ZERO, identity

F = Fraction


# ---------------------------------------------------------------------------
# Fixture MDPs, built in code (the JSON files under fixtures/ must agree).

def mdp_example1() -> Mdp:
    """Two decision states; the actionless third state plays the sink."""
    return build_mdp(
        ["s1", "s2"],
        "t",
        "s3",
        [
            ("alpha", "s1", {"s2": "1/2", "s3": "1/6", "t": "1/3"}),
            ("beta1", "s2", {"s1": "1/2", "t": "1/2"}),
            ("beta2", "s2", {"s1": "1/4", "s2": "1/4", "t": "1/2"}),
        ],
    )


def mdp_m1() -> Mdp:
    return build_mdp(
        ["s1", "s2", "s3"],
        "t",
        "s-",
        [
            ("alpha", "s1", {"t": "1/2", "s3": "1/3", "s-": "1/6"}),
            ("beta", "s1", {"s2": "1/2", "t": "5/12", "s-": "1/12"}),
            ("tau2", "s2", {"s3": "1"}),
            ("tau3", "s3", {"t": "1/4", "s-": "3/4"}),
        ],
    )


def mdp_m2() -> Mdp:
    return build_mdp(
        ["s1", "s2", "s3"],
        "t",
        "s-",
        [
            ("alpha1", "s1", {"s1": "1/3", "s2": "1/3", "s3": "1/3"}),
            ("alpha2", "s1", {"s1": "1/2", "s2": "1/4", "s3": "1/4"}),
            ("beta", "s2", {"t": "1/6", "s1": "1/3", "s2": "1/3", "s-": "1/6"}),
            ("gamma", "s3", {"t": "1/6", "s1": "1/3", "s3": "1/3", "s-": "1/6"}),
        ],
    )


def mdp_m3() -> Mdp:
    return build_mdp(
        ["s1", "s2"],
        "t",
        "s-",
        [
            ("alpha1", "s1", {"s1": "1/2", "s2": "1/3", "t": "5/36", "s-": "1/36"}),
            ("alpha2", "s1", {"s1": "1/2", "s2": "1/5", "t": "1/4", "s-": "1/20"}),
            ("beta1", "s2", {"s1": "1/2", "s2": "1/5", "t": "1/4", "s-": "1/20"}),
        ],
    )


def mdp_planar_never() -> Mdp:
    """Two tight actions in s1, no singular family matrix: a start shifted by
    (h, -h) keeps the sign pattern (+, -) forever and never reaches the
    fixed point (1/2, 1/2)."""
    return build_mdp(
        ["s1", "s2"],
        "t",
        "bot",
        [
            ("a1", "s1", {"s1": "1/2", "s2": "1/4", "t": "1/8", "bot": "1/8"}),
            ("a2", "s1", {"s1": "1/3", "s2": "1/3", "t": "1/6", "bot": "1/6"}),
            ("b1", "s2", {"s1": "1/4", "s2": "1/2", "t": "1/8", "bot": "1/8"}),
        ],
    )


def mdp_single_tight() -> Mdp:
    """One action per state, nonsingular tight matrix, fixed point (1/2, 1/2)."""
    return build_mdp(
        ["s1", "s2"],
        "t",
        "bot",
        [
            ("a1", "s1", {"s1": "1/2", "s2": "1/4", "t": "1/8", "bot": "1/8"}),
            ("b1", "s2", {"s1": "1/4", "s2": "1/2", "t": "1/8", "bot": "1/8"}),
        ],
    )


def mdp_constant() -> Mdp:
    """Every action jumps straight to target or sink: the operator is constant."""
    return build_mdp(
        ["u1", "u2"],
        "t",
        "bot",
        [
            ("c1", "u1", {"t": "1/2", "bot": "1/2"}),
            ("c2", "u2", {"t": "1/3", "bot": "2/3"}),
        ],
    )


# ---------------------------------------------------------------------------
# Independent oracles.

def policy_reach_values(m: Mdp, policy: dict) -> "tuple[Fraction, ...]":
    """Exact reachability probabilities of one positional policy.

    States that cannot reach the target in the policy's graph get value 0;
    the linear system is solved on the remaining states, where it is
    guaranteed nonsingular.
    """
    states = m.decision_states
    index = {s: i for i, s in enumerate(states)}
    chosen = {s: policy[s] for s in states}
    # Backward reachability of the target through the policy graph.
    can_reach = set()
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in can_reach:
                continue
            dist = chosen[s].dist
            if m.target in dist or any(d in can_reach for d in dist):
                can_reach.add(s)
                changed = True
    live = [s for s in states if s in can_reach]
    if not live:
        return (ZERO,) * len(states)
    pos = {s: i for i, s in enumerate(live)}
    rows = []
    rhs = []
    for s in live:
        dist = chosen[s].dist
        row = [ZERO] * len(live)
        row[pos[s]] += ONE
        for dest, p in dist.items():
            if dest in pos:
                row[pos[dest]] -= p
        rows.append(tuple(row))
        rhs.append(dist.get(m.target, ZERO))
    solution = solve_linear(tuple(rows), tuple(rhs))
    out = [ZERO] * len(states)
    for s, v in zip(live, solution):
        out[index[s]] = v
    return tuple(out)


def exhaustive_reach_values(m: Mdp, objective: Objective) -> "tuple[Fraction, ...]":
    """Optimal reachability values by enumerating all positional policies.

    The componentwise optimum over policy value vectors is attained by a
    single policy; that is asserted, and the optimum is returned.
    """
    states = m.decision_states
    all_values = []
    for combo in product(*(m.actions[s] for s in states)):
        all_values.append(policy_reach_values(m, dict(zip(states, combo))))
    pick = max if objective is Objective.MAX else min
    best = tuple(
        pick(values[i] for values in all_values) for i in range(len(states))
    )
    assert best in all_values, "componentwise optimum must be attained by one policy"
    return best


def exhaustive_mecs(m: Mdp) -> "list[tuple[frozenset, frozenset]]":
    """All maximal end components by exhaustive subset search.

    A state set is an end-component carrier when, keeping only actions whose
    support stays inside the set, every state keeps an action and the induced
    graph is strongly connected.  Maximal carriers with all their internal
    actions are exactly the maximal end components.
    """
    carriers = []
    states = m.decision_states
    for r in range(1, len(states) + 1):
        for subset in combinations(states, r):
            ss = frozenset(subset)
            inside = {s: [a for a in m.actions[s] if a.support() <= ss] for s in ss}
            if any(not acts for acts in inside.values()):
                continue
            succ = {s: {d for a in inside[s] for d in a.dist} for s in ss}
            if _strongly_connected(ss, succ):
                carriers.append(ss)
    maximal = [c for c in carriers if not any(c < other for other in carriers)]
    out = []
    for ss in maximal:
        acts = frozenset(
            a.id for s in ss for a in m.actions[s] if a.support() <= ss
        )
        out.append((ss, acts))
    return out


def _strongly_connected(nodes, succ) -> bool:
    nodes = set(nodes)
    start = next(iter(nodes))
    forward = _closure(start, lambda s: succ.get(s, ()))
    pred = {s: [p for p in nodes if s in succ.get(p, ())] for s in nodes}
    backward = _closure(start, lambda s: pred[s])
    return forward >= nodes and backward >= nodes


def _closure(start, neighbours):
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nxt in neighbours(node):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# Random generation.

def random_distribution(rng: random.Random, destinations, max_denom=8, leak=None):
    """Random exact distribution with denominator <= max_denom.

    ``leak`` forces at least one unit of mass onto that destination.
    """
    denom = rng.randint(1, max_denom)
    size = rng.randint(1, min(len(destinations), denom))
    support = rng.sample(destinations, size)
    if leak is not None and leak not in support:
        support[rng.randrange(len(support))] = leak
    units = {dest: 1 for dest in support}
    for _ in range(denom - len(support)):
        units[rng.choice(support)] += 1
    return {dest: F(n, denom) for dest, n in units.items()}


def random_mdp(
    rng: random.Random,
    d: int,
    max_actions: int = 3,
    max_denom: int = 8,
    leak_bias: float = 0.75,
    ec_free: bool = True,
) -> Mdp:
    states = [f"q{i + 1}" for i in range(d)]
    destinations = states + ["t", "bot"]
    for _ in range(500):
        actions = []
        for s in states:
            for j in range(rng.randint(1, max_actions)):
                leak = rng.choice(["t", "bot"]) if rng.random() < leak_bias else None
                actions.append(
                    (f"{s}a{j + 1}", s, random_distribution(rng, destinations, max_denom, leak))
                )
        m = build_mdp(states, "t", "bot", actions)
        if not ec_free or not maximal_end_components(m):
            return m
    raise RuntimeError("could not generate a suitable random MDP")


def random_planar_mdp(rng: random.Random) -> Mdp:
    """Random EC-free two-state MDP with power-of-two denominators, so exact
    long-horizon oracle runs stay cheap (per-step denominator growth is at
    most a factor of eight)."""
    states = ["q1", "q2"]
    destinations = states + ["t", "bot"]
    while True:
        actions = []
        for s in states:
            for j in range(rng.randint(1, 3)):
                denom = rng.choice([2, 4, 8])
                size = rng.randint(1, min(len(destinations), denom))
                support_ = rng.sample(destinations, size)
                if rng.random() < 0.75 and not ({"t", "bot"} & set(support_)):
                    support_[rng.randrange(len(support_))] = rng.choice(["t", "bot"])
                units = {dest: 1 for dest in support_}
                for _ in range(denom - len(units)):
                    units[rng.choice(list(units))] += 1
                actions.append(
                    (f"{s}a{j + 1}", s, {dest: F(n, denom) for dest, n in units.items()})
                )
        m = build_mdp(states, "t", "bot", actions)
        if not maximal_end_components(m):
            return m


def random_unit_fraction(rng: random.Random, max_denom: int = 8) -> Fraction:
    q = rng.randint(1, max_denom)
    return F(rng.randint(0, q), q)


def random_point(rng: random.Random, d: int, max_denom: int = 8):
    return tuple(random_unit_fraction(rng, max_denom) for _ in range(d))


def random_below(rng: random.Random, mu):
    """Random x with x <= mu componentwise, occasional exact coordinates."""
    out = []
    for v in mu:
        if rng.random() < 0.3:
            out.append(v)
        else:
            out.append(v * random_unit_fraction(rng))
    return tuple(out)


def random_above(rng: random.Random, mu):
    out = []
    for v in mu:
        if rng.random() < 0.3:
            out.append(v)
        else:
            out.append(v + (ONE - v) * random_unit_fraction(rng))
    return tuple(out)


def random_in_ball(rng: random.Random, mu, delta, signs):
    """Random x with the given sign pattern, strictly inside the delta-ball.

    Magnitudes shrink to the headroom toward the unit box; a coordinate whose
    headroom is zero degenerates to sign 0.  Returns the vector.
    """
    out = []
    for v, sign in zip(mu, signs):
        magnitude = delta * F(rng.randint(1, 7), 8)
        if sign > 0:
            magnitude = min(magnitude, ONE - v)
        elif sign < 0:
            magnitude = min(magnitude, v)
        out.append(v + sign * magnitude)
    return tuple(out)


def regime_sample(rng: random.Random, regime, op, mu):
    """Random vector inside the regime's validity domain: the comparable cone
    for the below-max and above-min regimes, the tight-radius ball for the
    other two."""
    from bellreach.signs import Regime

    d = op.dimension
    below = regime in (Regime.BELOW_MAX, Regime.BELOW_MIN)
    signs = [rng.choice([-1, 0] if below else [0, 1]) for _ in range(d)]
    if regime in (Regime.ABOVE_MAX, Regime.BELOW_MIN):
        return random_in_ball(rng, mu, op.tight_radius(mu), signs)
    return random_below(rng, mu) if below else random_above(rng, mu)


def random_incomparable_in_ball(rng: random.Random, mu, delta):
    """Random x strictly inside the ball and incomparable with mu, or None
    when mu touches the unit box in too many coordinates."""
    d = len(mu)
    up = [i for i in range(d) if mu[i] < 1]
    down = [i for i in range(d) if mu[i] > 0]
    choices = [(i, j) for i in up for j in down if i != j]
    if not choices:
        return None
    i, j = rng.choice(choices)
    signs = [0] * d
    signs[i], signs[j] = 1, -1
    for k in range(d):
        if k not in (i, j):
            signs[k] = rng.choice([-1, 0, 1])
    x = random_in_ball(rng, mu, delta, signs)
    if x[i] == mu[i] or x[j] == mu[j]:
        return None
    return x
