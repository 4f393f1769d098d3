"""MDP data model, structural validation, and end-component removal.

An :class:`Mdp` consists of an ordered list of decision states, a target
state, a distinguished sink state, and per-state actions whose distributions
are exact rationals summing to one.  The target and the sink carry no
actions.  Distributions are sparse: zero entries are omitted, so every
stored probability lies in (0, 1].

End components (closed, strongly connected sub-MDPs) make the Bellman
fixed point non-unique; :func:`maximal_end_components` finds them and
:func:`remove_end_components` rewrites the MDP so none remain while
preserving optimal reachability values on the surviving states.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import InvalidMdp
from .linalg import ONE, frac


class Objective(Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class Action:
    """One action: an exact probability distribution over states.

    ``dist`` maps state names to probabilities in (0, 1] and must sum to
    exactly 1 over decision states, the target, and the sink.
    """

    id: str
    owner: str
    dist: Mapping[str, Fraction]

    def support(self) -> frozenset[str]:
        return frozenset(self.dist)


@dataclass(frozen=True)
class Mdp:
    decision_states: tuple[str, ...]
    target: str
    sink: str
    actions: Mapping[str, tuple[Action, ...]]

    @property
    def dimension(self) -> int:
        return len(self.decision_states)

    def all_actions(self) -> Iterator[Action]:
        for state in self.decision_states:
            yield from self.actions.get(state, ())

    def all_states(self) -> tuple[str, ...]:
        return self.decision_states + (self.target, self.sink)


@dataclass(frozen=True)
class EndComponent:
    """A set of decision states and actions forming a closed, strongly
    connected sub-MDP."""

    states: frozenset[str]
    actions: frozenset[str]


def build_mdp(
    decision_states: Iterable[str],
    target: str,
    sink: str,
    actions: Iterable[tuple[str, str, Mapping[str, object]]],
    validate: bool = True,
) -> Mdp:
    """Assemble an Mdp from (action id, owner, distribution) triples.

    Distribution values may be ints, strings, or Fractions.  With
    ``validate`` (the default) the result must pass :func:`validate_mdp`.
    """
    states = tuple(decision_states)
    grouped: dict[str, list[Action]] = {s: [] for s in states}
    for action_id, owner, dist in actions:
        act = Action(action_id, owner, {s: frac(p) for s, p in dist.items()})
        grouped.setdefault(owner, []).append(act)
    m = Mdp(states, target, sink, {s: tuple(a) for s, a in grouped.items()})
    if validate:
        violations = validate_mdp(m)
        if violations:
            raise InvalidMdp("invalid MDP: " + "; ".join(violations), violations)
    return m


def validate_mdp(m: Mdp) -> list[str]:
    """Return every violated structural invariant; an empty list means valid."""
    violations: list[str] = []
    known = set(m.decision_states) | {m.target, m.sink}
    if m.target == m.sink:
        violations.append("target and sink must be distinct states")
    for special, name in ((m.target, "target"), (m.sink, "sink")):
        if special in m.decision_states:
            violations.append(f"{name} '{special}' must not be a decision state")
    if len(set(m.decision_states)) != len(m.decision_states):
        violations.append("duplicate decision state name")
    for state in m.actions:
        if state not in m.decision_states:
            violations.append(f"actions listed for unknown state '{state}'")
    seen_ids: set[str] = set()
    for state in m.decision_states:
        acts = m.actions.get(state, ())
        if not acts:
            violations.append(f"decision state '{state}' has no actions")
        for act in acts:
            if act.owner != state:
                violations.append(
                    f"action '{act.id}' listed under '{state}' but owned by '{act.owner}'"
                )
            if act.id in seen_ids:
                violations.append(f"duplicate action id '{act.id}'")
            seen_ids.add(act.id)
            total = sum(act.dist.values(), start=Fraction(0))
            if total != 1:
                violations.append(
                    f"action '{act.id}' distribution sums to {total} (must be exactly 1)"
                )
            for dest, p in act.dist.items():
                if dest not in known:
                    violations.append(
                        f"action '{act.id}' refers to unknown state '{dest}'"
                    )
                if not (0 < p <= ONE):
                    violations.append(
                        f"action '{act.id}' probability {p} for '{dest}' is outside (0, 1]"
                    )
    return violations


def maximal_end_components(m: Mdp) -> list[EndComponent]:
    """Decompose the MDP into its maximal end components.

    Standard iterative SCC pruning: restrict to actions whose whole support
    stays inside the candidate state set, split the candidate into strongly
    connected components, drop states left without an internal action, and
    repeat until each surviving candidate is a single SCC in which every
    state keeps an internal action.
    """
    violations = validate_mdp(m)
    if violations:
        raise InvalidMdp("invalid MDP: " + "; ".join(violations), violations)
    order = {s: i for i, s in enumerate(m.decision_states)}
    mecs: list[EndComponent] = []
    stack: list[frozenset[str]] = [frozenset(m.decision_states)]
    while stack:
        candidate = stack.pop()
        if not candidate:
            continue
        inside = {
            s: [a for a in m.actions[s] if a.support() <= candidate]
            for s in candidate
        }
        live = frozenset(s for s in candidate if inside[s])
        if live != candidate:
            stack.append(live)
            continue
        succ = {
            s: sorted({d for a in inside[s] for d in a.dist}, key=order.get)
            for s in candidate
        }
        components = _strongly_connected_components(sorted(candidate, key=order.get), succ)
        if len(components) == 1:
            acts = frozenset(a.id for s in candidate for a in inside[s])
            mecs.append(EndComponent(candidate, acts))
        else:
            stack.extend(frozenset(c) for c in components)
    mecs.sort(key=lambda ec: min(order[s] for s in ec.states))
    return mecs


def remove_end_components(m: Mdp, obj: Objective) -> Mdp:
    """Rewrite the MDP so it has no end components, preserving optimal values.

    For the Min objective every maximal end component is merged into the
    sink.  For Max, bottom components (no action of a member state leaves)
    are merged into the sink, and every other component is contracted to a
    fresh state that keeps all leaving actions, with in-component mass
    re-aimed at the fresh state.  EC-free inputs are returned unchanged.
    """
    mecs = maximal_end_components(m)
    if not mecs:
        return m
    replacement: dict[str, str] = {}
    fresh_by_mec: dict[frozenset[str], str] = {}
    taken = set(m.all_states())
    for mec in mecs:
        members = mec.states
        bottom = all(
            a.support() <= members for s in members for a in m.actions[s]
        )
        if obj is Objective.MIN or bottom:
            for s in members:
                replacement[s] = m.sink
        else:
            name = "mec(" + "+".join(sorted(members)) + ")"
            while name in taken:
                name += "'"
            taken.add(name)
            fresh_by_mec[members] = name
            for s in members:
                replacement[s] = name

    def remap(dist: Mapping[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for dest, p in dist.items():
            key = replacement.get(dest, dest)
            out[key] = out.get(key, Fraction(0)) + p
        return out

    new_states: list[str] = []
    new_actions: dict[str, tuple[Action, ...]] = {}
    emitted: set[str] = set()
    for s in m.decision_states:
        repl = replacement.get(s, s)
        if repl == s:
            new_states.append(s)
            new_actions[s] = tuple(
                Action(a.id, s, remap(a.dist)) for a in m.actions[s]
            )
        elif repl != m.sink and repl not in emitted:
            emitted.add(repl)
            members = next(ms for ms, name in fresh_by_mec.items() if name == repl)
            leaving = [
                a
                for member in sorted(members, key=m.decision_states.index)
                for a in m.actions[member]
                if not a.support() <= members
            ]
            new_states.append(repl)
            new_actions[repl] = tuple(
                Action(a.id, repl, remap(a.dist)) for a in leaving
            )
    reduced = Mdp(tuple(new_states), m.target, m.sink, new_actions)
    violations = validate_mdp(reduced)
    if violations:
        raise InvalidMdp(
            "end-component removal produced an invalid MDP: " + "; ".join(violations),
            violations,
        )
    return reduced


def _strongly_connected_components(
    nodes: list[str], succ: Mapping[str, list[str]]
) -> list[set[str]]:
    """Tarjan's algorithm, iterative to avoid recursion limits."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[set[str]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = lowlink[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == node:
                        break
                components.append(component)
    return components
