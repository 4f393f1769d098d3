"""Bellman operators of end-component-free MDPs, evaluated exactly.

For the objective Max (resp. Min) the operator maps a vector x in [0,1]^d
to the componentwise maximum (minimum) over each state's actions of the
affine form

    value(action, x) = sum_j P(state, action, j) * x_j + P(state, action, target),

the sum ranging over decision states.  Without end components the operator
has a unique fixed point, reached in the limit from every start vector;
this module computes that fixed point exactly by policy iteration, splits
actions into tight ones (which reproduce the fixed point) and leaking ones,
and derives the radius of the ball around the fixed point inside which the
operator only ever picks tight actions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InvalidInput,
    InvalidMdp,
    IterationCapExceeded,
    NonConvergence,
    NotAFixedPoint,
    OutOfUnitBox,
    UnknownAction,
)
from .linalg import (
    ONE,
    ZERO,
    dot,
    identity,
    in_unit_box,
    inf_norm,
    lcm_of_denominators,
    ones_vector,
    solve_linear,
    vec_sub,
    vector,
    zero_vector,
)
from .mdp import Mdp, Objective, maximal_end_components, validate_mdp

DEFAULT_ITERATION_CAP = 10**6


class ActionClass(Enum):
    TIGHT = "tight"
    LEAKING = "leaking"


@dataclass(frozen=True)
class ApplyResult:
    """Value of one operator application plus, per state, the set of action
    ids attaining the optimum."""

    value: tuple[Fraction, ...]
    argopt: tuple[frozenset[str], ...]


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Step count N together with the verified gap ||Phi^N(1) - Phi^N(0)||."""

    steps: int
    gap: Fraction


@dataclass(frozen=True)
class _AffineForm:
    action_id: str
    row: tuple[Fraction, ...]
    target_mass: Fraction
    successors: frozenset[int]

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.row, x) + self.target_mass


class BellmanOperator:
    """A max- or min-Bellman operator over an end-component-free MDP.

    Construction validates the MDP and rejects it when end components are
    present (reduce with :func:`bellreach.mdp.remove_end_components` first);
    this guarantees the fixed point is unique.  Instances are immutable and
    safe to share across threads; the fixed point is memoised.
    """

    def __init__(self, mdp: Mdp, objective: Objective):
        violations = validate_mdp(mdp)
        if violations:
            raise InvalidMdp("invalid MDP: " + "; ".join(violations), violations)
        mecs = maximal_end_components(mdp)
        if mecs:
            names = ", ".join(sorted(min(ec.states) for ec in mecs))
            raise InvalidMdp(
                f"MDP has end components (e.g. around {names}); "
                "remove them before building the operator"
            )
        self.mdp = mdp
        self.objective = objective
        self._index = {s: i for i, s in enumerate(mdp.decision_states)}
        d = len(mdp.decision_states)
        forms: list[tuple[_AffineForm, ...]] = []
        by_id: dict[str, tuple[int, _AffineForm]] = {}
        for i, state in enumerate(mdp.decision_states):
            state_forms = []
            for act in mdp.actions[state]:
                row = tuple(
                    act.dist.get(s, ZERO) for s in mdp.decision_states
                )
                form = _AffineForm(
                    act.id,
                    row,
                    act.dist.get(mdp.target, ZERO),
                    frozenset(j for j, p in enumerate(row) if p != 0),
                )
                state_forms.append(form)
                by_id[act.id] = (i, form)
            forms.append(tuple(state_forms))
        self._forms = tuple(forms)
        self._by_id = by_id
        self._dimension = d
        self._mu: Optional[tuple[Fraction, ...]] = None

    @property
    def dimension(self) -> int:
        return self._dimension

    def eval_action(self, action_id: str, x: Sequence[Fraction]) -> Fraction:
        """Exact value of one action's affine form at x."""
        if action_id not in self._by_id:
            raise UnknownAction(f"no action named '{action_id}'")
        if len(x) != self._dimension:
            raise DimensionMismatch(
                f"vector has length {len(x)}, expected {self._dimension}"
            )
        return self._by_id[action_id][1].value(x)

    def apply(self, x: Sequence[Fraction]) -> ApplyResult:
        """One exact operator application with the attaining action sets."""
        self._check_vector(x)
        pick_max = self.objective is Objective.MAX
        values: list[Fraction] = []
        argopt: list[frozenset[str]] = []
        for forms in self._forms:
            best: Optional[Fraction] = None
            ids: list[str] = []
            for form in forms:
                v = form.value(x)
                if best is None or v == best:
                    best = v if best is None else best
                    ids.append(form.action_id)
                elif (v > best) == pick_max:
                    best = v
                    ids = [form.action_id]
            assert best is not None
            values.append(best)
            argopt.append(frozenset(ids))
        return ApplyResult(tuple(values), tuple(argopt))

    def fixed_point(self) -> tuple[Fraction, ...]:
        """The unique fixed point, by policy iteration with exact evaluation.

        Starts from the policy choosing each state's first action, evaluates
        each policy by solving (I - M) x = b exactly, and switches a state's
        action only on strict improvement (smallest improving index wins).
        End-component freeness makes every policy's system nonsingular and
        guarantees termination.  The result is verified to satisfy the
        defining equation; failure raises NonConvergence and indicates a bug.
        """
        if self._mu is None:
            d = self._dimension
            pick_max = self.objective is Objective.MAX
            policy = [0] * d
            while True:
                x = self._evaluate_policy(policy)
                changed = False
                for i, forms in enumerate(self._forms):
                    best_j = policy[i]
                    best_v = forms[best_j].value(x)
                    for j, form in enumerate(forms):
                        v = form.value(x)
                        if (v > best_v) == pick_max and v != best_v:
                            best_j, best_v = j, v
                    if best_j != policy[i]:
                        policy[i] = best_j
                        changed = True
                if not changed:
                    break
            mu = x
            if not in_unit_box(mu) or self.apply(mu).value != mu:
                raise NonConvergence("policy iteration did not reach the fixed point")
            self._mu = mu
        return self._mu

    def classify_actions(self, mu: Sequence[Fraction]) -> dict[str, ActionClass]:
        """Split actions into tight (reproduce the fixed point) and leaking."""
        self._require_fixed_point(mu)
        out: dict[str, ActionClass] = {}
        for i, forms in enumerate(self._forms):
            any_tight = False
            for form in forms:
                tight = form.value(mu) == mu[i]
                any_tight = any_tight or tight
                out[form.action_id] = (
                    ActionClass.TIGHT if tight else ActionClass.LEAKING
                )
            assert any_tight, "the optimum at the fixed point must be attained"
        return out

    def tight_radius(self, mu: Sequence[Fraction]) -> Fraction:
        """Radius delta = 1/(2D) of the ball around the fixed point inside
        which every application attains its optimum with tight actions only.

        D is the least common denominator of the fixed-point entries and of
        the leaking actions' values at the fixed point.
        """
        classes = self.classify_actions(mu)
        values = list(mu)
        for i, forms in enumerate(self._forms):
            for form in forms:
                if classes[form.action_id] is ActionClass.LEAKING:
                    values.append(form.value(mu))
        return Fraction(1, 2 * lcm_of_denominators(values))

    def action_rows(
        self,
    ) -> tuple[tuple[tuple[str, tuple[Fraction, ...]], ...], ...]:
        """Per state, the (action id, row over decision-state columns) pairs."""
        return tuple(
            tuple((form.action_id, form.row) for form in forms)
            for forms in self._forms
        )

    def tight_successors(
        self, mu: Sequence[Fraction]
    ) -> tuple[tuple[frozenset[int], ...], ...]:
        """Per state, the successor index sets of its tight actions."""
        classes = self.classify_actions(mu)
        return tuple(
            tuple(
                form.successors
                for form in forms
                if classes[form.action_id] is ActionClass.TIGHT
            )
            for forms in self._forms
        )

    def convergence_steps(
        self, eps: Fraction, cap: int = DEFAULT_ITERATION_CAP
    ) -> ConvergenceCertificate:
        """Least N, found by synchronized iteration from the box corners 0
        and 1, with ||Phi^N(1) - Phi^N(0)|| < eps.

        Monotonicity sandwiches every orbit between the two iterates, so
        ||Phi^n(s) - fixed point|| < eps for every s in [0,1]^d and n >= N.
        Hitting the safety cap signals a bug or an end-component leak.
        """
        if eps <= 0:
            raise InvalidInput("eps must be positive")
        lo = zero_vector(self._dimension)
        hi = ones_vector(self._dimension)
        steps = 0
        while inf_norm(vec_sub(hi, lo)) >= eps:
            if steps >= cap:
                raise IterationCapExceeded(
                    f"no certified gap below {eps} within {cap} iterations"
                )
            lo = self.apply(lo).value
            hi = self.apply(hi).value
            steps += 1
        return ConvergenceCertificate(steps, inf_norm(vec_sub(hi, lo)))

    def _evaluate_policy(self, policy: Sequence[int]) -> tuple[Fraction, ...]:
        d = self._dimension
        if d == 0:
            return ()
        ident = identity(d)
        rows = []
        rhs = []
        for i, j in enumerate(policy):
            form = self._forms[i][j]
            rows.append(tuple(e - p for e, p in zip(ident[i], form.row)))
            rhs.append(form.target_mass)
        return solve_linear(tuple(rows), tuple(rhs))

    def _check_vector(self, x: Sequence[Fraction]) -> None:
        if len(x) != self._dimension:
            raise DimensionMismatch(
                f"vector has length {len(x)}, expected {self._dimension}"
            )
        if not in_unit_box(x):
            raise OutOfUnitBox(f"vector {tuple(x)} leaves [0, 1]^d")

    def _require_fixed_point(self, mu: Sequence[Fraction]) -> None:
        if len(mu) != self._dimension:
            raise DimensionMismatch(
                f"vector has length {len(mu)}, expected {self._dimension}"
            )
        if not in_unit_box(mu) or self.apply(mu).value != tuple(mu):
            raise NotAFixedPoint("the given vector is not the operator's fixed point")
