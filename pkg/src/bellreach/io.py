"""MDP document format: JSON with exact rational strings.

A document looks like

    {
      "states": ["s1", "s2"],
      "target": "t",
      "sink": "s-",
      "actions": [
        {"name": "alpha", "state": "s1", "dist": {"s2": "1/2", "t": "1/3"}}
      ]
    }

``states`` lists the decision states in order (this order fixes the vector
component order everywhere).  Probabilities are rational strings matching
``[+-]?digits[/digits]``; never decimal floats.  A distribution summing to
less than one implicitly sends the remainder to the sink; serialisation
always writes the sink mass out explicitly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

from .errors import ParseError, ValidationError
from .linalg import ONE, ZERO
from .mdp import Action, Mdp, validate_mdp

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(text: str) -> Fraction:
    """Parse a rational string like ``7/12``, ``-1``, or ``0``."""
    if not isinstance(text, str) or not _RATIONAL_RE.fullmatch(text.strip()):
        raise ParseError(f"not a rational string: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in rational string: {text!r}") from None


def format_rational(value: Fraction) -> str:
    return str(value)


def parse_vector(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-separated vector such as ``1,1/3,2/3``."""
    parts = [p.strip() for p in text.split(",")]
    if parts == [""]:
        raise ParseError("empty vector")
    return tuple(parse_rational(p) for p in parts)


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def mdp_from_dict(doc: object) -> Mdp:
    """Build and validate an Mdp from a parsed JSON object."""
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("states", "target", "sink", "actions"):
        if key not in doc:
            raise ParseError(f"missing key '{key}'")
    states = doc["states"]
    if not isinstance(states, list) or not states:
        raise ParseError("'states' must be a non-empty list of names")
    if not all(isinstance(s, str) for s in states):
        raise ParseError("'states' entries must be strings")
    target, sink = doc["target"], doc["sink"]
    if not isinstance(target, str) or not isinstance(sink, str):
        raise ParseError("'target' and 'sink' must be state names")
    if not isinstance(doc["actions"], list):
        raise ParseError("'actions' must be a list")
    grouped: dict[str, list[Action]] = {s: [] for s in states}
    for idx, entry in enumerate(doc["actions"]):
        where = f"actions[{idx}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where} must be an object")
        for key in ("name", "state", "dist"):
            if key not in entry:
                raise ParseError(f"{where} is missing '{key}'")
        name, owner, dist = entry["name"], entry["state"], entry["dist"]
        if not isinstance(name, str) or not isinstance(owner, str):
            raise ParseError(f"{where}: 'name' and 'state' must be strings")
        if not isinstance(dist, dict):
            raise ParseError(f"{where}: 'dist' must map state names to rationals")
        probs: dict[str, Fraction] = {}
        for dest, raw in dist.items():
            try:
                p = parse_rational(raw)
            except ParseError as exc:
                raise ParseError(f"{where}: dist['{dest}']: {exc}") from None
            if not (ZERO <= p <= ONE):
                raise ParseError(
                    f"{where}: dist['{dest}'] = {p} is outside [0, 1]"
                )
            if p > 0:
                probs[dest] = probs.get(dest, ZERO) + p
        total = sum(probs.values(), start=ZERO)
        if total > 1:
            raise ParseError(
                f"{where}: distribution of '{name}' sums to {total} > 1"
            )
        if total < 1:
            probs[sink] = probs.get(sink, ZERO) + (ONE - total)
        grouped.setdefault(owner, []).append(Action(name, owner, probs))
    m = Mdp(tuple(states), target, sink, {s: tuple(a) for s, a in grouped.items()})
    violations = validate_mdp(m)
    if violations:
        raise ValidationError(
            "document produced an invalid MDP: " + "; ".join(violations), violations
        )
    return m


def parse_mdp(text: str) -> Mdp:
    """Parse an MDP document from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    return mdp_from_dict(doc)


def load_mdp(path: Union[str, Path]) -> Mdp:
    return parse_mdp(Path(path).read_text(encoding="utf-8"))


def mdp_to_dict(m: Mdp) -> dict:
    """Serialise an Mdp; remainders are expanded, rationals become strings."""
    return {
        "states": list(m.decision_states),
        "target": m.target,
        "sink": m.sink,
        "actions": [
            {
                "name": act.id,
                "state": act.owner,
                "dist": {
                    dest: format_rational(act.dist[dest])
                    for dest in sorted(act.dist)
                },
            }
            for act in m.all_actions()
        ],
    }


def serialize_mdp(m: Mdp) -> str:
    return json.dumps(mdp_to_dict(m), indent=2) + "\n"
