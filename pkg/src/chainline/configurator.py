"""Tri-state interactive configuration with rule-based constraint propagation.

Every user decision is applied atomically together with its propagation
closure. Propagation runs the following rules to fixpoint:

  - selecting a feature selects its parent;
  - selecting a feature selects its mandatory children;
  - selecting an xor member deselects its siblings;
  - in an or/xor group whose feature is selected, a sole remaining
    undecided member is selected once every other member is deselected;
  - deselecting a feature deselects its children;
  - deselecting a mandatory child deselects its parent;
  - deselecting the last non-deselected member deselects the group feature;
  - A => B propagates B on select(A) and not-A on deselect(B);
  - A <=> B propagates both directions in both polarities.

If the closure would assign both values to one feature, or the decided subset
would violate a model rule, the decision is rejected and nothing changes.
Propagated facts come only from the unit rules above; on top of them, a
decision is accepted only if the resulting partial configuration still extends
to at least one complete valid configuration, so dead-end states are
unreachable through this module.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from .errors import (
    ConfigFileError,
    DecisionError,
    FinalizeError,
    ModelError,
    VoidModelError,
)
from .model import (
    ConstraintOp,
    FeatureModel,
    GroupKind,
    ParentLink,
    decided_violations,
    structural_violations,
)


class State(Enum):
    SELECTED = "selected"
    DESELECTED = "deselected"
    UNDECIDED = "undecided"


class Origin(Enum):
    USER = "user"
    PROPAGATED = "propagated"
    INITIAL = "initial"


@dataclass(frozen=True)
class Decision:
    feature: str
    value: State
    origin: Origin


@dataclass(frozen=True)
class PropagationResult:
    accepted: bool
    newly_decided: tuple[Decision, ...] = ()
    conflict: Optional[str] = None


@dataclass(frozen=True)
class Status:
    valid: bool
    complete: bool
    undecided: tuple[str, ...]


@dataclass
class Configuration:
    """Single-writer: decide/undo/finalize require exclusive access."""

    model: FeatureModel
    states: dict[str, State] = field(default_factory=dict)
    origins: dict[str, Optional[Origin]] = field(default_factory=dict)
    decision_log: list[Decision] = field(default_factory=list)

    def state(self, name: str) -> State:
        return self.states[name]

    def origin(self, name: str) -> Optional[Origin]:
        return self.origins[name]

    def decided_value(self, name: str) -> Optional[bool]:
        s = self.states[name]
        if s is State.UNDECIDED:
            return None
        return s is State.SELECTED

    def user_decisions(self) -> list[Decision]:
        return [d for d in self.decision_log if d.origin is Origin.USER]

    def status(self) -> Status:
        undecided = tuple(
            n for n in self.model.preorder if self.states[n] is State.UNDECIDED
        )
        violations = decided_violations(self.model, self.decided_value)
        return Status(valid=not violations, complete=not undecided, undecided=undecided)

    def snapshot(self) -> tuple:
        return (
            self.model.name,
            tuple((n, self.states[n], self.origins[n]) for n in self.model.preorder),
            tuple(self.decision_log),
        )


class _Propagation:
    """One atomic decision attempt over a working copy of the states."""

    def __init__(
        self,
        model: FeatureModel,
        states: dict[str, State],
        origins: dict[str, Optional[Origin]],
        seed_origin: Origin,
        prop_origin: Origin,
    ):
        self.model = model
        self.states = states
        self.origins = origins
        self.seed_origin = seed_origin
        self.prop_origin = prop_origin
        self.decisions: list[Decision] = []
        self.queue: deque[str] = deque()
        self.conflict: Optional[str] = None

    def assign(self, name: str, value: State, origin: Origin, rule: str) -> None:
        if self.conflict is not None:
            return
        current = self.states[name]
        if current is value:
            return
        if current is not State.UNDECIDED:
            self.conflict = (
                f"{rule} requires '{name}' to be {value.value}, "
                f"but it is already {current.value}"
            )
            return
        self.states[name] = value
        self.origins[name] = origin
        self.decisions.append(Decision(name, value, origin))
        self.queue.append(name)

    def run(self, seed: str, value: State) -> None:
        self.assign(seed, value, self.seed_origin, "decision")
        while self.queue and self.conflict is None:
            self._apply_rules(self.queue.popleft())
        if self.conflict is None:
            violations = decided_violations(
                self.model,
                lambda n: None
                if self.states[n] is State.UNDECIDED
                else self.states[n] is State.SELECTED,
            )
            if violations:
                self.conflict = violations[0]

    def _apply_rules(self, name: str) -> None:
        model = self.model
        feature = model.features[name]
        value = self.states[name]
        parent_name = model.parents[name]
        origin = self.prop_origin

        if value is State.SELECTED:
            if parent_name is not None:
                self.assign(
                    parent_name, State.SELECTED, origin,
                    f"selecting '{name}' requires its parent '{parent_name}'",
                )
            for child in feature.children:
                if child.link is ParentLink.MANDATORY:
                    self.assign(
                        child.name, State.SELECTED, origin,
                        f"'{child.name}' is mandatory under selected '{name}'",
                    )
            if feature.link is ParentLink.GROUP_MEMBER and parent_name is not None:
                group = model.features[parent_name]
                if group.group is GroupKind.XOR:
                    for sibling in group.children:
                        if sibling.name != name:
                            self.assign(
                                sibling.name, State.DESELECTED, origin,
                                f"xor group '{parent_name}' excludes '{sibling.name}' "
                                f"once '{name}' is selected",
                            )
            if feature.group is not None:
                self._check_group(feature)
        else:
            for child in feature.children:
                self.assign(
                    child.name, State.DESELECTED, origin,
                    f"'{child.name}' sits under deselected '{name}'",
                )
            if feature.link is ParentLink.MANDATORY and parent_name is not None:
                self.assign(
                    parent_name, State.DESELECTED, origin,
                    f"deselecting mandatory child '{name}' rules out '{parent_name}'",
                )
            if feature.link is ParentLink.GROUP_MEMBER and parent_name is not None:
                group = model.features[parent_name]
                if all(
                    self.states[c.name] is State.DESELECTED for c in group.children
                ):
                    self.assign(
                        parent_name, State.DESELECTED, origin,
                        f"every member of group '{parent_name}' is deselected",
                    )
                elif self.states[parent_name] is State.SELECTED:
                    self._check_group(group)

        for c in model.constraints_by_feature[name]:
            rule = f"constraint '{c}'"
            if c.op is ConstraintOp.IMPLIES:
                if c.lhs == name and value is State.SELECTED:
                    self.assign(c.rhs, State.SELECTED, origin, rule)
                elif c.rhs == name and value is State.DESELECTED:
                    self.assign(c.lhs, State.DESELECTED, origin, rule)
            else:
                other = c.rhs if c.lhs == name else c.lhs
                self.assign(other, value, origin, rule)

    def _check_group(self, group) -> None:
        """Sole-remaining-member selection, and xor exclusion on a selected
        group feature whose member was already chosen."""
        if self.states[group.name] is not State.SELECTED:
            return
        origin = self.prop_origin
        member_states = {c.name: self.states[c.name] for c in group.children}
        selected = [n for n, s in member_states.items() if s is State.SELECTED]
        open_members = [n for n, s in member_states.items() if s is State.UNDECIDED]
        if group.group is GroupKind.XOR and selected:
            for n in open_members:
                self.assign(
                    n, State.DESELECTED, origin,
                    f"xor group '{group.name}' excludes '{n}' once "
                    f"'{selected[0]}' is selected",
                )
        elif not selected and len(open_members) == 1:
            self.assign(
                open_members[0], State.SELECTED, origin,
                f"'{open_members[0]}' is the sole remaining member of "
                f"selected group '{group.name}'",
            )


def _extensible(model: FeatureModel, states: dict[str, State]) -> bool:
    """True when some complete valid configuration extends a conflict-free
    tri-state assignment. Depth-first over the undecided features in
    pre-order, deselect-first, with unit propagation pruning: rule-based
    propagation alone cannot see contradictions hidden behind a case split,
    and accepting one would strand the user in a configuration that can never
    become complete and valid."""
    undecided = [n for n in model.preorder if states[n] is State.UNDECIDED]
    if not undecided:
        return True
    name = undecided[0]
    for value in (State.DESELECTED, State.SELECTED):
        prop = _Propagation(model, dict(states), {}, Origin.PROPAGATED, Origin.PROPAGATED)
        prop.run(name, value)
        if prop.conflict is None and _extensible(model, prop.states):
            return True
    return False


def new_configuration(model: FeatureModel) -> Configuration:
    violations = structural_violations(model)
    if violations:
        raise ModelError("; ".join(violations))
    config = Configuration(
        model=model,
        states={n: State.UNDECIDED for n in model.preorder},
        origins={n: None for n in model.preorder},
    )
    prop = _Propagation(
        model, dict(config.states), dict(config.origins), Origin.INITIAL, Origin.INITIAL
    )
    prop.run(model.root.name, State.SELECTED)
    if prop.conflict is not None:
        raise VoidModelError(f"model admits no configuration: {prop.conflict}")
    if not _extensible(model, prop.states):
        raise VoidModelError("model admits no configuration")
    config.states = prop.states
    config.origins = prop.origins
    config.decision_log = list(prop.decisions)
    return config


def decide(config: Configuration, feature: str, value: State) -> PropagationResult:
    if feature not in config.model.features:
        raise DecisionError(f"unknown feature '{feature}'")
    if value not in (State.SELECTED, State.DESELECTED):
        raise DecisionError("a decision must select or deselect")
    if feature == config.model.root.name and value is State.DESELECTED:
        raise DecisionError("cannot deselect the root feature")
    current = config.states[feature]
    if current is not State.UNDECIDED:
        if current is value:
            return PropagationResult(accepted=True)
        if config.origins[feature] is Origin.USER:
            raise DecisionError(
                f"'{feature}' already carries a user decision; undo it first"
            )
        raise DecisionError(
            f"'{feature}' was {current.value} by propagation; "
            "undo the decision that caused it"
        )
    prop = _Propagation(
        config.model, dict(config.states), dict(config.origins),
        Origin.USER, Origin.PROPAGATED,
    )
    prop.run(feature, value)
    if prop.conflict is not None:
        return PropagationResult(accepted=False, conflict=prop.conflict)
    if not _extensible(config.model, prop.states):
        return PropagationResult(
            accepted=False,
            conflict=f"{value.value.rstrip('ed')}ing '{feature}' would leave no "
            "complete valid configuration",
        )
    config.states = prop.states
    config.origins = prop.origins
    config.decision_log.extend(prop.decisions)
    propagated = tuple(d for d in prop.decisions if d.origin is Origin.PROPAGATED)
    return PropagationResult(accepted=True, newly_decided=propagated)


def undo(config: Configuration) -> Configuration:
    users = config.user_decisions()
    if not users:
        raise DecisionError("nothing to undo")
    rebuilt = replay(config.model, [(d.feature, d.value) for d in users[:-1]])
    config.states = rebuilt.states
    config.origins = rebuilt.origins
    config.decision_log = rebuilt.decision_log
    return config


def replay(
    model: FeatureModel, decisions: Iterable[tuple[str, State]]
) -> Configuration:
    """Rebuild a configuration from user decisions; each must be accepted."""
    config = new_configuration(model)
    for feature, value in decisions:
        result = decide(config, feature, value)
        if not result.accepted:
            raise DecisionError(
                f"replayed decision {feature}={value.value} rejected: {result.conflict}"
            )
    return config


def finalize(config: Configuration) -> Configuration:
    status = config.status()
    if not status.valid:
        raise FinalizeError("cannot finalize an invalid configuration")
    for name in config.model.preorder:
        if config.states[name] is not State.UNDECIDED:
            continue
        result = decide(config, name, State.DESELECTED)
        if not result.accepted:
            result = decide(config, name, State.SELECTED)
            if not result.accepted:
                raise FinalizeError(
                    f"cannot complete the configuration at '{name}': {result.conflict}",
                    blocking_feature=name,
                )
    return config


def serialize_configuration(config: Configuration) -> dict:
    return {
        "model": config.model.name,
        "decisions": [
            {"feature": d.feature, "value": d.value.value}
            for d in config.user_decisions()
        ],
    }


def load_configuration(
    model: FeatureModel, source: Union[str, bytes, dict]
) -> Configuration:
    """Load user decisions and recompute propagation. Decisions that the
    engine rejects are force-applied so the resulting configuration can be
    inspected; status() then reports valid=False."""
    if isinstance(source, (str, bytes)):
        text = source.decode() if isinstance(source, bytes) else source
        if not text.strip():
            return new_configuration(model)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigFileError(f"malformed configuration file: {exc}") from exc
    else:
        data = source
    if not isinstance(data, dict):
        raise ConfigFileError("configuration file must contain a JSON object")
    if "model" in data and data["model"] != model.name:
        raise ConfigFileError(
            f"configuration is for model '{data['model']}', not '{model.name}'"
        )
    entries = data.get("decisions", [])
    if not isinstance(entries, list):
        raise ConfigFileError("'decisions' must be a list")
    parsed: list[tuple[str, State]] = []
    for entry in entries:
        if not isinstance(entry, dict) or "feature" not in entry or "value" not in entry:
            raise ConfigFileError(f"malformed decision entry: {entry!r}")
        feature, value = entry["feature"], entry["value"]
        if feature not in model.features:
            raise ConfigFileError(f"unknown feature '{feature}'")
        if value not in (State.SELECTED.value, State.DESELECTED.value):
            raise ConfigFileError(f"invalid decision value {value!r}")
        parsed.append((feature, State(value)))
    config = new_configuration(model)
    for feature, value in parsed:
        try:
            result = decide(config, feature, value)
        except DecisionError:
            result = PropagationResult(accepted=False)
        if not result.accepted:
            config.states[feature] = value
            config.origins[feature] = Origin.USER
            config.decision_log.append(Decision(feature, value, Origin.USER))
    return config
