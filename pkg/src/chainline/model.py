"""Feature-model domain types and boolean semantics.

A model is a rooted feature tree plus binary cross-tree constraints. A full
assignment (feature -> bool) is valid when:

  (a) the root is true;
  (b) a true feature has a true parent;
  (c) a true feature has all its mandatory children true;
  (d) a true or-group feature has at least one member true;
  (e) a true xor-group feature has exactly one member true;
  (f) a group member is true only if its group feature is true;
  (g) every cross-tree constraint holds (material implication/equivalence).

The same rule set is evaluated over partial (tri-state) assignments by
`decided_violations`, which reports only definite violations: rules that no
extension of the decided subset could repair locally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterator, Mapping, Optional

from .errors import BoundExceededError

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

DEFAULT_ENUMERATION_BOUND = 24


class ParentLink(Enum):
    ROOT = "root"
    MANDATORY = "mandatory"
    OPTIONAL = "optional"
    GROUP_MEMBER = "member"


class GroupKind(Enum):
    OR = "or"
    XOR = "xor"


class ConstraintOp(Enum):
    IMPLIES = "=>"
    IFF = "<=>"


@dataclass(frozen=True)
class Feature:
    name: str
    link: ParentLink
    abstract: bool = False
    group: Optional[GroupKind] = None
    children: tuple["Feature", ...] = ()


@dataclass(frozen=True)
class CrossTreeConstraint:
    lhs: str
    op: ConstraintOp
    rhs: str

    def __str__(self) -> str:
        return f"{self.lhs} {self.op.value} {self.rhs}"


@dataclass(frozen=True)
class FeatureModel:
    """Immutable after construction; safe to share across threads."""

    name: str
    root: Feature
    constraints: tuple[CrossTreeConstraint, ...] = ()

    @cached_property
    def features(self) -> dict[str, Feature]:
        out: dict[str, Feature] = {}
        for f in self._walk(self.root):
            out[f.name] = f
        return out

    @cached_property
    def parents(self) -> dict[str, Optional[str]]:
        out: dict[str, Optional[str]] = {self.root.name: None}
        for f in self._walk(self.root):
            for c in f.children:
                out[c.name] = f.name
        return out

    @cached_property
    def preorder(self) -> tuple[str, ...]:
        return tuple(f.name for f in self._walk(self.root))

    @cached_property
    def constraints_by_feature(self) -> dict[str, tuple[CrossTreeConstraint, ...]]:
        out: dict[str, list[CrossTreeConstraint]] = {n: [] for n in self.preorder}
        for c in self.constraints:
            if c.lhs in out:
                out[c.lhs].append(c)
            if c.rhs in out and c.rhs != c.lhs:
                out[c.rhs].append(c)
        return {k: tuple(v) for k, v in out.items()}

    @staticmethod
    def _walk(feature: Feature) -> Iterator[Feature]:
        stack = [feature]
        while stack:
            f = stack.pop()
            yield f
            stack.extend(reversed(f.children))

    def feature(self, name: str) -> Feature:
        return self.features[name]

    def parent_of(self, name: str) -> Optional[str]:
        return self.parents[name]

    def concrete_features(self) -> tuple[str, ...]:
        return tuple(n for n in self.preorder if not self.features[n].abstract)

    def mandatory_closure(self) -> frozenset[str]:
        """Features forced true by rules (a)-(c) alone."""
        forced = {self.root.name}
        frontier = [self.root]
        while frontier:
            f = frontier.pop()
            for c in f.children:
                if c.link is ParentLink.MANDATORY and c.name not in forced:
                    forced.add(c.name)
                    frontier.append(c)
        return frozenset(forced)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.findings


@dataclass(frozen=True)
class ValidConfigurationSet:
    features: tuple[str, ...]
    assignments: tuple[Mapping[str, bool], ...]

    def __len__(self) -> int:
        return len(self.assignments)


def structural_violations(model: FeatureModel) -> list[str]:
    """Check the invariants the textual grammar cannot already guarantee."""
    out: list[str] = []
    seen: set[str] = set()
    roots = 0
    for name in model.preorder:
        f = model.features[name]
        if not NAME_RE.fullmatch(f.name):
            out.append(f"invalid feature name '{f.name}'")
        if f.name in seen:
            out.append(f"duplicate feature name '{f.name}'")
        seen.add(f.name)
        if f.link is ParentLink.ROOT:
            roots += 1
            if model.parents[f.name] is not None:
                out.append(f"non-top feature '{f.name}' declared as root")
        elif model.parents.get(f.name) is None:
            out.append(f"feature '{f.name}' has no parent but is not the root")
        if f.group is not None:
            if len(f.children) < 2:
                out.append(f"group feature '{f.name}' has fewer than 2 members")
            for c in f.children:
                if c.link is not ParentLink.GROUP_MEMBER:
                    out.append(
                        f"child '{c.name}' of group feature '{f.name}' is not a member"
                    )
        else:
            for c in f.children:
                if c.link is ParentLink.GROUP_MEMBER:
                    out.append(
                        f"member '{c.name}' under '{f.name}', which has no group"
                    )
    if roots != 1:
        out.append(f"model has {roots} root features, expected exactly 1")
    for c in model.constraints:
        if c.lhs == c.rhs:
            out.append(f"constraint '{c}' relates a feature to itself")
        for side in (c.lhs, c.rhs):
            if side not in model.features:
                out.append(f"constraint '{c}' references unknown feature '{side}'")
    return out


Undecided = None  # tri-state: True, False, or undecided


def decided_violations(
    model: FeatureModel, state_of: Callable[[str], Optional[bool]]
) -> list[str]:
    """Definite rule violations in a tri-state assignment, in deterministic
    order (features in pre-order, rules (a)-(f) per feature, constraints in
    declaration order). Over a full assignment this is exactly the validity
    check (a)-(g)."""
    out: list[str] = []
    for name in model.preorder:
        f = model.features[name]
        v = state_of(name)
        if f.link is ParentLink.ROOT and v is False:
            out.append("root feature must be selected")
            continue
        parent = model.parents[name]
        if parent is not None:
            pv = state_of(parent)
            if v is True and pv is False:
                out.append(f"'{name}' selected under deselected parent '{parent}'")
            if f.link is ParentLink.MANDATORY and pv is True and v is False:
                out.append(f"mandatory child '{name}' of '{parent}' deselected")
        if f.group is not None:
            member_states = [state_of(c.name) for c in f.children]
            selected = sum(1 for s in member_states if s is True)
            if v is True:
                if all(s is False for s in member_states):
                    out.append(f"{f.group.value}-group '{name}' has no member selected")
                elif f.group is GroupKind.XOR and selected > 1:
                    out.append(f"xor-group '{name}' has {selected} members selected")
            elif f.group is GroupKind.XOR and selected > 1:
                out.append(f"xor-group '{name}' has {selected} members selected")
    for c in model.constraints:
        lv, rv = state_of(c.lhs), state_of(c.rhs)
        if c.op is ConstraintOp.IMPLIES:
            if lv is True and rv is False:
                out.append(f"constraint '{c}' violated")
        else:
            if (lv is True and rv is False) or (lv is False and rv is True):
                out.append(f"constraint '{c}' violated")
    return out


def assignment_violations(
    model: FeatureModel, assignment: Mapping[str, bool]
) -> list[str]:
    return decided_violations(model, lambda n: assignment[n])


def _candidate_values(
    model: FeatureModel, feature: Feature, partial: dict[str, bool]
) -> tuple[bool, ...]:
    if feature.link is ParentLink.ROOT:
        return (True,)
    parent = model.parents[feature.name]
    assert parent is not None
    if not partial[parent]:
        return (False,)
    if feature.link is ParentLink.MANDATORY:
        return (True,)
    return (True, False)


def _enumerate(model: FeatureModel) -> Iterator[dict[str, bool]]:
    """Exact enumeration by depth-first assignment in pre-order with
    incremental pruning. Constraints are checked as soon as both endpoints are
    decided; group arity is checked when the last member is decided."""
    order = model.preorder
    index = {n: i for i, n in enumerate(order)}
    last_member_index: dict[str, int] = {}
    for name in order:
        f = model.features[name]
        if f.group is not None:
            last_member_index[name] = max(index[c.name] for c in f.children)
    constraints_at: dict[int, list[CrossTreeConstraint]] = {}
    for c in model.constraints:
        pos = max(index[c.lhs], index[c.rhs])
        constraints_at.setdefault(pos, []).append(c)

    partial: dict[str, bool] = {}

    def consistent_at(i: int) -> bool:
        for c in constraints_at.get(i, ()):
            lv, rv = partial[c.lhs], partial[c.rhs]
            if c.op is ConstraintOp.IMPLIES:
                if lv and not rv:
                    return False
            elif lv != rv:
                return False
        name = order[i]
        f = model.features[name]
        if f.link is ParentLink.GROUP_MEMBER:
            group_feature = model.features[model.parents[name]]  # type: ignore[index]
            if last_member_index[group_feature.name] == i and partial[group_feature.name]:
                selected = sum(partial[c.name] for c in group_feature.children)
                if selected == 0:
                    return False
                if group_feature.group is GroupKind.XOR and selected != 1:
                    return False
        return True

    def descend(i: int) -> Iterator[dict[str, bool]]:
        if i == len(order):
            yield dict(partial)
            return
        feature = model.features[order[i]]
        for value in _candidate_values(model, feature, partial):
            partial[order[i]] = value
            if consistent_at(i):
                yield from descend(i + 1)
            del partial[order[i]]

    yield from descend(0)


def enumerate_configurations(
    model: FeatureModel, max_features: int = DEFAULT_ENUMERATION_BOUND
) -> ValidConfigurationSet:
    n = len(model.preorder)
    if n > max_features:
        raise BoundExceededError(
            f"model has {n} features, enumeration bound is {max_features}"
        )
    return ValidConfigurationSet(
        features=model.preorder, assignments=tuple(_enumerate(model))
    )


def count_configurations(
    model: FeatureModel, max_features: int = DEFAULT_ENUMERATION_BOUND
) -> int:
    n = len(model.preorder)
    if n > max_features:
        raise BoundExceededError(
            f"model has {n} features, enumeration bound is {max_features}"
        )
    return sum(1 for _ in _enumerate(model))


def validate_model(
    model: FeatureModel,
    max_features: int = DEFAULT_ENUMERATION_BOUND,
) -> ValidationReport:
    """Structural checks always run; void/dead analysis only below the
    enumeration bound (skipped with a notice above it)."""
    report = ValidationReport(violations=structural_violations(model))
    if report.violations:
        return report
    n = len(model.preorder)
    if n > max_features:
        report.notices.append(
            f"semantic analysis skipped: {n} features exceed the bound of {max_features}"
        )
        return report
    alive: set[str] = set()
    total = 0
    for assignment in _enumerate(model):
        total += 1
        alive.update(name for name, v in assignment.items() if v)
    if total == 0:
        report.findings.append("void model: no valid configuration exists")
        return report
    for name in model.preorder:
        if name not in alive:
            report.findings.append(f"dead feature '{name}': false in every valid configuration")
    return report
