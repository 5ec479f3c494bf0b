"""Test-side oracles, independent of the package's own rule evaluation.

The bitmask evaluator below re-states the validity rules from scratch over
integer masks and enumerates assignments by brute force, so it can cross-check
both the package enumerator and the propagation engine without sharing code
paths with either.
"""

from __future__ import annotations

import random
from typing import Optional

from chainline.model import (
    ConstraintOp,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    GroupKind,
    ParentLink,
)


class BitOracle:
    def __init__(self, model: FeatureModel):
        self.names: list[str] = []
        self.parent: list[Optional[int]] = []
        self.link: list[ParentLink] = []
        self.groups: list[tuple[int, GroupKind, list[int]]] = []
        index: dict[str, int] = {}

        def visit(feature: Feature, parent_idx: Optional[int]) -> None:
            idx = len(self.names)
            index[feature.name] = idx
            self.names.append(feature.name)
            self.parent.append(parent_idx)
            self.link.append(feature.link)
            for child in feature.children:
                visit(child, idx)

        visit(model.root, None)

        def collect_groups(feature: Feature) -> None:
            if feature.group is not None:
                self.groups.append(
                    (index[feature.name], feature.group, [index[c.name] for c in feature.children])
                )
            for child in feature.children:
                collect_groups(child)

        collect_groups(model.root)
        self.constraints: list[tuple[int, ConstraintOp, int]] = [
            (index[c.lhs], c.op, index[c.rhs]) for c in model.constraints
        ]
        self.index = index
        self.n = len(self.names)

    def bit(self, mask: int, idx: int) -> bool:
        return bool(mask >> idx & 1)

    def is_valid(self, mask: int) -> bool:
        """Full-assignment check, restated from the rule definitions."""
        if not self.bit(mask, 0):
            return False  # root must be true
        for i in range(1, self.n):
            p = self.parent[i]
            assert p is not None
            if self.bit(mask, i) and not self.bit(mask, p):
                return False
            if (
                self.link[i] is ParentLink.MANDATORY
                and self.bit(mask, p)
                and not self.bit(mask, i)
            ):
                return False
        for owner, kind, members in self.groups:
            if self.bit(mask, owner):
                true_members = sum(1 for m in members if self.bit(mask, m))
                if true_members == 0:
                    return False
                if kind is GroupKind.XOR and true_members != 1:
                    return False
        for lhs, op, rhs in self.constraints:
            lv, rv = self.bit(mask, lhs), self.bit(mask, rhs)
            if op is ConstraintOp.IMPLIES and lv and not rv:
                return False
            if op is ConstraintOp.IFF and lv != rv:
                return False
        return True

    def all_valid(self) -> list[int]:
        return [mask for mask in range(1 << self.n) if self.is_valid(mask)]

    def mask_of(self, assignment: dict[str, bool]) -> int:
        mask = 0
        for name, value in assignment.items():
            if value:
                mask |= 1 << self.index[name]
        return mask

    def decided_masks(self, states: dict[str, Optional[bool]]) -> tuple[int, int]:
        decided, bits = 0, 0
        for name, value in states.items():
            if value is None:
                continue
            idx = self.index[name]
            decided |= 1 << idx
            if value:
                bits |= 1 << idx
        return decided, bits

    def extension_exists(
        self, valid_masks: list[int], states: dict[str, Optional[bool]]
    ) -> bool:
        decided, bits = self.decided_masks(states)
        return any(mask & decided == bits for mask in valid_masks)

    def partial_ok(self, states: dict[str, Optional[bool]]) -> bool:
        """No definite rule violation in a tri-state assignment; a rule counts
        as violated only once every feature it mentions settles it."""
        value = {self.index[name]: v for name, v in states.items()}
        if value.get(0) is False:
            return False
        for i in range(1, self.n):
            p = self.parent[i]
            if value.get(i) is True and value.get(p) is False:
                return False
            if (
                self.link[i] is ParentLink.MANDATORY
                and value.get(p) is True
                and value.get(i) is False
            ):
                return False
        for owner, kind, members in self.groups:
            member_values = [value.get(m) for m in members]
            trues = sum(1 for v in member_values if v is True)
            if kind is GroupKind.XOR and trues > 1:
                return False
            if value.get(owner) is True:
                if all(v is False for v in member_values):
                    return False
        for lhs, op, rhs in self.constraints:
            lv, rv = value.get(lhs), value.get(rhs)
            if op is ConstraintOp.IMPLIES:
                if lv is True and rv is False:
                    return False
            else:
                if (lv is True and rv is False) or (lv is False and rv is True):
                    return False
        return True


class _TreeGen:
    def __init__(self, rng: random.Random, max_features: int):
        self.rng = rng
        self.remaining = max_features - 1
        self.counter = 0

    def fresh_name(self) -> str:
        self.counter += 1
        return f"F{self.counter}"

    def subtree(self, link: ParentLink, depth: int) -> Feature:
        name = self.fresh_name()
        rng = self.rng
        if (
            link is not ParentLink.GROUP_MEMBER
            and self.remaining >= 2
            and depth < 3
            and rng.random() < 0.25
        ):
            kind = rng.choice((GroupKind.OR, GroupKind.XOR))
            size = rng.randint(2, min(3, self.remaining))
            self.remaining -= size
            members = tuple(
                self.subtree(ParentLink.GROUP_MEMBER, depth + 1) for _ in range(size)
            )
            # group features are mandatory children, as in the textual format
            return Feature(name, ParentLink.MANDATORY, group=kind, children=members)
        children = []
        while self.remaining > 0 and len(children) < 3 and rng.random() < 0.4:
            self.remaining -= 1
            children.append(
                self.subtree(rng.choice((ParentLink.MANDATORY, ParentLink.OPTIONAL)), depth + 1)
            )
        return Feature(name, link, abstract=rng.random() < 0.15, children=tuple(children))


def random_model(
    rng: random.Random, max_features: int = 12, max_constraints: int = 4
) -> FeatureModel:
    gen = _TreeGen(rng, rng.randint(1, max_features))
    children = []
    while gen.remaining > 0 and len(children) < 4:
        gen.remaining -= 1
        children.append(
            gen.subtree(rng.choice((ParentLink.MANDATORY, ParentLink.OPTIONAL)), 1)
        )
    root = Feature("F0", ParentLink.ROOT, children=tuple(children))
    model = FeatureModel(name="F0", root=root)
    names = list(model.preorder)
    constraints: list[CrossTreeConstraint] = []
    if len(names) >= 2:
        for _ in range(rng.randint(0, max_constraints)):
            lhs, rhs = rng.sample(names, 2)
            op = rng.choice((ConstraintOp.IMPLIES, ConstraintOp.IFF))
            candidate = CrossTreeConstraint(lhs, op, rhs)
            if candidate not in constraints:
                constraints.append(candidate)
    return FeatureModel(name="F0", root=root, constraints=tuple(constraints))


def random_satisfiable_model(
    rng: random.Random, max_features: int = 12, max_constraints: int = 4
) -> tuple[FeatureModel, BitOracle, list[int]]:
    """Random model with at least one valid configuration, plus its oracle."""
    while True:
        model = random_model(rng, max_features, max_constraints)
        oracle = BitOracle(model)
        valid = oracle.all_valid()
        if valid:
            return model, oracle, valid


def config_states(config) -> dict[str, Optional[bool]]:
    return {name: config.decided_value(name) for name in config.model.preorder}


# --- random templates -------------------------------------------------------

from chainline.template import (  # noqa: E402
    DelimiterPair,
    DelimiterStyle,
    InvertedSection,
    Section,
    TemplateAst,
    Text,
    Variable,
)

_TEXT_ALPHABET = "abcdefgh XYZ012.;()-\n"


def random_template_nodes(rng: random.Random, keys: list[str], depth: int = 0) -> list:
    nodes = []
    for _ in range(rng.randint(1, 4)):
        roll = rng.random()
        if roll < 0.45 or depth >= 2:
            text = "".join(rng.choice(_TEXT_ALPHABET) for _ in range(rng.randint(1, 12)))
            nodes.append(Text(text))
        elif roll < 0.6:
            nodes.append(Variable(rng.choice(keys)))
        elif roll < 0.85:
            nodes.append(
                Section(rng.choice(keys), tuple(random_template_nodes(rng, keys, depth + 1)))
            )
        else:
            nodes.append(
                InvertedSection(
                    rng.choice(keys), tuple(random_template_nodes(rng, keys, depth + 1))
                )
            )
    return nodes


def nodes_to_source(nodes, delims: DelimiterPair) -> str:
    if delims.style is DelimiterStyle.COMMENT_WRAPPED:
        tag = lambda payload: f"{delims.open} {payload} {delims.close}"  # noqa: E731
    else:
        tag = lambda payload: f"{delims.open}{payload}{delims.close}"  # noqa: E731
    out = []
    for node in nodes:
        if isinstance(node, Text):
            out.append(node.text)
        elif isinstance(node, Variable):
            out.append(tag(node.key))
        elif isinstance(node, Section):
            out.append(tag(f"#{node.key}"))
            out.append(nodes_to_source(node.children, delims))
            out.append(tag(f"/{node.key}"))
        else:
            out.append(tag(f"^{node.key}"))
            out.append(nodes_to_source(node.children, delims))
            out.append(tag(f"/{node.key}"))
    return "".join(out)


_INNER_KEYS = ["n1", "n2", "n3"]  # disjoint from the tag key pool, so nested
# scopes never shadow a top-level gate


def random_context(rng: random.Random, keys: list[str]) -> dict:
    ctx = {}
    for key in keys:
        roll = rng.random()
        if roll < 0.4:
            ctx[key] = rng.random() < 0.5
        elif roll < 0.6:
            ctx[key] = rng.choice(["", "text", "spare part", "0"])
        elif roll < 0.75:
            ctx[key] = rng.randint(-5, 40)
        elif roll < 0.9:
            ctx[key] = [
                {inner: rng.randint(0, 9) for inner in rng.sample(_INNER_KEYS, 2)}
                for _ in range(rng.randint(0, 3))
            ]
        else:
            ctx[key] = {inner: rng.randint(0, 9) for inner in rng.sample(_INNER_KEYS, 2)}
    return ctx


def delete_sections(nodes: tuple, key: str) -> tuple:
    out = []
    for node in nodes:
        if isinstance(node, Section):
            if node.key == key:
                continue
            out.append(Section(node.key, delete_sections(node.children, key)))
        elif isinstance(node, InvertedSection):
            out.append(InvertedSection(node.key, delete_sections(node.children, key)))
        else:
            out.append(node)
    return tuple(out)


def ast_of(nodes) -> TemplateAst:
    return TemplateAst(tuple(nodes))
