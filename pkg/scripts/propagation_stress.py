#!/usr/bin/env python3
"""Stress the decision engine on random feature models.

Generates satisfiable random models, applies random decision sequences, and
checks after every accepted decision that the partial configuration still
extends to a full valid assignment of the enumerator. Prints a summary line;
exits non-zero if any dead end is found.

Usage: python scripts/propagation_stress.py [--models N] [--sequences N] [--seed N]
"""

import argparse
import random
import sys
import time

from chainline import configurator as cf
from chainline.errors import DecisionError
from chainline.model import (
    ConstraintOp,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    GroupKind,
    ParentLink,
    count_configurations,
    enumerate_configurations,
)


def random_model(rng: random.Random, max_features: int, max_constraints: int) -> FeatureModel:
    budget = rng.randint(1, max_features) - 1
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"F{counter[0]}"

    def subtree(link: ParentLink, depth: int) -> Feature:
        name = fresh()
        if link is not ParentLink.GROUP_MEMBER and budget >= 2 and depth < 3 and rng.random() < 0.25:
            kind = rng.choice((GroupKind.OR, GroupKind.XOR))
            size = rng.randint(2, min(3, budget))
            take(size)
            members = tuple(subtree(ParentLink.GROUP_MEMBER, depth + 1) for _ in range(size))
            return Feature(name, ParentLink.MANDATORY, group=kind, children=members)
        children = []
        while budget > 0 and len(children) < 3 and rng.random() < 0.4:
            take(1)
            children.append(
                subtree(rng.choice((ParentLink.MANDATORY, ParentLink.OPTIONAL)), depth + 1)
            )
        return Feature(name, link, children=tuple(children))

    def take(n: int) -> None:
        nonlocal budget
        budget -= n

    children = []
    while budget > 0 and len(children) < 4:
        take(1)
        children.append(subtree(rng.choice((ParentLink.MANDATORY, ParentLink.OPTIONAL)), 1))
    root = Feature("F0", ParentLink.ROOT, children=tuple(children))
    names = list(FeatureModel("F0", root).preorder)
    constraints: list[CrossTreeConstraint] = []
    if len(names) >= 2:
        for _ in range(rng.randint(0, max_constraints)):
            lhs, rhs = rng.sample(names, 2)
            candidate = CrossTreeConstraint(
                lhs, rng.choice((ConstraintOp.IMPLIES, ConstraintOp.IFF)), rhs
            )
            if candidate not in constraints:
                constraints.append(candidate)
    return FeatureModel("F0", root, tuple(constraints))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", type=int, default=200)
    parser.add_argument("--sequences", type=int, default=50)
    parser.add_argument("--max-features", type=int, default=12)
    parser.add_argument("--max-constraints", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    started = time.perf_counter()
    accepted = rejected = dead_ends = 0

    for _ in range(args.models):
        while True:
            model = random_model(rng, args.max_features, args.max_constraints)
            if count_configurations(model, max_features=args.max_features) > 0:
                break
        valid = enumerate_configurations(model, max_features=args.max_features)
        names = list(model.preorder)
        for _ in range(args.sequences):
            config = cf.new_configuration(model)
            for _ in range(2 * len(names)):
                feature = rng.choice(names)
                value = rng.choice((cf.State.SELECTED, cf.State.DESELECTED))
                try:
                    result = cf.decide(config, feature, value)
                except DecisionError:
                    continue
                if not result.accepted:
                    rejected += 1
                    continue
                accepted += 1
                decided = {
                    n: config.state(n) is cf.State.SELECTED
                    for n in names
                    if config.state(n) is not cf.State.UNDECIDED
                }
                if not any(
                    all(assignment[n] == v for n, v in decided.items())
                    for assignment in valid.assignments
                ):
                    dead_ends += 1
                    print(f"dead end: {decided}", file=sys.stderr)

    elapsed = time.perf_counter() - started
    print(
        f"models={args.models} sequences={args.sequences} accepted={accepted} "
        f"rejected={rejected} dead_ends={dead_ends} elapsed={elapsed:.1f}s"
    )
    return 1 if dead_ends else 0


if __name__ == "__main__":
    sys.exit(main())
