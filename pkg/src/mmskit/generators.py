"""Instance generators: fixtures and seeded random families.

Every generator is a pure function of its parameters and seed, so suites
built from them are reproducible byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .values import Instance, instance_from_lists

FAMILIES = ("lemma1", "grid", "random-xos", "additive")


def lemma1_instance() -> Instance:
    """Two agents, four items, two additive functions each.

    The classic tight example: each agent's maximin share is 2, but the
    best split of the items across the two agents is worth only 3 in total,
    so no deterministic allocation gives both agents their full share.
    """
    return instance_from_lists(
        [
            [[1, 1, 0, 0], [0, 0, 1, 1]],
            [[1, 0, 0, 1], [0, 1, 1, 0]],
        ]
    )


def grid_instance(n: int) -> Instance:
    """n identical agents over n*n items arranged in n blocks of n.

    Function k pays 1/n per item inside block k.  Every agent's maximin
    share is exactly 1 (one block per bundle), while the uniform fractional
    allocation is worth only 1/n to each agent.
    """
    if n < 1:
        raise ValueError("n must be positive")
    share = Fraction(1, n)
    functions = []
    for k in range(n):
        row = [share if k * n <= j < (k + 1) * n else Fraction(0) for j in range(n * n)]
        functions.append(row)
    return instance_from_lists([functions] * n)


def random_xos_instance(n: int, m: int, l: int, maxval: int, seed: int) -> Instance:
    """Random XOS instance: l additive functions per agent, integer values.

    Entries are drawn uniformly from 0..maxval by a seeded generator.
    """
    if n < 1 or m < 0 or l < 1 or maxval < 0:
        raise ValueError("invalid generator parameters")
    rng = random.Random(seed)
    agents = [
        [[rng.randint(0, maxval) for _ in range(m)] for _ in range(l)]
        for _ in range(n)
    ]
    return instance_from_lists(agents)


def random_additive_instance(n: int, m: int, maxval: int, seed: int) -> Instance:
    """Random additive instance: one function per agent, integer values."""
    return random_xos_instance(n, m, 1, maxval, seed)


def gen_instance(
    family: str,
    *,
    n: int | None = None,
    m: int | None = None,
    l: int | None = None,
    maxval: int | None = None,
    seed: int | None = None,
) -> Instance:
    """Dispatch on the family name; unused parameters must stay unset."""
    if family == "lemma1":
        if any(x is not None for x in (n, m, l, maxval, seed)):
            raise ValueError("lemma1 takes no parameters")
        return lemma1_instance()
    if family == "grid":
        if n is None:
            raise ValueError("grid needs n")
        if any(x is not None for x in (m, l, maxval, seed)):
            raise ValueError("grid takes only n")
        return grid_instance(n)
    if family == "random-xos":
        if None in (n, m, l, maxval, seed):
            raise ValueError("random-xos needs n, m, l, maxval, seed")
        return random_xos_instance(n, m, l, maxval, seed)
    if family == "additive":
        if None in (n, m, maxval, seed):
            raise ValueError("additive needs n, m, maxval, seed")
        if l not in (None, 1):
            raise ValueError("additive instances have a single function")
        return random_additive_instance(n, m, maxval, seed)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
