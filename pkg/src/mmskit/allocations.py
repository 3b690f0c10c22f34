"""Integral, fractional, and randomized allocations, with exact evaluation.

A fractional allocation is an n x m matrix of shares; it is complete when
every item is fully handed out.  A randomized allocation is an explicit
finite distribution over integral allocations, which keeps every ex-ante
and ex-post quantity computable as an exact rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .engine import DEFAULT_MAX_ENUM
from .errors import CapacityError
from .values import HALF, ONE, ZERO, Instance, XosValuation


@dataclass(frozen=True)
class Allocation:
    """One owner per item; agents may end up with empty bundles."""

    owner: tuple[int, ...]

    def __post_init__(self):
        owner = tuple(self.owner)
        for j, i in enumerate(owner):
            if not isinstance(i, int) or isinstance(i, bool) or i < 0:
                raise ValueError(f"item {j} has invalid owner {i!r}")
        object.__setattr__(self, "owner", owner)

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundle(self, agent: int) -> frozenset[int]:
        return frozenset(j for j, i in enumerate(self.owner) if i == agent)

    def bundles(self, n: int) -> tuple[frozenset[int], ...]:
        return tuple(self.bundle(i) for i in range(n))


@dataclass(frozen=True)
class FractionalAllocation:
    """Shares matrix, one row per agent, with column sums at most 1."""

    shares: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(s) for s in row) for row in self.shares)
        if not rows:
            raise ValueError("need at least one agent row")
        m = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError(f"row {i} has {len(row)} entries, expected {m}")
            for j, s in enumerate(row):
                if s < 0 or s > 1:
                    raise ValueError(f"share ({i}, {j}) is {s}, outside [0, 1]")
        for j in range(m):
            col = sum(row[j] for row in rows)
            if col > 1:
                raise ValueError(f"item {j} is oversubscribed (column sum {col})")
        object.__setattr__(self, "shares", rows)

    @property
    def n(self) -> int:
        return len(self.shares)

    @property
    def m(self) -> int:
        return len(self.shares[0])

    @property
    def complete(self) -> bool:
        return all(
            sum(row[j] for row in self.shares) == 1 for j in range(self.m)
        )

    @property
    def half_integral(self) -> bool:
        return all(
            s == ZERO or s == HALF or s == ONE for row in self.shares for s in row
        )

    def row(self, agent: int) -> tuple[Fraction, ...]:
        return self.shares[agent]

    @classmethod
    def from_allocation(cls, alloc: Allocation, n: int) -> "FractionalAllocation":
        rows = tuple(
            tuple(ONE if owner == i else ZERO for owner in alloc.owner)
            for i in range(n)
        )
        return cls(rows)


@dataclass(frozen=True)
class RandomizedAllocation:
    """Finite distribution over integral allocations.

    Outcomes are distinct, probabilities are positive and sum to one.
    """

    support: tuple[tuple[Allocation, Fraction], ...]

    def __post_init__(self):
        support = tuple((a, Fraction(p)) for a, p in self.support)
        if not support:
            raise ValueError("support must be non-empty")
        total = ZERO
        seen = set()
        for a, p in support:
            if not isinstance(a, Allocation):
                raise TypeError("support entries must be Allocations")
            if p <= 0:
                raise ValueError(f"outcome probability {p} is not positive")
            if a.owner in seen:
                raise ValueError("duplicate outcome in support")
            seen.add(a.owner)
            total += p
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        object.__setattr__(self, "support", support)

    @property
    def outcomes(self) -> tuple[Allocation, ...]:
        return tuple(a for a, _ in self.support)


def uniform_fractional(inst: Instance) -> FractionalAllocation:
    """Every item split equally among all agents."""
    if inst.n < 1:
        raise ValueError("instance has no agents")
    share = Fraction(1, inst.n)
    return FractionalAllocation(tuple(tuple(share for _ in range(inst.m)) for _ in range(inst.n)))


def independent_rounding(
    frac: FractionalAllocation, *, max_enum: int = DEFAULT_MAX_ENUM
) -> RandomizedAllocation:
    """Product distribution: each item goes to agent i with probability f_ij.

    Requires a complete fractional allocation.  Zero-probability outcomes
    are never generated; the enumeration budget is checked against the
    product of per-item support sizes.
    """
    if not frac.complete:
        raise ValueError("fractional allocation must be complete")
    supports = [
        [i for i in range(frac.n) if frac.shares[i][j] > 0] for j in range(frac.m)
    ]
    count = 1
    for s in supports:
        count *= len(s)
        if count > max_enum:
            raise CapacityError(
                f"product rounding support exceeds the budget of {max_enum}"
            )
    outcomes = []
    for combo in itertools.product(*supports):
        p = ONE
        for j, i in enumerate(combo):
            p *= frac.shares[i][j]
        outcomes.append((Allocation(tuple(combo)), p))
    return RandomizedAllocation(tuple(outcomes))


def expected_value(rand: RandomizedAllocation, valuation, agent: int) -> Fraction:
    """Exact ex-ante value of the agent's random bundle."""
    total = ZERO
    for alloc, p in rand.support:
        total += p * valuation.value(alloc.bundle(agent))
    return total


def ex_post_min(rand: RandomizedAllocation, valuation, agent: int) -> Fraction:
    """Worst realized value of the agent's bundle over the support."""
    return min(valuation.value(alloc.bundle(agent)) for alloc, _ in rand.support)


def allocation_contribution(
    valuations: Sequence, alloc: Allocation, items: Iterable[int]
) -> Fraction:
    """Total loss across agents from deleting ``items`` out of their bundles.

    Sum over agents i of v_i(A_i) - v_i(A_i minus S).  Valuations may be
    XOS or truncated; only ``value`` is required.
    """
    s = frozenset(items)
    total = ZERO
    for i, v in enumerate(valuations):
        bundle = alloc.bundle(i)
        total += v.value(bundle) - v.value(bundle - s)
    return total


def _share_rows(alloc) -> tuple[int, Sequence[Sequence[Fraction]]]:
    if isinstance(alloc, FractionalAllocation):
        return alloc.n, alloc.shares
    if isinstance(alloc, Allocation):
        owners = alloc.owner
        n = max(owners, default=-1) + 1
        rows = [
            [ONE if owners[j] == i else ZERO for j in range(len(owners))]
            for i in range(n)
        ]
        return n, rows
    raise TypeError("expected an Allocation or FractionalAllocation")


def witness_mass(
    valuations: Sequence[XosValuation],
    alloc,
    shares: Sequence[Fraction],
) -> Fraction:
    """Witness-weighted mass of a fractional set against an allocation.

    For each agent the witness of her allocated row is fixed, and the mass
    sums witness_value(item) * set_share(item) * row_share(item).  This is
    the quantity that upper-bounds the welfare loss of carving the set out
    of the allocation, and summed over a fractional partition it equals the
    total fractional value of the allocation.
    """
    shares = list(shares)
    _, rows = _share_rows(alloc)
    if len(rows) > len(valuations):
        raise ValueError("allocation references more agents than valuations given")
    total = ZERO
    for i, v in enumerate(valuations):
        if i >= len(rows):
            break
        row = rows[i]
        if len(row) != len(shares):
            raise ValueError("share vector length does not match allocation")
        u = v.functions[v.fractional_witness_index(row)].values
        for j in range(len(shares)):
            if row[j] != 0 and shares[j] != 0:
                total += u[j] * shares[j] * row[j]
    return total
