"""Exact valuation types: additive functions, XOS valuations, instances.

All numeric values are ``fractions.Fraction``.  Nothing in this module (or
anywhere else in the core) touches floating point; every comparison made by
the solvers and the verification harness is exact.

An XOS valuation is the pointwise maximum of a finite family of additive
functions.  The family member attaining the maximum on a set is called the
witness for that set; ties resolve to the smallest family index, and every
routine that depends on a witness uses that same rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _check_item(j: int, m: int) -> int:
    if not isinstance(j, int) or isinstance(j, bool):
        raise TypeError(f"item index must be an int, got {j!r}")
    if j < 0 or j >= m:
        raise IndexError(f"item index {j} out of range for {m} items")
    return j


def _item_set(items: Iterable[int], m: int) -> frozenset[int]:
    return frozenset(_check_item(j, m) for j in items)


@dataclass(frozen=True)
class AdditiveFunction:
    """A non-negative additive set function given by per-item values."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.values)
        for j, x in enumerate(vals):
            if x < 0:
                raise ValueError(f"entry {j} is negative ({x})")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def value(self, items: Iterable[int]) -> Fraction:
        total = ZERO
        for j in _item_set(items, len(self.values)):
            total += self.values[j]
        return total

    def fractional_value(self, shares: Sequence[Fraction]) -> Fraction:
        if len(shares) != len(self.values):
            raise ValueError("share vector length does not match item count")
        total = ZERO
        for x, s in zip(self.values, shares):
            total += x * s
        return total


@dataclass(frozen=True)
class XosValuation:
    """Pointwise maximum of a non-empty family of additive functions."""

    functions: tuple[AdditiveFunction, ...]

    def __post_init__(self):
        funcs = tuple(
            f if isinstance(f, AdditiveFunction) else AdditiveFunction(tuple(f))
            for f in self.functions
        )
        if not funcs:
            raise ValueError("an XOS valuation needs at least one additive function")
        m = len(funcs[0])
        for k, f in enumerate(funcs):
            if len(f) != m:
                raise ValueError(f"function {k} has {len(f)} entries, expected {m}")
        object.__setattr__(self, "functions", funcs)

    @property
    def m(self) -> int:
        return len(self.functions[0])

    def _best(self, per_function: Sequence[Fraction]) -> tuple[int, Fraction]:
        # first maximizer wins, so the witness index is the smallest one
        best_k, best = 0, per_function[0]
        for k in range(1, len(per_function)):
            if per_function[k] > best:
                best_k, best = k, per_function[k]
        return best_k, best

    def value(self, items: Iterable[int]) -> Fraction:
        s = _item_set(items, self.m)
        return self._best([f.value(s) for f in self.functions])[1]

    def witness_index(self, items: Iterable[int]) -> int:
        s = _item_set(items, self.m)
        return self._best([f.value(s) for f in self.functions])[0]

    def fractional_value(self, shares: Sequence[Fraction]) -> Fraction:
        return self._best([f.fractional_value(shares) for f in self.functions])[1]

    def fractional_witness_index(self, shares: Sequence[Fraction]) -> int:
        return self._best([f.fractional_value(shares) for f in self.functions])[0]

    def truncate(self, cap: Fraction) -> "TruncatedValuation":
        return TruncatedValuation(self, Fraction(cap))

    def scaled(self, factor: Fraction) -> "XosValuation":
        """Valuation with every entry multiplied by a non-negative factor."""
        factor = Fraction(factor)
        if factor < 0:
            raise ValueError("scaling factor must be non-negative")
        return XosValuation(
            tuple(
                AdditiveFunction(tuple(x * factor for x in f.values))
                for f in self.functions
            )
        )


@dataclass(frozen=True)
class TruncatedValuation:
    """min(cap, v(S)) for an underlying XOS valuation v.

    The cap applies to the set value, not to individual items, so the result
    is still monotone but is kept as a wrapper rather than materialized as a
    new XOS family.
    """

    base: XosValuation
    cap: Fraction

    def __post_init__(self):
        cap = Fraction(self.cap)
        if cap < 0:
            raise ValueError("cap must be non-negative")
        object.__setattr__(self, "cap", cap)

    @property
    def m(self) -> int:
        return self.base.m

    def value(self, items: Iterable[int]) -> Fraction:
        return min(self.cap, self.base.value(items))

    def fractional_value(self, shares: Sequence[Fraction]) -> Fraction:
        return min(self.cap, self.base.fractional_value(shares))


@dataclass(frozen=True)
class FractionalSet:
    """Per-item shares in [0, 1]; a fractional subset of the items."""

    shares: tuple[Fraction, ...]

    def __post_init__(self):
        shares = tuple(Fraction(s) for s in self.shares)
        for j, s in enumerate(shares):
            if s < 0 or s > 1:
                raise ValueError(f"share {j} is {s}, outside [0, 1]")
        object.__setattr__(self, "shares", shares)

    def __len__(self) -> int:
        return len(self.shares)

    def __iter__(self):
        return iter(self.shares)

    def __getitem__(self, j: int) -> Fraction:
        return self.shares[j]


@dataclass(frozen=True)
class Instance:
    """A fair-division instance: m items, one XOS valuation per agent.

    ``normalized`` records that each positive-maximin-share agent's entries
    were divided by her maximin share; it is bookkeeping only.  An instance
    with no agents is permitted so that reductions can remove the last one.
    """

    m: int
    valuations: tuple[XosValuation, ...]
    normalized: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("item count must be non-negative")
        vals = tuple(self.valuations)
        for i, v in enumerate(vals):
            if not isinstance(v, XosValuation):
                raise TypeError(f"agent {i}: expected XosValuation, got {type(v)!r}")
            if v.m != self.m:
                raise ValueError(f"agent {i} valuation covers {v.m} items, expected {self.m}")
        object.__setattr__(self, "valuations", vals)

    @property
    def n(self) -> int:
        return len(self.valuations)


def instance_from_lists(agent_functions, normalized: bool = False) -> Instance:
    """Build an Instance from nested lists of rationals.

    ``agent_functions[i][k][j]`` is the value of item j under the k-th
    additive function of agent i.
    """
    valuations = tuple(
        XosValuation(tuple(AdditiveFunction(tuple(Fraction(x) for x in row)) for row in fam))
        for fam in agent_functions
    )
    if not valuations:
        raise ValueError("need at least one agent")
    return Instance(m=valuations[0].m, valuations=valuations, normalized=normalized)


def restrict_instance(inst: Instance, agents: Sequence[int], items: Sequence[int]) -> Instance:
    """Sub-instance keeping the given agents and items, in the given order.

    Item j of the result corresponds to original item ``items[j]``.
    """
    agents = list(agents)
    items = [_check_item(j, inst.m) for j in items]
    if len(set(items)) != len(items):
        raise ValueError("duplicate items in restriction")
    for i in agents:
        if i < 0 or i >= inst.n:
            raise IndexError(f"agent index {i} out of range")
    if len(set(agents)) != len(agents):
        raise ValueError("duplicate agents in restriction")
    vals = tuple(
        XosValuation(
            tuple(
                AdditiveFunction(tuple(f.values[j] for j in items))
                for f in inst.valuations[i].functions
            )
        )
        for i in agents
    )
    return Instance(m=len(items), valuations=vals, normalized=inst.normalized)


def contribution(valuation, whole: Iterable[int], part: Iterable[int]) -> Fraction:
    """v(T) - v(T minus S): how much removing S from T costs under v.

    ``part`` must be a subset of ``whole``.  Works for any valuation object
    exposing ``value`` (XOS or truncated); non-negative for monotone v.
    """
    t = frozenset(whole)
    s = frozenset(part)
    if not s <= t:
        raise ValueError("removed set must be contained in the base set")
    return valuation.value(t) - valuation.value(t - s)
