"""Round a complete half-integral allocation to two integral outcomes.

The construction: agents whose row sums are non-integral are paired up with
zero-value dummy items so every agent holds an even number of half shares.
Each agent then sorts her half-owned items by decreasing witness value and
packs them into slots of two consecutive items.  Slots on one side, half
items on the other side form a bipartite graph where every vertex has
degree exactly two, so the edges split into two perfect matchings along the
even cycles.  Matching r sends each half item to the slot owner it is
matched with, giving outcome r.

Played with probability 1/2 each, the two outcomes preserve every marginal
share exactly, and each agent's witness value ex post drops below her
fractional witness value by at most half her largest half-owned witness
value (the pair packing loses at most the gap inside each slot, and those
gaps telescope).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .values import HALF, ONE, ZERO, Instance
from .allocations import Allocation, FractionalAllocation, RandomizedAllocation


@dataclass(frozen=True)
class Slot:
    """One agent-side vertex: an agent and the two half items packed in it."""

    agent: int
    items: tuple[int, int]


@dataclass(frozen=True)
class DummyItem:
    """Zero-value padding item splitting its halves between two agents."""

    index: int
    agents: tuple[int, int]


@dataclass(frozen=True)
class RoundingGraph:
    """Bipartite slot/item graph; every item vertex must have degree two."""

    slots: tuple[Slot, ...]
    items: tuple[int, ...]

    def __post_init__(self):
        degree = {j: 0 for j in self.items}
        for slot in self.slots:
            a, b = slot.items
            if a == b:
                raise ValueError(f"slot {slot} repeats an item")
            for j in slot.items:
                if j not in degree:
                    raise ValueError(f"slot {slot} references unknown item {j}")
                degree[j] += 1
        bad = {j: d for j, d in degree.items() if d != 2}
        if bad:
            raise ValueError(f"item vertices without degree 2: {bad}")

    def item_slots(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {j: [] for j in self.items}
        for idx, slot in enumerate(self.slots):
            for j in slot.items:
                adj[j].append(idx)
        return adj


def decompose_two_regular(graph: RoundingGraph) -> tuple[dict[int, int], dict[int, int]]:
    """Split a two-regular bipartite graph into two perfect matchings.

    Returns two slot-index -> item maps.  Cycles are walked starting from
    the lowest-index unvisited slot; the first edge out of it, to the lower
    of its two item indices, lands in the first matching, and edges
    alternate from there.  Bipartiteness makes every cycle even, so the
    alternation closes up consistently.
    """
    adj = graph.item_slots()
    m1: dict[int, int] = {}
    m2: dict[int, int] = {}
    visited = [False] * len(graph.slots)
    for start in range(len(graph.slots)):
        if visited[start]:
            continue
        slot_idx = start
        item = min(graph.slots[start].items)
        take_first = True
        while True:
            visited[slot_idx] = True
            (m1 if take_first else m2)[slot_idx] = item
            # hop to the other slot incident to this item
            s0, s1 = adj[item]
            nxt = s1 if s0 == slot_idx else s0
            take_first = not take_first
            (m1 if take_first else m2)[nxt] = item
            a, b = graph.slots[nxt].items
            item = b if a == item else a
            slot_idx = nxt
            take_first = not take_first
            if slot_idx == start and item == min(graph.slots[start].items):
                break
    return m1, m2


def _row_witness_values(inst: Instance, frac: FractionalAllocation, agent: int):
    v = inst.valuations[agent]
    row = frac.shares[agent]
    return v.functions[v.fractional_witness_index(row)].values


def build_rounding_graph(
    frac: FractionalAllocation, inst: Instance
) -> tuple[RoundingGraph, tuple[DummyItem, ...]]:
    """Slot graph for a complete half-integral allocation.

    Dummy items (indices starting at m) pair up the agents with an odd
    number of half shares; that count is always even for a complete
    half-integral matrix, which is asserted.  Each agent's half items are
    sorted by decreasing witness value with ties to the lower item index;
    dummies sort last at value zero.
    """
    if frac.n != inst.n or frac.m != inst.m:
        raise ValueError("allocation shape does not match instance")
    if not frac.complete:
        raise ValueError("allocation must be complete")
    if not frac.half_integral:
        raise ValueError("allocation must be half-integral")

    half_items: dict[int, list[int]] = {i: [] for i in range(inst.n)}
    for i in range(inst.n):
        for j in range(inst.m):
            if frac.shares[i][j] == HALF:
                half_items[i].append(j)

    odd_agents = [i for i in range(inst.n) if len(half_items[i]) % 2 == 1]
    if len(odd_agents) % 2 != 0:
        raise AssertionError("odd half-share agents must come in pairs")
    dummies = []
    for d in range(0, len(odd_agents), 2):
        a, b = odd_agents[d], odd_agents[d + 1]
        idx = inst.m + d // 2
        dummies.append(DummyItem(index=idx, agents=(a, b)))
        half_items[a].append(idx)
        half_items[b].append(idx)

    witness = {i: _row_witness_values(inst, frac, i) for i in range(inst.n)}

    def sort_key(agent):
        vals = witness[agent]

        def key(j):
            value = vals[j] if j < inst.m else ZERO
            return (-value, j)

        return key

    slots = []
    item_ids = set()
    for i in range(inst.n):
        items = sorted(half_items[i], key=sort_key(i))
        if len(items) % 2 != 0:
            raise AssertionError("dummy padding left an odd half count")
        for t in range(0, len(items), 2):
            slots.append(Slot(agent=i, items=(items[t], items[t + 1])))
        item_ids.update(items)
    graph = RoundingGraph(slots=tuple(slots), items=tuple(sorted(item_ids)))
    return graph, tuple(dummies)


def round_half_integral(
    frac: FractionalAllocation, inst: Instance
) -> RandomizedAllocation:
    """Two-outcome lottery matching a complete half-integral allocation.

    Whole shares stay put in both outcomes; each half item goes to one of
    its two owners per outcome, decided by the matching decomposition.  If
    the input is already integral (or both outcomes coincide) the support
    collapses to a single sure outcome.
    """
    if frac.n != inst.n or frac.m != inst.m:
        raise ValueError("allocation shape does not match instance")
    if not frac.complete:
        raise ValueError("allocation must be complete")
    if not frac.half_integral:
        raise ValueError("allocation must be half-integral")

    owners: list[int | None] = [None] * inst.m
    for j in range(inst.m):
        for i in range(inst.n):
            if frac.shares[i][j] == ONE:
                owners[j] = i
    if all(o is not None for o in owners):
        alloc = Allocation(tuple(owners))  # type: ignore[arg-type]
        return RandomizedAllocation(((alloc, ONE),))

    graph, _ = build_rounding_graph(frac, inst)
    m1, m2 = decompose_two_regular(graph)
    out = []
    for matching in (m1, m2):
        assigned = list(owners)
        for slot_idx, item in matching.items():
            if item < inst.m:
                assigned[item] = graph.slots[slot_idx].agent
        if any(o is None for o in assigned):
            raise AssertionError("incomplete rounding outcome")
        out.append(Allocation(tuple(assigned)))  # type: ignore[arg-type]
    if out[0].owner == out[1].owner:
        return RandomizedAllocation(((out[0], ONE),))
    return RandomizedAllocation(((out[0], HALF), (out[1], HALF)))
