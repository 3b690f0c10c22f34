"""Backend selection and exact scaling for the enumeration kernels.

The kernels work on integer tables.  Every rational in a call is multiplied
by the least common multiple of the denominators involved, so kernel
arithmetic is exact; certificates are decoded back and re-evaluated in
``Fraction`` by the callers, which keeps the rational layer authoritative.

The compiled extension is preferred when present.  A magnitude bound is
computed per call and anything that could overflow signed 64-bit integers
is routed to the pure-Python kernels, whose ints are unbounded.  Setting
``MMSKIT_BACKEND=python`` in the environment disables the extension.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

from .errors import CapacityError
from . import _kernels_py as _pure

if os.environ.get("MMSKIT_BACKEND") == "python":
    _compiled = None
else:
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

DEFAULT_MAX_ENUM = 10_000_000

# headroom below 2**63 so per-move deltas cannot wrap
_INT64_SAFE = 1 << 62


def backend_name() -> str:
    return "compiled" if _compiled is not None else "python"


def has_compiled_backend() -> bool:
    return _compiled is not None


def half_pair_order(n: int) -> list[tuple[int, int]]:
    """Agent pairs eligible for a half/half split, in choice order."""
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def _select(backend: str | None, bound: int):
    if backend is None:
        if _compiled is not None and bound < _INT64_SAFE:
            return _compiled
        return _pure
    if backend == "python":
        return _pure
    if backend == "compiled":
        if _compiled is None:
            raise ValueError("compiled backend is not available")
        if bound >= _INT64_SAFE:
            raise ValueError("scaled values too large for the compiled backend")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def _check_budget(count: int, max_enum: int, what: str):
    if count > max_enum:
        raise CapacityError(
            f"{what} needs {count} assignments, over the budget of {max_enum}; "
            "raise max_enum to force the enumeration"
        )


def _common_denominator(fracs) -> int:
    d = 1
    for x in fracs:
        d = math.lcm(d, x.denominator)
    return d


def _scaled_int(x: Fraction, denom: int) -> int:
    y = x * denom
    # denom is a multiple of x.denominator by construction
    return y.numerator // y.denominator if y.denominator != 1 else y.numerator


def max_min_partition(
    functions: Sequence[Sequence[Fraction]],
    n: int,
    m: int,
    *,
    max_enum: int = DEFAULT_MAX_ENUM,
    backend: str | None = None,
) -> list[int]:
    """Labels of the lexicographically first max-min partition into n bundles.

    ``functions`` is one agent's additive family as rows of rationals.
    """
    if n < 1:
        raise ValueError("need at least one bundle")
    _check_budget(n**m, max_enum, f"max-min partition ({n}^{m})")
    denom = _common_denominator(x for row in functions for x in row)
    flat = [_scaled_int(x, denom) for row in functions for x in row]
    nfun = len(functions)
    bound = 0
    for k in range(nfun):
        bound = max(bound, sum(flat[k * m:(k + 1) * m]))
    kern = _select(backend, bound)
    _, labels = kern.max_min_labels(flat, nfun, m, n)
    return labels


def _pad_families(families, m: int):
    nfmax = max(len(fam) for fam in families)
    flat = []
    for fam in families:
        for row in fam:
            flat.extend(row)
        flat.extend([0] * (m * (nfmax - len(fam))))
    return flat, nfmax


def best_integral_welfare(
    families: Sequence[Sequence[Sequence[Fraction]]],
    caps: Sequence[Fraction],
    m: int,
    *,
    max_enum: int = DEFAULT_MAX_ENUM,
    backend: str | None = None,
) -> list[int]:
    """Owner per item maximizing the sum of per-agent capped values.

    ``families[i]`` is agent i's additive family; ``caps[i]`` her cap.
    Ties resolve to the lexicographically smallest owner sequence.
    """
    n = len(families)
    if n < 1:
        raise ValueError("need at least one agent")
    if any(Fraction(c) < 0 for c in caps):
        raise ValueError("caps must be non-negative")
    _check_budget(n**m, max_enum, f"integral welfare search ({n}^{m})")
    denom = _common_denominator(
        [x for fam in families for row in fam for x in row] + [Fraction(c) for c in caps]
    )
    int_fams = [
        [[_scaled_int(x, denom) for x in row] for row in fam] for fam in families
    ]
    flat, nfmax = _pad_families(int_fams, m)
    caps_i = [_scaled_int(Fraction(c), denom) for c in caps]
    bound = 0
    for i, fam in enumerate(int_fams):
        rowmax = max((sum(row) for row in fam), default=0)
        bound += max(caps_i[i], rowmax)
    kern = _select(backend, bound)
    _, owners = kern.best_owner_labels(flat, caps_i, n, nfmax, m)
    return owners


def best_half_integral_welfare(
    families: Sequence[Sequence[Sequence[Fraction]]],
    caps: Sequence[Fraction],
    m: int,
    *,
    max_enum: int = DEFAULT_MAX_ENUM,
    backend: str | None = None,
) -> tuple[list[int], list[tuple[int, int]]]:
    """Per-item choices maximizing capped welfare over half-integral splits.

    Each item goes whole to one agent or half each to a pair of agents.
    Returns (choices, pairs): choice c < n means whole to agent c, else the
    split pair is ``pairs[c - n]``.
    """
    n = len(families)
    if n < 1:
        raise ValueError("need at least one agent")
    if any(Fraction(c) < 0 for c in caps):
        raise ValueError("caps must be non-negative")
    pairs = half_pair_order(n)
    nch = n + len(pairs)
    _check_budget(nch**m, max_enum, f"half-integral welfare search ({nch}^{m})")
    denom = _common_denominator(
        [x for fam in families for row in fam for x in row] + [Fraction(c) for c in caps]
    )
    int_fams = [
        [[_scaled_int(x, denom) for x in row] for row in fam] for fam in families
    ]
    flat, nfmax = _pad_families(int_fams, m)
    caps2 = [_scaled_int(2 * Fraction(c), denom) for c in caps]
    bound = 0
    for i, fam in enumerate(int_fams):
        rowmax = max((sum(row) for row in fam), default=0)
        bound += max(caps2[i], 2 * rowmax)
    kern = _select(backend, bound)
    _, choices = kern.best_choice_labels(
        flat, caps2, n, nfmax, m, [a for a, _ in pairs], [b for _, b in pairs]
    )
    return choices, pairs
