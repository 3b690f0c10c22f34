"""Pure-Python twins of the compiled enumeration kernels.

Same flat inputs, same outputs, same first-optimum tie-breaking as
``_kernels``.  Used when the extension is unavailable or when the scaled
integers might overflow 64-bit arithmetic (Python ints are unbounded).

All three kernels walk assignments in ascending lexicographic order with an
odometer, updating bundle sums incrementally, and keep the strictly best
objective seen first.
"""

from __future__ import annotations


def max_min_labels(flat, nfun, m, n):
    """Assign m items to n bundles maximizing the minimum bundle value.

    flat: row-major nfun x m integer table for one agent.
    Returns (best objective, labels), labels lexicographically smallest.
    """
    sums = [0] * (n * nfun)
    val = [0] * n
    lab = [0] * m

    def move(g, j, delta):
        base = g * nfun
        for k in range(nfun):
            sums[base + k] += delta * flat[k * m + j]
        val[g] = max(sums[base:base + nfun])

    for j in range(m):
        move(0, j, 1)
    best = -1
    best_lab = list(lab)
    while True:
        obj = min(val)
        if obj > best:
            best = obj
            best_lab = list(lab)
        j = m - 1
        while j >= 0 and lab[j] == n - 1:
            move(n - 1, j, -1)
            lab[j] = 0
            move(0, j, 1)
            j -= 1
        if j < 0:
            break
        move(lab[j], j, -1)
        lab[j] += 1
        move(lab[j], j, 1)
    return best, best_lab


def best_owner_labels(flat, caps, n, nfmax, m):
    """Assign each item to one agent maximizing total capped value.

    flat: agent-major n x nfmax x m integer table (short families padded
    with zero rows).  caps: per-agent integer caps on the same scale.
    Returns (welfare, owners), owners lexicographically smallest.
    """
    sums = [0] * (n * nfmax)
    val = [0] * n
    lab = [0] * m
    total = 0

    def move(i, j, delta):
        nonlocal total
        base = i * nfmax
        for k in range(nfmax):
            sums[base + k] += delta * flat[(base + k) * m + j]
        new = min(caps[i], max(sums[base:base + nfmax]))
        total += new - val[i]
        val[i] = new

    for j in range(m):
        move(0, j, 1)
    best = -1
    best_lab = list(lab)
    while True:
        if total > best:
            best = total
            best_lab = list(lab)
        j = m - 1
        while j >= 0 and lab[j] == n - 1:
            move(n - 1, j, -1)
            lab[j] = 0
            move(0, j, 1)
            j -= 1
        if j < 0:
            break
        move(lab[j], j, -1)
        lab[j] += 1
        move(lab[j], j, 1)
    return best, best_lab


def best_choice_labels(flat, caps, n, nfmax, m, pair_a, pair_b):
    """Half-integral welfare maximizer.

    Per-item choices: whole to agent c (c < n), else split between the pair
    (pair_a[c-n], pair_b[c-n]).  Values in ``flat`` are on the half-share
    scale, so a whole share adds twice the table entry; ``caps`` must be
    pre-doubled by the caller to match.
    Returns (welfare, choices), choices lexicographically smallest.
    """
    nch = n + len(pair_a)
    sums = [0] * (n * nfmax)
    val = [0] * n
    lab = [0] * m
    total = 0

    def bump(i, j, delta):
        nonlocal total
        base = i * nfmax
        for k in range(nfmax):
            sums[base + k] += delta * flat[(base + k) * m + j]
        new = min(caps[i], max(sums[base:base + nfmax]))
        total += new - val[i]
        val[i] = new

    def move(c, j, sign):
        if c < n:
            bump(c, j, 2 * sign)
        else:
            bump(pair_a[c - n], j, sign)
            bump(pair_b[c - n], j, sign)

    for j in range(m):
        move(0, j, 1)
    best = -1
    best_lab = list(lab)
    while True:
        if total > best:
            best = total
            best_lab = list(lab)
        j = m - 1
        while j >= 0 and lab[j] == nch - 1:
            move(nch - 1, j, -1)
            lab[j] = 0
            move(0, j, 1)
            j -= 1
        if j < 0:
            break
        move(lab[j], j, -1)
        lab[j] += 1
        move(lab[j], j, 1)
    return best, best_lab
