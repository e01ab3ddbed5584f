"""First-fit ladder allocation and optimal non-decreasing ladder pricing.

A price ladder is an ordering of a subset of outlets; posted prices must be
non-decreasing along it. Allocation is first-fit and structural: scanning
ladder positions in order, every still-unassigned demand node connected to
the current outlet is assigned to it, regardless of prices.

For a fixed ladder and allocation, optimal prices solve a dynamic
programme over (ladder position, grid index):

    G(1, m) = rev_1(m)
    G(k, m) = rev_k(m) + max_{j <= m} G(k-1, j)

where rev_k(m) is the revenue position k earns from its assigned nodes at
grid price m. The inner maximum is a prefix maximum carried incrementally,
so one pass costs O(positions * |grid|) plus the revenue table lookups.

A finite spread cap pi restricts max(price) - min(price). The programme is
then repeated once per candidate floor index, restricting the grid to the
window [b(m0), b(m0) + pi], and the best window wins.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .model import Instance, adjacency, revenue_table, zero_revenue
from .money import Money


class DpCallCounter:
    """Tracks dynamic-programme work, for checking complexity budgets.

    count is the number of dp_prices invocations; cells is the total
    number of (stage, grid index) table entries filled across them, which
    is the unit the stated running-time bounds are expressed in.
    """

    __slots__ = ("count", "cells")

    def __init__(self):
        self.count = 0
        self.cells = 0

    def reset(self):
        self.count = 0
        self.cells = 0


DP_CALLS = DpCallCounter()


def allocate(
    inst: Instance, ladder: Sequence[int], n_active: Optional[int] = None
) -> dict[int, int]:
    """First-fit assignment of demand nodes to the first n_active outlets.

    Returns a map from demand id to the serving outlet. Nodes connected to
    none of the active outlets stay unassigned.
    """
    if n_active is None:
        n_active = len(ladder)
    if n_active > len(ladder):
        raise ValueError("n_active exceeds ladder length")
    _, n_f, _ = adjacency(inst)
    assignment: dict[int, int] = {}
    for pos in range(n_active):
        f = ladder[pos]
        for e in n_f[f]:
            if e not in assignment:
                assignment[e] = f
    return assignment


def dp_prices(
    inst: Instance,
    ladder: Sequence[int],
    assignment: dict[int, int],
    n_active: Optional[int] = None,
    pi: Optional[Money] = None,
    model_override: Optional[str] = None,
):
    """Optimal non-decreasing prices for a ladder under a fixed allocation.

    Returns (prices, revenue) with one price per active ladder position.
    Ties are broken toward the highest price at every position, so an
    outlet that earns nothing is pushed to the top of its feasible range.
    """
    DP_CALLS.count += 1
    if n_active is None:
        n_active = len(ladder)
    if n_active > len(ladder):
        raise ValueError("n_active exceeds ladder length")
    model = model_override or inst.model
    zero = zero_revenue(model)
    grid = inst.grid.prices
    n_prices = len(grid)
    if n_active == 0:
        return (), zero

    table = revenue_table(inst, model)
    by_position = [[] for _ in range(n_active)]
    pos_of = {ladder[k]: k for k in range(n_active)}
    for e, f in assignment.items():
        by_position[pos_of[f]].append(e)
    stage_rev = []
    for pos in range(n_active):
        f = ladder[pos]
        rows = [table[(e, f)] for e in by_position[pos]]
        stage_rev.append(
            [sum((row[m] for row in rows), zero) for m in range(n_prices)]
        )

    def run_window(lo: int, hi: int):
        # Forward pass keeps, per stage, the prefix-best predecessor with
        # ties resolved to the highest grid index.
        width = hi - lo + 1
        DP_CALLS.cells += n_active * width
        value = [stage_rev[0][lo + m] for m in range(width)]
        back: list[list[int]] = []
        for pos in range(1, n_active):
            best_j = 0
            best_val = value[0]
            choice = [0] * width
            new_value = [zero] * width
            for m in range(width):
                if value[m] >= best_val:
                    best_val = value[m]
                    best_j = m
                choice[m] = best_j
                new_value[m] = stage_rev[pos][lo + m] + best_val
            back.append(choice)
            value = new_value
        top = 0
        for m in range(width):
            if value[m] >= value[top]:
                top = m
        indices = [0] * n_active
        indices[n_active - 1] = top
        for pos in range(n_active - 2, -1, -1):
            indices[pos] = back[pos][indices[pos + 1]]
        return value[top], [lo + m for m in indices]

    if pi is None:
        best_rev, best_idx = run_window(0, n_prices - 1)
    else:
        best_rev, best_idx = None, None
        for lo in range(n_prices):
            hi = lo
            while hi + 1 < n_prices and grid[hi + 1] - grid[lo] <= pi:
                hi += 1
            rev, idx = run_window(lo, hi)
            if best_rev is None or rev > best_rev:
                best_rev, best_idx = rev, idx
    prices = tuple(grid[m] for m in best_idx)
    return prices, best_rev


def ladder_revenue(
    inst: Instance,
    ladder: Sequence[int],
    assignment: dict[int, int],
    n_active: Optional[int] = None,
    pi: Optional[Money] = None,
    model_override: Optional[str] = None,
):
    """Optimal revenue of a ladder prefix; see dp_prices."""
    _, revenue = dp_prices(
        inst, ladder, assignment, n_active, pi=pi, model_override=model_override
    )
    return revenue
