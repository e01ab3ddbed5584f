"""Constructive heuristics for network min-pricing.

Three families:

* single_price posts one uniform price everywhere and scores candidates by
  undercut revenue only.
* Selection heuristics (greedy_select, order_select) build a ladder left
  to right, committing one outlet per step.
* Insertion heuristics re-place outlets one at a time at the best position
  of a growing ladder. full_insertion chooses the next outlet itself;
  insertion_with_order follows a precomputed selection order, which is how
  the greedy, order, and relaxation-guided variants are composed.

All ties break toward the lower id or the earlier position, so every
heuristic is deterministic. Spread caps default to off; pass pi explicitly
to enforce one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .ladder import allocate, dp_prices, ladder_revenue
from .model import (
    MNPP,
    Instance,
    adjacency,
    logit_share,
    revenue_table,
    zero_revenue,
)
from .money import MONEY_SCALE, Money, money_unit

ALGORITHMS = ("sp", "greedy", "order", "fi", "greedyI", "orderI", "ip1I", "ip2I")

_INSERTION_SELECTORS = {
    "greedyI": "greedy",
    "orderI": "order",
    "ip1I": "ip1",
    "ip2I": "ip2",
}


class HeuristicTimeout(RuntimeError):
    """A cooperative deadline expired between iterations."""


class Deadline:
    """Wall-clock budget checked at iteration boundaries."""

    def __init__(self, seconds: Optional[float]):
        self.seconds = seconds
        self._t0 = time.perf_counter()

    def check(self):
        if self.seconds is not None and time.perf_counter() - self._t0 >= self.seconds:
            raise HeuristicTimeout(f"exceeded {self.seconds} s budget")


@dataclass(frozen=True)
class HeuristicResult:
    """Outcome of one heuristic run.

    prices always covers every outlet. ladder is None for the uniform-price
    heuristic. revenue for ladder heuristics is the ladder programme's
    value for (ladder, prices); for sp it is the undercut-only score the
    heuristic optimises, which understates what the uniform vector earns
    whenever the price lands exactly on some competitor price.
    """

    algorithm: str
    ladder: Optional[tuple[int, ...]]
    prices: tuple[Money, ...]
    revenue: object
    wall_time: float


def single_price(
    inst: Instance,
    include_match: bool = False,
    model_override: Optional[str] = None,
):
    """Best uniform price by undercut revenue (price-war terms only).

    For each grid price, sums over nodes whose competitor can still be
    undercut at that price the best single-outlet revenue; the lowest
    price attaining the best score wins. include_match adds the exact
    price-match term as well, which the plain scoring ignores.
    Returns (price, revenue).
    """
    model = model_override or inst.model
    o_e, _, _ = adjacency(inst)
    table = revenue_table(inst, model)
    zero = zero_revenue(model)
    best_price = None
    best_rev = None
    for m, price in enumerate(inst.grid.prices):
        rev = zero
        for node in inst.demands:
            outlets = o_e[node.id]
            if not outlets:
                continue
            below = inst.grid.below_index(node.c)
            war_ok = below is not None and price <= inst.grid.prices[below]
            match_ok = include_match and price == node.c
            if war_ok or match_ok:
                rev += max(table[(node.id, f)][m] for f in outlets)
        if best_rev is None or rev > best_rev:
            best_rev = rev
            best_price = price
    return best_price, best_rev


def greedy_select(
    inst: Instance,
    pool: Optional[Sequence[int]] = None,
    pi: Optional[Money] = None,
    deadline: Optional[Deadline] = None,
):
    """Build a ladder by committing the outlet with the best marginal value.

    Each step appends, from the remaining pool, the outlet whose tentative
    ladder (current ladder plus that outlet) has the best optimal revenue;
    ties keep the lowest id. Demand nodes covered by the committed outlet
    leave the active set, and the loop ends when either side is exhausted.
    Unused outlets are appended in ascending id order. Returns
    (ladder, revenue of the committed prefix).
    """
    _, n_f, _ = adjacency(inst)
    pool = sorted(inst.outlets() if pool is None else pool)
    active = set(range(inst.n_demands))
    ladder: list[int] = []
    revenue = zero_revenue(inst.model)
    while pool and active:
        if deadline:
            deadline.check()
        best_f = None
        best_rev = None
        for f in pool:
            trial = ladder + [f]
            assignment = allocate(inst, trial)
            rev = ladder_revenue(inst, trial, assignment, pi=pi)
            if best_rev is None or rev > best_rev:
                best_rev = rev
                best_f = f
        ladder.append(best_f)
        pool.remove(best_f)
        active -= set(n_f[best_f])
        revenue = best_rev
    ladder.extend(pool)
    return tuple(ladder), revenue


def order_select(
    inst: Instance,
    pool: Optional[Sequence[int]] = None,
    prefer_max: bool = False,
):
    """Build a ladder by serving the cheapest competitor first.

    Repeatedly takes the active node with the lowest competitor price
    (ties to the lowest id) and commits one of its connected outlets,
    scored by the coverage-weighted revenue potential

        mu_f = sum over active nodes covered by f of c_e * volume captured
               on undercut at c_e.

    The default commits the argmin of mu (prefer_max flips it); ties keep
    the lowest id. Covered nodes leave the active set; nodes with no
    remaining outlet are dropped. Unused outlets are appended ascending.
    """
    o_e, n_f, edge_of = adjacency(inst)
    pool = set(inst.outlets() if pool is None else pool)
    active = set(range(inst.n_demands))
    ladder: list[int] = []

    def potential(f: int) -> object:
        total = zero_revenue(inst.model)
        for e in n_f[f]:
            if e not in active:
                continue
            node = inst.demands[e]
            if inst.model == MNPP:
                total += money_unit(node.c) * node.d * node.gamma
            else:
                edge = edge_of[(e, f)]
                share = logit_share(
                    edge.a_hat - edge.b_hat * (node.c / MONEY_SCALE)
                )
                total += (node.c / MONEY_SCALE) * float(node.d) * share
        return total

    while pool and active:
        head = min(active, key=lambda e: (inst.demands[e].c, e))
        candidates = [f for f in sorted(pool) if f in set(o_e[head])]
        if not candidates:
            active.remove(head)
            continue
        scores = {f: potential(f) for f in candidates}
        if prefer_max:
            chosen = max(candidates, key=lambda f: (scores[f], -f))
        else:
            chosen = min(candidates, key=lambda f: (scores[f], f))
        ladder.append(chosen)
        pool.remove(chosen)
        active -= set(n_f[chosen])
    ladder.extend(sorted(pool))
    return tuple(ladder)


def best_insertion(
    inst: Instance,
    ladder: Sequence[int],
    f: int,
    pi: Optional[Money] = None,
):
    """Best position for one new outlet. Returns (position, revenue).

    Tries every slot from the front to just past the end and keeps the
    lowest position attaining the best optimal ladder revenue.
    """
    ladder = list(ladder)
    best_pos = None
    best_rev = None
    for j in range(len(ladder) + 1):
        trial = ladder[:j] + [f] + ladder[j:]
        assignment = allocate(inst, trial)
        rev = ladder_revenue(inst, trial, assignment, pi=pi)
        if best_rev is None or rev > best_rev:
            best_rev = rev
            best_pos = j
    return best_pos, best_rev


def insert_outlet(
    inst: Instance,
    ladder: Sequence[int],
    f: int,
    pi: Optional[Money] = None,
):
    """Insert one outlet at its best position; see best_insertion.

    Returns (new ladder, revenue of the new ladder).
    """
    pos, rev = best_insertion(inst, ladder, f, pi=pi)
    ladder = list(ladder)
    return tuple(ladder[:pos] + [f] + ladder[pos:]), rev


def full_insertion(
    inst: Instance,
    pi: Optional[Money] = None,
    deadline: Optional[Deadline] = None,
) -> HeuristicResult:
    """Insertion heuristic choosing outlet and position jointly.

    Each round scores every remaining outlet at its best position and
    commits the best (outlet, position) pair; ties prefer the lower outlet
    id, then the lower position.
    """
    t0 = time.perf_counter()
    remaining = sorted(inst.outlets())
    ladder: list[int] = []
    while remaining:
        if deadline:
            deadline.check()
        best = None  # (revenue, f, pos), strictly-better updates keep ties stable
        for f in remaining:
            pos, rev = best_insertion(inst, ladder, f, pi=pi)
            if best is None or rev > best[0]:
                best = (rev, f, pos)
        _, f, pos = best
        ladder.insert(pos, f)
        remaining.remove(f)
    return _finish(inst, "fi", tuple(ladder), pi, t0)


def insertion_with_order(
    inst: Instance,
    order: Sequence[int],
    pi: Optional[Money] = None,
    deadline: Optional[Deadline] = None,
    algorithm: str = "insertion",
) -> HeuristicResult:
    """Insert outlets one at a time following a fixed selection order."""
    t0 = time.perf_counter()
    if sorted(order) != list(inst.outlets()):
        raise ValueError("selection order must cover every outlet exactly once")
    ladder: tuple[int, ...] = ()
    for f in order:
        if deadline:
            deadline.check()
        ladder, _ = insert_outlet(inst, ladder, f, pi=pi)
    return _finish(inst, algorithm, ladder, pi, t0)


def _finish(
    inst: Instance,
    algorithm: str,
    ladder: tuple[int, ...],
    pi: Optional[Money],
    t0: float,
) -> HeuristicResult:
    """Price the final ladder and assemble the result."""
    assignment = allocate(inst, ladder)
    ladder_prices, revenue = dp_prices(inst, ladder, assignment, pi=pi)
    by_outlet = [0] * inst.n_outlets
    for pos, f in enumerate(ladder):
        by_outlet[f] = ladder_prices[pos]
    return HeuristicResult(
        algorithm=algorithm,
        ladder=ladder,
        prices=tuple(by_outlet),
        revenue=revenue,
        wall_time=time.perf_counter() - t0,
    )


def run_algorithm(
    inst: Instance,
    algorithm: str,
    pi: Optional[Money] = None,
    time_limit: Optional[float] = None,
    adapter=None,
    solver_time_limit: Optional[float] = None,
    sp_include_match: bool = False,
    order_prefer_max: bool = False,
) -> HeuristicResult:
    """Run one named heuristic and return its result.

    The relaxation-guided insertions (ip1I, ip2I) need a solver adapter;
    without one they raise SolverUnavailable rather than silently falling
    back to another selection rule.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    deadline = Deadline(time_limit)
    t0 = time.perf_counter()
    if algorithm == "sp":
        price, revenue = single_price(inst, include_match=sp_include_match)
        return HeuristicResult(
            algorithm="sp",
            ladder=None,
            prices=tuple([price] * inst.n_outlets),
            revenue=revenue,
            wall_time=time.perf_counter() - t0,
        )
    if algorithm == "greedy":
        ladder, _ = greedy_select(inst, pi=pi, deadline=deadline)
        return _finish(inst, "greedy", ladder, pi, t0)
    if algorithm == "order":
        ladder = order_select(inst, prefer_max=order_prefer_max)
        return _finish(inst, "order", ladder, pi, t0)
    if algorithm == "fi":
        return full_insertion(inst, pi=pi, deadline=deadline)
    selector = _INSERTION_SELECTORS[algorithm]
    if selector == "greedy":
        order, _ = greedy_select(inst, pi=pi, deadline=deadline)
    elif selector == "order":
        order = order_select(inst, prefer_max=order_prefer_max)
    else:
        from .mip import relax_order

        order = relax_order(
            inst, selector, adapter=adapter, time_limit=solver_time_limit
        )
    return insertion_with_order(
        inst, order, pi=pi, deadline=deadline, algorithm=algorithm
    )
