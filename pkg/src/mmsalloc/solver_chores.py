"""End-to-end constructive solver for chores instances.

Structure mirrors the goods solver but the key facts flip direction: any
single chore is acceptable to every agent (it costs no more than the bundle
containing it in her own witness partition), witness partitions can be
normalized to carry their singletons on the worst chores, and domination
awards the *worse* of two comparable bundles.  Small instances with few
leftover chores are finished by structured-witness base cases; large agent
counts go through shared tail-bundle groups; anything else falls back to an
exhaustive threshold search.  Results are certified before being reported.
"""

from __future__ import annotations

from .bounds import (
    DEFAULT_TABLE,
    BoundTable,
    n_c_chores,  # noqa: F401  (re-exported: thresholds belong with the solver)
    required_agents_chores,  # noqa: F401
)
from .core import (
    CHORES,
    Instance,
    bundle_value,
    lift_allocation,
    to_ordered,
)
from .domination import TailBundle, group_tail_bundles
from .errors import PreconditionUnmet, TooLarge
from .mms import (
    DEFAULT_EXHAUSTIVE_CAP,
    find_allocation_meeting,
    mms_value,
    mu_vector,
    structured_partition_chores,
)
from .reductions import (
    base_identical_partitions,
    make_step,
    reduce_by_domination,
    reduce_pair_blockable,
)
from .solver_goods import Pipeline, SolveOutcome


def known_solvable_chores(n: int, m: int, table: BoundTable = DEFAULT_TABLE) -> bool:
    """Is a chores instance of this shape within this solver's reach?

    Shapes with at most five extra chores always admit an allocation and
    stay small enough for the search fallback at the agent counts we target;
    beyond that the tail-grouping threshold must be met.
    """
    c = m - n
    return n <= 2 or m <= n or c <= 5 or n >= table.n_c_chores(c)


def _singleton_final(cur: Instance):
    return tuple(
        frozenset({i}) if i <= cur.m else frozenset() for i in range(1, cur.n + 1)
    )


def _chores_witness_base(pipe: Pipeline, mu):
    """Finish or shrink via a witness packed with singleton chores.

    A witness with n - 1 singletons plus one residue bundle is a full
    allocation outright (singletons are universally acceptable).  With n - 2
    singletons and a pair among the two residue bundles, either some other
    agent takes the pair (full allocation) or nobody would, in which case
    the pair is unblockable and reduces the instance.  Returns
    ("solved", final), ("continue",) after pushing a step, or None.
    """
    cur = pipe.current
    view = pipe.view()
    n = cur.n
    for i in range(1, n + 1):
        sp = structured_partition_chores(view, i, mu[i - 1])
        bundles = sorted(sp.partition, key=lambda b: (len(b), sorted(b)))
        singles = [b for b in bundles if len(b) == 1]
        multis = [b for b in bundles if len(b) >= 2]
        if len(singles) >= n - 1:
            others = [a for a in range(1, n + 1) if a != i]
            alloc = [None] * n
            alloc[i - 1] = multis[0] if multis else singles[-1]
            pool = singles if multis else singles[:-1]
            for a, b in zip(others, pool):
                alloc[a - 1] = b
            pipe.note("chores_base:singletons")
            return ("solved", tuple(alloc))
        if len(singles) == n - 2 and len(multis) == 2 and len(multis[0]) == 2:
            pair, residue = multis[0], multis[1]
            takers = [
                a
                for a in range(1, n + 1)
                if a != i and bundle_value(cur, a, pair) >= mu[a - 1]
            ]
            if takers:
                a = takers[0]
                others = [x for x in range(1, n + 1) if x not in (i, a)]
                alloc = [None] * n
                alloc[i - 1] = residue
                alloc[a - 1] = pair
                for x, b in zip(others, singles):
                    alloc[x - 1] = b
                pipe.note("chores_base:pair_to_other")
                return ("solved", tuple(alloc))
            pipe.note("chores_base:pair_to_self")
            pipe.push(make_step("pair_blockable", {i: pair}))
            return ("continue",)
    return None


def _chores_tail_step(pipe: Pipeline, mu, table: BoundTable):
    """Domination award on a shared tail bundle, if a group is large enough."""
    cur = pipe.current
    view = pipe.view()
    n, m = cur.n, cur.m
    c = m - n
    tails = {}
    for i in range(1, n + 1):
        sp = structured_partition_chores(view, i, mu[i - 1])
        inside = [b for b in sp.partition if b and min(b) >= n]
        if inside:
            tails[i] = min(inside, key=lambda b: tuple(sorted(b)))
    for k in range(2, c + 2):
        threshold = max(c - k + 2, table.n_c_chores(c - k + 1) + 1)
        sized = [TailBundle(i, b) for i, b in tails.items() if len(b) == k]
        groups = group_tail_bundles(sized, k)
        for key in sorted(groups, key=lambda s: tuple(sorted(s))):
            grp = groups[key]
            if len({t.agent for t in grp}) >= threshold:
                try:
                    return reduce_by_domination(view, grp, CHORES, mu)
                except PreconditionUnmet:
                    continue
    return None


def _drive(pipe: Pipeline, cap: int, table: BoundTable):
    while True:
        cur = pipe.current
        n, m = cur.n, cur.m
        if n == 0:
            if m:
                return ("unresolved", None, "chores left with no agents")
            return ("solved", tuple(), "")
        if n <= 2:
            mu = mu_vector(cur)
            alloc = base_identical_partitions(cur, mu)
            if alloc is None:
                return ("unresolved", None, "two-agent base failed")
            pipe.note("base:two-agent")
            return ("solved", alloc, "")
        if m <= n:
            pipe.note("chores_base:one-each")
            return ("solved", _singleton_final(cur), "")
        mu = mu_vector(cur)
        step = reduce_pair_blockable(cur, mu)
        if step is not None and known_solvable_chores(
            n - len(step.agents()), m - len(step.items()), table
        ):
            pipe.push(step)
            continue
        result = _chores_witness_base(pipe, mu)
        if result is not None:
            if result[0] == "continue":
                continue
            return ("solved", result[1], "")
        step = _chores_tail_step(pipe, mu, table)
        if step is not None:
            pipe.push(step)
            continue
        try:
            final = find_allocation_meeting(cur, mu, cap)
        except TooLarge:
            return (
                "unresolved",
                None,
                f"no constructive route at {n}x{m} and beyond the search cap",
            )
        if final is None:
            return ("unresolved", None, f"no allocation meets all shares at {n}x{m}")
        pipe.note("fallback:threshold-search")
        return ("solved", final, "")


def solve_chores(
    instance: Instance,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    table: BoundTable = DEFAULT_TABLE,
) -> SolveOutcome:
    """Solve a chores instance, certifying the result before reporting it."""
    if instance.kind != CHORES:
        raise ValueError("chores instance required")
    ordered = to_ordered(instance)
    pipe = Pipeline(ordered.instance)
    status, final, reason = _drive(pipe, cap, table)
    diagnostic = "; ".join(pipe.notes)
    if status != "solved":
        return SolveOutcome(
            status="unresolved",
            allocation=None,
            trace=None,
            diagnostic="; ".join(filter(None, [diagnostic, reason])),
            ordered=ordered,
        )
    trace, companion_alloc = pipe.finish(final)
    allocation = lift_allocation(ordered, companion_alloc, instance)
    for i in range(1, instance.n + 1):
        target = mms_value(instance, i).mu
        if bundle_value(instance, i, allocation[i - 1]) < target:
            return SolveOutcome(
                status="unresolved",
                allocation=None,
                trace=trace,
                diagnostic=f"certification failed for agent {i}; " + diagnostic,
                ordered=ordered,
                ordered_allocation=companion_alloc,
            )
    return SolveOutcome(
        status="solved",
        allocation=allocation,
        trace=trace,
        diagnostic=diagnostic,
        ordered=ordered,
        ordered_allocation=companion_alloc,
    )
