"""End-to-end constructive solver for goods instances.

The dispatcher sorts the instance, then repeatedly shrinks it with valid
reductions until a base case yields a full allocation of the residual.
Scripted case analyses handle the two delicate sizes (four agents with ten
goods, eight agents with fifteen goods); a counting argument over shared
tail bundles handles large agent counts; everything else falls back to an
exhaustive threshold search below the oracle cap.  Results are certified
against independently recomputed maximin shares before being reported as
solved — an uncertified result is returned as unresolved, never as solved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import (
    DEFAULT_TABLE,
    BoundTable,
    n_c_goods,  # noqa: F401  (re-exported: thresholds belong with the solver)
    required_agents_goods,  # noqa: F401
)
from .core import (
    GOODS,
    Instance,
    OrderedInstance,
    bundle_value,
    lift_allocation,
    to_ordered,
)
from .domination import TailBundle, group_tail_bundles
from .errors import (
    InternalInvariantViolation,
    NEqualsThree,
    PreconditionUnmet,
    TooFewAgents,
    TooLarge,
)
from .matching import BipartiteGraph, hall_deficient_split, max_matching, envy_free_matching
from .mms import (
    DEFAULT_EXHAUSTIVE_CAP,
    StructuredPartition,
    find_allocation_meeting,
    maximin_partition,
    mms_value,
    mu_vector,
    structured_partition_goods,
)
from .reductions import (
    RULE_DOMINATION,
    RULE_EFM_BATCH,
    RULE_PAIR_FROM_HIGH,
    RULE_PIGEONHOLE_PAIR,
    RULE_SINGLE_ITEM,
    ReductionStep,
    ReductionTrace,
    apply_with_maps,
    base_identical_partitions,
    make_step,
    reduce_pair_blockable,
    reduce_pair_from_high,
    reduce_pigeonhole_pair,
    reduce_single_item,
)


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a solve run.

    ``allocation`` is in original-instance coordinates; ``trace`` and
    ``ordered_allocation`` refer to the sorted companion instance, whose
    per-agent item permutations make an item-faithful translation of trace
    steps back to the original impossible.
    """

    status: str  # "solved" | "unresolved"
    allocation: tuple | None
    trace: ReductionTrace | None
    diagnostic: str
    ordered: OrderedInstance | None = None
    ordered_allocation: tuple | None = None


class Pipeline:
    """Accumulates reduction steps against a shrinking ordered instance.

    Steps are pushed in current-residual coordinates and stored translated
    to the companion (fully ordered) instance, so the finished trace can be
    replayed against it.
    """

    def __init__(self, companion: Instance):
        self.companion = companion
        self.current = companion
        self.agent_ids = list(range(1, companion.n + 1))
        self.item_ids = list(range(1, companion.m + 1))
        self.steps: list = []
        self.awards: dict = {}
        self.notes: list = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    def view(self) -> OrderedInstance:
        ranks = tuple(
            tuple(range(1, self.current.m + 1)) for _ in range(self.current.n)
        )
        return OrderedInstance(instance=self.current, source_ranks=ranks)

    def push(self, step: ReductionStep) -> None:
        translated = make_step(
            step.rule,
            {
                self.agent_ids[a - 1]: frozenset(self.item_ids[j - 1] for j in b)
                for a, b in step.assignments
            },
        )
        self.steps.append(translated)
        for a, b in translated.assignments:
            self.awards[a] = b
        residual, agent_map, item_map = apply_with_maps(self.current, step)
        self.agent_ids = [
            self.agent_ids[agent_map[i] - 1] for i in range(1, residual.n + 1)
        ]
        self.item_ids = [
            self.item_ids[item_map[j] - 1] for j in range(1, residual.m + 1)
        ]
        self.current = residual

    def finish(self, final_current):
        """Translate a final residual allocation and close the trace."""
        final = tuple(
            frozenset(self.item_ids[j - 1] for j in b) for b in final_current
        )
        trace = ReductionTrace(steps=tuple(self.steps), final=final)
        full = {a: b for a, b in self.awards.items()}
        for pos, b in enumerate(final):
            full[self.agent_ids[pos]] = b
        allocation = tuple(
            full.get(i, frozenset()) for i in range(1, self.companion.n + 1)
        )
        return trace, allocation


def known_solvable_goods(n: int, m: int, table: BoundTable = DEFAULT_TABLE) -> bool:
    """Is a goods instance of this shape guaranteed solvable by this solver?

    Used as a guard so that generic reductions never strand the pipeline in
    a shape with no constructive route (such as three agents with nine
    goods).
    """
    c = m - n
    if n <= 2 or m <= n or c <= 5:
        return True
    if c == 6:
        return n != 3
    if c == 7:
        return n >= 8
    return n >= table.n_c_goods(c)


def _guarded_simple(pipe: Pipeline, mu, table: BoundTable):
    """Cheapest applicable reduction whose residual stays solvable."""
    cur = pipe.current
    view = pipe.view()
    candidates = (
        reduce_single_item(cur, mu),
        reduce_pigeonhole_pair(view, mu),
        reduce_pair_from_high(view, mu),
        reduce_pair_blockable(cur, mu),
    )
    for step in candidates:
        if step is None:
            continue
        if known_solvable_goods(
            cur.n - len(step.agents()), cur.m - len(step.items()), table
        ):
            return step
    return None


# --- shared pivot-pair reduction ---------------------------------------------

def mostly_overlapping_pair(ordered: OrderedInstance, mu, pivot: int, pairs) -> ReductionStep:
    """Remove one agent with a two-good bundle around a shared pivot good.

    ``pairs`` maps agents to a size-2 bundle containing the pivot, taken
    from one of their own maximin witness partitions.  At most one agent may
    lack such a bundle.  Among the pairs, the one with the worst companion
    good is comparable to all others, so awarding it blocks nobody: the
    pairless agent receives it if she clears her share with it, otherwise it
    goes back to its owner while her share survives a merge argument.
    """
    cur = ordered.instance
    missing = [i for i in range(1, cur.n + 1) if i not in pairs]
    if len(missing) > 1:
        raise PreconditionUnmet(f"{len(missing)} agents lack a pivot pair")
    companion = {}
    for agent, bundle in pairs.items():
        if len(bundle) != 2 or pivot not in bundle:
            raise PreconditionUnmet("pair must be the pivot plus one good")
        companion[agent] = max(bundle - {pivot})
    worst = max(companion.values())
    owner = min(a for a, x in companion.items() if x == worst)
    bundle = frozenset({pivot, worst})
    recipient = owner
    if missing:
        e = missing[0]
        if bundle_value(cur, e, bundle) >= mu[e - 1]:
            recipient = e
    return make_step(RULE_DOMINATION, {recipient: bundle})


def reduce_2n2(ordered: OrderedInstance, mu) -> ReductionStep:
    """Guaranteed reduction when there are at most 2n + 2 goods.

    Case split: a single good worth a full share; the pair of the n-th and
    (n+1)-th goods; or, when neither exists, every witness partition is
    packed with size-2 bundles hitting the leading goods, and some leading
    good is shared by enough of them to award a pivot pair.
    """
    cur = ordered.instance
    n, m = cur.n, cur.m
    if n < 3 or m > 2 * n + 2:
        raise PreconditionUnmet(f"needs 3 <= n and m <= 2n+2, got {n}x{m}")
    step = reduce_single_item(cur, mu)
    if step is not None:
        return step
    step = reduce_pigeonhole_pair(ordered, mu)
    if step is not None:
        return step
    holders: dict = {}  # pivot good -> {agent: pair bundle}
    for i in range(1, n + 1):
        for b in mms_value(cur, i).witness:
            if len(b) == 2 and min(b) <= n - 1:
                g = min(b)
                holders.setdefault(g, {}).setdefault(i, b)
    for g in range(1, n):
        if g in holders and len(holders[g]) >= n - 1:
            return mostly_overlapping_pair(ordered, mu, g, holders[g])
    raise InternalInvariantViolation(
        "no branch fired although one is always available at this size"
    )


# --- envy-free matching step -------------------------------------------------

def efm_step(ordered: OrderedInstance, agent: int, witness, mu):
    """Allocate via matching when one agent's partition is nearly all small.

    Requires at least n - 1 bundles of size below three in the witness.  A
    perfect matching of agents to bundles they accept solves the instance
    outright.  Otherwise a Hall-deficient agent set is carved off, an
    envy-free matching is found among the rest on the small bundles, and
    every matched agent is removed: size-2 bundles as-is, size-1 bundles
    padded with the worst remaining good.  Returns ("allocation", a) or
    ("step", s).
    """
    cur = ordered.instance
    n, m = cur.n, cur.m
    part = witness.partition if isinstance(witness, StructuredPartition) else witness
    if mu[agent - 1] == 0:
        raise PreconditionUnmet("zero-share agents are handled by the pigeonhole pair")
    small = [idx for idx, b in enumerate(part) if len(b) <= 2]
    if len(small) < n - 1:
        raise PreconditionUnmet("witness needs at least n-1 bundles of size < 3")

    def accepts(i: int, b) -> bool:
        return bundle_value(cur, i, b) >= mu[i - 1]

    full = BipartiteGraph.from_edges(
        n,
        len(part),
        [
            (i, idx + 1)
            for i in range(1, n + 1)
            for idx, b in enumerate(part)
            if accepts(i, b)
        ],
    )
    mm = max_matching(full)
    if len(mm.pairs) == n:
        alloc = [None] * n
        for x, y in mm.pairs:
            alloc[x - 1] = part[y - 1]
        return ("allocation", tuple(alloc))

    others = [i for i in range(1, n + 1) if i != agent]
    g2 = BipartiteGraph.from_edges(
        len(others),
        len(small),
        [
            (xi + 1, yi + 1)
            for xi, i in enumerate(others)
            for yi, idx in enumerate(small)
            if accepts(i, part[idx])
        ],
    )
    split = hall_deficient_split(g2)
    if split is None:
        # The other agents match into the small bundles; the witness owner
        # accepts whatever bundle of her own partition is left over.
        mm2 = max_matching(g2)
        alloc = [None] * n
        used = set()
        for x, y in mm2.pairs:
            alloc[others[x - 1] - 1] = part[small[y - 1]]
            used.add(small[y - 1])
        leftover = [idx for idx in range(len(part)) if idx not in used]
        alloc[agent - 1] = part[leftover[0]]
        if len(leftover) != 1:
            raise InternalInvariantViolation("expected exactly one unmatched bundle")
        return ("allocation", tuple(alloc))

    blocked_x, blocked_y = split
    x3 = [i for xi, i in enumerate(others) if (xi + 1) not in blocked_x]
    x3.append(agent)
    x3.sort()
    y3 = [idx for yi, idx in enumerate(small) if (yi + 1) not in blocked_y]
    g3 = BipartiteGraph.from_edges(
        len(x3),
        len(y3),
        [
            (xi + 1, yi + 1)
            for xi, i in enumerate(x3)
            for yi, idx in enumerate(y3)
            if accepts(i, part[idx])
        ],
    )
    efm = envy_free_matching(g3)
    if not efm.pairs:
        raise InternalInvariantViolation("envy-free matching unexpectedly empty")
    matched = sorted((x3[x - 1], y3[y - 1]) for x, y in efm.pairs)
    used_goods = set()
    for _, idx in matched:
        used_goods |= part[idx]
    pads = [j for j in range(m, 0, -1) if j not in used_goods]
    awards = {}
    pi = 0
    for aid, idx in matched:
        b = part[idx]
        if len(b) == 2:
            awards[aid] = b
        else:
            awards[aid] = b | {pads[pi]}
            pi += 1
    return ("step", make_step(RULE_EFM_BATCH, awards))


# --- large-n tail grouping ---------------------------------------------------

def _tail_bundle(sp: StructuredPartition, n: int):
    """The lexicographically first bundle living entirely past position n-1."""
    tails = [b for b in sp.partition if b and min(b) >= n]
    if not tails:
        return None
    return min(tails, key=lambda b: tuple(sorted(b)))


def tail_group_step(ordered: OrderedInstance, c: int, mu, table: BoundTable = DEFAULT_TABLE):
    """One reduction for large agent counts via shared tail-bundle groups.

    Every agent's max-singleton witness has a bundle inside the last c + 1
    positions.  Tiny or worthless tails route to the pigeonhole pair; huge
    tails force a nearly-all-small witness and the matching step; otherwise
    the k-sized tails are grouped by shared (k-1)-subsets and a group
    reaching max(c-k+1, n_{c-k+1}+1) members fires the domination award.
    Returns ("step", s), ("allocation", a), or None when nothing triggers.
    """
    cur = ordered.instance
    n = cur.n
    tails = {}
    parts = {}
    for i in range(1, n + 1):
        sp = structured_partition_goods(ordered, i, mu[i - 1])
        parts[i] = sp
        tb = _tail_bundle(sp, n)
        if mu[i - 1] == 0 or tb is None or len(tb) <= 2:
            if cur.m >= n + 1:
                return (
                    "step",
                    make_step(RULE_PIGEONHOLE_PAIR, {i: {n, n + 1}}),
                )
            return None
        tails[i] = tb
    for i in range(1, n + 1):
        if len(tails[i]) >= c - 1:
            sp = parts[i]
            if sum(1 for b in sp.partition if len(b) <= 2) >= n - 1:
                return efm_step(ordered, i, sp, mu)
    for k in range(3, c - 1):
        threshold = max(c - k + 1, table.n_c_goods(c - k + 1) + 1)
        sized = [TailBundle(i, b) for i, b in tails.items() if len(b) == k]
        groups = group_tail_bundles(sized, k)
        for key in sorted(groups, key=lambda s: tuple(sorted(s))):
            grp = groups[key]
            if len({t.agent for t in grp}) >= threshold:
                from .reductions import reduce_by_domination

                try:
                    return ("step", reduce_by_domination(ordered, grp, GOODS, mu))
                except PreconditionUnmet:
                    continue
    return None


# --- scripted case analyses --------------------------------------------------

def _threshold_final(pipe: Pipeline, removed_items, kept_agents, thresholds, cap):
    """Search the residual (after hypothetically removing items) for an
    allocation meeting original-share thresholds.  Returns the residual
    allocation in post-removal coordinates, or None."""
    cur = pipe.current
    keep = [j for j in range(1, cur.m + 1) if j not in removed_items]
    rows = tuple(
        tuple(cur.value(i, j) for j in keep) for i in kept_agents
    )
    sub = Instance(kind=cur.kind, valuations=rows)
    return find_allocation_meeting(sub, thresholds, cap)


def _solve_4x10(pipe: Pipeline, mu, cap: int):
    """Case analysis for four agents and ten goods.

    Returns ("continue",), ("solved", final_alloc_in_current_coords) or
    ("unresolved", reason).
    """
    cur = pipe.current
    view = pipe.view()
    h1 = [i for i in range(1, 5) if cur.value(i, 1) >= mu[i - 1]]
    h2 = [i for i in range(1, 5) if cur.value(i, 2) >= mu[i - 1]]
    if not h1:
        pipe.note("c6:packed-pairs")
        pipe.push(reduce_2n2(view, mu))
        return ("continue",)
    if len(h1) == 1:
        step = reduce_pair_from_high(view, mu)
        if step is None:
            raise InternalInvariantViolation("unique top-good valuer must fire")
        pipe.note("c6:unique-top")
        pipe.push(step)
        return ("continue",)
    if h2:
        i = h2[0]
        other = next(a for a in h1 if a != i)
        pipe.note("c6:two-singles")
        pipe.push(make_step(RULE_SINGLE_ITEM, {other: {1}, i: {2}}))
        return ("continue",)
    # Two or more agents accept good 1, nobody accepts good 2: one of the
    # good-1 claimants can be paid off so that the rest still split the
    # remaining nine goods up to their old shares.
    for star in h1:
        kept = [a for a in range(1, 5) if a != star]
        final = _threshold_final(
            pipe, {1}, kept, [mu[a - 1] for a in kept], cap
        )
        if final is not None:
            pipe.note(f"c6:payoff-good1:agent{star}")
            pipe.push(make_step(RULE_SINGLE_ITEM, {star: {1}}))
            return ("solved", final)
    return ("unresolved", "4x10: no good-1 recipient admits a completion")


def _pivot_pair_witness(cur: Instance, agent: int, pivot: int, mu_i):
    """Smallest companion x such that {1},{2},{3} singletons, {pivot, x} and
    four further bundles at or above the share partition all fifteen goods."""
    row = cur.row(agent)
    if row[2] < mu_i:
        return None
    for x in range(4, 16):
        if x == pivot:
            continue
        if row[pivot - 1] + row[x - 1] < mu_i:
            continue
        rest = [j for j in range(4, 16) if j not in (pivot, x)]
        value, _ = maximin_partition(cur, agent, items=rest, bundles=4)
        if value >= mu_i:
            return x
    return None


def _solve_8x15(pipe: Pipeline, mu, cap: int):
    """Case analysis for eight agents and fifteen goods."""
    cur = pipe.current
    view = pipe.view()

    # An agent whose third-best good misses her share has a witness of five
    # pairs, one triple and two singletons: the matching step applies.
    for i in range(1, 9):
        if cur.value(i, 3) < mu[i - 1]:
            sp = structured_partition_goods(view, i, mu[i - 1])
            result = efm_step(view, i, sp, mu)
            return _apply_efm_result(pipe, result, "c7:low-third")

    h6 = [i for i in range(1, 9) if cur.value(i, 6) >= mu[i - 1]]
    if h6:
        i = h6[0]
        h5_others = [
            a for a in range(1, 9) if a != i and cur.value(a, 5) >= mu[a - 1]
        ]
        if not h5_others:
            pipe.note("c7:sixth-good-unique")
            pipe.push(make_step(RULE_PAIR_FROM_HIGH, {i: {6, 15}}))
            return ("continue",)
        if len(h5_others) == 1:
            ip = h5_others[0]
            pipe.note("c7:sixth-fifth-pairs")
            pipe.push(
                make_step(RULE_PAIR_FROM_HIGH, {i: {6, 14}, ip: {5, 15}})
            )
            return ("continue",)
        ip, ipp = h5_others[0], h5_others[1]
        rest = [a for a in range(1, 9) if a not in (i, ip, ipp)][:3]
        awards = {i: {6}, ip: {5}, ipp: {4}}
        for pos, a in enumerate(rest, start=1):
            awards[a] = {pos}
        pipe.note("c7:six-singles")
        pipe.push(make_step(RULE_SINGLE_ITEM, awards))
        return ("continue",)

    for i in range(1, 9):
        sp = structured_partition_goods(view, i, mu[i - 1])
        if sum(1 for b in sp.partition if len(b) <= 2) >= 7:
            result = efm_step(view, i, sp, mu)
            return _apply_efm_result(pipe, result, "c7:mostly-small")

    high5 = [i for i in range(1, 9) if cur.value(i, 5) >= mu[i - 1]]
    if high5:
        return _solve_8x15_with_five_singles(pipe, mu, cap, high5)
    return _solve_8x15_pivot(pipe, mu, cap)


def _apply_efm_result(pipe: Pipeline, result, tag: str):
    kind, payload = result
    pipe.note(tag)
    if kind == "allocation":
        return ("solved", payload)
    pipe.push(payload)
    return ("continue",)


def _solve_8x15_with_five_singles(pipe: Pipeline, mu, cap: int, high5):
    """Agents valuing the fifth good at their share exist (five-singleton
    witnesses); peel them off with leading singletons plus one pair."""
    cur = pipe.current
    k12 = len(high5)
    if k12 <= 4:
        awards = {}
        for pos, a in enumerate(high5[:-1], start=1):
            awards[a] = {pos}
        awards[high5[-1]] = {5, 15}
        pipe.note(f"c7:five-high:{k12}")
        pipe.push(make_step(RULE_PAIR_FROM_HIGH, awards))
        return ("continue",)
    chosen = high5[:5]
    outsiders = [a for a in range(1, 9) if a not in chosen][:3]
    for first in chosen:
        for second in chosen:
            if second == first:
                continue
            awards = {outsiders[0]: {1}, outsiders[1]: {2}, outsiders[2]: {3}}
            awards[first] = {4}
            awards[second] = {5}
            kept = [a for a in chosen if a not in (first, second)]
            final = _threshold_final(
                pipe, {1, 2, 3, 4, 5}, kept, [mu[a - 1] for a in kept], cap
            )
            if final is not None:
                pipe.note("c7:five-high:batch")
                pipe.push(make_step(RULE_SINGLE_ITEM, awards))
                return ("solved", final)
    return ("unresolved", "8x15: five-singleton batch admits no completion")


def _solve_8x15_pivot(pipe: Pipeline, mu, cap: int):
    """No agent accepts good 5 alone: witnesses have three or four leading
    singletons and pair bundles through goods 5-7.  Group by pivot good."""
    cur = pipe.current
    witness = {}
    for g in (5, 6, 7):
        for i in range(1, 9):
            x = _pivot_pair_witness(cur, i, g, mu[i - 1])
            if x is not None:
                witness[(g, i)] = x
    members = {g: [i for i in range(1, 9) if (g, i) in witness] for g in (5, 6, 7)}
    g = max((5, 6, 7), key=lambda gg: (len(members[gg]), -gg))
    crowd = members[g]
    if len(crowd) >= 4:
        chosen = crowd[:5]
        if len(chosen) < 5:
            extras = [a for a in range(1, 9) if a not in chosen]
            chosen = sorted(chosen + extras[: 5 - len(chosen)])
        outsiders = [a for a in range(1, 9) if a not in chosen][:3]
        companions = {a: witness[(g, a)] for a in chosen if (g, a) in witness}
        worst = max(companions.values())
        owner = min(a for a, x in companions.items() if x == worst)
        bundle = frozenset({g, worst})
        recipient = owner
        missing = [a for a in chosen if a not in companions]
        if missing and bundle_value(cur, missing[0], bundle) >= mu[missing[0] - 1]:
            recipient = missing[0]
        awards = {outsiders[0]: {1}, outsiders[1]: {2}, outsiders[2]: {3}}
        awards[recipient] = bundle
        pipe.note(f"c7:pivot{g}:crowd")
        pipe.push(make_step(RULE_DOMINATION, awards))
        return ("continue",)
    if len(crowd) == 3:
        helpers = [
            a
            for a in range(1, 9)
            if a not in crowd and cur.value(a, 4) >= mu[a - 1]
        ]
        if len(helpers) >= 2:
            xs = [witness[(g, a)] for a in crowd]
            worst = max(xs)
            owner = min(a for a in crowd if witness[(g, a)] == worst)
            bundle = frozenset({g, worst})
            i, ip = helpers[0], helpers[1]
            outsiders = [a for a in range(1, 9) if a not in crowd + [i, ip]][:3]
            base = {outsiders[0]: {1}, outsiders[1]: {2}, outsiders[2]: {3}}
            vi = bundle_value(cur, i, bundle) >= mu[i - 1]
            vip = bundle_value(cur, ip, bundle) >= mu[ip - 1]
            if vi and vip:
                awards = dict(base)
                awards[i] = bundle
                awards[ip] = {4}
                final = _threshold_final(
                    pipe,
                    {1, 2, 3, 4} | bundle,
                    crowd,
                    [mu[a - 1] for a in crowd],
                    cap,
                )
                if final is not None:
                    pipe.note(f"c7:pivot{g}:pack")
                    pipe.push(make_step(RULE_DOMINATION, awards))
                    return ("solved", final)
            awards = dict(base)
            recipient = ip if vip else owner
            if vi and not vip:
                recipient = i
            awards[recipient] = bundle
            pipe.note(f"c7:pivot{g}:reject")
            pipe.push(make_step(RULE_DOMINATION, awards))
            return ("continue",)
    return ("unresolved", "8x15: no pivot-pair group is large enough")


# --- dispatcher --------------------------------------------------------------

def _trivial_final(cur: Instance):
    """m <= n: one leading item each, in order; empties beyond that."""
    return tuple(
        frozenset({i}) if i <= cur.m else frozenset() for i in range(1, cur.n + 1)
    )


def _drive(pipe: Pipeline, cap: int, table: BoundTable):
    while True:
        cur = pipe.current
        n, m = cur.n, cur.m
        if n == 0:
            if m:
                return ("unresolved", None, "items left with no agents")
            return ("solved", tuple(), "")
        if n <= 2:
            mu = mu_vector(cur)
            alloc = base_identical_partitions(cur, mu)
            if alloc is None:
                return ("unresolved", None, "two-agent base failed")
            pipe.note("base:two-agent")
            return ("solved", alloc, "")
        if m <= n:
            pipe.note("base:leading-singletons")
            return ("solved", _trivial_final(cur), "")
        mu = mu_vector(cur)
        step = _guarded_simple(pipe, mu, table)
        if step is not None:
            pipe.push(step)
            continue
        c = m - n
        if c <= 5:
            pipe.push(reduce_2n2(pipe.view(), mu))
            continue
        if c == 6 and n >= 4:
            if n > 4:
                pipe.push(reduce_2n2(pipe.view(), mu))
                continue
            result = _solve_4x10(pipe, mu, cap)
        elif c == 7 and n >= 8:
            if n > 8:
                pipe.push(reduce_2n2(pipe.view(), mu))
                continue
            result = _solve_8x15(pipe, mu, cap)
        elif n >= table.n_c_goods(c):
            outcome = tail_group_step(pipe.view(), c, mu, table)
            if outcome is None:
                result = None
            else:
                kind, payload = outcome
                if kind == "allocation":
                    result = ("solved", payload)
                else:
                    pipe.push(payload)
                    continue
        else:
            result = None
        if result is not None and result[0] == "continue":
            continue
        if result is not None and result[0] == "solved":
            return ("solved", result[1], "")
        # no constructive route: exhaustive threshold search or give up
        reason = result[1] if result is not None else f"no constructive route at {n}x{m}"
        try:
            final = find_allocation_meeting(cur, mu, cap)
        except TooLarge:
            return ("unresolved", None, reason + "; search cap exceeded")
        if final is None:
            return (
                "unresolved",
                None,
                f"no allocation meets all shares at {n}x{m}",
            )
        pipe.note("fallback:threshold-search")
        return ("solved", final, "")


def solve(
    instance: Instance,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    table: BoundTable = DEFAULT_TABLE,
) -> SolveOutcome:
    """Solve a goods instance, certifying the result before reporting it."""
    if instance.kind != GOODS:
        raise ValueError("goods instance required")
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


def solve_c6(instance: Instance, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SolveOutcome:
    """Entry point for up to n + 6 goods; three agents are out of scope
    because nine goods can defeat three agents."""
    if instance.kind != GOODS:
        raise ValueError("goods instance required")
    if instance.n == 3:
        raise NEqualsThree("three agents with nine-plus goods are not covered")
    if instance.m > instance.n + 6:
        raise PreconditionUnmet("needs m <= n + 6")
    return solve(instance, cap=cap)


def solve_c7(instance: Instance, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SolveOutcome:
    """Entry point for up to n + 7 goods with at least eight agents."""
    if instance.kind != GOODS:
        raise ValueError("goods instance required")
    if instance.n < 8:
        raise TooFewAgents("needs at least eight agents")
    if instance.m > instance.n + 7:
        raise PreconditionUnmet("needs m <= n + 7")
    return solve(instance, cap=cap)
