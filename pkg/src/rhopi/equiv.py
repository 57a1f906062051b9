"""Bounded equivalence checking over reduction graphs.

``barbed_bisim`` decides (within exploration budgets) barbed bisimilarity of
two states under a shared step function and barb observation: states are
related when their (weak) barb sets agree and every move of one can be
matched by the other, weakly through any number of reductions.  The checker
explores both reduction graphs, saturates them for the weak case (reachable
sets via strongly-connected-component condensation), and runs partition
refinement over the union; identical canonical roots short-circuit to
Bisimilar.  Truncated explorations yield Unknown unless a definite
distinction survives truncation (a barb one side exhibits and the other side
provably never reaches).

``divergence_probe`` searches a reflective term for an infinite reduction.
A reachable cycle is Diverges (sound); a fully explored acyclic graph is
Terminates (sound) — heuristics never touch either verdict.  Only when the
exploration was cut off do two replay heuristics inspect the partial graph
for evidence of unbounded growth: a state containing a breadth-first
ancestor as a strict sub-multiset of parallel components (the ancestor's
whole future can be replayed beside the surplus, since reduction is closed
under parallel composition); and a chain of two states each matching its
ancestor under an injective renaming of whole names where every moved name
gets strictly deeper and an output body may additionally wrap the ancestor's
body under extra output guards — the signature of a machine re-running
itself each round on self-quoted, ever-growing fuel.  Anything else is
Unknown.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .lts import Verdict, explore, weak_barb_search
from .piterm import PiTerm, PPar, pi_barbs, pi_canon, pi_step
from .rhoreduce import barbs as rho_barbs
from .rhoreduce import components as rho_components
from .rhoreduce import step as rho_step
from .rhoterm import (
    BoundMarker,
    Drop,
    Input,
    Lift,
    Nil,
    RhoProc,
    canon_name,
    canon_proc,
    quote_depth,
)

__all__ = [
    "BisimVerdict",
    "BisimReport",
    "barbed_bisim",
    "rho_barbed_bisim",
    "pi_barbed_bisim",
    "DivergenceVerdict",
    "DivergenceReport",
    "divergence_probe",
    "pi_divergence",
    "rho_weak_barb_set",
    "pi_weak_barb_set",
    "restricted_weak_obs",
]


# ---------------------------------------------------------------------------
# Graph utilities: SCCs, reachability, cycles
# ---------------------------------------------------------------------------


def _sccs(n: int, edges: list) -> tuple:
    """Iterative Tarjan.  Returns (comp_of, comps) with comps in completion
    order: every component's successors appear before it."""
    UNVISITED = -1
    index = [UNVISITED] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list = []
    comp_of = [-1] * n
    comps: list = []
    counter = 0

    for s0 in range(n):
        if index[s0] != UNVISITED:
            continue
        work = [(s0, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(edges[v])):
                w = edges[v][i]
                if index[w] == UNVISITED:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    members.append(w)
                    if w == v:
                        break
                comps.append(members)
            work.pop()
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comp_of, comps


def _reach_sets(n: int, edges: list) -> list:
    """Reflexive-transitive reachability per state, shared across SCCs."""
    comp_of, comps = _sccs(n, edges)
    comp_reach: list = []
    for ci, members in enumerate(comps):
        r = set(members)
        for u in members:
            for v in edges[u]:
                cj = comp_of[v]
                if cj != ci:
                    r |= comp_reach[cj]
        comp_reach.append(r)
    return [comp_reach[comp_of[i]] for i in range(n)]


def _find_cycle(n: int, edges: list) -> Optional[list]:
    """Some states lying on a reachable cycle, or None if the graph is a DAG."""
    comp_of, comps = _sccs(n, edges)
    for members in comps:
        if len(members) > 1:
            return sorted(members)
        v = members[0]
        if v in edges[v]:
            return [v]
    return None


# ---------------------------------------------------------------------------
# Barbed bisimulation
# ---------------------------------------------------------------------------


class BisimVerdict(Enum):
    BISIMILAR = "bisimilar"
    NOT_BISIMILAR = "not-bisimilar"
    UNKNOWN = "unknown"


@dataclass
class BisimReport:
    verdict: BisimVerdict
    weak: bool
    states: tuple  # (explored in graph 1, explored in graph 2)
    truncated: bool
    witness: Optional[dict] = None
    blocks: Optional[int] = None


def barbed_bisim(
    root1,
    root2,
    step_fn: Callable,
    barb_fn: Callable,
    weak: bool = True,
    max_states: int = 2000,
    max_depth: int = 200,
) -> BisimReport:
    """Bounded barbed bisimilarity of two canonical states (strong or weak).

    Pass canonical roots: identical roots are Bisimilar outright.  barb_fn
    maps a state to its barb set (restrict it upstream if needed).
    """
    if root1 == root2:
        return BisimReport(BisimVerdict.BISIMILAR, weak, (1, 1), False, None)

    g1 = explore(root1, step_fn, max_states=max_states, max_depth=max_depth)
    g2 = explore(root2, step_fn, max_states=max_states, max_depth=max_depth)
    truncated = g1.truncated or g2.truncated

    if truncated:
        if not weak:
            b1, b2 = barb_fn(root1), barb_fn(root2)
            if b1 != b2:
                return BisimReport(
                    BisimVerdict.NOT_BISIMILAR,
                    weak,
                    (len(g1.states), len(g2.states)),
                    True,
                    {"reason": "barb", "only": _barb_diff(b1, b2)},
                )
            return BisimReport(
                BisimVerdict.UNKNOWN, weak, (len(g1.states), len(g2.states)), True
            )
        obs1 = frozenset().union(*(barb_fn(s) for s in g1.states)) if g1.states else frozenset()
        obs2 = frozenset().union(*(barb_fn(s) for s in g2.states)) if g2.states else frozenset()
        witness = None
        if not g1.truncated and obs2 - obs1:
            witness = {"reason": "barb", "only": ("right", sorted(obs2 - obs1, key=repr))}
        elif not g2.truncated and obs1 - obs2:
            witness = {"reason": "barb", "only": ("left", sorted(obs1 - obs2, key=repr))}
        if witness:
            return BisimReport(
                BisimVerdict.NOT_BISIMILAR,
                weak,
                (len(g1.states), len(g2.states)),
                True,
                witness,
            )
        return BisimReport(
            BisimVerdict.UNKNOWN, weak, (len(g1.states), len(g2.states)), True
        )

    n1 = len(g1.states)
    states = list(g1.states) + list(g2.states)
    n = len(states)
    edges = [list(t) for t in g1.edges] + [[t + n1 for t in row] for row in g2.edges]

    if weak:
        succ_rel = _reach_sets(n, edges)
        barb_sig = []
        for i in range(n):
            acc: frozenset = frozenset()
            for j in succ_rel[i]:
                acc |= barb_fn(states[j])
            barb_sig.append(acc)
    else:
        succ_rel = [set(row) for row in edges]
        barb_sig = [barb_fn(states[i]) for i in range(n)]

    # partition refinement
    block_of = _regroup([(barb_sig[i],) for i in range(n)])
    while True:
        sigs = [
            (block_of[i], frozenset(block_of[j] for j in succ_rel[i])) for i in range(n)
        ]
        new_block_of = _regroup(sigs)
        if new_block_of == block_of:
            break
        block_of = new_block_of

    nblocks = len(set(block_of))
    if block_of[0] == block_of[n1]:
        return BisimReport(
            BisimVerdict.BISIMILAR, weak, (n1, n - n1), False, None, nblocks
        )

    witness = _bisim_witness(
        states, n1, block_of, succ_rel, barb_sig, weak
    )
    return BisimReport(
        BisimVerdict.NOT_BISIMILAR, weak, (n1, n - n1), False, witness, nblocks
    )


def _regroup(sigs: list) -> list:
    ids: dict = {}
    out = []
    for s in sigs:
        b = ids.get(s)
        if b is None:
            b = len(ids)
            ids[s] = b
        out.append(b)
    return out


def _barb_diff(b1: frozenset, b2: frozenset) -> tuple:
    if b1 - b2:
        return ("left", sorted(b1 - b2, key=repr))
    return ("right", sorted(b2 - b1, key=repr))


def _bisim_witness(states, n1, block_of, succ_rel, barb_sig, weak) -> dict:
    r1, r2 = 0, n1
    if barb_sig[r1] != barb_sig[r2]:
        return {
            "reason": "barb",
            "kind": "weak" if weak else "strong",
            "only": _barb_diff(barb_sig[r1], barb_sig[r2]),
        }
    blocks1 = {block_of[j] for j in succ_rel[r1]}
    blocks2 = {block_of[j] for j in succ_rel[r2]}
    if blocks1 - blocks2:
        b = next(iter(blocks1 - blocks2))
        j = next(j for j in succ_rel[r1] if block_of[j] == b)
        return {"reason": "move", "side": "left", "to_state": states[j]}
    if blocks2 - blocks1:
        b = next(iter(blocks2 - blocks1))
        j = next(j for j in succ_rel[r2] if block_of[j] == b)
        return {"reason": "move", "side": "right", "to_state": states[j]}
    return {"reason": "refinement", "note": "roots separated below the first move"}


def rho_barbed_bisim(
    p: RhoProc,
    q: RhoProc,
    weak: bool = True,
    restrict: Optional[Iterable] = None,
    max_states: int = 2000,
    max_depth: int = 200,
) -> BisimReport:
    allowed = None if restrict is None else [canon_name(x) for x in restrict]
    return barbed_bisim(
        canon_proc(p),
        canon_proc(q),
        rho_step,
        lambda s: rho_barbs(s, allowed),
        weak=weak,
        max_states=max_states,
        max_depth=max_depth,
    )


def pi_barbed_bisim(
    p: PiTerm,
    q: PiTerm,
    weak: bool = True,
    restrict: Optional[Iterable] = None,
    max_states: int = 2000,
    max_depth: int = 200,
) -> BisimReport:
    allowed = None if restrict is None else list(restrict)
    return barbed_bisim(
        pi_canon(p),
        pi_canon(q),
        pi_step,
        lambda s: pi_barbs(s, allowed),
        weak=weak,
        max_states=max_states,
        max_depth=max_depth,
    )


# ---------------------------------------------------------------------------
# Weak observation sets
# ---------------------------------------------------------------------------


def rho_weak_barb_set(
    p: RhoProc,
    subjects: Optional[Iterable] = None,
    max_states: int = 2000,
    max_depth: int = 200,
) -> tuple:
    """All barbs observable from p or any reduct (restricted to subjects if
    given), plus whether the exploration was cut off."""
    allowed = None if subjects is None else [canon_name(x) for x in subjects]
    g = explore(canon_proc(p), rho_step, max_states=max_states, max_depth=max_depth)
    acc: frozenset = frozenset()
    for s in g.states:
        acc |= rho_barbs(s, allowed)
    return acc, g.truncated


def pi_weak_barb_set(
    t: PiTerm,
    subjects: Optional[Iterable] = None,
    max_states: int = 2000,
    max_depth: int = 200,
) -> tuple:
    allowed = None if subjects is None else list(subjects)
    g = explore(pi_canon(t), pi_step, max_states=max_states, max_depth=max_depth)
    acc: frozenset = frozenset()
    for s in g.states:
        acc |= pi_barbs(s, allowed)
    return acc, g.truncated


# ---------------------------------------------------------------------------
# Structurally-restricted weak observation of an encoded pi term
# ---------------------------------------------------------------------------


def _top_pi_components(t: PiTerm) -> list:
    """Top-level parallel components of a pi term as written."""
    out: list = []
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, PPar):
            stack.extend(reversed(x.children))
        else:
            out.append(x)
    return out


def restricted_weak_obs(
    source: PiTerm,
    barb: tuple,
    restrict: Optional[Iterable] = None,
    policy=None,
    encoded_parts: Optional[list] = None,
    max_states: int = 2000,
    max_depth: int = 200,
) -> Verdict:
    """Does the encoding of source exhibit barb, observing each top-level
    parallel component of the source separately?

    The source is split into its parallel components as written; each leaf is
    encoded with its own name server (sharing one renaming policy so source
    atoms keep one image) and explored on its own.  The whole term shows the
    barb exactly when some component does — component interaction is
    deliberately out of view, which is what makes the observation compare
    cleanly against the source term's own barbs.  Pass precomputed
    ``encoded_parts`` (aligned with the component list) to reuse encodings.
    """
    from .encode import RenamingPolicy, encode_ns

    allowed = None if restrict is None else [canon_name(x) for x in restrict]
    if encoded_parts is None:
        pol = policy if policy is not None else RenamingPolicy()
        pol.scan(source)
        encoded_parts = [
            encode_ns(leaf, policy=pol) for leaf in _top_pi_components(source)
        ]

    saw_unknown = False
    for enc in encoded_parts:
        state = enc.state if hasattr(enc, "state") else enc
        found = weak_barb_search(
            state,
            rho_step,
            lambda s: barb in rho_barbs(s, allowed),
            max_states=max_states,
            max_depth=max_depth,
        )
        if found.verdict is Verdict.YES:
            return Verdict.YES
        if found.verdict is Verdict.UNKNOWN:
            saw_unknown = True
    return Verdict.UNKNOWN if saw_unknown else Verdict.NO


# ---------------------------------------------------------------------------
# Divergence probing
# ---------------------------------------------------------------------------


class DivergenceVerdict(Enum):
    DIVERGES = "diverges"
    TERMINATES = "terminates"
    UNKNOWN = "unknown"


@dataclass
class DivergenceReport:
    verdict: DivergenceVerdict
    rule: Optional[str] = None  # "cycle" | "growth" | "replay"
    evidence: dict = field(default_factory=dict)
    states: int = 0
    truncated: bool = False


_ANCESTOR_SCAN_LIMIT = 64  # ancestors inspected per state by the heuristics
_REPLAY_NODE_BUDGET = 500_000  # total matcher steps per probe


def divergence_probe(
    p: RhoProc, max_states: int = 400, max_depth: int = 120
) -> DivergenceReport:
    """Bounded divergence analysis of a reflective term (see module docs for
    the verdict rules)."""
    g = explore(canon_proc(p), rho_step, max_states=max_states, max_depth=max_depth)
    n = len(g.states)

    cyc = _find_cycle(n, g.edges)
    if cyc is not None:
        return DivergenceReport(
            DivergenceVerdict.DIVERGES,
            "cycle",
            {"cycle_states": cyc, "example": g.states[cyc[0]]},
            n,
            g.truncated,
        )

    if not g.truncated:
        return DivergenceReport(DivergenceVerdict.TERMINATES, None, {}, n, False)

    # The run was cut off: look for replayable growth along ancestor chains.
    comp_counters = [Counter(rho_components(s)) for s in g.states]
    budget = [_REPLAY_NODE_BUDGET]
    replay_memo: dict = {}

    def replays(anc: int, state: int) -> bool:
        key = (anc, state)
        hit = replay_memo.get(key)
        if hit is None:
            hit = _replay_match(g.states[anc], g.states[state], budget)
            replay_memo[key] = hit
        return hit

    for i in range(1, n):
        j = g.parents[i]
        hops = 0
        while j is not None and hops < _ANCESTOR_SCAN_LIMIT:
            if _submultiset(comp_counters[j], comp_counters[i]):
                return DivergenceReport(
                    DivergenceVerdict.DIVERGES,
                    "growth",
                    {"ancestor": g.states[j], "state": g.states[i]},
                    n,
                    True,
                )
            if budget[0] > 0 and replays(j, i):
                # confirm with a second hit further up the same chain
                k = g.parents[j]
                khops = 0
                while k is not None and khops < _ANCESTOR_SCAN_LIMIT:
                    if budget[0] > 0 and replays(k, j):
                        return DivergenceReport(
                            DivergenceVerdict.DIVERGES,
                            "replay",
                            {
                                "ancestor": g.states[k],
                                "middle": g.states[j],
                                "state": g.states[i],
                            },
                            n,
                            True,
                        )
                    k = g.parents[k]
                    khops += 1
            j = g.parents[j]
            hops += 1

    return DivergenceReport(DivergenceVerdict.UNKNOWN, None, {}, n, True)


def pi_divergence(
    t: PiTerm, max_states: int = 2000, max_depth: int = 200
) -> DivergenceReport:
    """Divergence of a pi term by exhaustive bounded exploration: a reachable
    cycle diverges, a fully explored acyclic graph terminates."""
    g = explore(pi_canon(t), pi_step, max_states=max_states, max_depth=max_depth)
    n = len(g.states)
    cyc = _find_cycle(n, g.edges)
    if cyc is not None:
        return DivergenceReport(
            DivergenceVerdict.DIVERGES,
            "cycle",
            {"cycle_states": cyc, "example": g.states[cyc[0]]},
            n,
            g.truncated,
        )
    if not g.truncated:
        return DivergenceReport(DivergenceVerdict.TERMINATES, None, {}, n, False)
    return DivergenceReport(DivergenceVerdict.UNKNOWN, None, {}, n, True)


def _submultiset(small: Counter, big: Counter) -> bool:
    return all(big[k] >= v for k, v in small.items())


# --- replay matching: injective deepening renaming plus output wrapping -----


def _group_key(p: RhoProc):
    """Coarse shape class used to pair parallel children before backtracking.
    Bound markers must line up exactly, so input binders join the key."""
    if isinstance(p, Nil):
        return (0,)
    if isinstance(p, Drop):
        return (1,)
    if isinstance(p, Lift):
        return (2,)
    if isinstance(p, Input):
        return (3, p.binder.index)
    return (4, len(p.children))


def _replay_match(a: RhoProc, s: RhoProc, budget: list) -> bool:
    """Does s replay a?  s must equal a up to (i) an injective renaming of
    whole names where every moved name is strictly deeper and (ii) output
    bodies in s wrapping the corresponding body of a under extra output
    guards.  Bound markers are fixed points.  Parallel children are matched
    as multisets with backtracking; ``budget`` is a one-element list of
    remaining matcher steps, decremented in place (exhaustion fails the
    match, conservatively)."""
    fwd: dict = {}
    bwd: dict = {}
    trail: list = []

    def bind(x, y) -> bool:
        if isinstance(x, BoundMarker) or isinstance(y, BoundMarker):
            return x is y
        prev = fwd.get(x)
        if prev is not None:
            return prev is y
        if y in bwd:
            return False
        if x is not y and quote_depth(y) <= quote_depth(x):
            return False
        fwd[x] = y
        bwd[y] = x
        trail.append((x, y))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            x, y = trail.pop()
            del fwd[x]
            del bwd[y]

    def walk(p, q) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            return False
        if type(p) is not type(q):
            return False
        if isinstance(p, Nil):
            return True
        if isinstance(p, Drop):
            return bind(p.name, q.name)
        if isinstance(p, Lift):
            if not bind(p.subject, q.subject):
                return False
            mark = len(trail)
            body = q.body
            while True:
                if walk(p.body, body):
                    return True
                undo(mark)
                if isinstance(body, Lift):
                    body = body.body  # peel one wrapping output guard
                else:
                    return False
        if isinstance(p, Input):
            return (
                p.binder is q.binder
                and bind(p.subject, q.subject)
                and walk(p.body, q.body)
            )
        if len(p.children) != len(q.children):
            return False
        groups_p: dict = {}
        groups_q: dict = {}
        for c in p.children:
            groups_p.setdefault(_group_key(c), []).append(c)
        for c in q.children:
            groups_q.setdefault(_group_key(c), []).append(c)
        if set(groups_p) != set(groups_q):
            return False
        for k in groups_p:
            if len(groups_p[k]) != len(groups_q[k]):
                return False

        group_list = sorted(groups_p.keys())

        def match_groups(gi: int) -> bool:
            if gi == len(group_list):
                return True
            key = group_list[gi]
            left = groups_p[key]
            right = groups_q[key]
            used = [False] * len(right)

            def match_items(li: int) -> bool:
                if li == len(left):
                    return match_groups(gi + 1)
                for ri in range(len(right)):
                    if used[ri]:
                        continue
                    mark = len(trail)
                    if walk(left[li], right[ri]):
                        used[ri] = True
                        if match_items(li + 1):
                            return True
                        used[ri] = False
                    undo(mark)
                return False

            return match_items(0)

        return match_groups(0)

    mark = len(trail)
    ok = walk(a, s)
    if not ok:
        undo(mark)
    return ok
