"""Bounded breadth-first exploration of reduction graphs.

Works over any calculus: states are opaque hashable canonical values and a
step function maps a state to its successor states.  Exploration is bounded
by a state budget and a depth budget; the result records whether either bound
actually cut something off (``truncated``), which downstream verdicts use to
distinguish "No" from "Unknown".

A state sitting at the depth bound is still expanded — edges to states
already in the graph are kept (so cycles crossing the frontier are seen) and
only genuinely new states are dropped, which is the one case information is
lost.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Hashable, Iterable, Optional

__all__ = ["Lts", "explore", "Verdict", "BarbSearch", "weak_barb_search"]

DEFAULT_MAX_STATES = 100_000
DEFAULT_MAX_DEPTH = 200


@dataclass
class Lts:
    """A bounded reduction graph.

    states are in discovery order (states[0] is the root); edges[i] lists
    successor indices of state i in first-seen order, deduplicated;
    parents[i] is the index state i was first discovered from (None for the
    root), giving shortest traces back to the root.
    """

    states: list
    edges: list
    depths: list
    parents: list
    truncated: bool
    truncated_reason: Optional[str] = None

    @property
    def index(self) -> dict:
        if not hasattr(self, "_index"):
            object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        return self._index

    def trace_to(self, i: int) -> list:
        """States along the BFS tree path from the root to state i."""
        path = []
        cur: Optional[int] = i
        while cur is not None:
            path.append(self.states[cur])
            cur = self.parents[cur]
        path.reverse()
        return path


def explore(
    root: Hashable,
    step_fn: Callable[[Hashable], Iterable],
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Lts:
    """Breadth-first reduction graph from root under step_fn, bounded by
    max_states (total distinct states kept) and max_depth (tree depth at
    which new states are no longer admitted)."""
    states = [root]
    index = {root: 0}
    edges: list = [[]]
    depths = [0]
    parents: list = [None]
    truncated = False
    reason: Optional[str] = None

    head = 0
    while head < len(states):
        i = head
        head += 1
        seen_targets = set()
        for succ in step_fn(states[i]):
            j = index.get(succ)
            if j is None:
                if len(states) >= max_states:
                    truncated, reason = True, "max_states"
                    continue
                if depths[i] >= max_depth:
                    truncated, reason = True, "max_depth"
                    continue
                j = len(states)
                index[succ] = j
                states.append(succ)
                edges.append([])
                depths.append(depths[i] + 1)
                parents.append(i)
            if j not in seen_targets:
                seen_targets.add(j)
                edges[i].append(j)

    lts = Lts(states, edges, depths, parents, truncated, reason)
    object.__setattr__(lts, "_index", index)
    return lts


class Verdict(Enum):
    """Three-valued answer for bounded reachability questions."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class BarbSearch:
    """Result of a bounded weak-observation search.

    verdict YES comes with the depth of the first witnessing state and the
    trace to it; NO is only claimed when the exploration was exhaustive
    (untruncated); otherwise UNKNOWN.
    """

    verdict: Verdict
    depth: Optional[int] = None
    trace: Optional[list] = None
    explored: int = 0
    truncated: bool = False


def weak_barb_search(
    root: Hashable,
    step_fn: Callable[[Hashable], Iterable],
    pred: Callable[[Hashable], bool],
    max_states: int = DEFAULT_MAX_STATES,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> BarbSearch:
    """Does some reduct of root (including root itself) satisfy pred?

    Breadth-first with early exit, so a YES also carries a shortest witness
    trace.  NO requires the bounded exploration to have been exhaustive.
    """
    states = [root]
    index = {root: 0}
    depths = [0]
    parents: list = [None]
    truncated = False

    def trace(i: int) -> list:
        path = []
        cur: Optional[int] = i
        while cur is not None:
            path.append(states[cur])
            cur = parents[cur]
        path.reverse()
        return path

    head = 0
    while head < len(states):
        i = head
        head += 1
        if pred(states[i]):
            return BarbSearch(Verdict.YES, depths[i], trace(i), len(states), truncated)
        for succ in step_fn(states[i]):
            if succ in index:
                continue
            if len(states) >= max_states or depths[i] >= max_depth:
                truncated = True
                continue
            index[succ] = len(states)
            states.append(succ)
            depths.append(depths[i] + 1)
            parents.append(i)

    if truncated:
        return BarbSearch(Verdict.UNKNOWN, None, None, len(states), True)
    return BarbSearch(Verdict.NO, None, None, len(states), False)
