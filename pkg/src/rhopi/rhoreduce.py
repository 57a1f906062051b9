"""Reduction and observation for reflective process terms.

Communication is the only reduction rule: an input and a lift running in
parallel whose subjects are equivalent names exchange the lift's body as a
quoted name,

    x1?(y).P | x2!(Q)   -->   P{@Q / y}      when x1 and x2 are equivalent,

where the substitution is the semantic one (name positions get @Q, a dropped
y becomes Q itself).  Reduction is closed under parallel composition and
structural congruence; working on canonical forms makes both closures free:
redexes are pairs of top-level parallel components with identical canonical
subjects.

Observations (barbs) are the commitments visible at the surface: a top-level
lift is an output barb on its subject, a top-level input an input barb on
its subject, in both cases up to name equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .rhoterm import (
    Drop,
    Input,
    Lift,
    Nil,
    Par,
    RhoName,
    RhoProc,
    canon_name,
    canon_proc,
    par,
    quote,
    subst_marker,
)

__all__ = [
    "components",
    "Redex",
    "redexes",
    "apply_redex",
    "step",
    "barbs",
    "reduction_graph",
    "OUT",
    "IN",
]

OUT = "out"
IN = "in"


def components(p: RhoProc) -> tuple:
    """Top-level parallel components of the canonical form of p."""
    cp = canon_proc(p)
    if isinstance(cp, Par):
        return cp.children
    if isinstance(cp, Nil):
        return ()
    return (cp,)


@dataclass(frozen=True)
class Redex:
    """A communication opportunity between two top-level components:
    components[input_index] is an input and components[lift_index] a lift on
    an equivalent subject."""

    input_index: int
    lift_index: int
    subject: RhoName


def redexes(p: RhoProc) -> list:
    """All communication redexes of p, in (input position, lift position)
    order over the canonical component list."""
    comps = components(p)
    ins = [(i, c) for i, c in enumerate(comps) if isinstance(c, Input)]
    outs = [(j, c) for j, c in enumerate(comps) if isinstance(c, Lift)]
    found = []
    for i, inode in ins:
        for j, onode in outs:
            if inode.subject is onode.subject:  # canonical names: identity is equivalence
                found.append(Redex(i, j, inode.subject))
    return found


def apply_redex(p: RhoProc, redex: Redex) -> RhoProc:
    """The canonical reduct of p by the given redex."""
    comps = components(p)
    inode = comps[redex.input_index]
    onode = comps[redex.lift_index]
    # the payload quote is passed uncollapsed: name positions take its
    # canonical name, a dropped binder becomes the lifted body as written
    payload = quote(onode.body)
    continuation = subst_marker(inode.body, payload, inode.binder.index)
    rest = [
        c
        for k, c in enumerate(comps)
        if k != redex.input_index and k != redex.lift_index
    ]
    return canon_proc(par(*rest, continuation))


def step(p: RhoProc) -> list:
    """Canonical one-step reducts of p, deduplicated, in redex order."""
    out: list = []
    seen = set()
    for r in redexes(p):
        q = apply_redex(p, r)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def reduction_graph(p: RhoProc, max_states: int = 100_000, max_depth: int = 200):
    """Bounded reduction graph rooted at the canonical form of p."""
    from .lts import explore

    return explore(canon_proc(p), step, max_states=max_states, max_depth=max_depth)


def barbs(p: RhoProc, restrict: Optional[Iterable[RhoName]] = None) -> frozenset:
    """Observable commitments of p: pairs (direction, subject) with direction
    "out" for a top-level lift and "in" for a top-level input, subjects
    canonical.  With restrict given, only subjects equivalent to a member of
    restrict are reported."""
    allowed = None if restrict is None else {canon_name(x) for x in restrict}
    found = set()
    for c in components(p):
        if isinstance(c, Lift):
            pair = (OUT, c.subject)
        elif isinstance(c, Input):
            pair = (IN, c.subject)
        else:
            continue
        if allowed is None or pair[1] in allowed:
            found.add(pair)
    return frozenset(found)
