"""Asynchronous, choice-free pi-calculus terms and their semantics.

Grammar:

    P ::= 0 | P1 | P2 | x!y | x?(y).P | new x. P | !P

with atomic names drawn from identifiers.  Output carries exactly one name
and has no continuation; there is no sum.  Replication is a first-class
constructor (never unfolded by canonicalization, only by reduction).

Structural congruence — alpha conversion, the parallel monoid laws, erasure
of a restriction whose name is unused (which subsumes ``new x.0 = 0``),
reordering of adjacent restrictions, and restriction scope mobility across
parallel components that do not mention the name — is decided by reduction to
a canonical form: binders become depth-indexed markers (one depth counter for
both binder kinds), each restriction is narrowed to the smallest group of
parallel components mentioning its name, adjacent restriction blocks take the
order minimizing the term, and parallel children are flattened and sorted
(multiset semantics; duplicates kept).

Reduction is communication ``x?(y).P | x!z --> P{z/y}``, closed under
parallel, restriction, and congruence, plus unfolding of replication.  A step
computation unfolds each replicated component exactly once: two cooperating
copies of the same replica need two steps, one to materialize each copy.

Like the reflective-term module, nodes are interned so canonical-form
equality is object identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Union

__all__ = [
    "PiTerm",
    "PNil",
    "PPar",
    "POut",
    "PIn",
    "PNew",
    "PRepl",
    "PiMarker",
    "PiName",
    "pnil",
    "ppar",
    "pout",
    "pin",
    "pnew",
    "prepl",
    "pimarker",
    "pi_canon",
    "pi_eq",
    "pi_free_names",
    "pi_step",
    "pi_barbs",
    "pi_reduction_graph",
    "subst_atom",
    "show_pi",
]


class PiTerm:
    """Base class for interned pi terms; construct via the factories."""

    __slots__ = ("key", "_hash")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __repr__(self) -> str:
        return show_pi(self)


class PNil(PiTerm):
    __slots__ = ()


class PPar(PiTerm):
    __slots__ = ("children",)
    children: tuple


class POut(PiTerm):
    __slots__ = ("subject", "obj")


class PIn(PiTerm):
    __slots__ = ("subject", "binder", "body")


class PNew(PiTerm):
    __slots__ = ("binder", "body")


class PRepl(PiTerm):
    __slots__ = ("body",)


class PiMarker:
    """Canonical bound name: the nesting depth of its binder (input and
    restriction binders share one depth counter along each path)."""

    __slots__ = ("index", "key", "_hash")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __repr__(self) -> str:
        return f"<bound {self.index}>"


#: A pi name is an atom (identifier string) or a canonical bound marker.
PiName = Union[str, PiMarker]

_PINTERN: dict = {}
_PSALT = {
    PNil: 0x11A7C24D,
    POut: 0x23B8D35E,
    PIn: 0x35C9E46F,
    PRepl: 0x47DAF570,
    PNew: 0x59EB0681,
    PPar: 0x6BFC1792,
    PiMarker: 0x7D0D28A3,
}


def _pmk(cls, fields: tuple, key: tuple, hsh: int):
    ident = (cls, *fields)
    node = _PINTERN.get(ident)
    if node is None:
        fresh = cls.__new__(cls)
        slots = [s for s in cls.__slots__ if s not in ("key", "_hash")]
        for slot, value in zip(slots, fields):
            setattr(fresh, slot, value)
        fresh.key = key
        fresh._hash = hsh
        node = _PINTERN.setdefault(ident, fresh)
    return node


def _name_key(n: PiName) -> tuple:
    if isinstance(n, PiMarker):
        return (1, n.index)
    return (0, n)


def _name_hash(n: PiName) -> int:
    return hash(n)


def pimarker(index: int) -> PiMarker:
    m = _PINTERN.get((PiMarker, index))
    if m is None:
        fresh = PiMarker.__new__(PiMarker)
        fresh.index = index
        fresh.key = (1, index)
        fresh._hash = hash((_PSALT[PiMarker], index))
        m = _PINTERN.setdefault((PiMarker, index), fresh)
    return m


_PNIL = _pmk(PNil, (), (0,), _PSALT[PNil])


def pnil() -> PiTerm:
    return _PNIL


def pout(subject: PiName, obj: PiName) -> PiTerm:
    key = (1, _name_key(subject), _name_key(obj))
    return _pmk(POut, (subject, obj), key, hash((_PSALT[POut], subject, obj)))


def pin(subject: PiName, binder: PiName, body: PiTerm) -> PiTerm:
    key = (2, _name_key(subject), _name_key(binder), body.key)
    return _pmk(
        PIn, (subject, binder, body), key, hash((_PSALT[PIn], subject, binder, body._hash))
    )


def prepl(body: PiTerm) -> PiTerm:
    return _pmk(PRepl, (body,), (3, body.key), hash((_PSALT[PRepl], body._hash)))


def pnew(binder: PiName, body: PiTerm) -> PiTerm:
    key = (4, _name_key(binder), body.key)
    return _pmk(PNew, (binder, body), key, hash((_PSALT[PNew], binder, body._hash)))


def ppar(*children: PiTerm) -> PiTerm:
    if len(children) == 1 and not isinstance(children[0], PiTerm):
        children = tuple(children[0])
    if not children:
        return _PNIL
    if len(children) == 1:
        return children[0]
    key = (5, *(c.key for c in children))
    return _pmk(PPar, (tuple(children),), key, hash((_PSALT[PPar], *(c._hash for c in children))))


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------

_RESERVED_PREFIX = "~"  # never produced by the parser; safe for machine names


class _Gensym:
    __slots__ = ("n", "tag")

    def __init__(self, tag: str):
        self.n = 0
        self.tag = tag

    def __call__(self) -> str:
        s = f"{_RESERVED_PREFIX}{self.tag}{self.n}"
        self.n += 1
        return s


def _uniquify(t: PiTerm, env: tuple, gen: _Gensym) -> PiTerm:
    """Rename every binder to a distinct reserved atom; resolve occurrences
    innermost-first.  Accepts string or marker binders (and free atoms)."""

    def occ(n: PiName) -> PiName:
        # atoms compare by value, markers by identity; == does both
        for lvl in range(len(env) - 1, -1, -1):
            if env[lvl][0] == n:
                return env[lvl][1]
        return n

    if isinstance(t, PNil):
        return t
    if isinstance(t, POut):
        return pout(occ(t.subject), occ(t.obj))
    if isinstance(t, PIn):
        fresh = gen()
        return pin(
            occ(t.subject), fresh, _uniquify(t.body, env + ((t.binder, fresh),), gen)
        )
    if isinstance(t, PNew):
        fresh = gen()
        return pnew(fresh, _uniquify(t.body, env + ((t.binder, fresh),), gen))
    if isinstance(t, PRepl):
        return prepl(_uniquify(t.body, env, gen))
    return ppar(*(_uniquify(c, env, gen) for c in t.children))


def _fn_named(t: PiTerm) -> frozenset:
    """Free atoms of a term whose binders are all atoms (post-uniquify)."""
    if isinstance(t, PNil):
        return frozenset()
    if isinstance(t, POut):
        return frozenset(n for n in (t.subject, t.obj) if isinstance(n, str))
    if isinstance(t, PIn):
        base = _fn_named(t.body) - {t.binder}
        if isinstance(t.subject, str):
            base |= {t.subject}
        return base
    if isinstance(t, PNew):
        return _fn_named(t.body) - {t.binder}
    if isinstance(t, PRepl):
        return _fn_named(t.body)
    out: frozenset = frozenset()
    for c in t.children:
        out |= _fn_named(c)
    return out


def _simp(t: PiTerm) -> PiTerm:
    """Erase unused restrictions and give every restriction a scope that
    depends only on which parallel items use its name (never on how the
    restrictions were ordered or nested in the input), bottom-up, on a
    uniquified named term."""
    if isinstance(t, (PNil, POut)):
        return t
    if isinstance(t, PIn):
        return pin(t.subject, t.binder, _simp(t.body))
    if isinstance(t, PRepl):
        return prepl(_simp(t.body))
    binders, items = _hoist_simp(t)
    return _scope_split(binders, items)


def _hoist_simp(t: PiTerm) -> tuple:
    """Pull every restriction of a parallel/restriction region up to the
    region root, simplifying the guarded terms below; nil children vanish."""
    if isinstance(t, PNew):
        binders, items = _hoist_simp(t.body)
        return ([t.binder] + binders, items)
    if isinstance(t, PPar):
        all_binders: list = []
        all_items: list = []
        for c in t.children:
            b, i = _hoist_simp(c)
            all_binders.extend(b)
            all_items.extend(i)
        return (all_binders, all_items)
    s = _simp(t)  # a guard or leaf; cannot become Par or New
    if isinstance(s, PNil):
        return ([], [])
    return ([], [s])


def _scope_split(binders: list, items: list) -> PiTerm:
    """Reassemble a hoisted region: unused binders are erased, items sharing
    a binder stay under one scope, and within a connected group the binders
    of set-maximal reach form its outer restriction block (narrower ones
    recurse inside).  The result is the same for any input scope order."""
    fns = [_fn_named(it) for it in items]
    usage = {}
    for b in binders:
        reach = frozenset(i for i, f in enumerate(fns) if b in f)
        if reach:
            usage[b] = reach

    def build(bs: list, idxs: list) -> list:
        idx_set = set(idxs)
        ub = {b: usage[b] & idx_set for b in bs}
        ub = {b: u for b, u in ub.items() if u}
        covered: set = set()
        for u in ub.values():
            covered |= u
        parts = [items[i] for i in idxs if i not in covered]
        unseen = set(covered)
        while unseen:
            comp = {min(unseen)}
            while True:
                grown = set(comp)
                for u in ub.values():
                    if u & comp:
                        grown |= u
                if grown == comp:
                    break
                comp = grown
            unseen -= comp
            comp_bs = [b for b in ub if ub[b] & comp]
            maximal = [
                b for b in comp_bs if not any(ub[b] < ub[c] for c in comp_bs)
            ]
            inner_bs = [b for b in comp_bs if b not in maximal]
            node = ppar(*build(inner_bs, sorted(comp)))
            for b in reversed(maximal):
                node = pnew(b, node)
            parts.append(node)
        return parts

    return ppar(*build(list(usage), list(range(len(items)))))


_MAX_BLOCK_PERMS = 6  # restriction blocks larger than this keep written order


def _mcanon(t: PiTerm, env: tuple) -> PiTerm:
    """Final canonical pass on a simplified named term: binders to markers,
    parallel children sorted, adjacent restriction blocks ordered to minimize
    the term."""

    def occ(n: PiName) -> PiName:
        for lvl in range(len(env) - 1, -1, -1):
            if env[lvl] == n:
                return pimarker(lvl)
        return n

    if isinstance(t, PNil):
        return t
    if isinstance(t, POut):
        return pout(occ(t.subject), occ(t.obj))
    if isinstance(t, PIn):
        return pin(occ(t.subject), pimarker(len(env)), _mcanon(t.body, env + (t.binder,)))
    if isinstance(t, PRepl):
        return prepl(_mcanon(t.body, env))
    if isinstance(t, PPar):
        kids = [_mcanon(c, env) for c in t.children]
        kids.sort(key=lambda c: c.key)
        return ppar(*kids)
    # PNew: gather the maximal block of directly nested restrictions
    binders = [t.binder]
    core = t.body
    while isinstance(core, PNew):
        binders.append(core.binder)
        core = core.body

    def build(order: tuple) -> PiTerm:
        body = _mcanon(core, env + order)
        lvl = len(env) + len(order)
        for _ in order:
            lvl -= 1
            body = pnew(pimarker(lvl), body)
        return body

    if len(binders) == 1 or len(binders) > _MAX_BLOCK_PERMS:
        return build(tuple(binders))
    return min((build(p) for p in permutations(binders)), key=lambda x: x.key)


_PI_CANON: dict = {}


def pi_canon(t: PiTerm) -> PiTerm:
    """Canonical representative of a term up to structural congruence;
    ``is`` on results decides congruence."""
    cached = _PI_CANON.get(t)
    if cached is not None:
        return cached
    named = _uniquify(t, (), _Gensym("b"))
    prev = None
    while named is not prev:
        prev = named
        named = _simp(named)
    out = _mcanon(named, ())
    _PI_CANON[t] = out
    _PI_CANON[out] = out
    return out


def pi_eq(a: PiTerm, b: PiTerm) -> bool:
    """Structural congruence of pi terms."""
    return pi_canon(a) is pi_canon(b)


def pi_free_names(t: PiTerm) -> frozenset:
    """Free atoms of t (bound names never leak: they are markers after
    canonicalization)."""
    c = pi_canon(t)
    acc: set = set()

    def walk(x: PiTerm) -> None:
        if isinstance(x, PNil):
            return
        if isinstance(x, POut):
            if isinstance(x.subject, str):
                acc.add(x.subject)
            if isinstance(x.obj, str):
                acc.add(x.obj)
        elif isinstance(x, PIn):
            if isinstance(x.subject, str):
                acc.add(x.subject)
            walk(x.body)
        elif isinstance(x, (PNew, PRepl)):
            walk(x.body)
        else:
            for ch in x.children:
                walk(ch)

    walk(c)
    return frozenset(acc)


def subst_atom(t: PiTerm, new: str, old: str) -> PiTerm:
    """Capture-free substitution of the atom new for free occurrences of the
    atom old; returns a canonical term."""
    c = pi_canon(t)

    def walk(x: PiTerm) -> PiTerm:
        if isinstance(x, PNil):
            return x
        if isinstance(x, POut):
            return pout(
                new if x.subject == old else x.subject, new if x.obj == old else x.obj
            )
        if isinstance(x, PIn):
            return pin(new if x.subject == old else x.subject, x.binder, walk(x.body))
        if isinstance(x, PNew):
            return pnew(x.binder, walk(x.body))
        if isinstance(x, PRepl):
            return prepl(walk(x.body))
        return ppar(*(walk(ch) for ch in x.children))

    return pi_canon(walk(c))


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def _name_markers(t: PiTerm, env: tuple, gen: _Gensym) -> PiTerm:
    """Replace marker binders of a canonical term by fresh reserved atoms
    (inverse of marker assignment, giving a named term reductions can use)."""

    def occ(n: PiName) -> PiName:
        if isinstance(n, PiMarker):
            for lvl in range(len(env) - 1, -1, -1):
                if env[lvl][0] is n:
                    return env[lvl][1]
        return n  # free atoms (and stray markers) pass through

    if isinstance(t, PNil):
        return t
    if isinstance(t, POut):
        return pout(occ(t.subject), occ(t.obj))
    if isinstance(t, PIn):
        fresh = gen()
        return pin(
            occ(t.subject), fresh, _name_markers(t.body, env + ((t.binder, fresh),), gen)
        )
    if isinstance(t, PNew):
        fresh = gen()
        return pnew(fresh, _name_markers(t.body, env + ((t.binder, fresh),), gen))
    if isinstance(t, PRepl):
        return prepl(_name_markers(t.body, env, gen))
    return ppar(*(_name_markers(c, env, gen) for c in t.children))


def _hoist(t: PiTerm) -> tuple:
    """Split a named term into (restricted atoms, parallel items), hoisting
    restrictions through parallel composition only (never past a guard)."""
    if isinstance(t, PNil):
        return ([], [])
    if isinstance(t, PNew):
        binders, items = _hoist(t.body)
        return ([t.binder] + binders, items)
    if isinstance(t, PPar):
        all_binders: list = []
        all_items: list = []
        for c in t.children:
            b, i = _hoist(c)
            all_binders.extend(b)
            all_items.extend(i)
        return (all_binders, all_items)
    return ([], [t])


def _subst_named(t: PiTerm, new: str, old: str) -> PiTerm:
    """Substitution on a named term whose binders are globally distinct
    reserved atoms (so no capture and no shadowing of old)."""
    if isinstance(t, PNil):
        return t
    if isinstance(t, POut):
        return pout(new if t.subject == old else t.subject, new if t.obj == old else t.obj)
    if isinstance(t, PIn):
        return pin(new if t.subject == old else t.subject, t.binder, _subst_named(t.body, new, old))
    if isinstance(t, PNew):
        return pnew(t.binder, _subst_named(t.body, new, old))
    if isinstance(t, PRepl):
        return prepl(_subst_named(t.body, new, old))
    return ppar(*(_subst_named(c, new, old) for c in t.children))


def pi_step(t: PiTerm) -> list:
    """Canonical one-step reducts of t, deduplicated.

    Every replicated parallel component is unfolded exactly once for the step
    computation; an unfolded copy materializes in the successor only when the
    step consumed part of it (reductions needing two copies of the same
    replica take two steps).
    """
    c = pi_canon(t)
    gen = _Gensym("s")
    named = _name_markers(c, (), gen)
    top_binders, plain_items = _hoist(named)

    # soup: (origin, item); origin is ("plain", idx) or ("inst", repl_idx, k)
    soup: list = []
    inst_binders: dict = {}
    inst_items: dict = {}
    for idx, item in enumerate(plain_items):
        soup.append((("plain", idx), item))
        if isinstance(item, PRepl):
            b, items = _hoist(item.body)
            inst_binders[idx] = b
            inst_items[idx] = items
            for k, sub in enumerate(items):
                soup.append((("inst", idx, k), sub))

    successors: list = []
    seen = set()
    for i, (oi, ini) in enumerate(soup):
        if not isinstance(ini, PIn):
            continue
        for j, (oj, outj) in enumerate(soup):
            if i == j or not isinstance(outj, POut):
                continue
            if ini.subject != outj.subject:
                continue
            continuation = _subst_named(ini.body, outj.obj, ini.binder)
            consumed = {oi, oj}
            used_insts = {o[1] for o in consumed if o[0] == "inst"}
            kept: list = [continuation]
            for idx, item in enumerate(plain_items):
                if ("plain", idx) not in consumed:
                    kept.append(item)
            for idx in used_insts:
                for k, sub in enumerate(inst_items[idx]):
                    if ("inst", idx, k) not in consumed:
                        kept.append(sub)
            body = ppar(*kept)
            for b in reversed(top_binders + [x for idx in used_insts for x in inst_binders[idx]]):
                body = pnew(b, body)
            succ = pi_canon(body)
            if succ not in seen:
                seen.add(succ)
                successors.append(succ)
    return successors


def pi_barbs(t: PiTerm, restrict: Optional[Iterable[str]] = None) -> frozenset:
    """Observable commitments: ("out", x) for an unguarded output and
    ("in", x) for an unguarded input on a free (unrestricted) atom x,
    including under replication and restriction."""
    allowed = None if restrict is None else set(restrict)
    c = pi_canon(t)
    acc: set = set()

    def walk(x: PiTerm) -> None:
        if isinstance(x, POut):
            if isinstance(x.subject, str) and (allowed is None or x.subject in allowed):
                acc.add(("out", x.subject))
        elif isinstance(x, PIn):
            if isinstance(x.subject, str) and (allowed is None or x.subject in allowed):
                acc.add(("in", x.subject))
        elif isinstance(x, (PNew, PRepl)):
            walk(x.body)
        elif isinstance(x, PPar):
            for ch in x.children:
                walk(ch)

    walk(c)
    return frozenset(acc)


def pi_reduction_graph(t: PiTerm, max_states: int = 100_000, max_depth: int = 200):
    """Bounded reduction graph rooted at the canonical form of t."""
    from .lts import explore

    return explore(pi_canon(t), pi_step, max_states=max_states, max_depth=max_depth)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _display_names(t: PiTerm) -> dict:
    """Stable display identifiers for marker binders, avoiding free atoms."""
    free = pi_free_names(t) if not isinstance(t, PiMarker) else frozenset()
    out: dict = {}

    def pick(i: int) -> str:
        base = f"u{i}"
        while base in free:
            base += "_"
        return base

    def walk(x: PiTerm) -> None:
        if isinstance(x, (PIn, PNew)):
            if isinstance(x.binder, PiMarker) and x.binder.index not in out:
                out[x.binder.index] = pick(x.binder.index)
            walk(x.body)
        elif isinstance(x, (PRepl,)):
            walk(x.body)
        elif isinstance(x, PPar):
            for ch in x.children:
                walk(ch)

    walk(t)
    return out


def show_pi(t: PiTerm) -> str:
    """Concrete syntax; parses back to a congruent term."""
    names = _display_names(t)

    def nm(n: PiName) -> str:
        if isinstance(n, PiMarker):
            return names.get(n.index, f"u{n.index}")
        return n

    def atom(x: PiTerm) -> str:
        s = go(x)
        if isinstance(x, (PPar, PNew, PIn)):
            return f"({s})"
        return s

    def go(x: PiTerm) -> str:
        if isinstance(x, PNil):
            return "0"
        if isinstance(x, POut):
            return f"{nm(x.subject)}!{nm(x.obj)}"
        if isinstance(x, PIn):
            body = go(x.body)
            if isinstance(x.body, PPar):
                body = f"({body})"
            bname = nm(x.binder) if isinstance(x.binder, PiMarker) else x.binder
            return f"{nm(x.subject)}?({bname}).{body}"
        if isinstance(x, PNew):
            bname = nm(x.binder) if isinstance(x.binder, PiMarker) else x.binder
            body = go(x.body)
            if isinstance(x.body, PPar):
                body = f"({body})"
            return f"new {bname}.{body}"
        if isinstance(x, PRepl):
            return f"!{atom(x.body)}"
        return " | ".join(go_child(c) for c in x.children)

    def go_child(c: PiTerm) -> str:
        s = go(c)
        if isinstance(c, (PNew, PIn, PPar)):
            return f"({s})"
        return s

    return go(t)
