"""Reflective process terms: processes whose names are quoted processes.

Grammar (two mutually recursive sorts):

    P ::= 0            inert process
        | P1 | P2      parallel composition
        | x!(P)        lift: output the process P on channel x
        | x?(y).P      input: receive a name on x, bind it to y in P
        | *x           drop: run the process whose quote is x
    x ::= @P           quote: the name of process P

There is no separate supply of atomic names and no restriction operator:
every name is the quote of a process, and lifting is the only way new names
come into existence at runtime.

Two equivalences are decided here, each by reduction to a canonical form:

* name equivalence ``name_eq``: the least relation closing structural
  congruence under quoting (@P1 and @P2 are equivalent when P1 and P2 are
  congruent) and collapsing a quoted drop (@(*x) is equivalent to x).
* structural congruence ``struct_eq``: alpha-equivalence plus the abelian
  monoid laws of parallel composition with 0 as unit, with subjects and
  binders compared up to name equivalence.

Canonicalization flattens and sorts parallel children (a multiset — duplicate
children are kept), erases 0 children, rewrites each bound name to a
``BoundMarker`` indexed by binder nesting depth (outermost first), collapses
@(*x) to x at name positions, and orders children by a total term order
(Nil < Drop < Lift < Input < Par, Quote < BoundMarker, then lexicographically
on children).  The drop of a quote, ``*(@P)``, is deliberately NOT rewritten
to P: the collapse is a law of names, not of processes.

All nodes are interned: equal trees are the same Python object, so identity
is equality and canonical-form comparison is a pointer check.  The interning
and canonicalization tables behave as thread-safe pure caches (they only ever
map a key to one value; concurrent insertion is benign).

Substitution never recurses into a quoted process: a name position whose
whole name is equivalent to the target is replaced, anything strictly inside
a quote is untouched.  The semantic variant additionally splices the payload
process in place of a matching drop, which is what communication uses.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable, Optional, Union

__all__ = [
    "RhoTerm",
    "RhoProc",
    "RhoName",
    "Nil",
    "Par",
    "Lift",
    "Input",
    "Drop",
    "Quote",
    "BoundMarker",
    "NIL",
    "NULL_NAME",
    "nil",
    "par",
    "lift",
    "inp",
    "drop",
    "quote",
    "marker",
    "canon_proc",
    "canon_name",
    "struct_eq",
    "name_eq",
    "free_names",
    "names_in",
    "fresh_for",
    "subst_syn",
    "subst_sem",
    "quote_depth",
    "quote_depth_proc",
    "lincr",
    "rincr",
    "ncomp",
    "ncomp_power",
    "NamespaceScheme",
    "ns_member",
    "gen_fresh",
    "proc_size",
    "name_size",
    "show_proc",
    "show_name",
]


# ---------------------------------------------------------------------------
# Term representation (interned, immutable)
# ---------------------------------------------------------------------------


class RhoTerm:
    """Base class for interned term nodes.

    Construct only through the module factories (``nil``, ``par``, ``lift``,
    ``inp``, ``drop``, ``quote``, ``marker``); they intern every node, so
    structurally equal trees are the same object and ``is`` decides equality.
    ``key`` is a nested tuple realizing the total term order used for sorting
    parallel children.
    """

    __slots__ = ("key", "_hash")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other


class RhoProc(RhoTerm):
    __slots__ = ()

    def __repr__(self) -> str:
        return show_proc(self)


class RhoName(RhoTerm):
    __slots__ = ()

    def __repr__(self) -> str:
        return show_name(self)


class Nil(RhoProc):
    __slots__ = ()


class Par(RhoProc):
    __slots__ = ("children",)
    children: tuple[RhoProc, ...]


class Lift(RhoProc):
    __slots__ = ("subject", "body")
    subject: "RhoName"
    body: RhoProc


class Input(RhoProc):
    __slots__ = ("subject", "binder", "body")
    subject: "RhoName"
    binder: "RhoName"
    body: RhoProc


class Drop(RhoProc):
    __slots__ = ("name",)
    name: "RhoName"


class Quote(RhoName):
    __slots__ = ("body",)
    body: RhoProc


class BoundMarker(RhoName):
    __slots__ = ("index",)
    index: int


_INTERN: dict = {}

_SALT = {
    Nil: 0x1D872A61,
    Par: 0x22C49D13,
    Lift: 0x39F1B55F,
    Input: 0x4ACD2E89,
    Drop: 0x5B3E96F7,
    Quote: 0x6CF08A2B,
    BoundMarker: 0x7E55C3D1,
}


def _mk(cls, fields: tuple, key: tuple, hsh: int):
    ident = (cls, *fields)
    node = _INTERN.get(ident)
    if node is None:
        fresh = cls.__new__(cls)
        for slot, value in zip(cls.__slots__, fields):
            setattr(fresh, slot, value)
        fresh.key = key
        fresh._hash = hsh
        node = _INTERN.setdefault(ident, fresh)
    return node


_NIL_NODE = _mk(Nil, (), (0,), _SALT[Nil])
NIL: RhoProc = _NIL_NODE


def nil() -> RhoProc:
    """The inert process 0."""
    return _NIL_NODE


def par(*children: RhoProc) -> RhoProc:
    """Parallel composition of the given processes, as written (no sorting).

    Zero children give 0 and a single child is returned unchanged; otherwise
    the node keeps the children in the given order and nesting.
    """
    if len(children) == 1 and not isinstance(children[0], RhoProc):
        children = tuple(children[0])  # accept a single iterable
    if not children:
        return _NIL_NODE
    if len(children) == 1:
        return children[0]
    key = (4, *(c.key for c in children))
    hsh = hash((_SALT[Par], *(c._hash for c in children)))
    return _mk(Par, (tuple(children),), key, hsh)


def lift(subject: RhoName, body: RhoProc) -> RhoProc:
    """The output ``subject!(body)``."""
    return _mk(
        Lift,
        (subject, body),
        (2, subject.key, body.key),
        hash((_SALT[Lift], subject._hash, body._hash)),
    )


def inp(subject: RhoName, binder: RhoName, body: RhoProc) -> RhoProc:
    """The input ``subject?(binder).body``."""
    return _mk(
        Input,
        (subject, binder, body),
        (3, subject.key, binder.key, body.key),
        hash((_SALT[Input], subject._hash, binder._hash, body._hash)),
    )


def drop(name: RhoName) -> RhoProc:
    """The drop ``*name``."""
    return _mk(Drop, (name,), (1, name.key), hash((_SALT[Drop], name._hash)))


def quote(body: RhoProc) -> RhoName:
    """The name ``@body``."""
    return _mk(Quote, (body,), (0, body.key), hash((_SALT[Quote], body._hash)))


def marker(index: int) -> RhoName:
    """Bound-name marker for binder nesting level ``index`` (internal).

    Markers appear in canonical and internal forms only; user-built terms use
    real (quoted) names as binders.
    """
    return _mk(BoundMarker, (index,), (1, index), hash((_SALT[BoundMarker], index)))


NULL_NAME: RhoName = quote(NIL)  # @0, the simplest name


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------

_CANON_NAME: dict = {}
_CANON_PROC: dict = {}


def canon_name(x: RhoName) -> RhoName:
    """Canonical representative of a name; ``is`` on results decides name_eq.

    Quoted bodies are canonicalized in a fresh scope (a quote never refers to
    an enclosing binder as a whole name), and a canonical quote of a drop is
    collapsed to the dropped name.
    """
    if isinstance(x, BoundMarker):
        return x
    cached = _CANON_NAME.get(x)
    if cached is None:
        body = _canon(x.body, ())
        cached = body.name if isinstance(body, Drop) else quote(body)
        _CANON_NAME[x] = cached
        _CANON_NAME[cached] = cached
    return cached


def canon_proc(p: RhoProc) -> RhoProc:
    """Canonical representative of a process; ``is`` on results decides
    struct_eq."""
    return _canon(p, ())


def _canon_occ(n: RhoName, env: tuple) -> RhoName:
    """Canonicalize a name occurrence under the binders listed in env
    (outermost first); occurrences of a binder become its marker, innermost
    binding winning when several binders share a name."""
    c = canon_name(n)
    for lvl in range(len(env) - 1, -1, -1):
        if env[lvl] is c:
            return marker(lvl)
    return c


def _canon(p: RhoProc, env: tuple) -> RhoProc:
    cache_key = (p, env)
    cached = _CANON_PROC.get(cache_key)
    if cached is not None:
        return cached

    if isinstance(p, Nil):
        out = p
    elif isinstance(p, Drop):
        out = drop(_canon_occ(p.name, env))
    elif isinstance(p, Lift):
        out = lift(_canon_occ(p.subject, env), _canon(p.body, env))
    elif isinstance(p, Input):
        subj = _canon_occ(p.subject, env)
        bound = canon_name(p.binder)
        body = _canon(p.body, env + (bound,))
        out = inp(subj, marker(len(env)), body)
    elif isinstance(p, Par):
        kids: list[RhoProc] = []
        for child in p.children:
            cc = _canon(child, env)
            if isinstance(cc, Nil):
                continue
            if isinstance(cc, Par):
                kids.extend(cc.children)
            else:
                kids.append(cc)
        if not kids:
            out = _NIL_NODE
        elif len(kids) == 1:
            out = kids[0]
        else:
            kids.sort(key=lambda t: t.key)
            out = par(*kids)
    else:  # pragma: no cover - exhaustive over the grammar
        raise TypeError(f"not a process: {p!r}")

    _CANON_PROC[cache_key] = out
    _CANON_PROC[(out, env)] = out
    return out


def struct_eq(p: RhoProc, q: RhoProc) -> bool:
    """Structural congruence: alpha conversion + the parallel monoid laws,
    with subjects and binders matched up to name equivalence."""
    return canon_proc(p) is canon_proc(q)


def name_eq(x: RhoName, y: RhoName) -> bool:
    """Name equivalence: structural congruence under quotes plus the collapse
    of a quoted drop (@(*x) is the same name as x)."""
    return canon_name(x) is canon_name(y)


# ---------------------------------------------------------------------------
# Free names, freshness
# ---------------------------------------------------------------------------

_FREE: dict = {}


def free_names(p: RhoProc) -> frozenset:
    """Free names of p, as canonical names.

    A name position contributes the whole name standing there; names strictly
    inside a quote are part of that name's structure, not separate
    occurrences.  Bound occurrences (positions matching an enclosing binder)
    are excluded.
    """
    cp = canon_proc(p)
    cached = _FREE.get(cp)
    if cached is None:
        acc: set = set()
        _collect_free(cp, acc)
        cached = frozenset(acc)
        _FREE[cp] = cached
    return cached


def _collect_free(p: RhoProc, acc: set) -> None:
    if isinstance(p, Nil):
        return
    if isinstance(p, Drop):
        if isinstance(p.name, Quote):
            acc.add(p.name)
        return
    if isinstance(p, Lift):
        if isinstance(p.subject, Quote):
            acc.add(p.subject)
        _collect_free(p.body, acc)
        return
    if isinstance(p, Input):
        if isinstance(p.subject, Quote):
            acc.add(p.subject)
        _collect_free(p.body, acc)
        return
    for child in p.children:
        _collect_free(child, acc)


def names_in(p: RhoProc) -> frozenset:
    """Every name appearing in p as written — free occurrences AND binders —
    canonicalized.  Marker binders of internal forms are skipped (they are
    not names a fresh name could collide with)."""
    acc: set = set()

    def walk(t: RhoProc) -> None:
        if isinstance(t, Nil):
            return
        if isinstance(t, Drop):
            if isinstance(t.name, Quote):
                acc.add(canon_name(t.name))
        elif isinstance(t, Lift):
            if isinstance(t.subject, Quote):
                acc.add(canon_name(t.subject))
            walk(t.body)
        elif isinstance(t, Input):
            if isinstance(t.subject, Quote):
                acc.add(canon_name(t.subject))
            if isinstance(t.binder, Quote):
                acc.add(canon_name(t.binder))
            walk(t.body)
        else:
            for child in t.children:
                walk(child)

    walk(p)
    return frozenset(acc)


def fresh_for(x: RhoName, p: RhoProc) -> bool:
    """True when x is not name-equivalent to any name occurring in p
    (free or binding)."""
    cx = canon_name(x)
    return cx not in names_in(p)


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def _replace(p: RhoProc, old: RhoName, new: RhoName, splice: Optional[RhoProc]) -> RhoProc:
    """Replace name positions equal to old (canonical identity) in canonical
    p.  When splice is given, a matching drop becomes that process instead of
    a drop of the new name (the semantic variant used by communication)."""
    if isinstance(p, Nil):
        return p
    if isinstance(p, Drop):
        if p.name is old:
            return splice if splice is not None else drop(new)
        return p
    if isinstance(p, Lift):
        subj = new if p.subject is old else p.subject
        return lift(subj, _replace(p.body, old, new, splice))
    if isinstance(p, Input):
        subj = new if p.subject is old else p.subject
        return inp(subj, p.binder, _replace(p.body, old, new, splice))
    return par(*(_replace(c, old, new, splice) for c in p.children))


def subst_syn(p: RhoProc, new: RhoName, old: RhoName) -> RhoProc:
    """Syntactic substitution of new for old: every free name position whose
    whole name is equivalent to old becomes new.  Never recurses into quoted
    processes.  Capture cannot occur: binders are normalized to markers
    before replacement.  Returns a canonical process."""
    cp = canon_proc(p)
    co = canon_name(old)
    cn = canon_name(new)
    return canon_proc(_replace(cp, co, cn, None))


def _splice_of(payload: RhoName) -> RhoProc:
    """The process a matching drop becomes under semantic substitution of
    payload: the process under the quote as given.  The payload name itself
    may canonically collapse (@(*s) is the name s), but the dropped process
    is @'s body as written (*s there, never s's own body), so the splice is
    taken before collapsing."""
    if isinstance(payload, Quote):
        return canon_proc(payload.body)
    c = canon_name(payload)
    return c.body if isinstance(c, Quote) else drop(c)


def subst_sem(p: RhoProc, payload: RhoName, old: RhoName) -> RhoProc:
    """Semantic substitution of the quoted payload for old: like subst_syn on
    name positions (which take the canonical payload name), and additionally
    a drop of a matching name becomes the process under the payload's quote.
    This is the substitution communication performs.  Returns a canonical
    process."""
    cp = canon_proc(p)
    co = canon_name(old)
    splice = _splice_of(payload)
    return canon_proc(_replace(cp, co, canon_name(payload), splice))


def subst_marker(body: RhoProc, payload: RhoName, level: int) -> RhoProc:
    """Semantic substitution for a binder marker (internal: communication on
    canonical forms, where the consumed input's binder is marker(level))."""
    splice = _splice_of(payload)
    return canon_proc(_replace(body, marker(level), canon_name(payload), splice))


# ---------------------------------------------------------------------------
# Quote depth
# ---------------------------------------------------------------------------

_QDEPTH: dict = {}


def quote_depth(x: RhoName) -> int:
    """Nesting depth of quotes in a name, invariant under name equivalence:
    the depth of @P is the depth of x when P is congruent to *x, else
    1 + the depth of P."""
    cx = canon_name(x)
    if isinstance(cx, BoundMarker):
        return 0
    cached = _QDEPTH.get(cx)
    if cached is None:
        cached = 1 + quote_depth_proc(cx.body)
        _QDEPTH[cx] = cached
    return cached


def quote_depth_proc(p: RhoProc) -> int:
    """Depth of a process: the maximum depth of its free names (0 if none)."""
    fns = free_names(p)
    if not fns:
        return 0
    return max(quote_depth(x) for x in fns)


# ---------------------------------------------------------------------------
# Static quoting combinators and namespaces
# ---------------------------------------------------------------------------


def lincr(x: RhoName) -> RhoName:
    """Left increment of x: the name @(x!(0))."""
    return canon_name(quote(lift(x, _NIL_NODE)))


def rincr(x: RhoName) -> RhoName:
    """Right increment of x: the name @(x?(@0).0)."""
    return canon_name(quote(inp(x, NULL_NAME, _NIL_NODE)))


def ncomp(x: RhoName, y: RhoName) -> RhoName:
    """Composition of x and y: the name @(x!(0) | y?(@0).0)."""
    return canon_name(quote(par(lift(x, _NIL_NODE), inp(y, NULL_NAME, _NIL_NODE))))


def ncomp_power(x: RhoName, k: int) -> RhoName:
    """k-fold composition of x with itself, left-associated
    (x^2 = x.x, x^3 = (x^2).x, ...); k=1 gives x itself."""
    if k < 1:
        raise ValueError("composition power needs k >= 1")
    out = canon_name(x)
    for _ in range(k - 1):
        out = ncomp(out, x)
    return out


class NamespaceScheme(Enum):
    """The three name-generation templates built from a root name."""

    LEFT_INCREMENT = "left-increment"
    RIGHT_INCREMENT = "right-increment"
    COMPOSITION = "composition"


def _peel_left(x: RhoName) -> Optional[RhoName]:
    if isinstance(x, Quote) and isinstance(x.body, Lift) and isinstance(x.body.body, Nil):
        return x.body.subject
    return None


def _peel_right(x: RhoName) -> Optional[RhoName]:
    if isinstance(x, Quote) and isinstance(x.body, Input) and isinstance(x.body.body, Nil):
        return x.body.subject
    return None


def _peel_comp(x: RhoName) -> Optional[tuple]:
    if not (isinstance(x, Quote) and isinstance(x.body, Par)):
        return None
    kids = x.body.children
    if len(kids) != 2:
        return None
    out_part, in_part = kids  # canonical order puts the lift first
    if not (isinstance(out_part, Lift) and isinstance(out_part.body, Nil)):
        return None
    if not (isinstance(in_part, Input) and isinstance(in_part.body, Nil)):
        return None
    return (out_part.subject, in_part.subject)


def ns_member(root: RhoName, scheme: NamespaceScheme, x: RhoName) -> bool:
    """True when x lies in the namespace generated from root by iterating the
    scheme's template (the root itself is a member).  For the composition
    scheme both recursive positions must again be members, mirroring the
    template grammar whose every hole is filled from the same root."""
    croot = canon_name(root)
    c = canon_name(x)
    if scheme is NamespaceScheme.LEFT_INCREMENT:
        while True:
            if c is croot:
                return True
            nxt = _peel_left(c)
            if nxt is None:
                return False
            c = nxt
    if scheme is NamespaceScheme.RIGHT_INCREMENT:
        while True:
            if c is croot:
                return True
            nxt = _peel_right(c)
            if nxt is None:
                return False
            c = nxt
    # composition
    def member(n: RhoName) -> bool:
        if n is croot:
            return True
        parts = _peel_comp(n)
        if parts is None:
            return False
        return member(parts[0]) and member(parts[1])

    return member(c)


def gen_fresh(avoid: Iterable[RhoName]) -> RhoName:
    """Deterministic fresh-name generator: quote the parallel composition of
    x!(0) over the avoid set (canonically ordered), then left-increment until
    the candidate is not equivalent to any avoided name."""
    avoid_set = frozenset(canon_name(a) for a in avoid)
    ordered = sorted(avoid_set, key=lambda n: n.key)
    candidate = canon_name(quote(par(*(lift(a, _NIL_NODE) for a in ordered))))
    while candidate in avoid_set:
        candidate = lincr(candidate)
    return candidate


# ---------------------------------------------------------------------------
# Sizes and printing
# ---------------------------------------------------------------------------


def proc_size(p: RhoProc) -> int:
    """Node count of a process, names included."""
    if isinstance(p, Nil):
        return 1
    if isinstance(p, Drop):
        return 1 + name_size(p.name)
    if isinstance(p, Lift):
        return 1 + name_size(p.subject) + proc_size(p.body)
    if isinstance(p, Input):
        return 1 + name_size(p.subject) + name_size(p.binder) + proc_size(p.body)
    return 1 + sum(proc_size(c) for c in p.children)


def name_size(x: RhoName) -> int:
    if isinstance(x, BoundMarker):
        return 1
    return 1 + proc_size(x.body)


def show_name(x: RhoName) -> str:
    """Concrete syntax for a name: @P (parenthesized unless P is 0), or the
    synthesized identifier of a bound-name marker."""
    if isinstance(x, BoundMarker):
        return f"y{x.index}"
    if isinstance(x.body, Nil):
        return "@0"
    return f"@({show_proc(x.body)})"


def show_proc(p: RhoProc) -> str:
    """Concrete syntax for a process; parses back to the same canonical term."""
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Drop):
        return f"*{show_name(p.name)}"
    if isinstance(p, Lift):
        return f"{show_name(p.subject)}!({show_proc(p.body)})"
    if isinstance(p, Input):
        if isinstance(p.binder, BoundMarker):
            bound = f"y{p.binder.index}"
        else:
            bound = show_name(p.binder)
        body = show_proc(p.body)
        if isinstance(p.body, Par):
            body = f"({body})"
        return f"{show_name(p.subject)}?({bound}).{body}"
    return " | ".join(
        f"({show_proc(c)})" if isinstance(c, Par) else show_proc(c) for c in p.children
    )
